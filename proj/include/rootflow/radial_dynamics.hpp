#pragma once
// Exact root-level iterated differentiation of P(z) = z^q * Q(z^m) with
// positive roots of Q. Everything runs in the log domain u_j = m*log(r_j),
// so m-th powers of radii are never formed and no dynamic range is lost.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rootflow/measures.hpp"

namespace rootflow {

/// Monic structure of z^q * Q(z^m): sorted log-roots of Q, exponent m,
/// residual power q, and the number of differentiations applied so far.
/// Scalar prefactors are not tracked. Immutable.
class RadialState {
public:
    /// Builds the state of prod_j (z^m - r_j^m): u_j = m*ln(r_j), q = 0.
    static RadialState from_radii(const std::vector<double>& radii, int m);

    const std::vector<double>& log_roots() const { return log_roots_; }
    int root_count() const { return static_cast<int>(log_roots_.size()); }
    int m() const { return m_; }
    int q() const { return q_; }
    long long deriv_count() const { return deriv_count_; }
    /// Degree of the represented polynomial: q + n*m.
    long long degree() const;

private:
    friend RadialState differentiate_once(const RadialState&);
    RadialState(std::vector<double> u, int m, int q, long long deriv_count);

    std::vector<double> log_roots_;
    int m_ = 1;
    int q_ = 0;
    long long deriv_count_ = 0;
};

struct RadiiView {
    std::vector<double> radii;  // r_j = exp(u_j / m), sorted
    int n = 0;
    int zero_multiplicity = 0;  // q
};

/// One differentiation step at the root level.
/// q >= 1: the n new log-roots solve q + sum_j m/(1 - exp(u_j - v)) = 0, one
/// per open interval (u_{k-1}, u_k) with u_0 = -inf; q drops by one.
/// q == 0: the n-1 new log-roots solve sum_j 1/(1 - exp(u_j - v)) = 0, one
/// per interior interval; q resets to m-1 (the Q -> Q' step).
/// Exact ties contribute a merged term with integer multiplicity and spawn
/// tied output roots with multiplicity reduced by one.
RadialState differentiate_once(const RadialState& s);

/// k-fold composition of differentiate_once. Requires 0 <= k <= degree - 1.
RadialState differentiate_k(const RadialState& s, long long k);

RadiiView radii_view(const RadialState& s);

/// q copies of zero plus, for each radius, the m points r_j * e^{2 pi i k/m};
/// uniform weights 1/(q + n*m).
WeightedComplexPoints roots_as_complex(const RadialState& s);

/// Snapshot CSV: a header row with n, m, q, deriv_count followed by
/// (j, log_root, radius) rows.
void write_state_csv(const RadialState& s, std::ostream& os);

} // namespace rootflow
