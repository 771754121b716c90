#pragma once
// The limit law of the radial root flow: quantile transport
// q_t(x) = x q_0(x+t)/(x+t), its numerical inverse, per-index radius
// predictions with their error envelope, and finite-difference residuals of
// the two governing PDEs.

#include <cstdint>
#include <vector>

#include "rootflow/measures.hpp"

namespace rootflow {

/// nu_t: the law of (1 - t/V) q_0(V) with V uniform on [t, 1].
struct LimitLaw {
    RadialMeasure base;  // nu_0, compactly supported
    double t = 0.0;      // in [0, 1)

    LimitLaw(RadialMeasure base_measure, double time);
};

/// Quantile of the sub-probability (1-t)nu_t:
/// q_t(x) = x * q_0(x+t) / (x+t) for x in [0, 1-t]; 0 at x = 0.
double limit_quantile(const LimitLaw& law, double x);

/// CDF of (1-t)nu_t, the inverse of limit_quantile by bisection on [0, 1-t]
/// to 2^-46. Total mass 1-t; returns 0 for y <= 0.
double limit_cdf(const LimitLaw& law, double y);

/// Center of the per-index error band:
/// s_j^pred = (j-1)/(j-1 + n*t) * radii0[j+ell], j = 1..n-ell (1-based).
/// Requires 1 <= ell <= n-1.
std::vector<double> predicted_radii(const LimitLaw& law, const std::vector<double>& radii0,
                                    int ell);

/// eps_n = 3 n ln(n) / m and eta_j (j >= 4) =
/// ln((j-1)/(j-3)) + ln((j+2)/(j-1)) + eps_n. eta is +inf for j <= 3, where
/// the band is undefined and entries are reported informationally.
struct EnvelopeParams {
    int n = 0;
    int m = 0;
    double t = 0.0;
    double eps_n = 0.0;

    EnvelopeParams(int n_, int m_, double t_);
    double eta(int j) const;
};

struct EnvelopeEntry {
    int j = 0;              // 1-based index into the surviving radii
    double log_ratio = 0.0; // ln(observed_j / predicted_j)
    double eta = 0.0;
    bool inside = false;
    bool informational = false;  // j <= 3: no band defined
};

/// Flags, for each j >= 4, whether ln(observed_j / s_j^pred) lies in
/// [-eta_j, eta_j]. observed must hold the n-ell surviving radii.
std::vector<EnvelopeEntry> envelope_check(const std::vector<double>& observed,
                                          const LimitLaw& law,
                                          const std::vector<double>& radii0, int n, int m,
                                          int ell);

/// Fraction of non-informational entries that landed inside the band.
double envelope_pass_fraction(const std::vector<EnvelopeEntry>& entries);

/// Central-difference residual of
///   dPsi/dt = x * (dPsi/dx) / Psi - 1
/// with Psi built from limit_cdf. Requires a base with continuous strictly
/// increasing CDF and a stencil inside the open band x in (0, A(1-t)).
double pde_residual_psi(const RadialMeasure& base, double x, double t, double h);

/// Nested central-difference residual of
///   dpsi/dt = d/dx ( x * psi / Psi )
/// where psi is itself a central difference of Psi. Additionally requires
/// x >= 10h to stay clear of the 1/x singularity.
double pde_residual_density(const RadialMeasure& base, double x, double t, double h);

/// Samples of (1 - t/V) q_0(V). seed == 0 uses the stratified grid
/// V_i = t + (1-t)(2i-1)/(2 count); any other seed draws V pseudo-randomly.
EmpiricalMeasure1D sample_limit_law(const LimitLaw& law, int count, std::uint64_t seed);

} // namespace rootflow
