#pragma once
// Radial probability measures on [0, A]: quantile/CDF access, deterministic
// radius ladders, and metric distances between empirical measures.

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rootflow {

/// A compactly supported probability measure on the nonnegative half-line,
/// represented through its CDF. Immutable after construction.
class RadialMeasure {
public:
    enum class Kind { Empirical, PiecewiseCdf, Dirac };

    static RadialMeasure dirac(double at);
    static RadialMeasure empirical(std::vector<double> points);
    /// Knots (x, F(x)): x strictly increasing and >= 0, F nondecreasing in
    /// [0,1] with F = 1 at the last knot. F is 0 left of the first knot and
    /// linearly interpolated between knots.
    static RadialMeasure piecewise_cdf(std::vector<std::pair<double, double>> knots);

    /// Accepts {"kind":"cdf","knots":[[x,F],...]} | {"kind":"dirac","at":x}
    /// | {"kind":"empirical","points":[...]}.
    static RadialMeasure from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;

    Kind kind() const { return kind_; }
    double support_upper() const { return support_upper_; }

    /// q(alpha) = inf { y >= 0 : F(y) >= alpha }. Left-continuous on (0,1],
    /// nondecreasing. Throws domain_error outside [0,1].
    double quantile(double alpha) const;

    /// F(x) = mu([0, x]); right-continuous.
    double cdf(double x) const;

    /// True when the CDF is continuous and strictly increasing up to the
    /// support edge (the regularity the PDE residual checks require).
    bool has_continuous_strictly_increasing_cdf() const;

    /// Knot list for PiecewiseCdf measures; empty for the other kinds.
    std::vector<std::pair<double, double>> knots() const;

private:
    RadialMeasure() = default;

    Kind kind_ = Kind::Dirac;
    double dirac_at_ = 0.0;
    std::vector<double> points_;  // Empirical: sorted samples, equal weights
    std::vector<double> knot_x_;  // PiecewiseCdf
    std::vector<double> knot_f_;
    double support_upper_ = 0.0;
};

/// Deterministic ladder r_j = q((2j-1)/(2n)), j = 1..n. Tie groups (atoms)
/// and zero values are separated by adding j * 2^-40 * support_upper so the
/// result is strictly increasing and positive. Throws
/// degenerate_measure_error when all mass sits at zero.
std::vector<double> sample_radii(const RadialMeasure& mu, int n);

/// Sorted unweighted samples on the line; the unit of comparison for the
/// Levy distance.
class EmpiricalMeasure1D {
public:
    explicit EmpiricalMeasure1D(std::vector<double> points);

    const std::vector<double>& points() const { return points_; }
    std::size_t count() const { return points_.size(); }

    /// F(x) = #{p_i <= x} / count
    double cdf(double x) const;

    bool operator==(const EmpiricalMeasure1D& other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
};

/// Levy metric between step CDFs,
///   L = inf { eps > 0 : F_p(x-eps)-eps <= F_q(x) <= F_p(x+eps)+eps for all x },
/// computed by bisection on eps to 2^-46 with an exact feasibility check over
/// the jump points. Symmetric; always <= 1; zero iff the multisets coincide.
double levy_distance(const EmpiricalMeasure1D& p, const EmpiricalMeasure1D& q);

struct WeightedComplexPoints {
    std::vector<std::complex<double>> points;
    std::vector<double> weights;

    double total_mass() const;
};

/// Certified upper bound on the Levy-Prokhorov distance between two planar
/// weighted point sets of equal total mass. Builds a coupling by merging the
/// two sets in (radius, angle) order, then returns the smallest eps such that
/// the coupled mass moved farther than eps is at most eps. Diagnostic only.
double levy_prokhorov_bound_2d(const WeightedComplexPoints& p, const WeightedComplexPoints& q);

} // namespace rootflow
