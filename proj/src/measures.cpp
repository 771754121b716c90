#include "rootflow/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rootflow/errors.hpp"

namespace rootflow {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

RadialMeasure RadialMeasure::dirac(double at) {
    if (!std::isfinite(at) || at < 0.0)
        throw domain_error("RadialMeasure::dirac: location must be finite and >= 0");
    RadialMeasure mu;
    mu.kind_ = Kind::Dirac;
    mu.dirac_at_ = at;
    mu.support_upper_ = at;
    return mu;
}

RadialMeasure RadialMeasure::empirical(std::vector<double> points) {
    if (points.empty()) throw domain_error("RadialMeasure::empirical: need at least one point");
    if (!all_finite(points)) throw domain_error("RadialMeasure::empirical: nonfinite point");
    std::sort(points.begin(), points.end());
    if (points.front() < 0.0)
        throw domain_error("RadialMeasure::empirical: points must be >= 0");
    RadialMeasure mu;
    mu.kind_ = Kind::Empirical;
    mu.support_upper_ = points.back();
    mu.points_ = std::move(points);
    return mu;
}

RadialMeasure RadialMeasure::piecewise_cdf(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw domain_error("RadialMeasure::piecewise_cdf: no knots");
    RadialMeasure mu;
    mu.kind_ = Kind::PiecewiseCdf;
    mu.knot_x_.reserve(knots.size());
    mu.knot_f_.reserve(knots.size());
    for (const auto& [x, f] : knots) {
        if (!std::isfinite(x) || !std::isfinite(f))
            throw domain_error("RadialMeasure::piecewise_cdf: nonfinite knot");
        if (x < 0.0) throw domain_error("RadialMeasure::piecewise_cdf: knot x must be >= 0");
        if (!mu.knot_x_.empty() && x <= mu.knot_x_.back())
            throw domain_error("RadialMeasure::piecewise_cdf: knot x not strictly increasing");
        if (f < 0.0 || f > 1.0 || (!mu.knot_f_.empty() && f < mu.knot_f_.back()))
            throw domain_error("RadialMeasure::piecewise_cdf: F values must be nondecreasing in [0,1]");
        mu.knot_x_.push_back(x);
        mu.knot_f_.push_back(f);
    }
    if (mu.knot_f_.back() != 1.0)
        throw domain_error("RadialMeasure::piecewise_cdf: last F value must equal 1");
    mu.support_upper_ = mu.knot_x_.back();
    return mu;
}

RadialMeasure RadialMeasure::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw config_error("measure JSON: expected object with string field \"kind\"");
    const std::string kind = doc["kind"].get<std::string>();
    try {
        if (kind == "dirac") {
            if (!doc.contains("at") || !doc["at"].is_number())
                throw config_error("measure JSON: dirac needs numeric \"at\"");
            return dirac(doc["at"].get<double>());
        }
        if (kind == "empirical") {
            if (!doc.contains("points") || !doc["points"].is_array())
                throw config_error("measure JSON: empirical needs array \"points\"");
            return empirical(doc["points"].get<std::vector<double>>());
        }
        if (kind == "cdf") {
            if (!doc.contains("knots") || !doc["knots"].is_array())
                throw config_error("measure JSON: cdf needs array \"knots\"");
            std::vector<std::pair<double, double>> knots;
            for (const auto& k : doc["knots"]) {
                if (!k.is_array() || k.size() != 2)
                    throw config_error("measure JSON: each knot must be [x, F]");
                knots.emplace_back(k[0].get<double>(), k[1].get<double>());
            }
            return piecewise_cdf(std::move(knots));
        }
    } catch (const domain_error& e) {
        throw config_error(std::string("measure JSON: ") + e.what());
    }
    throw config_error("measure JSON: unknown kind \"" + kind + "\"");
}

nlohmann::json RadialMeasure::to_json() const {
    nlohmann::json doc;
    switch (kind_) {
    case Kind::Dirac:
        doc["kind"] = "dirac";
        doc["at"] = dirac_at_;
        break;
    case Kind::Empirical:
        doc["kind"] = "empirical";
        doc["points"] = points_;
        break;
    case Kind::PiecewiseCdf: {
        doc["kind"] = "cdf";
        auto knots = nlohmann::json::array();
        for (std::size_t i = 0; i < knot_x_.size(); ++i)
            knots.push_back({knot_x_[i], knot_f_[i]});
        doc["knots"] = std::move(knots);
        break;
    }
    }
    return doc;
}

double RadialMeasure::quantile(double alpha) const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw domain_error("RadialMeasure::quantile: alpha outside [0,1]");
    if (alpha == 0.0) return 0.0;  // F(y) >= 0 holds for every y >= 0

    switch (kind_) {
    case Kind::Dirac:
        return dirac_at_;
    case Kind::Empirical: {
        // smallest index i with (i+1)/k >= alpha, using the same division as cdf()
        const double k = static_cast<double>(points_.size());
        std::size_t lo = 0, hi = points_.size() - 1;
        while (lo < hi) {
            std::size_t mid = lo + (hi - lo) / 2;
            if (static_cast<double>(mid + 1) / k >= alpha) hi = mid;
            else lo = mid + 1;
        }
        return points_[lo];
    }
    case Kind::PiecewiseCdf: {
        auto it = std::lower_bound(knot_f_.begin(), knot_f_.end(), alpha);
        const std::size_t i = static_cast<std::size_t>(it - knot_f_.begin());
        if (i == 0) return knot_x_[0];  // atom at the first knot
        const double f0 = knot_f_[i - 1], f1 = knot_f_[i];
        const double x0 = knot_x_[i - 1], x1 = knot_x_[i];
        return x0 + (alpha - f0) * (x1 - x0) / (f1 - f0);
    }
    }
    return 0.0;  // unreachable
}

double RadialMeasure::cdf(double x) const {
    switch (kind_) {
    case Kind::Dirac:
        return x >= dirac_at_ ? 1.0 : 0.0;
    case Kind::Empirical: {
        auto it = std::upper_bound(points_.begin(), points_.end(), x);
        return static_cast<double>(it - points_.begin()) / static_cast<double>(points_.size());
    }
    case Kind::PiecewiseCdf: {
        if (x < knot_x_.front()) return 0.0;
        if (x >= knot_x_.back()) return 1.0;
        auto it = std::upper_bound(knot_x_.begin(), knot_x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - knot_x_.begin());  // knot_x_[i-1] <= x < knot_x_[i]
        const double x0 = knot_x_[i - 1], x1 = knot_x_[i];
        const double f0 = knot_f_[i - 1], f1 = knot_f_[i];
        return f0 + (x - x0) * (f1 - f0) / (x1 - x0);
    }
    }
    return 0.0;  // unreachable
}

std::vector<std::pair<double, double>> RadialMeasure::knots() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(knot_x_.size());
    for (std::size_t i = 0; i < knot_x_.size(); ++i) out.emplace_back(knot_x_[i], knot_f_[i]);
    return out;
}

bool RadialMeasure::has_continuous_strictly_increasing_cdf() const {
    if (kind_ != Kind::PiecewiseCdf) return false;
    if (knot_f_.front() != 0.0) return false;  // jump (atom) at the first knot
    for (std::size_t i = 1; i < knot_f_.size(); ++i)
        if (knot_f_[i] <= knot_f_[i - 1]) return false;
    return true;
}

std::vector<double> sample_radii(const RadialMeasure& mu, int n) {
    if (n < 1) throw domain_error("sample_radii: n must be >= 1");
    if (mu.support_upper() <= 0.0)
        throw degenerate_measure_error("sample_radii: measure is concentrated at zero");

    std::vector<double> r(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        r[static_cast<std::size_t>(j - 1)] = mu.quantile((2.0 * j - 1.0) / (2.0 * n));

    const double delta = std::ldexp(mu.support_upper(), -40);
    std::size_t i = 0;
    while (i < r.size()) {
        std::size_t e = i;
        while (e + 1 < r.size() && r[e + 1] == r[i]) ++e;
        if (e > i || r[i] == 0.0) {
            // zero values only arise from an atom at zero; jitter them as well
            for (std::size_t k = i; k <= e; ++k)
                r[k] += static_cast<double>(k + 1) * delta;
        }
        i = e + 1;
    }

    if (r.front() <= 0.0)
        throw numerical_error("sample_radii: jitter failed to produce positive radii");
    for (std::size_t k = 1; k < r.size(); ++k)
        if (!(r[k] > r[k - 1]))
            throw numerical_error("sample_radii: jitter failed to separate ties", r[k - 1], r[k]);
    return r;
}

EmpiricalMeasure1D::EmpiricalMeasure1D(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw domain_error("EmpiricalMeasure1D: need at least one point");
    if (!all_finite(points_)) throw domain_error("EmpiricalMeasure1D: nonfinite point");
    std::sort(points_.begin(), points_.end());
}

double EmpiricalMeasure1D::cdf(double x) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), x);
    return static_cast<double>(it - points_.begin()) / static_cast<double>(points_.size());
}

namespace {

// forall x: F_b(x) <= F_a(x + eps) + eps. Both sides are right-continuous
// step functions of x, so checking at the jumps of F_b is exact.
bool levy_one_sided(const EmpiricalMeasure1D& a, const EmpiricalMeasure1D& b, double eps) {
    const auto& pb = b.points();
    const std::size_t nb = pb.size();
    for (std::size_t j = 0; j < nb;) {
        std::size_t e = j;
        while (e + 1 < nb && pb[e + 1] == pb[j]) ++e;
        const double fb = static_cast<double>(e + 1) / static_cast<double>(nb);
        if (fb > a.cdf(pb[j] + eps) + eps) return false;
        j = e + 1;
    }
    return true;
}

// Swapping the arguments swaps the two one-sided checks, so the result is
// exactly symmetric in (p, q).
bool levy_feasible(const EmpiricalMeasure1D& p, const EmpiricalMeasure1D& q, double eps) {
    return levy_one_sided(p, q, eps) && levy_one_sided(q, p, eps);
}

} // namespace

double levy_distance(const EmpiricalMeasure1D& p, const EmpiricalMeasure1D& q) {
    if (levy_feasible(p, q, 0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;  // eps = 1 is always feasible for probability measures
    while (hi - lo > 0x1.0p-46) {
        const double mid = 0.5 * (lo + hi);
        if (levy_feasible(p, q, mid)) hi = mid;
        else lo = mid;
    }
    // guard the bracket: feasible at ret + 2^-44, infeasible at ret - 2^-44
    if (!levy_feasible(p, q, hi + 0x1.0p-44))
        throw numerical_error("levy_distance: feasibility not monotone above result", lo, hi);
    if (hi - 0x1.0p-44 > 0.0 && levy_feasible(p, q, hi - 0x1.0p-44))
        throw numerical_error("levy_distance: feasibility not monotone below result", lo, hi);
    return hi;
}

double WeightedComplexPoints::total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double levy_prokhorov_bound_2d(const WeightedComplexPoints& p, const WeightedComplexPoints& q) {
    if (p.points.size() != p.weights.size() || q.points.size() != q.weights.size())
        throw domain_error("levy_prokhorov_bound_2d: points/weights size mismatch");
    if (p.points.empty() || q.points.empty())
        throw domain_error("levy_prokhorov_bound_2d: empty point set");
    const double mp = p.total_mass(), mq = q.total_mass();
    if (std::abs(mp - mq) > 1e-9 * std::max({1.0, mp, mq}))
        throw domain_error("levy_prokhorov_bound_2d: total masses differ");

    struct Node {
        double r, a;
        std::complex<double> z;
        double w;
    };
    auto build = [](const WeightedComplexPoints& s) {
        std::vector<Node> v;
        v.reserve(s.points.size());
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            if (s.weights[i] < 0.0) throw domain_error("levy_prokhorov_bound_2d: negative weight");
            if (s.weights[i] == 0.0) continue;
            double ang = std::arg(s.points[i]);
            if (ang < 0.0) ang += 2.0 * 3.14159265358979323846;
            v.push_back({std::abs(s.points[i]), ang, s.points[i], s.weights[i]});
        }
        std::sort(v.begin(), v.end(), [](const Node& a, const Node& b) {
            if (a.r != b.r) return a.r < b.r;
            return a.a < b.a;
        });
        return v;
    };
    std::vector<Node> a = build(p), b = build(q);

    // monotone coupling in (radius, angle) order, splitting mass as needed
    std::vector<std::pair<double, double>> moved;  // (distance, mass)
    std::size_t i = 0, j = 0;
    double ra = a.empty() ? 0.0 : a[0].w, rb = b.empty() ? 0.0 : b[0].w;
    while (i < a.size() && j < b.size()) {
        const double m = std::min(ra, rb);
        moved.emplace_back(std::abs(a[i].z - b[j].z), m);
        ra -= m;
        rb -= m;
        if (ra <= 0.0 && ++i < a.size()) ra = a[i].w;
        if (rb <= 0.0 && ++j < b.size()) rb = b[j].w;
    }

    // smallest eps with (coupled mass at distance > eps) <= eps
    std::sort(moved.begin(), moved.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<double> level, cum;  // distinct distances desc, cumulative mass through level
    for (const auto& [d, m] : moved) {
        if (level.empty() || d < level.back()) {
            level.push_back(d);
            cum.push_back(m);
        } else {
            cum.back() += m;
        }
    }
    for (std::size_t k = 1; k < cum.size(); ++k) cum[k] += cum[k - 1];

    double best = level.front();  // tail mass above the largest distance is zero
    for (std::size_t k = 0; k < level.size(); ++k) {
        // on [low, level[k]) the tail mass equals cum[k]
        const double low = (k + 1 < level.size()) ? level[k + 1] : 0.0;
        if (cum[k] >= level[k]) break;  // infeasible here and below
        best = std::min(best, std::max(cum[k], low));
    }
    return best;
}

} // namespace rootflow
