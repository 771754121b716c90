#include "rootflow/real_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "rootflow/errors.hpp"

namespace rootflow {

namespace {

void validate(const RealRootMultiset& s) {
    if (s.roots.size() != s.weights.size())
        throw domain_error("RealRootMultiset: roots/weights size mismatch");
    for (std::size_t i = 0; i < s.roots.size(); ++i) {
        if (!std::isfinite(s.roots[i])) throw domain_error("RealRootMultiset: nonfinite root");
        if (!(s.weights[i] > 0.0)) throw domain_error("RealRootMultiset: weights must be > 0");
        if (i > 0 && s.roots[i] < s.roots[i - 1])
            throw domain_error("RealRootMultiset: roots must be nondecreasing");
    }
}

struct Groups {
    std::vector<double> v;  // distinct roots, increasing
    std::vector<int> count;
    std::vector<double> w;  // summed weight per group
};

Groups group_exact(const RealRootMultiset& s) {
    Groups g;
    for (std::size_t i = 0; i < s.roots.size(); ++i) {
        if (!g.v.empty() && s.roots[i] == g.v.back()) {
            ++g.count.back();
            g.w.back() += s.weights[i];
        } else {
            g.v.push_back(s.roots[i]);
            g.count.push_back(1);
            g.w.push_back(s.weights[i]);
        }
    }
    return g;
}

// Unique zero of h(z) = sum_i W_i / (z - v_i) in the open interval
// (v_lo, v_hi). h decreases from +inf to -inf there, so only midpoints are
// ever evaluated and the endpoint signs stay implicit.
double bisect_pole_interval(const Groups& g, double lo, double hi) {
    const double tol = std::ldexp(std::max({1.0, std::fabs(lo), std::fabs(hi)}), -46);
    for (int iter = 0; iter < 200; ++iter) {
        if (hi - lo <= tol) return 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) return 0.5 * (lo + hi);
        double h = 0.0;
        for (std::size_t i = 0; i < g.v.size(); ++i) h += g.w[i] / (mid - g.v[i]);
        if (h > 0.0) lo = mid;
        else if (h < 0.0) hi = mid;
        else return mid;
    }
    throw numerical_error("weighted_derivative_roots: bisection did not converge", lo, hi);
}

} // namespace

RealRootMultiset weighted_derivative_roots(const RealRootMultiset& s) {
    validate(s);
    const std::size_t n = s.roots.size();
    if (n < 2) throw domain_error("weighted_derivative_roots: need n >= 2");

    const Groups g = group_exact(s);
    std::vector<double> out;
    out.reserve(n - 1);
    for (std::size_t i = 0; i < g.v.size(); ++i) {
        out.insert(out.end(), static_cast<std::size_t>(g.count[i] - 1), g.v[i]);
        if (i + 1 < g.v.size()) out.push_back(bisect_pole_interval(g, g.v[i], g.v[i + 1]));
    }
    return {std::move(out), std::vector<double>(n - 1, 1.0)};
}

RealRootMultiset repeated_derivative(const RealRootMultiset& s, int k) {
    validate(s);
    for (double w : s.weights)
        if (w != s.weights.front())
            throw domain_error("repeated_derivative: weights must all be equal");
    if (k < 0 || static_cast<std::size_t>(k) > s.roots.size() - 1)
        throw domain_error("repeated_derivative: k outside [0, n-1]");

    RealRootMultiset cur{s.roots, std::vector<double>(s.roots.size(), 1.0)};
    for (int i = 0; i < k; ++i) cur = weighted_derivative_roots(cur);
    return cur;
}

} // namespace rootflow
