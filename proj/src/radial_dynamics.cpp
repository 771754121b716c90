#include "rootflow/radial_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rootflow/errors.hpp"

namespace rootflow {

namespace {

// Beyond this distance the term 1/(1 - e^{u-v}) equals 1 (u << v) or 0
// (u >> v) to double precision, so far terms reduce to a count.
constexpr double kWindow = 50.0;

struct Grouped {
    std::vector<double> u;       // distinct log-roots, increasing
    std::vector<double> mult;    // exact-tie multiplicities
    std::vector<double> prefix;  // prefix[i] = sum of mult[0..i)
};

Grouped group_ties(const std::vector<double>& u) {
    Grouped g;
    g.u.reserve(u.size());
    g.mult.reserve(u.size());
    for (double x : u) {
        if (!g.u.empty() && x == g.u.back()) {
            g.mult.back() += 1.0;
        } else {
            g.u.push_back(x);
            g.mult.push_back(1.0);
        }
    }
    g.prefix.resize(g.u.size() + 1);
    g.prefix[0] = 0.0;
    for (std::size_t i = 0; i < g.u.size(); ++i) g.prefix[i + 1] = g.prefix[i] + g.mult[i];
    return g;
}

// sum_i mult_i / (1 - exp(u_i - v)), windowed around v.
double rational_sum(const Grouped& g, double v) {
    const auto first = std::lower_bound(g.u.begin(), g.u.end(), v - kWindow);
    const auto last = std::upper_bound(first, g.u.end(), v + kWindow);
    const std::size_t i0 = static_cast<std::size_t>(first - g.u.begin());
    const std::size_t i1 = static_cast<std::size_t>(last - g.u.begin());
    double s = g.prefix[i0];
    for (std::size_t i = i0; i < i1; ++i)
        s -= g.mult[i] / std::expm1(g.u[i] - v);  // 1/(1-e^x) = -1/expm1(x)
    return s;
}

// Bisection for the unique zero of a strictly decreasing g on (lo, hi) where
// g -> +inf at lo+ and -inf at hi-. Only midpoints are evaluated, so the
// bracket may start at the poles themselves.
template <typename Eval>
double bisect_decreasing(const Eval& eval, double lo, double hi, double tol) {
    for (int iter = 0; iter < 200; ++iter) {
        if (hi - lo <= tol) return 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) return 0.5 * (lo + hi);
        const double val = eval(mid);
        if (val > 0.0) lo = mid;
        else if (val < 0.0) hi = mid;
        else return mid;
    }
    throw numerical_error("differentiate_once: bisection did not converge", lo, hi);
}

// Leftmost q >= 1 root lives in (-inf, u_1). g -> q > 0 as v -> -inf, so a
// doubling search left of u_1 always brackets it.
template <typename Eval>
double solve_leftmost(const Eval& eval, double u1, double tol) {
    double step = 1.0;
    double lo = u1 - step;
    while (!(eval(lo) > 0.0)) {
        step *= 2.0;
        lo = u1 - step;
        if (step > 1e12)
            throw numerical_error("differentiate_once: leftmost bracket search failed", lo, u1);
    }
    return bisect_decreasing(eval, lo, u1, tol);
}

} // namespace

RadialState::RadialState(std::vector<double> u, int m, int q, long long deriv_count)
    : log_roots_(std::move(u)), m_(m), q_(q), deriv_count_(deriv_count) {}

RadialState RadialState::from_radii(const std::vector<double>& radii, int m) {
    if (m < 1) throw domain_error("from_radii: m must be >= 1");
    if (radii.empty()) throw domain_error("from_radii: need at least one radius");
    std::vector<double> u(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !std::isfinite(radii[i]))
            throw domain_error("from_radii: radii must be positive and finite");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw domain_error("from_radii: radii must be strictly increasing");
        u[i] = static_cast<double>(m) * std::log(radii[i]);
    }
    return RadialState(std::move(u), m, 0, 0);
}

long long RadialState::degree() const {
    return static_cast<long long>(q_) +
           static_cast<long long>(log_roots_.size()) * static_cast<long long>(m_);
}

RadialState differentiate_once(const RadialState& s) {
    const int m = s.m();
    const int q = s.q();
    const auto& u = s.log_roots();
    const std::size_t n = u.size();

    if (n == 0) {
        // pure monomial z^q
        if (q == 0) throw domain_error("differentiate_once: constant polynomial");
        return RadialState({}, m, q - 1, s.deriv_count() + 1);
    }

    const double tol = std::ldexp(std::max(1.0, std::fabs(u.front()) + std::fabs(u.back())), -46);
    const Grouped g = group_ties(u);
    const std::size_t d = g.u.size();
    std::vector<double> out;

    if (q >= 1) {
        // S = q*Q + m*x*Q': n roots, one per interval including (0, rho_1)
        auto eval = [&](double v) {
            return static_cast<double>(q) + static_cast<double>(m) * rational_sum(g, v);
        };
        out.reserve(n);
        out.push_back(solve_leftmost(eval, g.u.front(), tol));
        for (std::size_t i = 0; i < d; ++i) {
            out.insert(out.end(), static_cast<std::size_t>(g.mult[i]) - 1, g.u[i]);
            if (i + 1 < d) out.push_back(bisect_decreasing(eval, g.u[i], g.u[i + 1], tol));
        }
        return RadialState(std::move(out), m, q - 1, s.deriv_count() + 1);
    }

    // q == 0: Q -> Q', degree of Q drops by one, q resets to m-1
    if (n == 1) return RadialState({}, m, m - 1, s.deriv_count() + 1);
    auto eval = [&](double v) { return rational_sum(g, v); };
    out.reserve(n - 1);
    for (std::size_t i = 0; i < d; ++i) {
        out.insert(out.end(), static_cast<std::size_t>(g.mult[i]) - 1, g.u[i]);
        if (i + 1 < d) out.push_back(bisect_decreasing(eval, g.u[i], g.u[i + 1], tol));
    }
    return RadialState(std::move(out), m, m - 1, s.deriv_count() + 1);
}

RadialState differentiate_k(const RadialState& s, long long k) {
    if (k < 0 || k > s.degree() - 1)
        throw domain_error("differentiate_k: k outside [0, degree-1]");
    RadialState cur = s;
    for (long long i = 0; i < k; ++i) cur = differentiate_once(cur);
    return cur;
}

RadiiView radii_view(const RadialState& s) {
    RadiiView view;
    view.n = s.root_count();
    view.zero_multiplicity = s.q();
    view.radii.reserve(s.log_roots().size());
    for (double u : s.log_roots()) view.radii.push_back(std::exp(u / static_cast<double>(s.m())));
    return view;
}

WeightedComplexPoints roots_as_complex(const RadialState& s) {
    const RadiiView view = radii_view(s);
    const std::size_t total =
        static_cast<std::size_t>(s.q()) + view.radii.size() * static_cast<std::size_t>(s.m());
    WeightedComplexPoints set;
    set.points.reserve(total);
    const double w = 1.0 / static_cast<double>(total);
    for (int i = 0; i < s.q(); ++i) set.points.emplace_back(0.0, 0.0);
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (double r : view.radii)
        for (int k = 0; k < s.m(); ++k)
            set.points.push_back(std::polar(r, two_pi * static_cast<double>(k) /
                                                   static_cast<double>(s.m())));
    set.weights.assign(total, w);
    return set;
}

void write_state_csv(const RadialState& s, std::ostream& os) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "n=%d,m=%d,q=%d,deriv_count=%lld\n", s.root_count(), s.m(),
                  s.q(), s.deriv_count());
    os << buf << "j,log_root,radius\n";
    const RadiiView view = radii_view(s);
    for (std::size_t j = 0; j < view.radii.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", j + 1, s.log_roots()[j],
                      view.radii[j]);
        os << buf;
    }
}

} // namespace rootflow
