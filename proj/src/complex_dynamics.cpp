#include "rootflow/complex_dynamics.hpp"
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "rootflow/errors.hpp"
#include "rootflow/real_dynamics.hpp"
#include "rootflow/rng.hpp"

namespace rootflow {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct PoleSet {
    std::vector<cplx> z;      // distinct input roots
    std::vector<double> mult;
};

PoleSet group_exact(const std::vector<cplx>& roots) {
    std::vector<cplx> sorted = roots;
    std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    PoleSet p;
    for (cplx z : sorted) {
        if (!p.z.empty() && z == p.z.back()) {
            p.mult.back() += 1.0;
        } else {
            p.z.push_back(z);
            p.mult.push_back(1.0);
        }
    }
    return p;
}

double diameter(const std::vector<cplx>& pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
}

struct Sums {
    cplx s1{0.0, 0.0};
    cplx s2{0.0, 0.0};
};

// Neumaier-compensated accumulator. The root sums cancel almost completely
// near an emergent multiple root (S1 ~ z^k against terms of size 1), and the
// plain-summation noise floor eps*sum|terms| would freeze Aberth clusters at
// radius eps^(1/k). Compensation pushes that floor to ~eps^2.
struct CompensatedSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::fabs(s) >= std::fabs(v)) c += (s - t) + v;
        else c += (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

Sums eval_sums(const PoleSet& p, cplx z) {
    CompensatedSum s1re, s1im, s2re, s2im;
    for (std::size_t i = 0; i < p.z.size(); ++i) {
        const cplx inv = p.mult[i] / (z - p.z[i]);
        const cplx sq = inv * inv / p.mult[i];
        s1re.add(inv.real());
        s1im.add(inv.imag());
        s2re.add(sq.real());
        s2im.add(sq.imag());
    }
    return {cplx{s1re.value(), s1im.value()}, cplx{s2re.value(), s2im.value()}};
}

struct FixedRoot {
    cplx z;
    double mult;
};

// Single-linkage grouping of the still-moving iterates; every group of two
// or more is replaced by copies of its centroid. Iterates that already
// converged to simple roots are never touched. Averaging cancels most of the
// (eps)^(1/k) spread a k-fold root imposes on the individual iterates.
void collapse_active_clusters(std::vector<cplx>& roots, const std::vector<bool>& active,
                              double threshold) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> group(n);
    for (std::size_t i = 0; i < n; ++i) group[i] = i;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (std::abs(roots[i] - roots[j]) <= threshold && group[i] != group[j]) {
                    const std::size_t from = std::max(group[i], group[j]);
                    const std::size_t to = std::min(group[i], group[j]);
                    for (auto& g : group)
                        if (g == from) g = to;
                    changed = true;
                }
            }
        }
    }
    for (std::size_t g = 0; g < n; ++g) {
        cplx sum{0.0, 0.0};
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (group[i] == g && active[i]) {
                sum += roots[i];
                ++count;
            }
        if (count >= 2) {
            const cplx centroid = sum / static_cast<double>(count);
            for (std::size_t i = 0; i < n; ++i)
                if (group[i] == g && active[i]) roots[i] = centroid;
        }
    }
}

struct SolveResult {
    std::vector<cplx> roots;
    bool cluster_limited = false;  // accepted at the cancellation floor
    double level = 0.0;            // final sweep's largest correction
};

// Newton ratio H/H' of the target polynomial, split so the solver can see
// when the denominator is pure cancellation noise.
struct NewtonField {
    std::function<Sums(cplx)> sums;
    std::function<cplx(const Sums&, cplx)> numerator;
    std::function<cplx(const Sums&, cplx)> denominator;
    std::function<double(const Sums&, cplx)> denominator_scale;
};

// Jacobi-style Aberth-Ehrlich: every correction in a sweep is computed from
// the previous sweep's values, so the result does not depend on update order.
// Converged when the largest correction drops below 1e-13 * diameter.
// Clusters around a multiple root of the target polynomial hit the
// cancellation floor of the implicit Newton ratio before that; stagnating
// sweeps below 1e-5 * diameter are accepted as cluster-limited and the
// caller collapses each cluster to its centroid, which is accurate to far
// better than the spread.
SolveResult aberth_solve(const NewtonField& field, const std::vector<FixedRoot>& fixed,
                         std::vector<cplx> guesses, double diam, const PoleSet& poles,
                         const char* op) {
    if (guesses.empty()) return {std::move(guesses), false, 0.0};
    double pole_reach = 0.0;
    for (const cplx& z : poles.z) pole_reach = std::max(pole_reach, std::abs(z));
    const double scale = std::max({diam, pole_reach, 1e-12});
    const double tol = 1e-13 * scale;
    const double cluster_tol = 1e-5 * scale;

    auto nudge = [&](cplx z, std::size_t k, double mag) {
        const double ang = 0.5 + 2.39996322972865332 * static_cast<double>(k + 1);
        return z + std::polar(mag * scale, ang);
    };
    // second attempt: a log-spiral net around the pole centroid covering
    // every radial scale of the input, including a possible origin cluster
    auto spiral_net = [&](std::vector<cplx>& g) {
        cplx centroid{0.0, 0.0};
        double total = 0.0;
        for (std::size_t i = 0; i < poles.z.size(); ++i) {
            centroid += poles.mult[i] * poles.z[i];
            total += poles.mult[i];
        }
        centroid /= total;
        double rmin = scale, rmax = 0.0;
        for (const cplx& z : poles.z) {
            const double r = std::abs(z - centroid);
            if (r > 0.0) rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
        if (rmax == 0.0) rmax = scale;
        const double lo = 0.02 * rmin, hi = 1.2 * rmax;
        const double count = static_cast<double>(std::max<std::size_t>(g.size() - 1, 1));
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double frac = static_cast<double>(k) / count;
            g[k] = centroid + std::polar(lo * std::pow(hi / lo, frac),
                                         0.3 + 2.39996322972865332 * static_cast<double>(k));
        }
    };
    // starting guesses must avoid the poles of the root sums
    for (std::size_t k = 0; k < guesses.size(); ++k) guesses[k] = nudge(guesses[k], k, 1e-3);

    std::vector<cplx> next(guesses.size());
    std::vector<double> steps(guesses.size(), 0.0);
    double last_step = 0.0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt == 1) spiral_net(guesses);
        // an iterate can land where P''/P cancels to noise (a flat basin of
        // the Newton map, e.g. between a tiny pole and a symmetric far
        // field); the only way out is a large jump whose direction varies
        // per sweep so no cycle can form
        auto escape = [&](cplx w, std::size_t k, int sweep) {
            const double ang = 0.5 + 2.39996322972865332 *
                                         static_cast<double>(k + 1 + 7 * (sweep + 1));
            return w + std::polar(0.3 * scale, ang);
        };
        std::vector<double> history;
        for (int sweep = 0; sweep < 500; ++sweep) {
            double max_step = 0.0;
            for (std::size_t k = 0; k < guesses.size(); ++k) {
                cplx w = guesses[k];
                cplx ratio{0.0, 0.0};
                bool flat = true;
                for (int tries = 0; tries < 8; ++tries) {
                    const Sums s = field.sums(w);
                    const cplx den = field.denominator(s, w);
                    if (finite(s.s1) && finite(den) &&
                        std::abs(den) > 1e-12 * field.denominator_scale(s, w)) {
                        ratio = field.numerator(s, w) / den;
                        if (finite(ratio)) {
                            flat = false;
                            break;
                        }
                    }
                    w = nudge(w, k + static_cast<std::size_t>(tries), 1e-9);
                }
                if (flat) {
                    next[k] = escape(w, k, sweep);
                } else {
                    cplx repulsion{0.0, 0.0};
                    for (std::size_t j = 0; j < guesses.size(); ++j)
                        if (j != k) repulsion += 1.0 / (w - guesses[j]);
                    for (const auto& f : fixed) repulsion += f.mult / (w - f.z);
                    const cplx denom = 1.0 - ratio * repulsion;
                    cplx step = (denom == cplx{0.0, 0.0}) ? ratio : ratio / denom;
                    if (!finite(step)) {
                        next[k] = escape(w, k, sweep);
                    } else {
                        // trust region: never move farther than half the set
                        if (std::abs(step) > 0.5 * scale)
                            step *= 0.5 * scale / std::abs(step);
                        next[k] = w - step;
                    }
                }
                steps[k] = std::abs(next[k] - guesses[k]);
                max_step = std::max(max_step, steps[k]);
            }
            guesses.swap(next);
            last_step = max_step;
            if (getenv("RF_DEBUG") && sweep % 25 == 0)
                fprintf(stderr, "[aberth %s] attempt %d sweep %d max_step %.3g\n", op, attempt,
                        sweep, max_step);
            if (max_step < tol) return {std::move(guesses), false, max_step};
            history.push_back(max_step);
            // stagnation must be judged patiently: cluster alignment around a
            // multiple root improves by only ~0.7x per 100 sweeps before its
            // final quadratic phase, while noise-limited wander stays ~1.0x
            const std::size_t h = history.size();
            if (h >= 150 && history[h - 1] > 0.85 * history[h - 101]) {
                // petal rings around an emergent multiple root wander at the
                // cancellation floor of the Newton ratio, which grows with
                // the multiplicity; accept when every still-moving iterate
                // sits in a mutual cluster, then collapse those clusters
                if (max_step < 1e-2 * scale) {
                    const double conv_tol = 100.0 * tol;
                    std::vector<bool> active(guesses.size());
                    for (std::size_t k = 0; k < guesses.size(); ++k)
                        active[k] = steps[k] >= conv_tol;
                    bool clustered = true;
                    for (std::size_t k = 0; k < guesses.size() && clustered; ++k) {
                        if (!active[k]) continue;
                        bool near = false;
                        for (std::size_t j = 0; j < guesses.size(); ++j)
                            if (j != k && active[j] &&
                                std::abs(guesses[k] - guesses[j]) <= 50.0 * max_step)
                                near = true;
                        clustered = near;
                    }
                    if (getenv("RF_DEBUG"))
                        fprintf(stderr, "[aberth %s] stagnation at step %.3g clustered=%d\n", op,
                                max_step, clustered ? 1 : 0);
                    // tiny wander is accepted even for isolated iterates
                    if (clustered || max_step < cluster_tol) {
                        collapse_active_clusters(guesses, active, 50.0 * max_step);
                        return {std::move(guesses), true, max_step};
                    }
                }
                break;  // stagnated far from any root: try the next net
            }
        }
    }
    throw numerical_error(std::string(op) + ": Aberth iteration did not converge", last_step);
}


// When exactly one cluster came out of the collapse, its mean is pinned by
// the exact first-moment identity: every other root carries full precision,
// so the cluster centroid is recovered to machine accuracy instead of the
// noise floor.
void pin_cluster_mean(std::vector<cplx>& free_roots, cplx expected_free_sum) {
    cplx cluster_value{0.0, 0.0};
    std::size_t cluster_size = 0;
    std::size_t clusters = 0;
    for (std::size_t i = 0; i < free_roots.size(); ++i) {
        std::size_t count = 0;
        bool first = true;
        for (std::size_t j = 0; j < free_roots.size(); ++j) {
            if (free_roots[j] == free_roots[i]) {
                ++count;
                if (j < i) first = false;
            }
        }
        if (count >= 2 && first) {
            ++clusters;
            cluster_value = free_roots[i];
            cluster_size = count;
        }
    }
    if (clusters != 1) return;
    cplx rest{0.0, 0.0};
    for (const auto& z : free_roots)
        if (z != cluster_value) rest += z;
    const cplx pinned = (expected_free_sum - rest) / static_cast<double>(cluster_size);
    for (auto& z : free_roots)
        if (z == cluster_value) z = pinned;
}

std::vector<cplx> sorted_output(std::vector<cplx> roots) {
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

void check_sum_rule(const std::vector<cplx>& in, const std::vector<cplx>& out, cplx expected,
                    double diam, const char* op, double slack = 0.0) {
    cplx sum{0.0, 0.0};
    for (cplx z : out) sum += z;
    cplx sum_in{0.0, 0.0};
    for (cplx z : in) sum_in += z;
    const double tol = 1e-10 * std::max({1.0, std::abs(sum_in), diam}) + slack;
    if (std::abs(sum - expected) > tol) {
        if (getenv("RF_DEBUG"))
            for (cplx z : out)
                fprintf(stderr, "[sum-check %s] out (%.17g, %.17g)\n", op, z.real(), z.imag());
        throw numerical_error(std::string(op) + ": root-sum identity violated",
                              std::abs(sum - expected));
    }
}

} // namespace

ComplexRootSet::ComplexRootSet(std::vector<cplx> roots) : roots_(std::move(roots)) {
    if (roots_.empty()) throw domain_error("ComplexRootSet: degree must be >= 1");
    for (cplx z : roots_)
        if (!finite(z)) throw domain_error("ComplexRootSet: nonfinite root");
}

ComplexRootSet derivative_roots_complex(const ComplexRootSet& s) {
    const auto& in = s.roots();
    const std::size_t n = in.size();
    if (n < 2) throw domain_error("derivative_roots_complex: degree must be >= 2");

    const PoleSet poles = group_exact(in);
    const double diam = diameter(poles.z);

    std::vector<FixedRoot> fixed;
    std::vector<cplx> out;
    for (std::size_t i = 0; i < poles.z.size(); ++i) {
        if (poles.mult[i] > 1.0) {
            fixed.push_back({poles.z[i], poles.mult[i] - 1.0});
            out.insert(out.end(), static_cast<std::size_t>(poles.mult[i]) - 1, poles.z[i]);
        }
    }

    // free roots of P': one fewer than the distinct input count; start from
    // the input roots with the largest-modulus point dropped
    std::vector<cplx> guesses = poles.z;
    auto drop = std::max_element(guesses.begin(), guesses.end(), [](cplx a, cplx b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });
    guesses.erase(drop);

    // Newton ratio P'/P'' = S1/(S1^2 - S2)
    NewtonField field;
    field.sums = [&poles](cplx z) { return eval_sums(poles, z); };
    field.numerator = [](const Sums& s, cplx) { return s.s1; };
    field.denominator = [](const Sums& s, cplx) { return s.s1 * s.s1 - s.s2; };
    field.denominator_scale = [](const Sums& s, cplx) {
        return std::norm(s.s1) + std::abs(s.s2);
    };
    SolveResult solve = aberth_solve(field, fixed, std::move(guesses), diam, poles,
                                     "derivative_roots_complex");
    cplx sum_in{0.0, 0.0};
    for (cplx z : in) sum_in += z;
    const cplx expected_sum = sum_in * (static_cast<double>(n - 1) / static_cast<double>(n));
    if (solve.cluster_limited) {
        cplx fixed_sum{0.0, 0.0};
        for (const cplx& z : out) fixed_sum += z;
        pin_cluster_mean(solve.roots, expected_sum - fixed_sum);
    }
    out.insert(out.end(), solve.roots.begin(), solve.roots.end());
    out = sorted_output(std::move(out));

    check_sum_rule(in, out, expected_sum, diam, "derivative_roots_complex",
                   solve.cluster_limited ? 10.0 * solve.level * out.size() : 0.0);

    // interlacing sanity when everything is real
    const bool all_real =
        std::all_of(in.begin(), in.end(), [](cplx z) { return z.imag() == 0.0; });
    if (all_real && !poles.z.empty()) {
        const double lo = poles.z.front().real(), hi = poles.z.back().real();
        const double slack = 1e-9 * std::max(1.0, diam);
        for (cplx z : out) {
            if (std::fabs(z.imag()) > slack || z.real() < lo - slack || z.real() > hi + slack)
                throw numerical_error("derivative_roots_complex: real-line interlacing violated",
                                      std::fabs(z.imag()));
        }
    }
    return ComplexRootSet(std::move(out));
}

ComplexRootSet circular_derivative(const ComplexRootSet& s, int n_operator) {
    const auto& in = s.roots();
    const int degree = s.degree();
    const int N = n_operator < 0 ? degree : n_operator;
    if (N != degree || N < 1)
        throw domain_error("circular_derivative: operator order must equal the degree");

    const PoleSet poles = group_exact(in);
    const double diam = diameter(poles.z);

    // H = z P' - (N/2) P. A root at the origin of multiplicity c keeps
    // multiplicity c (the degenerate case 2c == N is rejected); a nonzero
    // root of multiplicity c keeps multiplicity c - 1.
    std::vector<FixedRoot> fixed;
    std::vector<cplx> out;
    std::vector<cplx> guesses;
    for (std::size_t i = 0; i < poles.z.size(); ++i) {
        const bool at_origin = poles.z[i] == cplx{0.0, 0.0};
        if (at_origin) {
            if (2.0 * poles.mult[i] == static_cast<double>(N))
                throw domain_error("circular_derivative: degenerate structure at the origin");
            fixed.push_back({poles.z[i], poles.mult[i]});
            out.insert(out.end(), static_cast<std::size_t>(poles.mult[i]), poles.z[i]);
            continue;
        }
        if (poles.mult[i] > 1.0) {
            fixed.push_back({poles.z[i], poles.mult[i] - 1.0});
            out.insert(out.end(), static_cast<std::size_t>(poles.mult[i]) - 1, poles.z[i]);
        }
        guesses.push_back(poles.z[i]);  // output roots track the inputs
    }

    // H/H' = (z S1 - N/2) / (z S1^2 - (N/2) S1 + S1 - z S2)
    const double half_n = 0.5 * static_cast<double>(N);
    NewtonField field;
    field.sums = [&poles](cplx z) { return eval_sums(poles, z); };
    field.numerator = [half_n](const Sums& s, cplx z) { return z * s.s1 - half_n; };
    field.denominator = [half_n](const Sums& s, cplx z) {
        return z * s.s1 * s.s1 - half_n * s.s1 + s.s1 - z * s.s2;
    };
    field.denominator_scale = [half_n](const Sums& s, cplx z) {
        const double zs = std::abs(z);
        return zs * std::norm(s.s1) + (half_n + 1.0) * std::abs(s.s1) + zs * std::abs(s.s2);
    };
    SolveResult solve = aberth_solve(field, fixed, std::move(guesses), diam, poles,
                                     "circular_derivative");
    // sum of roots of H: coefficient identity Sum_out = (N-2)/N * Sum_in
    cplx sum_in{0.0, 0.0};
    for (cplx z : in) sum_in += z;
    const cplx expected_sum = sum_in * (static_cast<double>(N - 2) / static_cast<double>(N));
    if (solve.cluster_limited) {
        cplx fixed_sum{0.0, 0.0};
        for (const cplx& z : out) fixed_sum += z;
        pin_cluster_mean(solve.roots, expected_sum - fixed_sum);
    }
    out.insert(out.end(), solve.roots.begin(), solve.roots.end());
    out = sorted_output(std::move(out));

    check_sum_rule(in, out, expected_sum, diam, "circular_derivative",
                   solve.cluster_limited ? 10.0 * solve.level * out.size() : 0.0);

    // |prod roots| conservation, in log-modulus space; only meaningful when
    // no root sits at the origin
    const bool has_zero = std::any_of(in.begin(), in.end(),
                                      [](cplx z) { return z == cplx{0.0, 0.0}; });
    if (!has_zero) {
        double log_in = 0.0, log_out = 0.0;
        for (cplx z : in) log_in += std::log(std::abs(z));
        for (cplx z : out) log_out += std::log(std::abs(z));
        // relative drift of the geometric mean
        const double drift = std::fabs(log_out - log_in) / static_cast<double>(N);
        if (drift > 1e-8)
            throw numerical_error("circular_derivative: |prod roots| not conserved", drift);
    }
    return ComplexRootSet(std::move(out));
}

ComplexRootSet perturb_arguments(const ComplexRootSet& s, double scale, std::uint64_t seed) {
    if (!(scale >= 0.0)) throw domain_error("perturb_arguments: scale must be >= 0");
    Rng rng(seed);
    std::vector<cplx> out;
    out.reserve(s.roots().size());
    for (cplx z : s.roots()) {
        const double theta = rng.uniform(-scale, scale);
        out.push_back(z * std::polar(1.0, theta));
    }
    return ComplexRootSet(std::move(out));
}

ComplexRootSet sample_iid_arguments(const std::vector<double>& radii, int m,
                                    std::uint64_t seed) {
    if (m < 1) throw domain_error("sample_iid_arguments: m must be >= 1");
    if (radii.empty()) throw domain_error("sample_iid_arguments: need at least one radius");
    Rng rng(seed);
    std::vector<cplx> out;
    out.reserve(radii.size() * static_cast<std::size_t>(m));
    for (double r : radii) {
        if (!(r > 0.0)) throw domain_error("sample_iid_arguments: radii must be positive");
        for (int k = 0; k < m; ++k) out.push_back(std::polar(r, rng.uniform(0.0, 2.0 * kPi)));
    }
    return ComplexRootSet(std::move(out));
}

int near_collision_count(const ComplexRootSet& s, double rel_threshold) {
    const auto& pts = s.roots();
    const double thr = rel_threshold * diameter(pts);
    int count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) < thr) ++count;
    return count;
}

} // namespace rootflow
