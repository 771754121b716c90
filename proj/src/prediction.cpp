#include "rootflow/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rootflow/errors.hpp"
#include "rootflow/rng.hpp"

namespace rootflow {

LimitLaw::LimitLaw(RadialMeasure base_measure, double time)
    : base(std::move(base_measure)), t(time) {
    if (!(t >= 0.0 && t < 1.0)) throw domain_error("LimitLaw: t must lie in [0,1)");
}

double limit_quantile(const LimitLaw& law, double x) {
    const double span = 1.0 - law.t;
    if (!(x >= 0.0 && x <= span)) throw domain_error("limit_quantile: x outside [0, 1-t]");
    if (x == 0.0) return 0.0;
    const double alpha = std::min(1.0, x + law.t);
    return x * law.base.quantile(alpha) / (x + law.t);
}

double limit_cdf(const LimitLaw& law, double y) {
    const double span = 1.0 - law.t;
    if (!(y > 0.0)) return 0.0;
    if (y >= limit_quantile(law, span)) return span;
    // q_t is nondecreasing with q_t(0) = 0 <= y < q_t(span)
    double lo = 0.0, hi = span;
    while (hi - lo > 0x1.0p-46) {
        const double mid = 0.5 * (lo + hi);
        if (limit_quantile(law, mid) <= y) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> predicted_radii(const LimitLaw& law, const std::vector<double>& radii0,
                                    int ell) {
    const int n = static_cast<int>(radii0.size());
    if (ell < 1 || ell > n - 1) throw domain_error("predicted_radii: ell outside [1, n-1]");
    const double nt = static_cast<double>(n) * law.t;
    std::vector<double> pred(static_cast<std::size_t>(n - ell));
    for (int j = 1; j <= n - ell; ++j) {
        const double jm1 = static_cast<double>(j - 1);
        pred[static_cast<std::size_t>(j - 1)] =
            jm1 / (jm1 + nt) * radii0[static_cast<std::size_t>(j + ell - 1)];
    }
    return pred;
}

EnvelopeParams::EnvelopeParams(int n_, int m_, double t_) : n(n_), m(m_), t(t_) {
    if (n < 1 || m < 1) throw domain_error("EnvelopeParams: n and m must be >= 1");
    eps_n = 3.0 * static_cast<double>(n) * std::log(static_cast<double>(n)) /
            static_cast<double>(m);
}

double EnvelopeParams::eta(int j) const {
    if (j <= 3) return std::numeric_limits<double>::infinity();
    const double jd = static_cast<double>(j);
    return std::log((jd - 1.0) / (jd - 3.0)) + std::log((jd + 2.0) / (jd - 1.0)) + eps_n;
}

std::vector<EnvelopeEntry> envelope_check(const std::vector<double>& observed,
                                          const LimitLaw& law,
                                          const std::vector<double>& radii0, int n, int m,
                                          int ell) {
    if (static_cast<int>(radii0.size()) != n)
        throw domain_error("envelope_check: radii0 must have length n");
    if (static_cast<int>(observed.size()) != n - ell)
        throw domain_error("envelope_check: observed must have length n - ell");
    const EnvelopeParams params(n, m, law.t);
    const std::vector<double> pred = predicted_radii(law, radii0, ell);

    std::vector<EnvelopeEntry> entries;
    entries.reserve(observed.size());
    for (int j = 1; j <= n - ell; ++j) {
        EnvelopeEntry e;
        e.j = j;
        e.eta = params.eta(j);
        e.informational = j <= 3;
        const double p = pred[static_cast<std::size_t>(j - 1)];
        e.log_ratio = std::log(observed[static_cast<std::size_t>(j - 1)] / p);
        e.inside = e.informational || std::fabs(e.log_ratio) <= e.eta;
        entries.push_back(e);
    }
    return entries;
}

double envelope_pass_fraction(const std::vector<EnvelopeEntry>& entries) {
    int total = 0, inside = 0;
    for (const auto& e : entries) {
        if (e.informational) continue;
        ++total;
        if (e.inside) ++inside;
    }
    return total == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(total);
}

namespace {

void require_smooth_base(const RadialMeasure& base, const char* op) {
    if (!base.has_continuous_strictly_increasing_cdf())
        throw domain_error(std::string(op) +
                           ": base must have a continuous strictly increasing CDF");
}

} // namespace

double pde_residual_psi(const RadialMeasure& base, double x, double t, double h) {
    require_smooth_base(base, "pde_residual_psi");
    if (!(h > 0.0)) throw domain_error("pde_residual_psi: h must be > 0");
    if (!(t - h >= 0.0 && t + h < 1.0))
        throw domain_error("pde_residual_psi: t stencil outside [0,1)");
    const double band = base.support_upper() * (1.0 - t - h);
    if (!(x - h > 0.0 && x + h < band))
        throw domain_error("pde_residual_psi: x stencil outside the open band");

    auto psi_of = [&](double xx, double tt) { return limit_cdf(LimitLaw(base, tt), xx); };
    const double d_dt = (psi_of(x, t + h) - psi_of(x, t - h)) / (2.0 * h);
    const double d_dx = (psi_of(x + h, t) - psi_of(x - h, t)) / (2.0 * h);
    const double value = psi_of(x, t);
    return d_dt - (x * d_dx / value - 1.0);
}

double pde_residual_density(const RadialMeasure& base, double x, double t, double h) {
    require_smooth_base(base, "pde_residual_density");
    if (!(h > 0.0)) throw domain_error("pde_residual_density: h must be > 0");
    if (!(t - h >= 0.0 && t + h < 1.0))
        throw domain_error("pde_residual_density: t stencil outside [0,1)");
    if (!(x >= 10.0 * h)) throw domain_error("pde_residual_density: x must be >= 10h");
    const double band = base.support_upper() * (1.0 - t - h);
    if (!(x - 2.0 * h > 0.0 && x + 2.0 * h < band))
        throw domain_error("pde_residual_density: x stencil outside the open band");

    auto cdf_of = [&](double xx, double tt) { return limit_cdf(LimitLaw(base, tt), xx); };
    auto density = [&](double xx, double tt) {
        return (cdf_of(xx + h, tt) - cdf_of(xx - h, tt)) / (2.0 * h);
    };
    const double lhs = (density(x, t + h) - density(x, t - h)) / (2.0 * h);
    auto flux = [&](double xx) { return xx * density(xx, t) / cdf_of(xx, t); };
    const double rhs = (flux(x + h) - flux(x - h)) / (2.0 * h);
    return lhs - rhs;
}

EmpiricalMeasure1D sample_limit_law(const LimitLaw& law, int count, std::uint64_t seed) {
    if (count < 1) throw domain_error("sample_limit_law: count must be >= 1");
    std::vector<double> values(static_cast<std::size_t>(count));
    const double span = 1.0 - law.t;
    if (seed == 0) {
        for (int i = 1; i <= count; ++i) {
            const double v = law.t + span * (2.0 * i - 1.0) / (2.0 * count);
            const double factor = law.t == 0.0 ? 1.0 : 1.0 - law.t / v;
            values[static_cast<std::size_t>(i - 1)] = factor * law.base.quantile(v);
        }
    } else {
        Rng rng(seed);
        for (int i = 0; i < count; ++i) {
            const double v = law.t + span * rng.uniform01();
            const double factor = (law.t == 0.0 || v == 0.0) ? 1.0 : 1.0 - law.t / v;
            values[static_cast<std::size_t>(i)] = factor * law.base.quantile(v);
        }
    }
    return EmpiricalMeasure1D(std::move(values));
}

} // namespace rootflow
