#include "leoaoi/safety.hpp"

namespace leoaoi::safety {

int slot_violation_count(std::span<const std::int64_t> tick_ages, int n_safe,
                         int ticks_per_slot) {
    require(tick_ages.size() == static_cast<std::size_t>(ticks_per_slot),
            "slot_violation_count: expected exactly N_ac tick ages");
    int count = 0;
    for (auto a : tick_ages) count += a > n_safe ? 1 : 0;
    return count;
}

double ls_slope(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    const double xbar = (n - 1) / 2.0;
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (y[i] - ybar);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ComplianceReport compliance_report(const aoi::TickLog& log, const aoi::SafetyThresholds& th) {
    require(log.ticks() > 0, "compliance_report: empty log");
    const int nv = log.vehicles();
    const std::int64_t nt = log.ticks();
    ComplianceReport rep;
    rep.per_vehicle.assign(static_cast<std::size_t>(nv), {});
    std::vector<std::int64_t> counts(static_cast<std::size_t>(nv * kClasses), 0);
    for (std::int64_t t = 0; t < nt; ++t)
        for (int v = 0; v < nv; ++v)
            for (int m = 0; m < kClasses; ++m)
                if (log.age(t, v, m) > th.n_safe[m]) ++counts[static_cast<std::size_t>(v * kClasses + m)];

    const std::int64_t half = nt / 2;
    std::vector<double> mean_z(static_cast<std::size_t>(nt - half));
    for (int m = 0; m < kClasses; ++m) {
        double rate_sum = 0.0;
        for (int v = 0; v < nv; ++v) {
            const double r = static_cast<double>(counts[static_cast<std::size_t>(v * kClasses + m)]) /
                             static_cast<double>(nt);
            rep.per_vehicle[static_cast<std::size_t>(v)][m] = r;
            rate_sum += r;
        }
        for (std::int64_t t = half; t < nt; ++t) {
            double s = 0.0;
            for (int v = 0; v < nv; ++v) s += log.z(t, v, m);
            mean_z[static_cast<std::size_t>(t - half)] = s / nv;
        }
        auto& c = rep.classes[m];
        c.cls = m + 1;
        c.rate = rate_sum / nv;
        c.epsilon = th.epsilon[m];
        c.compliant = c.rate <= c.epsilon;
        c.z_slope = ls_slope(mean_z);
        c.stability_consistent = !(c.z_slope < kStableSlope) || c.rate <= c.epsilon + 0.005;
    }
    return rep;
}

bool slater_check(double forced_rate, double mu_n, int ticks_per_slot, double epsilon,
                  double delta) {
    require(mu_n > 0.0, "slater_check: mean outage must be positive");
    require(delta > 0.0 && delta < epsilon, "slater_check: need 0 < delta < epsilon");
    return forced_rate <= (epsilon - delta) * ticks_per_slot / mu_n;
}

}  // namespace leoaoi::safety
