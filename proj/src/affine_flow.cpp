#include "mflow/affine_flow.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mflow {

LinearOscFlow::State LinearOscFlow::at(double x0, double v0, double t) const {
    if (!(stiffness > 0.0)) fail(Err::Unsupported, "oscillator flow requires stiffness > 0");
    const double xp = forcing / stiffness;
    const double a0 = x0 - xp;
    const double disc = damping * damping - 4.0 * stiffness;
    const double scale = std::max(damping * damping, 4.0 * stiffness);
    if (disc > 1e-12 * scale) {
        double s = std::sqrt(disc);
        double r1 = 0.5 * (-damping + s);
        double r2 = 0.5 * (-damping - s);
        double c1 = (v0 - r2 * a0) / (r1 - r2);
        double c2 = a0 - c1;
        double e1 = std::exp(r1 * t), e2 = std::exp(r2 * t);
        return {xp + c1 * e1 + c2 * e2, c1 * r1 * e1 + c2 * r2 * e2};
    }
    if (disc < -1e-12 * scale) {
        double sigma = -0.5 * damping;
        double omega = 0.5 * std::sqrt(-disc);
        double a = a0;
        double b = (v0 - sigma * a) / omega;
        double e = std::exp(sigma * t), c = std::cos(omega * t), s = std::sin(omega * t);
        double x = xp + e * (a * c + b * s);
        double v = e * ((sigma * a + omega * b) * c + (sigma * b - omega * a) * s);
        return {x, v};
    }
    double r = -0.5 * damping;
    double b = v0 - r * a0;
    double e = std::exp(r * t);
    return {xp + (a0 + b * t) * e, (v0 + b * r * t) * e};
}

double LinearOscFlow::fast_rate() const {
    double disc = damping * damping - 4.0 * stiffness;
    if (disc > 0.0) return 0.5 * (damping + std::sqrt(disc));
    return std::max(0.5 * damping, std::sqrt(stiffness));
}

std::optional<double> first_crossing(const std::function<double(double)>& g, double t_min,
                                     double t_max, double osc_period) {
    if (!(t_max > t_min)) return std::nullopt;

    std::vector<double> ts;
    ts.reserve(512);
    // geometric prefix catches stiff transients many decades below t_max
    for (double t = t_max * 0x1.0p-52; t < t_max; t *= 2.0)
        if (t > t_min) ts.push_back(t);
    int n_lin = 256;
    if (osc_period > 0.0)
        n_lin = std::max(n_lin, static_cast<int>(16.0 * (t_max - t_min) / osc_period) + 1);
    n_lin = std::min(n_lin, 1 << 20);
    for (int i = 1; i <= n_lin; ++i) {
        double t = t_min + (t_max - t_min) * static_cast<double>(i) / n_lin;
        ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());

    double t_prev = t_min;
    double g_prev = g(t_min);
    for (double t : ts) {
        double gt = g(t);
        if (gt == 0.0) return t;
        if ((g_prev < 0.0 && gt > 0.0) || (g_prev > 0.0 && gt < 0.0)) {
            double lo = t_prev, hi = t;
            double glo = g_prev;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                double gm = g(mid);
                if (gm == 0.0) return mid;
                if ((glo < 0.0) == (gm < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
                if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
            }
            return 0.5 * (lo + hi);
        }
        t_prev = t;
        g_prev = gt;
    }
    return std::nullopt;
}

}  // namespace mflow
