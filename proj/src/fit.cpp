#include "nhkr/otoc.hpp"

#include <string>

namespace nhkr {

LineFit fit_growth_rate(std::span<const std::pair<double, double>> series, double t_lo, double t_hi)
{
    // Centered sums keep the normal equations well conditioned for t ~ 1e3.
    double n = 0.0, mt = 0.0, mv = 0.0;
    for (const auto& [t, v] : series) {
        if (t < t_lo || t > t_hi)
            continue;
        n += 1.0;
        mt += t;
        mv += v;
    }
    if (n < 3.0)
        throw ParameterError("fit window [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) + "] holds "
                             + std::to_string(static_cast<int>(n)) + " points, need at least 3");
    mt /= n;
    mv /= n;
    double stt = 0.0, stv = 0.0;
    for (const auto& [t, v] : series) {
        if (t < t_lo || t > t_hi)
            continue;
        stt += (t - mt) * (t - mt);
        stv += (t - mt) * (v - mv);
    }
    if (stt == 0.0)
        throw ParameterError("fit window holds a single distinct time");
    const double slope = stv / stt;
    return {slope, mv - slope * mt};
}

} // namespace nhkr
