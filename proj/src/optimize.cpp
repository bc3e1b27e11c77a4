#include "tempo/optimize.hpp"

#include <cmath>
#include <numbers>

namespace tempo {

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? ScalarOptimum{c, fc} : ScalarOptimum{d, fd};
}

VectorOptimum periodic_coordinate_ascent(const std::function<double(std::span<const double>)>& f,
                                         std::vector<double> start, double tol, int max_sweeps) {
    constexpr int kCoarse = 16;
    const double two_pi = 2.0 * std::numbers::pi;
    const double step = two_pi / kCoarse;

    std::vector<double> x = std::move(start);
    double best = f(x);
    int sweeps = 0;
    while (sweeps < max_sweeps) {
        ++sweeps;
        const double sweep_start = best;
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::vector<double> trial = x;
            auto along = [&](double v) {
                trial[i] = v;
                return f(trial);
            };
            double coarse_x = x[i];
            double coarse_v = best;
            for (int k = 1; k < kCoarse; ++k) {
                const double v = x[i] + k * step;
                const double fv = along(v);
                if (fv > coarse_v) {
                    coarse_v = fv;
                    coarse_x = v;
                }
            }
            const ScalarOptimum refined = golden_section_maximize(along, coarse_x - step, coarse_x + step, 1e-11);
            if (refined.value > best) {
                best = refined.value;
                x[i] = std::remainder(refined.x, two_pi);
            } else if (coarse_v > best) {
                best = coarse_v;
                x[i] = std::remainder(coarse_x, two_pi);
            }
        }
        if (best - sweep_start < tol) break;
    }
    return {std::move(x), best, sweeps};
}

}  // namespace tempo
