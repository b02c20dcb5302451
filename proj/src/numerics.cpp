#include "phasecov/numerics.hpp"

#include <cstddef>
#include <stdexcept>

namespace phasecov {

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("cumulative_simpson: sample count must be odd and >= 3");
    }
    if (h <= 0.0) throw std::invalid_argument("cumulative_simpson: step must be positive");

    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        if (i % 2 == 0) {
            out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        } else {
            // Half-panel integral of the parabola through f[i-1], f[i], f[i+1].
            out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        }
    }
    return out;
}

std::vector<double> derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 5) throw std::invalid_argument("derivative: need at least 5 samples");
    if (h <= 0.0) throw std::invalid_argument("derivative: step must be positive");

    std::vector<double> d(n, 0.0);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[1] = (f[2] - f[0]) / (2.0 * h);
    d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    }
    return d;
}

}  // namespace phasecov
