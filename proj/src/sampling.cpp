#include "phasecov/sampling.hpp"

#include <cmath>

namespace phasecov {

std::vector<double> random_exponential_rate(SampleStream& stream, const TimeGrid& grid,
                                            int max_terms, double max_rate, double max_decay) {
    const int terms = 1 + static_cast<int>(stream.uniform() * max_terms) % max_terms;
    std::vector<double> amplitude(terms);
    std::vector<double> decay(terms);
    double amp_sum = 0.0;
    for (int k = 0; k < terms; ++k) {
        amplitude[k] = stream.uniform();
        decay[k] = stream.uniform(0.0, max_decay);
        amp_sum += amplitude[k];
    }
    const double target = stream.uniform(0.0, max_rate);
    for (int k = 0; k < terms; ++k) amplitude[k] *= target / amp_sum;

    std::vector<double> values(grid.n_points, 0.0);
    for (int i = 0; i < grid.n_points; ++i) {
        const double t = grid.time(i);
        for (int k = 0; k < terms; ++k) values[i] += amplitude[k] * std::exp(-decay[k] * t);
    }
    return values;
}

}  // namespace phasecov
