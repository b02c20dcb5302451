#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "phasecov/dynamics.hpp"

namespace phasecov {

/// Seeded uniform sampler with a platform-stable mapping from the raw
/// mt19937_64 stream, so batch scans reproduce bit-identically everywhere.
class SampleStream {
public:
    explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform on the 2-simplex via sorted uniforms.
    std::array<double, 3> simplex3() {
        double u = uniform();
        double v = uniform();
        if (u > v) std::swap(u, v);
        return {u, v - u, 1.0 - v};
    }

private:
    std::mt19937_64 engine_;
};

/// Smooth nonnegative rate profile: a sum of up to max_terms decaying
/// exponentials with amplitude sum in [0, max_rate] and decay constants in
/// [0, max_decay].
std::vector<double> random_exponential_rate(SampleStream& stream, const TimeGrid& grid,
                                            int max_terms = 3, double max_rate = 5.0,
                                            double max_decay = 2.0);

}  // namespace phasecov
