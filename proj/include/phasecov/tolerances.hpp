#pragma once

namespace phasecov {

/// Central numeric policy. Every check in the library takes its default
/// threshold from here so a whole analysis can be retuned in one place.
struct Tolerances {
    double hermiticity2 = 1e-12;   // 2x2 Hermiticity check (to_bloch input)
    double hermiticity4 = 1e-10;   // 4x4 Hermiticity check (eigensolver input)
    double weight_sum = 1e-12;     // convex weights must sum to 1 within this
    double cp = 1e-9;              // complete-positivity slack
    double unitality = 1e-12;      // |lambda_star| below this counts as unital
    double rate_sign = 1e-9;       // rates above -rate_sign count as nonnegative
    double commutativity = 1e-9;   // commutativity defect threshold
    double singularity = 1e-8;     // |lambda| below this is a non-invertible point
    double eta_bound = 1e-10;      // |eta| may exceed 1 by at most this
    double recovery_match = 1e-9;  // recovered eigenvalues must match target within this
    double identity_residual = 1e-10;  // per-point residual of the rate-sum identity
};

inline constexpr Tolerances kDefaultTol{};

}  // namespace phasecov
