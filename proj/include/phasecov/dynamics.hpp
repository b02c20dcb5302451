#pragma once

#include <optional>
#include <vector>

#include "phasecov/channel.hpp"
#include "phasecov/qubit_algebra.hpp"
#include "phasecov/tolerances.hpp"

namespace phasecov {

/// Uniform time grid starting at 0.
struct TimeGrid {
    double t_max = 10.0;
    int n_points = 2001;

    double step() const { return t_max / (n_points - 1); }
    double time(int i) const { return i * step(); }
    std::vector<double> points() const;

    /// Validates t_max > 0 and n_points >= 3.
    static TimeGrid uniform(double t_max, int n_points);

    bool operator==(const TimeGrid&) const = default;
};

/// Sampled map eigenvalues t -> (lambda1, lambda3, lambda_star).
struct EigenvalueTrajectory {
    TimeGrid grid;
    std::vector<double> lambda1;
    std::vector<double> lambda3;
    std::vector<double> lambda_star;

    int size() const { return grid.n_points; }
};

/// Sampled decoherence rates t -> (gamma_plus, gamma_minus, gamma3).
struct RateTrajectory {
    TimeGrid grid;
    std::vector<double> gamma_plus;
    std::vector<double> gamma_minus;
    std::vector<double> gamma3;

    int size() const { return grid.n_points; }
};

PhaseCovariantChannel channel_at(const EigenvalueTrajectory& traj, int i);

/// Checks the initial condition (1, 1, 0) and complete positivity at every
/// grid point; reports the first failing time if any.
struct MapValidity {
    bool valid = true;
    std::optional<double> first_invalid_time;
};
MapValidity is_valid_dynamical_map(const EigenvalueTrajectory& traj, double cp_tol = kDefaultTol.cp);

/// Time-local generator action gp*Lp[X] + gm*Lm[X] + g3*L3[X] with
///     Lp[X] = s+ X s- - {s- s+, X}/2,   Lm[X] = s- X s+ - {s+ s-, X}/2,
///     L3[X] = (s3 X s3 - X)/4.
/// The output is traceless.
Mat2 generator_action(double gamma_plus, double gamma_minus, double gamma3, const Mat2& x);

/// Integrates the rates into map eigenvalues:
///     lambda1 = exp(-(Gp + Gm + G3)/2),  lambda3 = exp(-(Gp + Gm)),
///     lambda_star = exp(-(Gp+Gm)) * integral of (gp - gm) exp(Gp+Gm),
/// with G the cumulative-Simpson integrals of the rates. Requires an odd
/// number of grid points.
EigenvalueTrajectory eigenvalues_from_rates(const RateTrajectory& rates);

struct RateReconstruction {
    RateTrajectory rates;
    /// Grid indices where |lambda1| or |lambda3| fell below the singularity
    /// threshold.
    std::vector<int> singular_indices;
    /// singular_indices widened by two grid steps on each side; rate values
    /// at these indices are filler zeros and must not be trusted.
    std::vector<int> excluded_indices;
};

/// Inverse relation: gamma_pm = (lambda3/2) d/dt[(1 +- lambda_star)/lambda3],
/// gamma3 = d/dt ln(|lambda3| / lambda1^2), by finite-difference stencils.
RateReconstruction rates_from_eigenvalues(const EigenvalueTrajectory& traj,
                                          double singular_tol = kDefaultTol.singularity);

/// Semigroup with constant nonnegative rates; closed forms
///     lambda1 = exp(-t (gp+gm+g3)/2),  lambda3 = exp(-(gp+gm) t),
///     lambda_star = (gp-gm)/(gp+gm) (1 - exp(-(gp+gm) t)),
/// with lambda_star == 0 when gp + gm == 0.
PhaseCovariantChannel semigroup_channel_at(double gamma_plus, double gamma_minus, double gamma3,
                                           double t);
EigenvalueTrajectory semigroup_trajectory(double gamma_plus, double gamma_minus, double gamma3,
                                          const TimeGrid& grid);

/// Propagator V with traj(t) = compose(V, traj(s)), by grid index. Throws
/// std::domain_error when the map is non-invertible at s.
PhaseCovariantChannel propagator_at(const EigenvalueTrajectory& traj, int i_t, int i_s,
                                    double singular_tol = kDefaultTol.singularity);
/// Same, with times that must lie on the grid (snapped within 1e-9 * t_max).
PhaseCovariantChannel propagator(const EigenvalueTrajectory& traj, double t, double s,
                                 double singular_tol = kDefaultTol.singularity);

enum class DivisibilityMethod { RateSign, ChoiPropagator };

struct DivisibilityReport {
    bool cp_divisible = true;
    std::optional<double> first_violation_time;
    /// RateSign: smallest rate seen. ChoiPropagator: smallest propagator Choi
    /// eigenvalue seen.
    double min_rate = 0.0;
    DivisibilityMethod method = DivisibilityMethod::RateSign;
    /// Grid times skipped because the map was not invertible there
    /// (ChoiPropagator only).
    std::vector<double> excluded_times;
};

/// CP-divisible iff every rate stays above -tol on the grid.
DivisibilityReport is_cp_divisible(const RateTrajectory& rates, double tol = kDefaultTol.rate_sign);

/// Independent route: smallest Choi eigenvalue of every consecutive-interval
/// propagator must stay above -tol.
DivisibilityReport cp_divisibility_via_choi(const EigenvalueTrajectory& traj,
                                            double tol = kDefaultTol.cp,
                                            double singular_tol = kDefaultTol.singularity);

struct CommutativityReport {
    bool commutative = true;
    double max_defect = 0.0;
};

/// Family commutes iff lambda_star(t)(1 - lambda3(s)) is symmetric in (t, s).
/// Pairwise scan over at most 200 subsampled grid indices.
CommutativityReport is_commutative_family(const EigenvalueTrajectory& traj,
                                          double tol = kDefaultTol.commutativity);

}  // namespace phasecov
