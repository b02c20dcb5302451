#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phasecov/dynamics.hpp"
#include "phasecov/tolerances.hpp"

namespace phasecov {

/// Convex combination of three Markovian semigroups: energy emission at rate
/// 2*w1, absorption at 2*w2, dephasing at 2*w3, mixed with probabilities x.
struct SemigroupMixtureSpec {
    std::array<double, 3> weights{1.0, 0.0, 0.0};
    std::array<double, 3> rates{1.0, 1.0, 1.0};

    /// Throws std::invalid_argument on negative entries or weights not
    /// summing to 1.
    void validate(double weight_tol = kDefaultTol.weight_sum) const;
};

/// Closed forms:
///     lambda1 = x1 e^{-w1 t} + x2 e^{-w2 t} + x3 e^{-w3 t}
///     lambda3 = x1 e^{-2 w1 t} + x2 e^{-2 w2 t} + x3
///     lambda_star = x1 (1 - e^{-2 w1 t}) - x2 (1 - e^{-2 w2 t})
PhaseCovariantChannel semigroup_mixture_channel_at(const SemigroupMixtureSpec& spec, double t);
EigenvalueTrajectory semigroup_mixture_eigenvalues(const SemigroupMixtureSpec& spec,
                                                   const TimeGrid& grid);

/// Closed-form decoherence rates of the mixture's time-local generator.
RateTrajectory semigroup_mixture_rates(const SemigroupMixtureSpec& spec, const TimeGrid& grid);

struct Prop2Report {
    DivisibilityReport divisibility;
    /// Largest per-point residual of the sum-rewriting identity used to show
    /// gamma3 >= 0. A violation signals an implementation bug, never physics.
    double max_identity_residual = 0.0;
    bool identity_ok = true;
};

/// Rate nonnegativity plus the internal rewriting identity, per grid point.
Prop2Report verify_prop2(const SemigroupMixtureSpec& spec, const TimeGrid& grid,
                         double rate_tol = kDefaultTol.rate_sign,
                         double identity_tol = kDefaultTol.identity_residual);

/// Closed-form eta presets: exp is e^{-w t}, exp_cos is e^{-w t} cos(w t).
struct EtaForm {
    enum class Kind { Exp, ExpCos };
    Kind kind = Kind::Exp;
    double w = 1.0;
};
double eval(const EtaForm& form, double t);

/// One mixture component profile: samples on the shared grid, plus the
/// closed form when one is known (presets keep analytic accuracy that way).
struct EtaFunction {
    std::vector<double> samples;
    std::optional<EtaForm> form;
};
EtaFunction sample_eta(const EtaForm& form, const TimeGrid& grid);

/// Mixture of emission (eta1), absorption (eta2) and dephasing (eta3)
/// component maps; each component is completely positive iff |eta_k| <= 1.
struct EtaFamilyMixtureSpec {
    std::array<double, 3> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
    std::array<EtaFunction, 3> eta;
    TimeGrid grid;

    void validate(double weight_tol = kDefaultTol.weight_sum,
                  double eta_bound = kDefaultTol.eta_bound) const;
};

/// Closed forms:
///     lambda1 = sum_k x_k eta_k
///     lambda3 = x1 eta1^2 + x2 eta2^2 + x3
///     lambda_star = x1 (1 - eta1^2) - x2 (1 - eta2^2)
EigenvalueTrajectory eta_mixture_eigenvalues(const EtaFamilyMixtureSpec& spec);
/// Pointwise evaluation; requires closed-form tags on all three components.
PhaseCovariantChannel eta_mixture_channel_at(const std::array<double, 3>& weights,
                                             const std::array<EtaForm, 3>& forms, double t);

struct ZeroCrossing {
    enum class Which { Lambda1, Lambda3 };
    Which which = Which::Lambda1;
    double t_lo = 0.0;
    double t_hi = 0.0;
};

struct InvertibilityReport {
    bool invertible = true;
    std::vector<ZeroCrossing> zero_crossings;
};

/// Invertible iff lambda1 and lambda3 stay above tol on the whole grid;
/// otherwise brackets every crossing of the tol level.
InvertibilityReport invertibility_report(const EigenvalueTrajectory& traj,
                                         double tol = kDefaultTol.singularity);

/// Largest |lambda_star| over the grid; zero for unital evolutions.
double unitality_defect(const EigenvalueTrajectory& traj);

struct EqualEtaRates {
    RateTrajectory rates;
    /// Indices where eta crossed zero; rate values there are filler zeros.
    std::vector<int> singular_indices;
};

/// Rates of the equal-profile mixture (eta1 = eta2 = eta3 = eta):
///     gamma_pm = -2 x_{1,2} eta' eta / (x3 + (1 - x3) eta^2)
///     gamma3 = -(eta'/eta) * 2 x3 / (x3 + (1 - x3) eta^2)
/// eta_dot is optional; when absent it is computed by the standard stencil.
EqualEtaRates equal_eta_rates(const std::array<double, 3>& weights,
                              const std::vector<double>& eta,
                              const std::vector<double>* eta_dot, const TimeGrid& grid,
                              double weight_tol = kDefaultTol.weight_sum,
                              double singular_tol = kDefaultTol.singularity);

struct CommutativityFit {
    double a = 0.0;
    double max_residual = 0.0;
    bool commutative = false;
};

/// Least-squares fit of eta2^2 - 1 = a (eta1^2 - 1); the family built on
/// (eta1, eta2) commutes iff the residual vanishes. Throws std::domain_error
/// when eta1 is constant (a undetermined).
CommutativityFit commutativity_fit(const std::vector<double>& eta1,
                                   const std::vector<double>& eta2, const TimeGrid& grid,
                                   double tol = kDefaultTol.commutativity);

struct RecoveryVerdict {
    bool feasible = false;
    /// Present when feasible; eta3 is written as the constant 1 when its
    /// weight is zero (always the case for feasible verdicts).
    std::array<std::vector<double>, 3> eta_solutions;
    std::string failure_reason;
};

/// Can the target semigroup (gamma_plus, gamma_minus, gamma3) be produced as
/// an eta-family mixture with the given weights? Requires nonnegative target
/// rates with gamma_plus + gamma_minus > 0 and weights summing to 1.
RecoveryVerdict semigroup_recovery(const std::array<double, 3>& weights, double gamma_plus,
                                   double gamma_minus, double gamma3, const TimeGrid& grid,
                                   double weight_tol = kDefaultTol.weight_sum,
                                   double match_tol = kDefaultTol.recovery_match);

/// Pointwise convex combination of trajectories on a shared grid.
EigenvalueTrajectory mix_trajectories(std::span<const EigenvalueTrajectory> components,
                                      std::span<const double> weights,
                                      double weight_tol = kDefaultTol.weight_sum);

}  // namespace phasecov
