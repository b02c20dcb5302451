#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "phasecov/mixtures.hpp"
#include "phasecov/numerics.hpp"
#include "phasecov/presets.hpp"
#include "phasecov/sampling.hpp"

using namespace phasecov;

namespace {

const TimeGrid kGrid = TimeGrid::uniform(10.0, 2001);

double sup_distance(const EigenvalueTrajectory& a, const EigenvalueTrajectory& b) {
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        d = std::max({d, std::abs(a.lambda1[i] - b.lambda1[i]),
                      std::abs(a.lambda3[i] - b.lambda3[i]),
                      std::abs(a.lambda_star[i] - b.lambda_star[i])});
    }
    return d;
}

double interior_rate_distance(const RateTrajectory& a, const RateTrajectory& b,
                              const std::vector<int>& excluded = {}) {
    double d = 0.0;
    std::size_t next_excluded = 0;
    for (int i = kDerivativeInteriorMargin; i < a.size() - kDerivativeInteriorMargin; ++i) {
        while (next_excluded < excluded.size() && excluded[next_excluded] < i) ++next_excluded;
        if (next_excluded < excluded.size() && excluded[next_excluded] == i) continue;
        d = std::max({d, std::abs(a.gamma_plus[i] - b.gamma_plus[i]),
                      std::abs(a.gamma_minus[i] - b.gamma_minus[i]),
                      std::abs(a.gamma3[i] - b.gamma3[i])});
    }
    return d;
}

}  // namespace

TEST_CASE("spec validation") {
    SemigroupMixtureSpec bad_sum{{0.5, 0.5, 0.5}, {1, 1, 1}};
    CHECK_THROWS_AS(bad_sum.validate(), std::invalid_argument);
    SemigroupMixtureSpec bad_rate{{0.5, 0.5, 0.0}, {1, -1, 1}};
    CHECK_THROWS_AS(bad_rate.validate(), std::invalid_argument);
}

TEST_CASE("semigroup mixture starts at the identity") {
    const SemigroupMixtureSpec spec{{0.2, 0.3, 0.5}, {2.0, 0.7, 1.3}};
    const EigenvalueTrajectory traj = semigroup_mixture_eigenvalues(spec, kGrid);
    CHECK(traj.lambda1[0] == doctest::Approx(1.0));
    CHECK(traj.lambda3[0] == doctest::Approx(1.0));
    CHECK(traj.lambda_star[0] == 0.0);
}

TEST_CASE("single-component mixture is the emission semigroup at doubled rate") {
    const double w = 0.8;
    const SemigroupMixtureSpec spec{{1.0, 0.0, 0.0}, {w, 3.0, 0.1}};
    const EigenvalueTrajectory mixture = semigroup_mixture_eigenvalues(spec, kGrid);
    const EigenvalueTrajectory semigroup = semigroup_trajectory(2.0 * w, 0.0, 0.0, kGrid);
    CHECK(sup_distance(mixture, semigroup) <= 1e-12);

    const RateTrajectory rates = semigroup_mixture_rates(spec, kGrid);
    for (int i = 0; i < kGrid.n_points; ++i) {
        CHECK(std::abs(rates.gamma_plus[i] - 2.0 * w) <= 1e-12);
        CHECK(std::abs(rates.gamma_minus[i]) <= 1e-12);
        CHECK(std::abs(rates.gamma3[i]) <= 1e-12);
    }
}

TEST_CASE("balanced emission and absorption mix into a unital family") {
    const SemigroupMixtureSpec spec{{0.5, 0.5, 0.0}, {1.4, 1.4, 0.0}};
    const EigenvalueTrajectory traj = semigroup_mixture_eigenvalues(spec, kGrid);
    CHECK(unitality_defect(traj) == 0.0);
}

TEST_CASE("the generalized amplitude damping mixture has constant rates") {
    const RateTrajectory rates = semigroup_mixture_rates(exmsg_spec(), kGrid);
    for (int i = 0; i < kGrid.n_points; ++i) {
        CHECK(std::abs(rates.gamma_plus[i] - 0.6) <= 1e-12);
        CHECK(std::abs(rates.gamma_minus[i] - 1.4) <= 1e-12);
        CHECK(std::abs(rates.gamma3[i]) <= 1e-12);
    }
}

TEST_CASE("the generalized amplitude damping mixture satisfies the semigroup law") {
    const SemigroupMixtureSpec spec = exmsg_spec();
    SampleStream stream(61);
    for (int i = 0; i < 100; ++i) {
        const double t = stream.uniform(0.0, 5.0);
        const double s = stream.uniform(0.0, 5.0);
        const PhaseCovariantChannel whole = semigroup_mixture_channel_at(spec, t + s);
        const PhaseCovariantChannel split = compose(semigroup_mixture_channel_at(spec, t),
                                                    semigroup_mixture_channel_at(spec, s));
        CHECK(std::abs(whole.lambda1 - split.lambda1) <= 1e-10);
        CHECK(std::abs(whole.lambda3 - split.lambda3) <= 1e-10);
        CHECK(std::abs(whole.lambda_star - split.lambda_star) <= 1e-10);
    }
}

TEST_CASE("closed-form rates agree with the finite-difference reconstruction") {
    SampleStream stream(62);
    for (int trial = 0; trial < 10; ++trial) {
        SemigroupMixtureSpec spec;
        spec.weights = stream.simplex3();
        spec.rates = {stream.uniform(0, 5), stream.uniform(0, 5), stream.uniform(0, 5)};
        const RateTrajectory closed = semigroup_mixture_rates(spec, kGrid);
        const RateReconstruction fd =
            rates_from_eigenvalues(semigroup_mixture_eigenvalues(spec, kGrid));
        // Fast-decaying draws underflow the invertibility threshold near the
        // end of the window; those neighborhoods are excluded by contract.
        CHECK(interior_rate_distance(closed, fd.rates, fd.excluded_indices) <= 1e-6);
    }
}

TEST_CASE("semigroup mixtures are always CP-divisible") {
    SampleStream stream(63);
    for (int trial = 0; trial < 100; ++trial) {
        SemigroupMixtureSpec spec;
        spec.weights = stream.simplex3();
        spec.rates = {stream.uniform(0, 5), stream.uniform(0, 5), stream.uniform(0, 5)};
        const Prop2Report rep = verify_prop2(spec, kGrid);
        CHECK(rep.divisibility.cp_divisible);
        CHECK(rep.identity_ok);
        CHECK(rep.divisibility.min_rate >= -1e-9);
    }
}

TEST_CASE("degenerate equal-rate specs stay trivially divisible") {
    // The rewriting identity collapses to 0 = 0 when all rates coincide.
    const SemigroupMixtureSpec equal{{0.2, 0.5, 0.3}, {1.1, 1.1, 1.1}};
    const Prop2Report rep = verify_prop2(equal, kGrid);
    CHECK(rep.divisibility.cp_divisible);
    CHECK(rep.max_identity_residual <= 1e-15);

    // With the dephasing weight removed they form the constant-rate mixture.
    const SemigroupMixtureSpec gad{{0.4, 0.6, 0.0}, {1.1, 1.1, 1.1}};
    const RateTrajectory rates = semigroup_mixture_rates(gad, kGrid);
    for (int i = 0; i < kGrid.n_points; ++i) {
        CHECK(std::abs(rates.gamma_plus[i] - 2.0 * 1.1 * 0.4) <= 1e-12);
        CHECK(std::abs(rates.gamma_minus[i] - 2.0 * 1.1 * 0.6) <= 1e-12);
        CHECK(std::abs(rates.gamma3[i]) <= 1e-12);
    }
}

TEST_CASE("exponential eta profiles reproduce the semigroup mixture") {
    const SemigroupMixtureSpec spec{{0.25, 0.35, 0.4}, {0.9, 1.7, 0.3}};
    EtaFamilyMixtureSpec eta;
    eta.weights = spec.weights;
    eta.grid = kGrid;
    for (int k = 0; k < 3; ++k) {
        eta.eta[k] = sample_eta(EtaForm{EtaForm::Kind::Exp, spec.rates[k]}, kGrid);
    }
    CHECK(sup_distance(eta_mixture_eigenvalues(eta),
                       semigroup_mixture_eigenvalues(spec, kGrid)) <= 1e-12);
}

TEST_CASE("example-2 closed forms") {
    const EigenvalueTrajectory traj = eta_mixture_eigenvalues(example2_spec(kGrid));
    for (int i = 0; i < kGrid.n_points; i += 50) {
        const double t = kGrid.time(i);
        const double c = std::cos(t);
        CHECK(std::abs(traj.lambda1[i] - std::exp(-t) * (2.0 + c) / 3.0) <= 1e-14);
        CHECK(std::abs(traj.lambda3[i] -
                       (1.0 + std::exp(-2.0 * t) * (1.0 + c * c)) / 3.0) <= 1e-14);
        CHECK(std::abs(traj.lambda_star[i] -
                       std::exp(-2.0 * t) * std::sin(t) * std::sin(t) / 3.0) <= 1e-14);
    }
}

TEST_CASE("example-2 values at t = pi/2") {
    const double t = std::acos(-1.0) / 2.0;
    const PhaseCovariantChannel ch =
        eta_mixture_channel_at({1.0 / 3, 1.0 / 3, 1.0 / 3}, example2_forms(), t);
    CHECK(std::abs(ch.lambda1 - 2.0 / 3.0 * std::exp(-t)) <= 1e-12);
    CHECK(std::abs(ch.lambda3 - (1.0 + std::exp(-2.0 * t)) / 3.0) <= 1e-12);
    CHECK(std::abs(ch.lambda_star - std::exp(-2.0 * t) / 3.0) <= 1e-12);
}

TEST_CASE("invertibility verdicts") {
    // The mixture stays invertible although one component does not.
    const EigenvalueTrajectory mixture = eta_mixture_eigenvalues(example2_spec(kGrid));
    CHECK(invertibility_report(mixture).invertible);

    // The cosine-bearing component alone crosses zero near pi/2.
    EtaFamilyMixtureSpec lone;
    lone.weights = {1.0, 0.0, 0.0};
    lone.grid = kGrid;
    lone.eta[0] = sample_eta(EtaForm{EtaForm::Kind::ExpCos, 1.0}, kGrid);
    lone.eta[1] = sample_eta(EtaForm{EtaForm::Kind::Exp, 1.0}, kGrid);
    lone.eta[2] = sample_eta(EtaForm{EtaForm::Kind::Exp, 1.0}, kGrid);
    const InvertibilityReport rep = invertibility_report(eta_mixture_eigenvalues(lone));
    CHECK(!rep.invertible);
    const double half_pi = std::acos(-1.0) / 2.0;
    bool bracketed = false;
    for (const auto& crossing : rep.zero_crossings) {
        if (crossing.which == ZeroCrossing::Which::Lambda1 &&
            crossing.t_lo > half_pi - kGrid.step() && crossing.t_hi < half_pi + kGrid.step()) {
            bracketed = true;
        }
    }
    CHECK(bracketed);

    // Slow enough that both eigenvalues stay above the threshold on [0, 10].
    CHECK(invertibility_report(semigroup_trajectory(0.5, 0.1, 0.3, kGrid)).invertible);
}

TEST_CASE("mixtures of strictly positive profiles stay invertible") {
    SampleStream stream(65);
    const TimeGrid grid = TimeGrid::uniform(5.0, 501);
    for (int trial = 0; trial < 20; ++trial) {
        EtaFamilyMixtureSpec spec;
        spec.weights = stream.simplex3();
        spec.grid = grid;
        for (int k = 0; k < 3; ++k) {
            // Profiles decaying to a positive floor never cross zero.
            const double floor = stream.uniform(0.05, 0.5);
            const double w = stream.uniform(0.1, 1.0);
            spec.eta[k].samples.resize(grid.n_points);
            for (int i = 0; i < grid.n_points; ++i) {
                spec.eta[k].samples[i] =
                    floor + (1.0 - floor) * std::exp(-w * grid.time(i));
            }
        }
        CHECK(invertibility_report(eta_mixture_eigenvalues(spec), 1e-12).invertible);
    }
}

TEST_CASE("unitality defect of the mirrored pair and its components") {
    const EigenvalueTrajectory mixture = preset_trajectory("example-1", kGrid);
    CHECK(unitality_defect(mixture) <= 1e-12);

    const EigenvalueTrajectory emission = semigroup_trajectory(1, 0, 0, kGrid);
    CHECK(unitality_defect(emission) > 0.1);

    // Symmetric semigroup mixture cancels exactly.
    const SemigroupMixtureSpec symmetric{{0.35, 0.35, 0.3}, {1.2, 1.2, 0.4}};
    CHECK(unitality_defect(semigroup_mixture_eigenvalues(symmetric, kGrid)) == 0.0);
}

TEST_CASE("equal-profile rates: pure dephasing and sign behavior") {
    std::vector<double> eta(kGrid.n_points);
    for (int i = 0; i < kGrid.n_points; ++i) eta[i] = std::exp(-kGrid.time(i));

    const EqualEtaRates dephasing = equal_eta_rates({0.0, 0.0, 1.0}, eta, nullptr, kGrid);
    CHECK(dephasing.singular_indices.empty());
    for (int i = kDerivativeInteriorMargin; i < kGrid.n_points - kDerivativeInteriorMargin; ++i) {
        CHECK(std::abs(dephasing.rates.gamma3[i] - 2.0) <= 1e-6);
        CHECK(dephasing.rates.gamma_plus[i] == 0.0);
        CHECK(dephasing.rates.gamma_minus[i] == 0.0);
    }

    // Monotone decreasing profile: every rate keeps the sign of -eta'.
    const EqualEtaRates generic = equal_eta_rates({0.3, 0.45, 0.25}, eta, nullptr, kGrid);
    for (int i = kDerivativeInteriorMargin; i < kGrid.n_points - kDerivativeInteriorMargin; ++i) {
        CHECK(generic.rates.gamma_plus[i] >= -1e-9);
        CHECK(generic.rates.gamma_minus[i] >= -1e-9);
        CHECK(generic.rates.gamma3[i] >= -1e-9);
    }
}

TEST_CASE("equal-profile rates agree with the eigenvalue reconstruction") {
    const std::array<double, 3> weights{0.3, 0.45, 0.25};
    std::vector<double> eta(kGrid.n_points);
    for (int i = 0; i < kGrid.n_points; ++i) eta[i] = std::exp(-0.7 * kGrid.time(i));

    const EqualEtaRates direct = equal_eta_rates(weights, eta, nullptr, kGrid);

    EtaFamilyMixtureSpec spec;
    spec.weights = weights;
    spec.grid = kGrid;
    for (int k = 0; k < 3; ++k) spec.eta[k].samples = eta;
    const RateReconstruction fd = rates_from_eigenvalues(eta_mixture_eigenvalues(spec));

    CHECK(interior_rate_distance(direct.rates, fd.rates) <= 1e-6);
}

TEST_CASE("equal-profile rates report zero crossings of eta") {
    std::vector<double> eta(kGrid.n_points);
    for (int i = 0; i < kGrid.n_points; ++i) eta[i] = std::cos(kGrid.time(i));
    const EqualEtaRates res = equal_eta_rates({0.2, 0.2, 0.6}, eta, nullptr, kGrid);
    // cos crosses zero three times on [0, 10]; the grid may or may not land
    // within the threshold, but the formula must stay finite everywhere else.
    for (int i = 0; i < kGrid.n_points; ++i) {
        CHECK(std::isfinite(res.rates.gamma3[i]));
    }
}

TEST_CASE("commutativity fit on constructed pairs") {
    std::vector<double> eta1(kGrid.n_points);
    std::vector<double> affine(kGrid.n_points);
    for (int i = 0; i < kGrid.n_points; ++i) {
        const double t = kGrid.time(i);
        eta1[i] = std::exp(-t);
        affine[i] = std::sqrt(0.5 * std::exp(-2.0 * t) + 0.5);
    }

    const CommutativityFit same = commutativity_fit(eta1, eta1, kGrid);
    CHECK(same.a == doctest::Approx(1.0));
    CHECK(same.max_residual <= 1e-15);
    CHECK(same.commutative);

    const CommutativityFit constructed = commutativity_fit(eta1, affine, kGrid);
    CHECK(constructed.a == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(constructed.max_residual <= 1e-12);
    CHECK(constructed.commutative);
}

TEST_CASE("commutativity fit rejects a constant eta1 and flags example-2") {
    std::vector<double> ones(kGrid.n_points, 1.0);
    std::vector<double> expo(kGrid.n_points);
    for (int i = 0; i < kGrid.n_points; ++i) expo[i] = std::exp(-kGrid.time(i));
    CHECK_THROWS_AS(commutativity_fit(ones, expo, kGrid), std::domain_error);

    const EtaFamilyMixtureSpec ex2 = example2_spec(kGrid);
    const CommutativityFit fit =
        commutativity_fit(ex2.eta[0].samples, ex2.eta[1].samples, kGrid);
    CHECK(!fit.commutative);
    CHECK(fit.max_residual > 1e-3);

    // Consistent with the eigenvalue-level criterion on the mixture.
    CHECK(!is_commutative_family(eta_mixture_eigenvalues(ex2)).commutative);
}

TEST_CASE("fit-commutative pairs give commutative mixtures") {
    std::vector<double> eta1(kGrid.n_points);
    std::vector<double> eta2(kGrid.n_points);
    for (int i = 0; i < kGrid.n_points; ++i) {
        const double t = kGrid.time(i);
        eta1[i] = std::exp(-t);
        eta2[i] = std::sqrt(0.5 * std::exp(-2.0 * t) + 0.5);
    }
    EtaFamilyMixtureSpec spec;
    spec.weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    spec.grid = kGrid;
    spec.eta[0].samples = eta1;
    spec.eta[1].samples = eta2;
    spec.eta[2].samples = eta1;
    const CommutativityReport rep = is_commutative_family(eta_mixture_eigenvalues(spec), 1e-12);
    CHECK(rep.commutative);
}

TEST_CASE("recovery is impossible with a dephasing component") {
    SampleStream stream(64);
    for (double x3 : {0.1, 0.2, 0.5}) {
        const double x1 = stream.uniform(0.0, 1.0 - x3);
        const RecoveryVerdict verdict = semigroup_recovery(
            {x1, 1.0 - x3 - x1, x3}, stream.uniform(0.1, 3.0), stream.uniform(0.1, 3.0),
            stream.uniform(0.0, 2.0), kGrid);
        CHECK(!verdict.feasible);
        CHECK(verdict.failure_reason == "x1+x2 >= 1 forces x3 = 0");
    }
}

TEST_CASE("recovery succeeds exactly for matched two-component weights") {
    const RecoveryVerdict verdict =
        semigroup_recovery({0.3, 0.7, 0.0}, 0.6, 1.4, 0.0, kGrid);
    REQUIRE(verdict.feasible);
    // Both profiles collapse to e^{-t}: the generalized amplitude damping.
    for (int i = 0; i < kGrid.n_points; i += 100) {
        const double expected = std::exp(-kGrid.time(i));
        CHECK(std::abs(verdict.eta_solutions[0][i] - expected) <= 1e-12);
        CHECK(std::abs(verdict.eta_solutions[1][i] - expected) <= 1e-12);
        CHECK(verdict.eta_solutions[2][i] == 1.0);
    }

    // Feasible implies the rebuilt mixture reproduces the target semigroup.
    EtaFamilyMixtureSpec rebuilt;
    rebuilt.weights = {0.3, 0.7, 0.0};
    rebuilt.grid = kGrid;
    for (int k = 0; k < 3; ++k) rebuilt.eta[k].samples = verdict.eta_solutions[k];
    CHECK(sup_distance(eta_mixture_eigenvalues(rebuilt),
                       semigroup_trajectory(0.6, 1.4, 0.0, kGrid)) <= 1e-9);
}

TEST_CASE("recovery fails off the matched-rate line") {
    const RecoveryVerdict verdict = semigroup_recovery({0.3, 0.7, 0.0}, 1.0, 1.0, 0.0, kGrid);
    CHECK(!verdict.feasible);
    CHECK(verdict.failure_reason.find("not real") != std::string::npos);

    // Absorption-only weights cannot express any emission.
    const RecoveryVerdict lopsided = semigroup_recovery({0.0, 1.0, 0.0}, 0.5, 0.5, 0.0, kGrid);
    CHECK(!lopsided.feasible);

    // Matched weights but a dephasing target rate breaks lambda1.
    const RecoveryVerdict dephased = semigroup_recovery({0.3, 0.7, 0.0}, 0.6, 1.4, 0.5, kGrid);
    CHECK(!dephased.feasible);
    CHECK(dephased.failure_reason.find("deviate") != std::string::npos);
}

TEST_CASE("recovery validates its inputs") {
    CHECK_THROWS_AS(semigroup_recovery({0.5, 0.4, 0.0}, 1, 1, 0, kGrid), std::invalid_argument);
    CHECK_THROWS_AS(semigroup_recovery({0.5, 0.5, 0.0}, 0, 0, 1, kGrid), std::invalid_argument);
    CHECK_THROWS_AS(semigroup_recovery({0.5, 0.5, 0.0}, -1, 2, 0, kGrid), std::invalid_argument);
}

TEST_CASE("trajectory mixing is pointwise and validated") {
    const EigenvalueTrajectory a = semigroup_trajectory(1, 0, 0, kGrid);
    const EigenvalueTrajectory b = semigroup_trajectory(0, 1, 0, kGrid);
    const std::vector<EigenvalueTrajectory> comps{a, b};
    const std::vector<double> weights{0.5, 0.5};
    const EigenvalueTrajectory mixed = mix_trajectories(comps, weights);
    for (int i = 0; i < kGrid.n_points; ++i) {
        CHECK(std::abs(mixed.lambda_star[i]) <= 1e-15);
        CHECK(mixed.lambda1[i] == doctest::Approx(a.lambda1[i]));
    }

    const std::vector<double> bad{0.4, 0.4};
    CHECK_THROWS_AS(mix_trajectories(comps, bad), std::invalid_argument);

    const std::vector<EigenvalueTrajectory> mismatched{
        a, semigroup_trajectory(0, 1, 0, TimeGrid::uniform(5.0, 501))};
    CHECK_THROWS_AS(mix_trajectories(mismatched, weights), std::invalid_argument);
}

TEST_CASE("eta spec validation") {
    EtaFamilyMixtureSpec spec;
    spec.grid = TimeGrid::uniform(1.0, 5);
    spec.weights = {0.5, 0.5, 0.0};
    for (int k = 0; k < 3; ++k) spec.eta[k].samples = {1.0, 0.8, 0.6, 0.4, 0.2};
    CHECK_NOTHROW(spec.validate());

    EtaFamilyMixtureSpec bad_start = spec;
    bad_start.eta[1].samples[0] = 0.9;
    CHECK_THROWS_AS(bad_start.validate(), std::invalid_argument);

    EtaFamilyMixtureSpec out_of_range = spec;
    out_of_range.eta[2].samples[3] = 1.5;
    CHECK_THROWS_AS(out_of_range.validate(), std::invalid_argument);

    EtaFamilyMixtureSpec poisoned = spec;
    poisoned.eta[0].samples[2] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(poisoned.validate(), std::invalid_argument);
}
