#include "phasecov/mixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "phasecov/numerics.hpp"

namespace phasecov {

void SemigroupMixtureSpec::validate(double weight_tol) const {
    double sum = 0.0;
    for (double x : weights) {
        if (!(x >= 0.0)) throw std::invalid_argument("SemigroupMixtureSpec: weights must be >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > weight_tol) {
        throw std::invalid_argument("SemigroupMixtureSpec: weights must sum to 1");
    }
    for (double w : rates) {
        if (!(w >= 0.0)) throw std::invalid_argument("SemigroupMixtureSpec: rates must be >= 0");
    }
}

PhaseCovariantChannel semigroup_mixture_channel_at(const SemigroupMixtureSpec& spec, double t) {
    const auto& x = spec.weights;
    const auto& w = spec.rates;
    const double e1 = std::exp(-2.0 * w[0] * t);
    const double e2 = std::exp(-2.0 * w[1] * t);
    PhaseCovariantChannel ch;
    ch.lambda1 = x[0] * std::exp(-w[0] * t) + x[1] * std::exp(-w[1] * t) +
                 x[2] * std::exp(-w[2] * t);
    ch.lambda3 = x[0] * e1 + x[1] * e2 + x[2];
    ch.lambda_star = x[0] * (1.0 - e1) - x[1] * (1.0 - e2);
    return ch;
}

EigenvalueTrajectory semigroup_mixture_eigenvalues(const SemigroupMixtureSpec& spec,
                                                   const TimeGrid& grid) {
    spec.validate();
    EigenvalueTrajectory traj;
    traj.grid = grid;
    traj.lambda1.resize(grid.n_points);
    traj.lambda3.resize(grid.n_points);
    traj.lambda_star.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const PhaseCovariantChannel ch = semigroup_mixture_channel_at(spec, grid.time(i));
        traj.lambda1[i] = ch.lambda1;
        traj.lambda3[i] = ch.lambda3;
        traj.lambda_star[i] = ch.lambda_star;
    }
    return traj;
}

namespace {

struct MixtureRatesAt {
    double gamma_plus;
    double gamma_minus;
    double gamma3;
    double identity_lhs;
    double identity_rhs;
};

MixtureRatesAt mixture_rates_at(const SemigroupMixtureSpec& spec, double t) {
    const auto& x = spec.weights;
    const auto& w = spec.rates;
    const std::array<double, 3> e{std::exp(-w[0] * t), std::exp(-w[1] * t),
                                  std::exp(-w[2] * t)};
    const std::array<double, 3> e2{e[0] * e[0], e[1] * e[1], e[2] * e[2]};

    const double lambda3 = x[0] * e2[0] + x[1] * e2[1] + x[2];
    const double lambda1 = x[0] * e[0] + x[1] * e[1] + x[2] * e[2];

    MixtureRatesAt out{};
    out.gamma_plus = 2.0 * x[0] / lambda3 *
                     (w[0] * e2[0] * (1.0 - x[1] * (1.0 - e2[1])) +
                      x[1] * w[1] * e2[1] * (1.0 - e2[0]));
    out.gamma_minus = 2.0 * x[1] / lambda3 *
                      (x[0] * w[0] * e2[0] * (1.0 - e2[1]) +
                       w[1] * e2[1] * (1.0 - x[0] * (1.0 - e2[0])));

    // gamma3 numerator splits into the antisymmetric double sum and a
    // dephasing remainder; its denominator is lambda1 * lambda3.
    double numerator = 0.0;
    double lhs = 0.0;
    for (int mu = 0; mu < 3; ++mu) {
        double inner = 0.0;
        for (int nu = 0; nu < 3; ++nu) {
            inner += x[nu] * e2[nu] * (w[mu] - w[nu]);
            lhs += x[mu] * x[nu] * e[mu] * e2[nu] * (w[mu] - w[nu]);
        }
        inner += x[2] * (w[mu] * (1.0 - e2[2]) + w[2] * e2[2]);
        numerator += x[mu] * e[mu] * inner;
    }
    out.gamma3 = 2.0 * numerator / (lambda1 * lambda3);

    // Pairwise rewriting of the double sum as manifestly positive terms.
    double rhs = 0.0;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < a; ++b) {
            rhs += x[a] * x[b] * e[a] * e[b] * (w[b] - w[a]) * (e[a] - e[b]);
        }
    }
    out.identity_lhs = lhs;
    out.identity_rhs = rhs;
    return out;
}

}  // namespace

RateTrajectory semigroup_mixture_rates(const SemigroupMixtureSpec& spec, const TimeGrid& grid) {
    spec.validate();
    RateTrajectory rates;
    rates.grid = grid;
    rates.gamma_plus.resize(grid.n_points);
    rates.gamma_minus.resize(grid.n_points);
    rates.gamma3.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const MixtureRatesAt at = mixture_rates_at(spec, grid.time(i));
        rates.gamma_plus[i] = at.gamma_plus;
        rates.gamma_minus[i] = at.gamma_minus;
        rates.gamma3[i] = at.gamma3;
    }
    return rates;
}

Prop2Report verify_prop2(const SemigroupMixtureSpec& spec, const TimeGrid& grid, double rate_tol,
                         double identity_tol) {
    spec.validate();
    Prop2Report rep;
    RateTrajectory rates;
    rates.grid = grid;
    rates.gamma_plus.resize(grid.n_points);
    rates.gamma_minus.resize(grid.n_points);
    rates.gamma3.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const MixtureRatesAt at = mixture_rates_at(spec, grid.time(i));
        rates.gamma_plus[i] = at.gamma_plus;
        rates.gamma_minus[i] = at.gamma_minus;
        rates.gamma3[i] = at.gamma3;
        rep.max_identity_residual =
            std::max(rep.max_identity_residual, std::abs(at.identity_lhs - at.identity_rhs));
    }
    rep.divisibility = is_cp_divisible(rates, rate_tol);
    rep.identity_ok = rep.max_identity_residual <= identity_tol;
    return rep;
}

double eval(const EtaForm& form, double t) {
    switch (form.kind) {
        case EtaForm::Kind::Exp:
            return std::exp(-form.w * t);
        case EtaForm::Kind::ExpCos:
            return std::exp(-form.w * t) * std::cos(form.w * t);
    }
    throw std::logic_error("eval(EtaForm): unknown kind");
}

EtaFunction sample_eta(const EtaForm& form, const TimeGrid& grid) {
    EtaFunction fn;
    fn.form = form;
    fn.samples.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) fn.samples[i] = eval(form, grid.time(i));
    return fn;
}

void EtaFamilyMixtureSpec::validate(double weight_tol, double eta_bound) const {
    double sum = 0.0;
    for (double x : weights) {
        if (!(x >= 0.0)) throw std::invalid_argument("EtaFamilyMixtureSpec: weights must be >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > weight_tol) {
        throw std::invalid_argument("EtaFamilyMixtureSpec: weights must sum to 1");
    }
    for (int k = 0; k < 3; ++k) {
        if (static_cast<int>(eta[k].samples.size()) != grid.n_points) {
            throw std::invalid_argument("EtaFamilyMixtureSpec: eta sample count must match grid");
        }
        if (std::abs(eta[k].samples[0] - 1.0) > 1e-12) {
            throw std::invalid_argument("EtaFamilyMixtureSpec: eta must start at 1");
        }
        for (double v : eta[k].samples) {
            if (!(std::abs(v) <= 1.0 + eta_bound)) {
                throw std::invalid_argument(
                    "EtaFamilyMixtureSpec: |eta| must stay <= 1 (component CP condition)");
            }
        }
    }
}

EigenvalueTrajectory eta_mixture_eigenvalues(const EtaFamilyMixtureSpec& spec) {
    spec.validate();
    const auto& x = spec.weights;
    EigenvalueTrajectory traj;
    traj.grid = spec.grid;
    const int n = spec.grid.n_points;
    traj.lambda1.resize(n);
    traj.lambda3.resize(n);
    traj.lambda_star.resize(n);
    for (int i = 0; i < n; ++i) {
        const double n1 = spec.eta[0].samples[i];
        const double n2 = spec.eta[1].samples[i];
        const double n3 = spec.eta[2].samples[i];
        traj.lambda1[i] = x[0] * n1 + x[1] * n2 + x[2] * n3;
        traj.lambda3[i] = x[0] * n1 * n1 + x[1] * n2 * n2 + x[2];
        traj.lambda_star[i] = x[0] * (1.0 - n1 * n1) - x[1] * (1.0 - n2 * n2);
    }
    return traj;
}

PhaseCovariantChannel eta_mixture_channel_at(const std::array<double, 3>& weights,
                                             const std::array<EtaForm, 3>& forms, double t) {
    const double n1 = eval(forms[0], t);
    const double n2 = eval(forms[1], t);
    const double n3 = eval(forms[2], t);
    PhaseCovariantChannel ch;
    ch.lambda1 = weights[0] * n1 + weights[1] * n2 + weights[2] * n3;
    ch.lambda3 = weights[0] * n1 * n1 + weights[1] * n2 * n2 + weights[2];
    ch.lambda_star = weights[0] * (1.0 - n1 * n1) - weights[1] * (1.0 - n2 * n2);
    return ch;
}

namespace {

void collect_crossings(const std::vector<double>& values, const TimeGrid& grid, double tol,
                       ZeroCrossing::Which which, std::vector<ZeroCrossing>& out) {
    for (int i = 0; i + 1 < static_cast<int>(values.size()); ++i) {
        const bool above_i = values[i] > tol;
        const bool above_next = values[i + 1] > tol;
        if (above_i != above_next) {
            out.push_back(ZeroCrossing{which, grid.time(i), grid.time(i + 1)});
        }
    }
}

}  // namespace

InvertibilityReport invertibility_report(const EigenvalueTrajectory& traj, double tol) {
    InvertibilityReport rep;
    for (int i = 0; i < traj.size(); ++i) {
        if (!(traj.lambda1[i] > tol) || !(traj.lambda3[i] > tol)) {
            rep.invertible = false;
            break;
        }
    }
    collect_crossings(traj.lambda1, traj.grid, tol, ZeroCrossing::Which::Lambda1,
                      rep.zero_crossings);
    collect_crossings(traj.lambda3, traj.grid, tol, ZeroCrossing::Which::Lambda3,
                      rep.zero_crossings);
    return rep;
}

double unitality_defect(const EigenvalueTrajectory& traj) {
    double d = 0.0;
    for (double v : traj.lambda_star) d = std::max(d, std::abs(v));
    return d;
}

EqualEtaRates equal_eta_rates(const std::array<double, 3>& weights, const std::vector<double>& eta,
                              const std::vector<double>* eta_dot, const TimeGrid& grid,
                              double weight_tol, double singular_tol) {
    double sum = 0.0;
    for (double x : weights) {
        if (!(x >= 0.0)) throw std::invalid_argument("equal_eta_rates: weights must be >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > weight_tol) {
        throw std::invalid_argument("equal_eta_rates: weights must sum to 1");
    }
    if (static_cast<int>(eta.size()) != grid.n_points) {
        throw std::invalid_argument("equal_eta_rates: eta sample count must match grid");
    }
    if (eta_dot && eta_dot->size() != eta.size()) {
        throw std::invalid_argument("equal_eta_rates: eta_dot sample count must match eta");
    }

    const std::vector<double> dot = eta_dot ? *eta_dot : derivative(eta, grid.step());
    const double x3 = weights[2];

    EqualEtaRates out;
    out.rates.grid = grid;
    const int n = grid.n_points;
    out.rates.gamma_plus.assign(n, 0.0);
    out.rates.gamma_minus.assign(n, 0.0);
    out.rates.gamma3.assign(n, 0.0);

    for (int i = 0; i < n; ++i) {
        const double v = eta[i];
        if (std::abs(v) < singular_tol) {
            out.singular_indices.push_back(i);
            continue;
        }
        const double denom = x3 + (1.0 - x3) * v * v;
        out.rates.gamma_plus[i] = -2.0 * weights[0] * dot[i] * v / denom;
        out.rates.gamma_minus[i] = -2.0 * weights[1] * dot[i] * v / denom;
        out.rates.gamma3[i] = (x3 == 0.0) ? 0.0 : -(dot[i] / v) * 2.0 * x3 / denom;
    }
    return out;
}

CommutativityFit commutativity_fit(const std::vector<double>& eta1,
                                   const std::vector<double>& eta2, const TimeGrid& grid,
                                   double tol) {
    if (static_cast<int>(eta1.size()) != grid.n_points ||
        static_cast<int>(eta2.size()) != grid.n_points) {
        throw std::invalid_argument("commutativity_fit: sample counts must match grid");
    }

    // Fit eta2^2 - 1 = a (eta1^2 - 1); both sides vanish at t = 0.
    double uu = 0.0;
    double uv = 0.0;
    double max_u = 0.0;
    std::vector<double> u(eta1.size());
    std::vector<double> v(eta1.size());
    for (std::size_t i = 0; i < eta1.size(); ++i) {
        u[i] = eta1[i] * eta1[i] - 1.0;
        v[i] = eta2[i] * eta2[i] - 1.0;
        uu += u[i] * u[i];
        uv += u[i] * v[i];
        max_u = std::max(max_u, std::abs(u[i]));
    }
    if (max_u < 1e-12) {
        throw std::domain_error("commutativity_fit: a undetermined (eta1 is constant)");
    }

    CommutativityFit fit;
    fit.a = uv / uu;
    for (std::size_t i = 0; i < u.size(); ++i) {
        fit.max_residual = std::max(fit.max_residual, std::abs(v[i] - fit.a * u[i]));
    }
    fit.commutative = fit.max_residual <= tol;
    return fit;
}

RecoveryVerdict semigroup_recovery(const std::array<double, 3>& weights, double gamma_plus,
                                   double gamma_minus, double gamma3, const TimeGrid& grid,
                                   double weight_tol, double match_tol) {
    double sum = 0.0;
    for (double x : weights) {
        if (!(x >= 0.0)) throw std::invalid_argument("semigroup_recovery: weights must be >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > weight_tol) {
        throw std::invalid_argument("semigroup_recovery: weights must sum to 1");
    }
    if (gamma_plus < 0.0 || gamma_minus < 0.0 || gamma3 < 0.0) {
        throw std::invalid_argument("semigroup_recovery: target rates must be nonnegative");
    }
    const double g = gamma_plus + gamma_minus;
    if (!(g > 0.0)) {
        throw std::invalid_argument("semigroup_recovery: need gamma_plus + gamma_minus > 0");
    }

    RecoveryVerdict verdict;

    // The radicand 1 - coef_k (1 - e^{-g t}) is rewritten as
    // limit_k + (1 - limit_k) e^{-g t}, where limit_k is the t -> infinity
    // value 1 - coef_k evaluated without cancellation:
    //     limit_1 = (x1 gm - (x2 + x3) gp) / (x1 g),
    //     limit_2 = (x2 gp - (x1 + x3) gm) / (x2 g).
    // With x3 = 0 and x1 gm == x2 gp this is exactly zero, so the radicand is
    // exactly e^{-g t} and the square root carries no cancellation noise.
    const double radicand_tol = 1e-12;

    struct Radicand {
        double limit;
        double coef;  // of e^{-g t}
        double at(double decay) const { return limit + coef * decay; }
    };
    const auto radicand_for = [&](double weight, double own_rate, double other_weight_sum,
                                  double other_rate) {
        if (weight > 0.0) {
            const double limit =
                (weight * other_rate - other_weight_sum * own_rate) / (weight * g);
            return Radicand{limit, 1.0 - limit};
        }
        // Weightless component: unconstrained (identity profile) unless the
        // target still demands its rate.
        if (own_rate > 0.0) return Radicand{-std::numeric_limits<double>::infinity(), 1.0};
        return Radicand{1.0, 0.0};
    };
    const std::array<Radicand, 2> radicand{
        radicand_for(weights[0], gamma_plus, weights[1] + weights[2], gamma_minus),
        radicand_for(weights[1], gamma_minus, weights[0] + weights[2], gamma_plus)};

    // A positive dephasing weight makes the square-root coefficients demand
    // x1 >= gamma_plus/g and x2 >= gamma_minus/g, i.e. x1 + x2 >= 1. Confirm
    // the same conclusion through the t -> infinity radicand before reporting.
    if (weights[2] > weight_tol) {
        if (radicand[0].limit >= -radicand_tol && radicand[1].limit >= -radicand_tol) {
            throw std::logic_error(
                "semigroup_recovery: weight inequality and radicand scan disagree");
        }
        verdict.failure_reason = "x1+x2 >= 1 forces x3 = 0";
        return verdict;
    }

    // The radicand is monotone in t, so the limit covers every t >= 0.
    for (int k = 0; k < 2; ++k) {
        if (radicand[k].limit < -radicand_tol) {
            verdict.failure_reason =
                (k == 0) ? "eta1 not real at large t" : "eta2 not real at large t";
            return verdict;
        }
    }

    const int n = grid.n_points;
    std::array<std::vector<double>, 3> eta;
    eta[0].resize(n);
    eta[1].resize(n);
    eta[2].assign(n, 1.0);  // vacuous at weight zero
    for (int i = 0; i < n; ++i) {
        const double decay = std::exp(-g * grid.time(i));
        for (int k = 0; k < 2; ++k) {
            const double value = radicand[k].at(decay);
            if (value < -radicand_tol) {
                verdict.failure_reason = (k == 0) ? "eta1 not real at t" : "eta2 not real at t";
                return verdict;
            }
            eta[k][i] = std::sqrt(std::max(value, 0.0));
        }
    }

    EtaFamilyMixtureSpec mix;
    mix.weights = {weights[0], weights[1], 0.0};
    mix.grid = grid;
    mix.eta[0].samples = eta[0];
    mix.eta[1].samples = eta[1];
    mix.eta[2].samples = eta[2];
    const EigenvalueTrajectory rebuilt = eta_mixture_eigenvalues(mix);
    const EigenvalueTrajectory target = semigroup_trajectory(gamma_plus, gamma_minus, gamma3, grid);

    double mismatch = 0.0;
    for (int i = 0; i < n; ++i) {
        mismatch = std::max({mismatch, std::abs(rebuilt.lambda1[i] - target.lambda1[i]),
                             std::abs(rebuilt.lambda3[i] - target.lambda3[i]),
                             std::abs(rebuilt.lambda_star[i] - target.lambda_star[i])});
    }
    if (mismatch > match_tol) {
        verdict.failure_reason = "reconstructed eigenvalues deviate from the target semigroup "
                                 "(max deviation " +
                                 std::to_string(mismatch) + ")";
        return verdict;
    }

    verdict.feasible = true;
    verdict.eta_solutions = std::move(eta);
    return verdict;
}

EigenvalueTrajectory mix_trajectories(std::span<const EigenvalueTrajectory> components,
                                      std::span<const double> weights, double weight_tol) {
    if (components.empty() || components.size() != weights.size()) {
        throw std::invalid_argument("mix_trajectories: need matching, nonempty inputs");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("mix_trajectories: weights must be >= 0");
        sum += w;
    }
    if (std::abs(sum - 1.0) > weight_tol) {
        throw std::invalid_argument("mix_trajectories: weights must sum to 1");
    }
    for (const auto& c : components) {
        if (!(c.grid == components[0].grid)) {
            throw std::invalid_argument("mix_trajectories: components must share one grid");
        }
    }

    EigenvalueTrajectory out;
    out.grid = components[0].grid;
    const int n = out.grid.n_points;
    out.lambda1.assign(n, 0.0);
    out.lambda3.assign(n, 0.0);
    out.lambda_star.assign(n, 0.0);
    for (std::size_t k = 0; k < components.size(); ++k) {
        for (int i = 0; i < n; ++i) {
            out.lambda1[i] += weights[k] * components[k].lambda1[i];
            out.lambda3[i] += weights[k] * components[k].lambda3[i];
            out.lambda_star[i] += weights[k] * components[k].lambda_star[i];
        }
    }
    return out;
}

}  // namespace phasecov
