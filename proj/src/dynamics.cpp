#include "phasecov/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "phasecov/numerics.hpp"

namespace phasecov {

std::vector<double> TimeGrid::points() const {
    std::vector<double> p(n_points);
    for (int i = 0; i < n_points; ++i) p[i] = time(i);
    return p;
}

TimeGrid TimeGrid::uniform(double t_max, int n_points) {
    if (!(t_max > 0.0)) throw std::invalid_argument("TimeGrid: t_max must be positive");
    if (n_points < 3) throw std::invalid_argument("TimeGrid: need at least 3 points");
    return TimeGrid{t_max, n_points};
}

PhaseCovariantChannel channel_at(const EigenvalueTrajectory& traj, int i) {
    return PhaseCovariantChannel{traj.lambda1.at(i), traj.lambda3.at(i),
                                 traj.lambda_star.at(i)};
}

MapValidity is_valid_dynamical_map(const EigenvalueTrajectory& traj, double cp_tol) {
    const double init_defect =
        std::max({std::abs(traj.lambda1.at(0) - 1.0), std::abs(traj.lambda3.at(0) - 1.0),
                  std::abs(traj.lambda_star.at(0))});
    if (init_defect > 1e-12) return MapValidity{false, 0.0};
    for (int i = 0; i < traj.size(); ++i) {
        if (!is_completely_positive(channel_at(traj, i), cp_tol).completely_positive) {
            return MapValidity{false, traj.grid.time(i)};
        }
    }
    return MapValidity{};
}

Mat2 generator_action(double gamma_plus, double gamma_minus, double gamma3, const Mat2& x) {
    const Mat2 sp = sigma_plus();
    const Mat2 sm = sigma_minus();
    const Mat2 s3 = sigma3();

    const Mat2 smsp = sm * sp;
    const Mat2 spsm = sp * sm;
    const Mat2 lp = sp * x * sm - 0.5 * (smsp * x + x * smsp);
    const Mat2 lm = sm * x * sp - 0.5 * (spsm * x + x * spsm);
    const Mat2 l3 = 0.25 * (s3 * x * s3 - x);
    return gamma_plus * lp + gamma_minus * lm + gamma3 * l3;
}

EigenvalueTrajectory eigenvalues_from_rates(const RateTrajectory& rates) {
    const int n = rates.grid.n_points;
    if (n % 2 == 0) {
        throw std::invalid_argument("eigenvalues_from_rates: Simpson needs an odd point count");
    }
    if (static_cast<int>(rates.gamma_plus.size()) != n ||
        static_cast<int>(rates.gamma_minus.size()) != n ||
        static_cast<int>(rates.gamma3.size()) != n) {
        throw std::invalid_argument("eigenvalues_from_rates: sample counts must match the grid");
    }
    const double h = rates.grid.step();

    const std::vector<double> gp_int = cumulative_simpson(rates.gamma_plus, h);
    const std::vector<double> gm_int = cumulative_simpson(rates.gamma_minus, h);
    const std::vector<double> g3_int = cumulative_simpson(rates.gamma3, h);

    EigenvalueTrajectory traj;
    traj.grid = rates.grid;
    traj.lambda1.resize(n);
    traj.lambda3.resize(n);
    traj.lambda_star.resize(n);

    std::vector<double> integrand(n);
    for (int i = 0; i < n; ++i) {
        const double g = gp_int[i] + gm_int[i];
        traj.lambda1[i] = std::exp(-0.5 * (g + g3_int[i]));
        traj.lambda3[i] = std::exp(-g);
        integrand[i] = (rates.gamma_plus[i] - rates.gamma_minus[i]) * std::exp(g);
    }
    const std::vector<double> star_int = cumulative_simpson(integrand, h);
    for (int i = 0; i < n; ++i) traj.lambda_star[i] = traj.lambda3[i] * star_int[i];
    return traj;
}

RateReconstruction rates_from_eigenvalues(const EigenvalueTrajectory& traj, double singular_tol) {
    const int n = traj.size();
    if (n < 5) throw std::invalid_argument("rates_from_eigenvalues: need at least 5 points");
    const double h = traj.grid.step();

    RateReconstruction out;
    out.rates.grid = traj.grid;

    std::set<int> excluded;
    for (int i = 0; i < n; ++i) {
        if (std::abs(traj.lambda1[i]) < singular_tol || std::abs(traj.lambda3[i]) < singular_tol) {
            out.singular_indices.push_back(i);
            for (int k = std::max(0, i - 2); k <= std::min(n - 1, i + 2); ++k) excluded.insert(k);
        }
    }
    out.excluded_indices.assign(excluded.begin(), excluded.end());

    // Ratio values blow up only inside the excluded neighborhoods, whose rate
    // outputs are discarded; clamp the division there to keep numbers finite.
    std::vector<double> ratio_p(n), ratio_m(n), log_ratio(n);
    for (int i = 0; i < n; ++i) {
        const double l1 = traj.lambda1[i];
        const double l3 = traj.lambda3[i];
        const double safe_l3 =
            (std::abs(l3) < singular_tol) ? (l3 < 0.0 ? -singular_tol : singular_tol) : l3;
        const double safe_l1sq = std::max(l1 * l1, singular_tol * singular_tol);
        ratio_p[i] = (1.0 + traj.lambda_star[i]) / safe_l3;
        ratio_m[i] = (1.0 - traj.lambda_star[i]) / safe_l3;
        log_ratio[i] = std::log(std::abs(safe_l3) / safe_l1sq);
    }

    const std::vector<double> dp = derivative(ratio_p, h);
    const std::vector<double> dm = derivative(ratio_m, h);
    const std::vector<double> d3 = derivative(log_ratio, h);

    out.rates.gamma_plus.resize(n);
    out.rates.gamma_minus.resize(n);
    out.rates.gamma3.resize(n);
    for (int i = 0; i < n; ++i) {
        if (excluded.count(i)) {
            out.rates.gamma_plus[i] = 0.0;
            out.rates.gamma_minus[i] = 0.0;
            out.rates.gamma3[i] = 0.0;
            continue;
        }
        out.rates.gamma_plus[i] = 0.5 * traj.lambda3[i] * dp[i];
        out.rates.gamma_minus[i] = 0.5 * traj.lambda3[i] * dm[i];
        out.rates.gamma3[i] = d3[i];
    }
    return out;
}

PhaseCovariantChannel semigroup_channel_at(double gamma_plus, double gamma_minus, double gamma3,
                                           double t) {
    if (gamma_plus < 0.0 || gamma_minus < 0.0 || gamma3 < 0.0) {
        throw std::invalid_argument("semigroup_channel_at: rates must be nonnegative");
    }
    const double g = gamma_plus + gamma_minus;
    PhaseCovariantChannel ch;
    ch.lambda1 = std::exp(-0.5 * (g + gamma3) * t);
    ch.lambda3 = std::exp(-g * t);
    ch.lambda_star = (g > 0.0) ? (gamma_plus - gamma_minus) / g * (1.0 - std::exp(-g * t)) : 0.0;
    return ch;
}

EigenvalueTrajectory semigroup_trajectory(double gamma_plus, double gamma_minus, double gamma3,
                                          const TimeGrid& grid) {
    EigenvalueTrajectory traj;
    traj.grid = grid;
    traj.lambda1.resize(grid.n_points);
    traj.lambda3.resize(grid.n_points);
    traj.lambda_star.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const PhaseCovariantChannel ch =
            semigroup_channel_at(gamma_plus, gamma_minus, gamma3, grid.time(i));
        traj.lambda1[i] = ch.lambda1;
        traj.lambda3[i] = ch.lambda3;
        traj.lambda_star[i] = ch.lambda_star;
    }
    return traj;
}

PhaseCovariantChannel propagator_at(const EigenvalueTrajectory& traj, int i_t, int i_s,
                                    double singular_tol) {
    if (i_t < 0 || i_s < 0 || i_t >= traj.size() || i_s >= traj.size()) {
        throw std::invalid_argument("propagator_at: index out of range");
    }
    if (i_t < i_s) throw std::invalid_argument("propagator_at: need t >= s");
    const double l1s = traj.lambda1[i_s];
    const double l3s = traj.lambda3[i_s];
    if (std::abs(l1s) < singular_tol || std::abs(l3s) < singular_tol) {
        throw std::domain_error("non-invertible at s = " + std::to_string(traj.grid.time(i_s)));
    }
    PhaseCovariantChannel v;
    v.lambda1 = traj.lambda1[i_t] / l1s;
    v.lambda3 = traj.lambda3[i_t] / l3s;
    v.lambda_star = traj.lambda_star[i_t] - traj.lambda_star[i_s] * v.lambda3;
    return v;
}

namespace {

int grid_index_of(const TimeGrid& grid, double t, const char* what) {
    const double h = grid.step();
    const long long i = std::llround(t / h);
    if (i < 0 || i >= grid.n_points || std::abs(t - static_cast<double>(i) * h) >
                                           1e-9 * std::max(1.0, grid.t_max)) {
        throw std::invalid_argument(std::string(what) + ": time " + std::to_string(t) +
                                    " does not lie on the grid");
    }
    return static_cast<int>(i);
}

}  // namespace

PhaseCovariantChannel propagator(const EigenvalueTrajectory& traj, double t, double s,
                                 double singular_tol) {
    return propagator_at(traj, grid_index_of(traj.grid, t, "propagator"),
                         grid_index_of(traj.grid, s, "propagator"), singular_tol);
}

DivisibilityReport is_cp_divisible(const RateTrajectory& rates, double tol) {
    DivisibilityReport rep;
    rep.method = DivisibilityMethod::RateSign;
    rep.min_rate = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rates.size(); ++i) {
        const double lo =
            std::min({rates.gamma_plus[i], rates.gamma_minus[i], rates.gamma3[i]});
        rep.min_rate = std::min(rep.min_rate, lo);
        if (lo < -tol && !rep.first_violation_time) {
            rep.first_violation_time = rates.grid.time(i);
        }
    }
    rep.cp_divisible = !rep.first_violation_time.has_value();
    return rep;
}

DivisibilityReport cp_divisibility_via_choi(const EigenvalueTrajectory& traj, double tol,
                                            double singular_tol) {
    DivisibilityReport rep;
    rep.method = DivisibilityMethod::ChoiPropagator;
    rep.min_rate = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < traj.size(); ++i) {
        if (std::abs(traj.lambda1[i]) < singular_tol ||
            std::abs(traj.lambda3[i]) < singular_tol) {
            rep.excluded_times.push_back(traj.grid.time(i));
            continue;
        }
        const PhaseCovariantChannel v = propagator_at(traj, i + 1, i, singular_tol);
        const double min_eig = hermitian4_eigenvalues(choi(v)).eigenvalues[0];
        rep.min_rate = std::min(rep.min_rate, min_eig);
        if (min_eig < -tol && !rep.first_violation_time) {
            rep.first_violation_time = traj.grid.time(i + 1);
        }
    }
    rep.cp_divisible = !rep.first_violation_time.has_value();
    return rep;
}

CommutativityReport is_commutative_family(const EigenvalueTrajectory& traj, double tol) {
    const int n = traj.size();
    const int stride = std::max(1, (n + 199) / 200);

    std::vector<int> idx;
    for (int i = 0; i < n; i += stride) idx.push_back(i);

    CommutativityReport rep;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const int i = idx[a];
            const int j = idx[b];
            const double defect = traj.lambda_star[i] * (1.0 - traj.lambda3[j]) -
                                  traj.lambda_star[j] * (1.0 - traj.lambda3[i]);
            rep.max_defect = std::max(rep.max_defect, std::abs(defect));
        }
    }
    rep.commutative = rep.max_defect <= tol;
    return rep;
}

}  // namespace phasecov
