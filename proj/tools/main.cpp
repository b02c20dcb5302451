// Command-line front end for phase-covariant qubit map analyses. Every
// subcommand is a thin wrapper over the library; exit code 0 means an
// affirmative verdict or plain success, 1 a negative verdict, 2 a usage or
// parse error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "phasecov/channel.hpp"
#include "phasecov/dynamics.hpp"
#include "phasecov/mixtures.hpp"
#include "phasecov/numerics.hpp"
#include "phasecov/presets.hpp"
#include "phasecov/sampling.hpp"
#include "phasecov/trajectory_io.hpp"

namespace pc = phasecov;
using nlohmann::json;

namespace {

constexpr double kRoundtripTol = 1e-6;

struct RunConfig {
    double t_max = 10.0;
    int points = 2001;
    double tol = 1e-9;
    std::uint64_t seed = 1;  // documented default
    std::string output;
    std::string config_path;
};

struct CommonOptions {
    CLI::Option* t_max = nullptr;
    CLI::Option* points = nullptr;
    CLI::Option* tol = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* output = nullptr;
};

CommonOptions add_common(CLI::App* cmd, RunConfig& cfg) {
    CommonOptions opts;
    opts.t_max = cmd->add_option("--t-max", cfg.t_max, "Final grid time (default 10)");
    opts.points = cmd->add_option("--points", cfg.points,
                                  "Grid point count, odd and >= 3 (default 2001)");
    opts.tol = cmd->add_option("--tol", cfg.tol, "Decision tolerance (default 1e-9)");
    opts.seed = cmd->add_option("--seed", cfg.seed, "Random seed for batch scans (default 1)");
    opts.output = cmd->add_option("--output", cfg.output, "Output file (default stdout)");
    cmd->add_option("--config", cfg.config_path,
                    "JSON config file mirroring the flags; flags win over the file");
    return opts;
}

// Flags win over the config file: only keys whose flag was not given apply.
void merge_config(const CommonOptions& opts, RunConfig& cfg) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in) throw std::invalid_argument("cannot open config file '" + cfg.config_path + "'");
    json j = json::parse(in);
    if (j.contains("t_max") && opts.t_max->count() == 0) cfg.t_max = j.at("t_max").get<double>();
    if (j.contains("points") && opts.points->count() == 0) cfg.points = j.at("points").get<int>();
    if (j.contains("tol") && opts.tol->count() == 0) cfg.tol = j.at("tol").get<double>();
    if (j.contains("seed") && opts.seed->count() == 0)
        cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output") && opts.output->count() == 0)
        cfg.output = j.at("output").get<std::string>();
}

pc::TimeGrid make_grid(const RunConfig& cfg) {
    if (cfg.points < 3 || cfg.points % 2 == 0) {
        throw std::invalid_argument("--points must be odd and >= 3");
    }
    return pc::TimeGrid::uniform(cfg.t_max, cfg.points);
}

class OutputStream {
public:
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::invalid_argument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string bool_str(bool b) { return b ? "true" : "false"; }

void require_finite(const std::vector<double>& values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + " must be finite");
        }
    }
}

pc::SemigroupMixtureSpec parse_semigroup_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
    json j = json::parse(in);
    pc::SemigroupMixtureSpec spec;
    const auto weights = j.at("weights").get<std::vector<double>>();
    const auto rates = j.at("rates").get<std::vector<double>>();
    if (weights.size() != 3 || rates.size() != 3) {
        throw std::invalid_argument("spec: weights and rates must have 3 entries");
    }
    for (int k = 0; k < 3; ++k) {
        spec.weights[k] = weights[k];
        spec.rates[k] = rates[k];
    }
    spec.validate();
    return spec;
}

std::vector<double> read_eta_samples(const std::string& path, const pc::TimeGrid& grid) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open eta sample file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("eta csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,eta") throw std::invalid_argument("eta csv: expected header 't,eta'");
    std::vector<double> t;
    std::vector<double> eta;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        double tv = 0.0;
        double ev = 0.0;
        char comma = ',';
        if (!(row >> tv >> comma >> ev) || comma != ',') {
            throw std::invalid_argument("eta csv: malformed row '" + line + "'");
        }
        t.push_back(tv);
        eta.push_back(ev);
    }
    if (static_cast<int>(t.size()) != grid.n_points) {
        throw std::invalid_argument("eta csv: sample count must match the grid");
    }
    for (int i = 0; i < grid.n_points; ++i) {
        if (std::abs(t[i] - grid.time(i)) > 1e-9 * std::max(1.0, grid.t_max)) {
            throw std::invalid_argument("eta csv: time column must match the grid");
        }
    }
    return eta;
}

pc::EtaFamilyMixtureSpec parse_eta_spec(const std::string& path, const pc::TimeGrid& grid) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
    json j = json::parse(in);
    pc::EtaFamilyMixtureSpec spec;
    spec.grid = grid;
    const auto weights = j.at("weights").get<std::vector<double>>();
    if (weights.size() != 3) throw std::invalid_argument("spec: weights must have 3 entries");
    for (int k = 0; k < 3; ++k) spec.weights[k] = weights[k];

    const auto& etas = j.at("eta");
    if (!etas.is_array() || etas.size() != 3) {
        throw std::invalid_argument("spec: eta must be an array of 3 entries");
    }
    for (int k = 0; k < 3; ++k) {
        const auto& e = etas[k];
        const std::string form = e.at("form").get<std::string>();
        if (form == "exp") {
            spec.eta[k] = pc::sample_eta(pc::EtaForm{pc::EtaForm::Kind::Exp,
                                                     e.at("w").get<double>()},
                                         grid);
        } else if (form == "exp_cos") {
            spec.eta[k] = pc::sample_eta(pc::EtaForm{pc::EtaForm::Kind::ExpCos,
                                                     e.at("w").get<double>()},
                                         grid);
        } else if (form == "samples") {
            spec.eta[k].samples = read_eta_samples(e.at("file").get<std::string>(), grid);
        } else {
            throw std::invalid_argument("spec: eta form must be exp, exp_cos, or samples");
        }
    }
    spec.validate();
    return spec;
}

pc::EigenvalueTrajectory load_trajectory(const std::string& input, const std::string& preset,
                                         const pc::TimeGrid& grid) {
    if (!preset.empty()) return pc::preset_trajectory(preset, grid);
    if (input.empty() || input == "-") return pc::read_eigenvalue_csv(std::cin);
    std::ifstream in(input);
    if (!in) throw std::invalid_argument("cannot open input file '" + input + "'");
    return pc::read_eigenvalue_csv(in);
}

// --- subcommand bodies ----------------------------------------------------

int run_check_cp(double l1, double l3, double ls, const RunConfig& cfg) {
    require_finite({l1, l3, ls}, "channel parameters");
    const pc::PhaseCovariantChannel ch{l1, l3, ls};
    const pc::CpReport rep = pc::is_completely_positive(ch, cfg.tol);
    const double min_eig = pc::hermitian4_eigenvalues(pc::choi(ch)).eigenvalues[0];
    OutputStream out(cfg.output);
    out.get() << "completely_positive=" << bool_str(rep.completely_positive) << '\n'
              << "slack_trace=" << pc::format_g17(rep.slack_trace) << '\n'
              << "slack_block=" << pc::format_g17(rep.slack_block) << '\n'
              << "choi_min_eigenvalue=" << pc::format_g17(min_eig) << '\n';
    return rep.completely_positive ? 0 : 1;
}

int run_evolve(const std::string& preset, const std::string& rates_csv,
               const std::vector<double>& const_rates, const RunConfig& cfg) {
    const pc::TimeGrid grid = make_grid(cfg);
    pc::EigenvalueTrajectory traj;
    if (!preset.empty()) {
        traj = pc::preset_trajectory(preset, grid);
    } else if (!rates_csv.empty()) {
        std::ifstream in(rates_csv);
        if (!in) throw std::invalid_argument("cannot open rates file '" + rates_csv + "'");
        traj = pc::eigenvalues_from_rates(pc::read_rate_csv(in));
    } else if (!const_rates.empty()) {
        if (const_rates.size() != 3) {
            throw std::invalid_argument("--rates needs gamma_plus gamma_minus gamma3");
        }
        require_finite(const_rates, "rates");
        traj = pc::semigroup_trajectory(const_rates[0], const_rates[1], const_rates[2], grid);
    } else {
        throw std::invalid_argument("evolve: give --preset, --rates-csv, or --rates");
    }
    OutputStream out(cfg.output);
    pc::write_eigenvalue_csv(out.get(), traj);
    return 0;
}

int run_rates(const std::string& input, const std::string& preset, const RunConfig& cfg) {
    const pc::EigenvalueTrajectory traj = load_trajectory(input, preset, make_grid(cfg));
    const pc::RateReconstruction rec = pc::rates_from_eigenvalues(traj);
    OutputStream out(cfg.output);
    pc::write_rate_csv(out.get(), rec.rates);
    if (!rec.singular_indices.empty()) {
        std::cerr << "rates: " << rec.excluded_indices.size()
                  << " grid points excluded around singularities at t =";
        for (int i : rec.singular_indices) std::cerr << ' ' << traj.grid.time(i);
        std::cerr << '\n';
    }
    return 0;
}

int run_mix_semigroups(const std::string& spec_path, const std::string& preset,
                       const RunConfig& cfg) {
    const pc::TimeGrid grid = make_grid(cfg);
    pc::SemigroupMixtureSpec spec;
    if (!preset.empty()) {
        if (preset != "exmsg") {
            throw std::invalid_argument("mix-semigroups: the only preset is 'exmsg'");
        }
        spec = pc::exmsg_spec();
    } else if (!spec_path.empty()) {
        spec = parse_semigroup_spec(spec_path);
    } else {
        throw std::invalid_argument("mix-semigroups: give --spec or --preset");
    }

    const pc::EigenvalueTrajectory traj = pc::semigroup_mixture_eigenvalues(spec, grid);
    const pc::RateTrajectory rates = pc::semigroup_mixture_rates(spec, grid);
    const pc::DivisibilityReport rep = pc::is_cp_divisible(rates, cfg.tol);

    OutputStream out(cfg.output);
    out.get() << "t,lambda1,lambda3,lambda_star,gamma_plus,gamma_minus,gamma3\n";
    for (int i = 0; i < grid.n_points; ++i) {
        out.get() << pc::format_g17(grid.time(i)) << ',' << pc::format_g17(traj.lambda1[i]) << ','
                  << pc::format_g17(traj.lambda3[i]) << ',' << pc::format_g17(traj.lambda_star[i])
                  << ',' << pc::format_g17(rates.gamma_plus[i]) << ','
                  << pc::format_g17(rates.gamma_minus[i]) << ','
                  << pc::format_g17(rates.gamma3[i]) << '\n';
    }
    out.get() << "cp_divisible=" << bool_str(rep.cp_divisible) << ",min_rate="
              << pc::format_g17(rep.min_rate) << '\n';
    return rep.cp_divisible ? 0 : 1;
}

int run_mix_eta(const std::string& spec_path, const std::string& preset, const RunConfig& cfg) {
    const pc::TimeGrid grid = make_grid(cfg);
    pc::EtaFamilyMixtureSpec spec;
    if (!preset.empty()) {
        if (preset != "example-2") {
            throw std::invalid_argument("mix-eta: the only preset is 'example-2'");
        }
        spec = pc::example2_spec(grid);
    } else if (!spec_path.empty()) {
        spec = parse_eta_spec(spec_path, grid);
    } else {
        throw std::invalid_argument("mix-eta: give --spec or --preset");
    }

    const pc::EigenvalueTrajectory traj = pc::eta_mixture_eigenvalues(spec);
    const pc::InvertibilityReport inv = pc::invertibility_report(traj);
    OutputStream out(cfg.output);
    pc::write_eigenvalue_csv(out.get(), traj);
    out.get() << "invertible=" << bool_str(inv.invertible)
              << ",unitality_defect=" << pc::format_g17(pc::unitality_defect(traj)) << '\n';
    return inv.invertible ? 0 : 1;
}

int run_divisibility(const std::string& input, const std::string& preset, const RunConfig& cfg) {
    const pc::EigenvalueTrajectory traj = load_trajectory(input, preset, make_grid(cfg));
    const pc::RateReconstruction rec = pc::rates_from_eigenvalues(traj);
    const pc::DivisibilityReport by_rates = pc::is_cp_divisible(rec.rates, cfg.tol);
    const pc::DivisibilityReport by_choi = pc::cp_divisibility_via_choi(traj, cfg.tol);

    OutputStream out(cfg.output);
    out.get() << "rate_sign: cp_divisible=" << bool_str(by_rates.cp_divisible)
              << " min_rate=" << pc::format_g17(by_rates.min_rate);
    if (by_rates.first_violation_time) {
        out.get() << " first_violation_time=" << pc::format_g17(*by_rates.first_violation_time);
    }
    out.get() << " excluded_points=" << rec.excluded_indices.size() << '\n';

    out.get() << "choi: cp_divisible=" << bool_str(by_choi.cp_divisible)
              << " min_choi_eigenvalue=" << pc::format_g17(by_choi.min_rate);
    if (by_choi.first_violation_time) {
        out.get() << " first_violation_time=" << pc::format_g17(*by_choi.first_violation_time);
    }
    out.get() << " excluded_points=" << by_choi.excluded_times.size() << '\n';
    return (by_rates.cp_divisible && by_choi.cp_divisible) ? 0 : 1;
}

int run_commutativity(const std::string& input, const std::string& preset,
                      const std::string& spec_path, const RunConfig& cfg) {
    const pc::TimeGrid grid = make_grid(cfg);
    OutputStream out(cfg.output);

    if (!spec_path.empty()) {
        const pc::EtaFamilyMixtureSpec spec = parse_eta_spec(spec_path, grid);
        const pc::CommutativityFit fit =
            pc::commutativity_fit(spec.eta[0].samples, spec.eta[1].samples, grid, cfg.tol);
        const pc::CommutativityReport rep =
            pc::is_commutative_family(pc::eta_mixture_eigenvalues(spec), cfg.tol);
        out.get() << "a=" << pc::format_g17(fit.a)
                  << " max_residual=" << pc::format_g17(fit.max_residual)
                  << " fit_commutative=" << bool_str(fit.commutative) << '\n'
                  << "commutative=" << bool_str(rep.commutative)
                  << " max_defect=" << pc::format_g17(rep.max_defect) << '\n';
        return rep.commutative ? 0 : 1;
    }

    const pc::EigenvalueTrajectory traj = load_trajectory(input, preset, grid);
    const pc::CommutativityReport rep = pc::is_commutative_family(traj, cfg.tol);
    out.get() << "commutative=" << bool_str(rep.commutative)
              << " max_defect=" << pc::format_g17(rep.max_defect) << '\n';
    return rep.commutative ? 0 : 1;
}

int run_recover(const std::vector<double>& weights, const std::vector<double>& target,
                const RunConfig& cfg) {
    if (weights.size() != 3 || target.size() != 3) {
        throw std::invalid_argument("recover: need --weights x1 x2 x3 and --target gp gm g3");
    }
    require_finite(weights, "weights");
    require_finite(target, "target rates");
    const pc::TimeGrid grid = make_grid(cfg);
    const pc::RecoveryVerdict verdict = pc::semigroup_recovery(
        {weights[0], weights[1], weights[2]}, target[0], target[1], target[2], grid);

    std::cout << "feasible=" << bool_str(verdict.feasible) << '\n';
    if (!verdict.feasible) {
        std::cout << "reason=" << verdict.failure_reason << '\n';
        return 1;
    }
    if (!cfg.output.empty()) {
        OutputStream out(cfg.output);
        out.get() << "t,eta1,eta2,eta3\n";
        for (int i = 0; i < grid.n_points; ++i) {
            out.get() << pc::format_g17(grid.time(i)) << ','
                      << pc::format_g17(verdict.eta_solutions[0][i]) << ','
                      << pc::format_g17(verdict.eta_solutions[1][i]) << ','
                      << pc::format_g17(verdict.eta_solutions[2][i]) << '\n';
        }
    }
    return 0;
}

int scan_cp_choi(int count, const RunConfig& cfg, std::ostream& os) {
    pc::SampleStream stream(cfg.seed);
    int agree = 0;
    double min_eig_cp = std::numeric_limits<double>::infinity();
    double max_eig_noncp = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        const pc::PhaseCovariantChannel ch{stream.uniform(-1.5, 1.5), stream.uniform(-1.5, 1.5),
                                           stream.uniform(-1.5, 1.5)};
        const bool predicate = pc::is_completely_positive(ch, cfg.tol).completely_positive;
        const double min_eig = pc::hermitian4_eigenvalues(pc::choi(ch)).eigenvalues[0];
        const bool oracle = min_eig >= -cfg.tol;
        if (predicate == oracle) ++agree;
        if (oracle) min_eig_cp = std::min(min_eig_cp, min_eig);
        else max_eig_noncp = std::max(max_eig_noncp, min_eig);
    }
    os << "cp-choi: agree=" << agree << '/' << count
       << " min_choi_eigenvalue_among_cp=" << pc::format_g17(min_eig_cp)
       << " max_choi_eigenvalue_among_noncp=" << pc::format_g17(max_eig_noncp) << '\n';
    return agree == count ? 0 : 1;
}

int scan_prop2(int count, const RunConfig& cfg, std::ostream& os) {
    const pc::TimeGrid grid = make_grid(cfg);
    pc::SampleStream stream(cfg.seed);
    int pass = 0;
    double min_rate = std::numeric_limits<double>::infinity();
    double max_residual = 0.0;
    for (int i = 0; i < count; ++i) {
        pc::SemigroupMixtureSpec spec;
        spec.weights = stream.simplex3();
        spec.rates = {stream.uniform(0.0, 5.0), stream.uniform(0.0, 5.0),
                      stream.uniform(0.0, 5.0)};
        const pc::Prop2Report rep = pc::verify_prop2(spec, grid, cfg.tol);
        min_rate = std::min(min_rate, rep.divisibility.min_rate);
        max_residual = std::max(max_residual, rep.max_identity_residual);
        if (rep.divisibility.cp_divisible && rep.identity_ok) ++pass;
    }
    os << "prop2: pass=" << pass << '/' << count << " min_rate=" << pc::format_g17(min_rate)
       << " max_identity_residual=" << pc::format_g17(max_residual) << '\n';
    return pass == count ? 0 : 1;
}

int scan_roundtrip(int count, const RunConfig& cfg, std::ostream& os) {
    const pc::TimeGrid grid = make_grid(cfg);
    pc::SampleStream stream(cfg.seed);
    int pass = 0;
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        pc::RateTrajectory rates;
        rates.grid = grid;
        rates.gamma_plus = pc::random_exponential_rate(stream, grid);
        rates.gamma_minus = pc::random_exponential_rate(stream, grid);
        rates.gamma3 = pc::random_exponential_rate(stream, grid);

        const pc::RateReconstruction rec =
            pc::rates_from_eigenvalues(pc::eigenvalues_from_rates(rates));
        double err = 0.0;
        std::size_t next_excluded = 0;
        for (int k = pc::kDerivativeInteriorMargin; k < grid.n_points - pc::kDerivativeInteriorMargin;
             ++k) {
            while (next_excluded < rec.excluded_indices.size() &&
                   rec.excluded_indices[next_excluded] < k) {
                ++next_excluded;
            }
            if (next_excluded < rec.excluded_indices.size() &&
                rec.excluded_indices[next_excluded] == k) {
                continue;
            }
            err = std::max({err, std::abs(rec.rates.gamma_plus[k] - rates.gamma_plus[k]),
                            std::abs(rec.rates.gamma_minus[k] - rates.gamma_minus[k]),
                            std::abs(rec.rates.gamma3[k] - rates.gamma3[k])});
        }
        worst = std::max(worst, err);
        if (err <= kRoundtripTol) ++pass;
    }
    os << "roundtrip: pass=" << pass << '/' << count << " max_sup_error=" << pc::format_g17(worst)
       << " (threshold " << pc::format_g17(kRoundtripTol) << ")\n";
    return pass == count ? 0 : 1;
}

int run_scan(const std::string& kind, int count, const RunConfig& cfg) {
    if (count < 1) throw std::invalid_argument("scan: --count must be >= 1");
    OutputStream out(cfg.output);
    if (kind == "cp-choi") return scan_cp_choi(count, cfg, out.get());
    if (kind == "prop2") return scan_prop2(count, cfg, out.get());
    if (kind == "roundtrip") return scan_roundtrip(count, cfg, out.get());
    throw std::invalid_argument("scan: kind must be cp-choi, prop2, or roundtrip");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Construct, evolve, mix, and classify phase-covariant qubit maps"};
    app.require_subcommand(1);

    RunConfig cfg;

    // check-cp
    double l1 = 0.0;
    double l3 = 0.0;
    double ls = 0.0;
    CLI::App* check_cp = app.add_subcommand(
        "check-cp", "Complete-positivity verdict for a channel (lambda1 lambda3 lambda_star)");
    check_cp->add_option("lambda1", l1)->required();
    check_cp->add_option("lambda3", l3)->required();
    check_cp->add_option("lambda_star", ls)->required();
    const CommonOptions check_cp_opts = add_common(check_cp, cfg);

    // evolve
    std::string evolve_preset;
    std::string evolve_rates_csv;
    std::vector<double> evolve_rates;
    CLI::App* evolve = app.add_subcommand("evolve", "Integrate rates into an eigenvalue CSV");
    CLI::Option* evolve_preset_opt =
        evolve->add_option("--preset", evolve_preset, "One of: amplitude-damping, "
                           "inverse-amplitude-damping, pure-dephasing, example-1, example-2, exmsg");
    CLI::Option* evolve_csv_opt = evolve->add_option(
        "--rates-csv", evolve_rates_csv, "Rate CSV (t,gamma_plus,gamma_minus,gamma3)");
    CLI::Option* evolve_rates_opt =
        evolve->add_option("--rates", evolve_rates, "Constant rates: gamma_plus gamma_minus gamma3")
            ->expected(3);
    evolve_preset_opt->excludes(evolve_csv_opt)->excludes(evolve_rates_opt);
    evolve_csv_opt->excludes(evolve_rates_opt);
    const CommonOptions evolve_opts = add_common(evolve, cfg);

    // rates
    std::string rates_input;
    std::string rates_preset;
    CLI::App* rates = app.add_subcommand("rates", "Differentiate an eigenvalue CSV into rates");
    CLI::Option* rates_input_opt =
        rates->add_option("--input", rates_input, "Eigenvalue CSV ('-' or absent: stdin)");
    rates->add_option("--preset", rates_preset, "Preset trajectory instead of a CSV")
        ->excludes(rates_input_opt);
    const CommonOptions rates_opts = add_common(rates, cfg);

    // mix-semigroups
    std::string mix_sg_spec;
    std::string mix_sg_preset;
    CLI::App* mix_sg = app.add_subcommand(
        "mix-semigroups", "Semigroup mixture: eigenvalues + rates CSV and divisibility verdict");
    CLI::Option* mix_sg_spec_opt = mix_sg->add_option(
        "--spec", mix_sg_spec, "JSON file {\"weights\":[...],\"rates\":[...]}");
    mix_sg->add_option("--preset", mix_sg_preset, "Preset spec: exmsg")->excludes(mix_sg_spec_opt);
    const CommonOptions mix_sg_opts = add_common(mix_sg, cfg);

    // mix-eta
    std::string mix_eta_spec;
    std::string mix_eta_preset;
    CLI::App* mix_eta = app.add_subcommand(
        "mix-eta", "Eta-family mixture: eigenvalue CSV and invertibility verdict");
    CLI::Option* mix_eta_spec_opt = mix_eta->add_option(
        "--spec", mix_eta_spec, "JSON file {\"weights\":[...],\"eta\":[{\"form\":...},...]}");
    mix_eta->add_option("--preset", mix_eta_preset, "Preset spec: example-2")
        ->excludes(mix_eta_spec_opt);
    const CommonOptions mix_eta_opts = add_common(mix_eta, cfg);

    // divisibility
    std::string div_input;
    std::string div_preset;
    CLI::App* divisibility = app.add_subcommand(
        "divisibility", "CP-divisibility by rate signs and by propagator Choi spectra");
    divisibility->add_option("--input", div_input, "Eigenvalue CSV ('-' or absent: stdin)");
    divisibility->add_option("--preset", div_preset, "Preset trajectory instead of a CSV");
    const CommonOptions div_opts = add_common(divisibility, cfg);

    // commutativity
    std::string comm_input;
    std::string comm_preset;
    std::string comm_spec;
    CLI::App* commutativity = app.add_subcommand(
        "commutativity", "Commutativity of a one-parameter family of maps");
    CLI::Option* comm_input_opt =
        commutativity->add_option("--input", comm_input, "Eigenvalue CSV ('-' or absent: stdin)");
    CLI::Option* comm_preset_opt = commutativity->add_option(
        "--preset", comm_preset, "Preset trajectory instead of a CSV");
    commutativity
        ->add_option("--spec", comm_spec, "Eta-mixture JSON spec; adds the affine eta^2 fit")
        ->excludes(comm_input_opt)
        ->excludes(comm_preset_opt);
    comm_preset_opt->excludes(comm_input_opt);
    const CommonOptions comm_opts = add_common(commutativity, cfg);

    // recover
    std::vector<double> rec_weights;
    std::vector<double> rec_target;
    CLI::App* recover = app.add_subcommand(
        "recover", "Can these weights mix component maps into the target semigroup?");
    recover->add_option("--weights", rec_weights, "Mixing weights x1 x2 x3")->expected(3)->required();
    recover->add_option("--target", rec_target, "Target rates gamma_plus gamma_minus gamma3")
        ->expected(3)
        ->required();
    const CommonOptions rec_opts = add_common(recover, cfg);

    // scan
    std::string scan_kind;
    int scan_count = 100;
    CLI::App* scan = app.add_subcommand("scan", "Seeded batch verification");
    scan->add_option("kind", scan_kind, "cp-choi | prop2 | roundtrip")->required();
    scan->add_option("--count", scan_count, "Sample count (default 100)");
    const CommonOptions scan_opts = add_common(scan, cfg);

    try {
        app.parse(argc, argv);

        if (check_cp->parsed()) {
            merge_config(check_cp_opts, cfg);
            return run_check_cp(l1, l3, ls, cfg);
        }
        if (evolve->parsed()) {
            merge_config(evolve_opts, cfg);
            return run_evolve(evolve_preset, evolve_rates_csv, evolve_rates, cfg);
        }
        if (rates->parsed()) {
            merge_config(rates_opts, cfg);
            return run_rates(rates_input, rates_preset, cfg);
        }
        if (mix_sg->parsed()) {
            merge_config(mix_sg_opts, cfg);
            return run_mix_semigroups(mix_sg_spec, mix_sg_preset, cfg);
        }
        if (mix_eta->parsed()) {
            merge_config(mix_eta_opts, cfg);
            return run_mix_eta(mix_eta_spec, mix_eta_preset, cfg);
        }
        if (divisibility->parsed()) {
            merge_config(div_opts, cfg);
            return run_divisibility(div_input, div_preset, cfg);
        }
        if (commutativity->parsed()) {
            merge_config(comm_opts, cfg);
            return run_commutativity(comm_input, comm_preset, comm_spec, cfg);
        }
        if (recover->parsed()) {
            merge_config(rec_opts, cfg);
            return run_recover(rec_weights, rec_target, cfg);
        }
        if (scan->parsed()) {
            merge_config(scan_opts, cfg);
            return run_scan(scan_kind, scan_count, cfg);
        }
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
