#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "phasecov/channel.hpp"
#include "phasecov/dynamics.hpp"
#include "phasecov/mixtures.hpp"
#include "phasecov/presets.hpp"
#include "phasecov/trajectory_io.hpp"

namespace py = pybind11;
namespace pc = phasecov;

namespace {

using PyMat = std::vector<std::vector<pc::Complex>>;

pc::Mat2 to_mat2(const PyMat& m) {
    if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2) {
        throw std::invalid_argument("expected a 2x2 matrix");
    }
    pc::Mat2 out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out(r, c) = m[r][c];
    return out;
}

PyMat from_mat2(const pc::Mat2& m) {
    PyMat out(2, std::vector<pc::Complex>(2));
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out[r][c] = m(r, c);
    return out;
}

pc::Mat4 to_mat4(const PyMat& m) {
    if (m.size() != 4) throw std::invalid_argument("expected a 4x4 matrix");
    pc::Mat4 out;
    for (int r = 0; r < 4; ++r) {
        if (m[r].size() != 4) throw std::invalid_argument("expected a 4x4 matrix");
        for (int c = 0; c < 4; ++c) out(r, c) = m[r][c];
    }
    return out;
}

PyMat from_mat4(const pc::Mat4& m) {
    PyMat out(4, std::vector<pc::Complex>(4));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r][c] = m(r, c);
    return out;
}

pc::EtaFamilyMixtureSpec make_eta_spec(const std::array<double, 3>& weights,
                                       const std::array<std::vector<double>, 3>& samples,
                                       const pc::TimeGrid& grid) {
    pc::EtaFamilyMixtureSpec spec;
    spec.weights = weights;
    spec.grid = grid;
    for (int k = 0; k < 3; ++k) spec.eta[k].samples = samples[k];
    spec.validate();
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Phase-covariant qubit dynamical maps: channels, trajectories, mixtures";
    m.attr("__version__") = "0.1.0";

    py::class_<pc::PhaseCovariantChannel>(m, "PhaseCovariantChannel")
        .def(py::init<double, double, double>(), py::arg("lambda1"), py::arg("lambda3"),
             py::arg("lambda_star"))
        .def_readonly("lambda1", &pc::PhaseCovariantChannel::lambda1)
        .def_readonly("lambda3", &pc::PhaseCovariantChannel::lambda3)
        .def_readonly("lambda_star", &pc::PhaseCovariantChannel::lambda_star)
        .def("__repr__", [](const pc::PhaseCovariantChannel& ch) {
            return "PhaseCovariantChannel(" + pc::format_g17(ch.lambda1) + ", " +
                   pc::format_g17(ch.lambda3) + ", " + pc::format_g17(ch.lambda_star) + ")";
        });

    py::class_<pc::CpReport>(m, "CpReport")
        .def_readonly("completely_positive", &pc::CpReport::completely_positive)
        .def_readonly("slack_trace", &pc::CpReport::slack_trace)
        .def_readonly("slack_block", &pc::CpReport::slack_block);

    m.def("apply_channel",
          [](const pc::PhaseCovariantChannel& ch, const PyMat& x) {
              return from_mat2(pc::apply(ch, to_mat2(x)));
          },
          py::arg("channel"), py::arg("x"), "Act on a 2x2 operator");
    m.def("choi",
          [](const pc::PhaseCovariantChannel& ch) { return from_mat4(pc::choi(ch)); },
          py::arg("channel"), "Unnormalized 4x4 Choi matrix (trace 2)");
    m.def("is_completely_positive", &pc::is_completely_positive, py::arg("channel"),
          py::arg("tol") = pc::kDefaultTol.cp);
    m.def("fixed_point",
          [](const pc::PhaseCovariantChannel& ch) { return from_mat2(pc::fixed_point(ch).state); },
          py::arg("channel"), "Density matrix preserved by the channel");
    m.def("compose", &pc::compose, py::arg("a"), py::arg("b"), "a after b");
    m.def("convex_mix",
          [](const std::vector<pc::PhaseCovariantChannel>& channels,
             const std::vector<double>& weights) { return pc::convex_mix(channels, weights); },
          py::arg("channels"), py::arg("weights"));
    m.def("is_unital", &pc::is_unital, py::arg("channel"),
          py::arg("tol") = pc::kDefaultTol.unitality);
    m.def("covariance_defect",
          [](const pc::PhaseCovariantChannel& ch, double phi, const PyMat& x) {
              return pc::covariance_defect(ch, phi, to_mat2(x));
          },
          py::arg("channel"), py::arg("phi"), py::arg("x"));
    m.def("hermitian4_eigenvalues",
          [](const PyMat& m4, double herm_tol) {
              const auto spec = pc::hermitian4_eigenvalues(to_mat4(m4), herm_tol);
              return std::vector<double>(spec.eigenvalues.begin(), spec.eigenvalues.end());
          },
          py::arg("matrix"), py::arg("herm_tol") = pc::kDefaultTol.hermiticity4,
          "Ascending eigenvalues of a 4x4 Hermitian matrix");
    m.def("generator_action",
          [](double gp, double gm, double g3, const PyMat& x) {
              return from_mat2(pc::generator_action(gp, gm, g3, to_mat2(x)));
          },
          py::arg("gamma_plus"), py::arg("gamma_minus"), py::arg("gamma3"), py::arg("x"));

    py::class_<pc::TimeGrid>(m, "TimeGrid")
        .def(py::init(&pc::TimeGrid::uniform), py::arg("t_max"), py::arg("n_points"))
        .def_readonly("t_max", &pc::TimeGrid::t_max)
        .def_readonly("n_points", &pc::TimeGrid::n_points)
        .def("step", &pc::TimeGrid::step)
        .def("points", &pc::TimeGrid::points);

    py::class_<pc::EigenvalueTrajectory>(m, "EigenvalueTrajectory")
        .def(py::init([](const pc::TimeGrid& grid, std::vector<double> l1, std::vector<double> l3,
                         std::vector<double> ls) {
                 const auto n = static_cast<std::size_t>(grid.n_points);
                 if (l1.size() != n || l3.size() != n || ls.size() != n) {
                     throw std::invalid_argument("sample counts must match the grid");
                 }
                 pc::EigenvalueTrajectory t;
                 t.grid = grid;
                 t.lambda1 = std::move(l1);
                 t.lambda3 = std::move(l3);
                 t.lambda_star = std::move(ls);
                 return t;
             }),
             py::arg("grid"), py::arg("lambda1"), py::arg("lambda3"), py::arg("lambda_star"))
        .def_readonly("grid", &pc::EigenvalueTrajectory::grid)
        .def_readonly("lambda1", &pc::EigenvalueTrajectory::lambda1)
        .def_readonly("lambda3", &pc::EigenvalueTrajectory::lambda3)
        .def_readonly("lambda_star", &pc::EigenvalueTrajectory::lambda_star);

    py::class_<pc::RateTrajectory>(m, "RateTrajectory")
        .def(py::init([](const pc::TimeGrid& grid, std::vector<double> gp, std::vector<double> gm,
                         std::vector<double> g3) {
                 const auto n = static_cast<std::size_t>(grid.n_points);
                 if (gp.size() != n || gm.size() != n || g3.size() != n) {
                     throw std::invalid_argument("sample counts must match the grid");
                 }
                 pc::RateTrajectory t;
                 t.grid = grid;
                 t.gamma_plus = std::move(gp);
                 t.gamma_minus = std::move(gm);
                 t.gamma3 = std::move(g3);
                 return t;
             }),
             py::arg("grid"), py::arg("gamma_plus"), py::arg("gamma_minus"), py::arg("gamma3"))
        .def_readonly("grid", &pc::RateTrajectory::grid)
        .def_readonly("gamma_plus", &pc::RateTrajectory::gamma_plus)
        .def_readonly("gamma_minus", &pc::RateTrajectory::gamma_minus)
        .def_readonly("gamma3", &pc::RateTrajectory::gamma3);

    m.def("channel_at", &pc::channel_at, py::arg("trajectory"), py::arg("i"));
    m.def("semigroup_channel_at", &pc::semigroup_channel_at, py::arg("gamma_plus"),
          py::arg("gamma_minus"), py::arg("gamma3"), py::arg("t"));
    m.def("semigroup_trajectory", &pc::semigroup_trajectory, py::arg("gamma_plus"),
          py::arg("gamma_minus"), py::arg("gamma3"), py::arg("grid"));
    m.def("eigenvalues_from_rates", &pc::eigenvalues_from_rates, py::arg("rates"));

    py::class_<pc::RateReconstruction>(m, "RateReconstruction")
        .def_readonly("rates", &pc::RateReconstruction::rates)
        .def_readonly("singular_indices", &pc::RateReconstruction::singular_indices)
        .def_readonly("excluded_indices", &pc::RateReconstruction::excluded_indices);
    m.def("rates_from_eigenvalues", &pc::rates_from_eigenvalues, py::arg("trajectory"),
          py::arg("singular_tol") = pc::kDefaultTol.singularity);

    m.def("propagator", &pc::propagator, py::arg("trajectory"), py::arg("t"), py::arg("s"),
          py::arg("singular_tol") = pc::kDefaultTol.singularity);

    py::enum_<pc::DivisibilityMethod>(m, "DivisibilityMethod")
        .value("RateSign", pc::DivisibilityMethod::RateSign)
        .value("ChoiPropagator", pc::DivisibilityMethod::ChoiPropagator);
    py::class_<pc::DivisibilityReport>(m, "DivisibilityReport")
        .def_readonly("cp_divisible", &pc::DivisibilityReport::cp_divisible)
        .def_readonly("first_violation_time", &pc::DivisibilityReport::first_violation_time)
        .def_readonly("min_rate", &pc::DivisibilityReport::min_rate)
        .def_readonly("method", &pc::DivisibilityReport::method)
        .def_readonly("excluded_times", &pc::DivisibilityReport::excluded_times);
    m.def("is_cp_divisible", &pc::is_cp_divisible, py::arg("rates"),
          py::arg("tol") = pc::kDefaultTol.rate_sign);
    m.def("cp_divisibility_via_choi", &pc::cp_divisibility_via_choi, py::arg("trajectory"),
          py::arg("tol") = pc::kDefaultTol.cp,
          py::arg("singular_tol") = pc::kDefaultTol.singularity);

    py::class_<pc::CommutativityReport>(m, "CommutativityReport")
        .def_readonly("commutative", &pc::CommutativityReport::commutative)
        .def_readonly("max_defect", &pc::CommutativityReport::max_defect);
    m.def("is_commutative_family", &pc::is_commutative_family, py::arg("trajectory"),
          py::arg("tol") = pc::kDefaultTol.commutativity);

    py::class_<pc::SemigroupMixtureSpec>(m, "SemigroupMixtureSpec")
        .def(py::init([](const std::array<double, 3>& weights, const std::array<double, 3>& rates) {
                 pc::SemigroupMixtureSpec spec;
                 spec.weights = weights;
                 spec.rates = rates;
                 spec.validate();
                 return spec;
             }),
             py::arg("weights"), py::arg("rates"))
        .def_readonly("weights", &pc::SemigroupMixtureSpec::weights)
        .def_readonly("rates", &pc::SemigroupMixtureSpec::rates);
    m.def("semigroup_mixture_channel_at", &pc::semigroup_mixture_channel_at, py::arg("spec"),
          py::arg("t"));
    m.def("semigroup_mixture_eigenvalues", &pc::semigroup_mixture_eigenvalues, py::arg("spec"),
          py::arg("grid"));
    m.def("semigroup_mixture_rates", &pc::semigroup_mixture_rates, py::arg("spec"),
          py::arg("grid"));

    py::class_<pc::Prop2Report>(m, "Prop2Report")
        .def_readonly("divisibility", &pc::Prop2Report::divisibility)
        .def_readonly("max_identity_residual", &pc::Prop2Report::max_identity_residual)
        .def_readonly("identity_ok", &pc::Prop2Report::identity_ok);
    m.def("verify_prop2", &pc::verify_prop2, py::arg("spec"), py::arg("grid"),
          py::arg("rate_tol") = pc::kDefaultTol.rate_sign,
          py::arg("identity_tol") = pc::kDefaultTol.identity_residual);

    m.def("eta_exp",
          [](double w, const pc::TimeGrid& grid) {
              return pc::sample_eta(pc::EtaForm{pc::EtaForm::Kind::Exp, w}, grid).samples;
          },
          py::arg("w"), py::arg("grid"), "Samples of e^{-w t}");
    m.def("eta_exp_cos",
          [](double w, const pc::TimeGrid& grid) {
              return pc::sample_eta(pc::EtaForm{pc::EtaForm::Kind::ExpCos, w}, grid).samples;
          },
          py::arg("w"), py::arg("grid"), "Samples of e^{-w t} cos(w t)");

    py::class_<pc::EtaFamilyMixtureSpec>(m, "EtaFamilyMixtureSpec")
        .def(py::init(&make_eta_spec), py::arg("weights"), py::arg("eta_samples"), py::arg("grid"))
        .def_readonly("weights", &pc::EtaFamilyMixtureSpec::weights)
        .def_readonly("grid", &pc::EtaFamilyMixtureSpec::grid);
    m.def("eta_mixture_eigenvalues", &pc::eta_mixture_eigenvalues, py::arg("spec"));

    py::class_<pc::InvertibilityReport>(m, "InvertibilityReport")
        .def_readonly("invertible", &pc::InvertibilityReport::invertible)
        .def_property_readonly("zero_crossings", [](const pc::InvertibilityReport& rep) {
            std::vector<std::tuple<std::string, double, double>> out;
            for (const auto& c : rep.zero_crossings) {
                out.emplace_back(c.which == pc::ZeroCrossing::Which::Lambda1 ? "lambda1"
                                                                             : "lambda3",
                                 c.t_lo, c.t_hi);
            }
            return out;
        });
    m.def("invertibility_report", &pc::invertibility_report, py::arg("trajectory"),
          py::arg("tol") = pc::kDefaultTol.singularity);
    m.def("unitality_defect", &pc::unitality_defect, py::arg("trajectory"));

    py::class_<pc::EqualEtaRates>(m, "EqualEtaRates")
        .def_readonly("rates", &pc::EqualEtaRates::rates)
        .def_readonly("singular_indices", &pc::EqualEtaRates::singular_indices);
    m.def("equal_eta_rates",
          [](const std::array<double, 3>& weights, const std::vector<double>& eta,
             const pc::TimeGrid& grid, const std::optional<std::vector<double>>& eta_dot) {
              return pc::equal_eta_rates(weights, eta, eta_dot ? &*eta_dot : nullptr, grid);
          },
          py::arg("weights"), py::arg("eta"), py::arg("grid"),
          py::arg("eta_dot") = std::nullopt);

    py::class_<pc::CommutativityFit>(m, "CommutativityFit")
        .def_readonly("a", &pc::CommutativityFit::a)
        .def_readonly("max_residual", &pc::CommutativityFit::max_residual)
        .def_readonly("commutative", &pc::CommutativityFit::commutative);
    m.def("commutativity_fit", &pc::commutativity_fit, py::arg("eta1"), py::arg("eta2"),
          py::arg("grid"), py::arg("tol") = pc::kDefaultTol.commutativity);

    py::class_<pc::RecoveryVerdict>(m, "RecoveryVerdict")
        .def_readonly("feasible", &pc::RecoveryVerdict::feasible)
        .def_readonly("eta_solutions", &pc::RecoveryVerdict::eta_solutions)
        .def_readonly("failure_reason", &pc::RecoveryVerdict::failure_reason);
    m.def("semigroup_recovery",
          [](const std::array<double, 3>& weights, double gp, double gm, double g3,
             const pc::TimeGrid& grid) {
              return pc::semigroup_recovery(weights, gp, gm, g3, grid);
          },
          py::arg("weights"), py::arg("gamma_plus"), py::arg("gamma_minus"), py::arg("gamma3"),
          py::arg("grid"));

    m.def("mix_trajectories",
          [](const std::vector<pc::EigenvalueTrajectory>& components,
             const std::vector<double>& weights) {
              return pc::mix_trajectories(components, weights);
          },
          py::arg("components"), py::arg("weights"));

    m.def("preset_trajectory",
          [](const std::string& name, const pc::TimeGrid& grid) {
              return pc::preset_trajectory(name, grid);
          },
          py::arg("name"), py::arg("grid"));
    m.def("preset_names", [] { return pc::preset_names(); });
    m.def("exmsg_spec", &pc::exmsg_spec);
}
