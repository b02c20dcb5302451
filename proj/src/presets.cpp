#include "phasecov/presets.hpp"

#include <stdexcept>
#include <string>

namespace phasecov {

SemigroupMixtureSpec exmsg_spec() {
    SemigroupMixtureSpec spec;
    spec.weights = {0.3, 0.7, 0.0};
    spec.rates = {1.0, 1.0, 1.0};
    return spec;
}

std::array<EtaForm, 3> example2_forms() {
    return {EtaForm{EtaForm::Kind::ExpCos, 1.0}, EtaForm{EtaForm::Kind::Exp, 1.0},
            EtaForm{EtaForm::Kind::Exp, 1.0}};
}

EtaFamilyMixtureSpec example2_spec(const TimeGrid& grid) {
    EtaFamilyMixtureSpec spec;
    spec.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    spec.grid = grid;
    const auto forms = example2_forms();
    for (int k = 0; k < 3; ++k) spec.eta[k] = sample_eta(forms[k], grid);
    return spec;
}

EigenvalueTrajectory preset_trajectory(std::string_view name, const TimeGrid& grid) {
    if (name == "amplitude-damping") return semigroup_trajectory(1.0, 0.0, 0.0, grid);
    if (name == "inverse-amplitude-damping") return semigroup_trajectory(0.0, 1.0, 0.0, grid);
    if (name == "pure-dephasing") return semigroup_trajectory(0.0, 0.0, 1.0, grid);
    if (name == "example-1") {
        const EigenvalueTrajectory components[] = {semigroup_trajectory(1.0, 0.0, 0.0, grid),
                                                   semigroup_trajectory(0.0, 1.0, 0.0, grid)};
        const double weights[] = {0.5, 0.5};
        return mix_trajectories(components, weights);
    }
    if (name == "example-2") return eta_mixture_eigenvalues(example2_spec(grid));
    if (name == "exmsg") return semigroup_mixture_eigenvalues(exmsg_spec(), grid);
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{
        "amplitude-damping", "inverse-amplitude-damping", "pure-dephasing",
        "example-1",         "example-2",                 "exmsg"};
    return names;
}

}  // namespace phasecov
