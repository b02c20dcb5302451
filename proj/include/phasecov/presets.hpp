#pragma once

#include <string_view>
#include <vector>

#include "phasecov/mixtures.hpp"

namespace phasecov {

/// Generalized amplitude damping mixture: equal unit rates, weights
/// (0.3, 0.7, 0). Its generator has constant rates (0.6, 1.4, 0).
SemigroupMixtureSpec exmsg_spec();

/// Equal-weight mixture of a non-invertible emission component
/// (eta1 = e^{-t} cos t) with plain exponentials (eta2 = eta3 = e^{-t}).
EtaFamilyMixtureSpec example2_spec(const TimeGrid& grid);
std::array<EtaForm, 3> example2_forms();

/// Named eigenvalue trajectories runnable without hand-typed parameters:
/// amplitude-damping, inverse-amplitude-damping, pure-dephasing (unit-rate
/// semigroups), example-1 (mirrored-pair unital mixture), example-2, exmsg.
/// Throws std::invalid_argument for unknown names.
EigenvalueTrajectory preset_trajectory(std::string_view name, const TimeGrid& grid);
const std::vector<std::string>& preset_names();

}  // namespace phasecov
