#pragma once

#include <iosfwd>
#include <string>

#include "phasecov/dynamics.hpp"

namespace phasecov {

/// Shortest decimal form that round-trips a 64-bit float (printf %.17g).
std::string format_g17(double v);

/// Header "t,lambda1,lambda3,lambda_star", one row per grid point.
void write_eigenvalue_csv(std::ostream& os, const EigenvalueTrajectory& traj);
/// Header "t,gamma_plus,gamma_minus,gamma3", one row per grid point.
void write_rate_csv(std::ostream& os, const RateTrajectory& rates);

/// Parsers validate the header, a uniform time column starting at 0, and at
/// least 3 rows; they throw std::invalid_argument on malformed input.
EigenvalueTrajectory read_eigenvalue_csv(std::istream& is);
RateTrajectory read_rate_csv(std::istream& is);

}  // namespace phasecov
