#pragma once

#include <span>

#include "phasecov/qubit_algebra.hpp"
#include "phasecov/tolerances.hpp"

namespace phasecov {

/// Static phase-covariant qubit channel
///     L[X] = ((I + ls*s3) tr X + l1*s1 tr(s1 X) + l1*s2 tr(s2 X)
///             + l3*s3 tr(s3 X)) / 2.
/// Plain value record: no validity requirement at construction, so the CP
/// predicate can be probed over non-physical parameter regions.
struct PhaseCovariantChannel {
    double lambda1 = 1.0;
    double lambda3 = 1.0;
    double lambda_star = 0.0;
};

Mat2 apply(const PhaseCovariantChannel& ch, const Mat2& x);
BlochVector apply(const PhaseCovariantChannel& ch, const BlochVector& v);

/// Affine-superoperator form: diag(1, l1, l1, l3) with ls in entry (3, 0).
AffineSuperop to_superop(const PhaseCovariantChannel& ch);

/// Unnormalized Choi matrix sum_ij |i><j| (x) L[|i><j|]; trace 2.
Mat4 choi(const PhaseCovariantChannel& ch);

struct CpReport {
    bool completely_positive = false;
    /// 1 - (|l3| + |ls|); nonnegative within tolerance for CP channels.
    double slack_trace = 0.0;
    /// (1 + l3)^2 - (4 l1^2 + ls^2); nonnegative within tolerance for CP channels.
    double slack_block = 0.0;
};

/// Closed-form complete-positivity conditions. Boundary cases (slack in
/// [-tol, 0]) count as CP.
CpReport is_completely_positive(const PhaseCovariantChannel& ch, double tol = kDefaultTol.cp);

struct FixedPointState {
    Mat2 state;
};

/// The state preserved by the channel, (I + ls/(1-l3) s3) / 2. Throws
/// std::domain_error("degenerate fixed-point family") when l3 == 1.
FixedPointState fixed_point(const PhaseCovariantChannel& ch);

/// a after b. Closed form (l1a*l1b, l3a*l3b, lsa + l3a*lsb).
PhaseCovariantChannel compose(const PhaseCovariantChannel& a, const PhaseCovariantChannel& b);

/// Componentwise convex combination; the channel form is linear in its
/// parameters. Throws std::invalid_argument on an invalid weight vector.
PhaseCovariantChannel convex_mix(std::span<const PhaseCovariantChannel> channels,
                                 std::span<const double> weights,
                                 double weight_tol = kDefaultTol.weight_sum);

bool is_unital(const PhaseCovariantChannel& ch, double tol = kDefaultTol.unitality);

/// Max-abs entry norm of L[U X U+] - U L[X] U+ with U = exp(-i s3 phi).
/// Structurally zero for every channel of this family.
double covariance_defect(const PhaseCovariantChannel& ch, double phi, const Mat2& x);

}  // namespace phasecov
