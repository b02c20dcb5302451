#include "phasecov/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace phasecov {

Mat2 apply(const PhaseCovariantChannel& ch, const Mat2& x) {
    const Complex tr = trace(x);
    const Complex t1 = trace(sigma1() * x);
    const Complex t2 = trace(sigma2() * x);
    const Complex t3 = trace(sigma3() * x);

    Mat2 out = tr * identity2() + (ch.lambda_star * tr) * sigma3();
    out = out + (ch.lambda1 * t1) * sigma1() + (ch.lambda1 * t2) * sigma2() +
          (ch.lambda3 * t3) * sigma3();
    return 0.5 * out;
}

BlochVector apply(const PhaseCovariantChannel& ch, const BlochVector& v) {
    return BlochVector{v.trace_part, ch.lambda1 * v.b1, ch.lambda1 * v.b2,
                       ch.lambda3 * v.b3 + ch.lambda_star * v.trace_part};
}

AffineSuperop to_superop(const PhaseCovariantChannel& ch) {
    AffineSuperop s;
    s(0, 0) = 1.0;
    s(1, 1) = ch.lambda1;
    s(2, 2) = ch.lambda1;
    s(3, 3) = ch.lambda3;
    s(3, 0) = ch.lambda_star;
    return s;
}

Mat4 choi(const PhaseCovariantChannel& ch) {
    Mat4 c;
    c(0, 0) = 0.5 * (1.0 + ch.lambda_star + ch.lambda3);
    c(1, 1) = 0.5 * (1.0 - ch.lambda_star - ch.lambda3);
    c(2, 2) = 0.5 * (1.0 + ch.lambda_star - ch.lambda3);
    c(3, 3) = 0.5 * (1.0 - ch.lambda_star + ch.lambda3);
    c(0, 3) = ch.lambda1;
    c(3, 0) = ch.lambda1;
    return c;
}

CpReport is_completely_positive(const PhaseCovariantChannel& ch, double tol) {
    CpReport r;
    r.slack_trace = 1.0 - (std::abs(ch.lambda3) + std::abs(ch.lambda_star));
    const double lhs = 4.0 * ch.lambda1 * ch.lambda1 + ch.lambda_star * ch.lambda_star;
    const double rhs = (1.0 + ch.lambda3) * (1.0 + ch.lambda3);
    r.slack_block = rhs - lhs;
    r.completely_positive = r.slack_trace >= -tol && r.slack_block >= -tol;
    return r;
}

FixedPointState fixed_point(const PhaseCovariantChannel& ch) {
    if (ch.lambda3 == 1.0) {
        throw std::domain_error("degenerate fixed-point family");
    }
    const double z = ch.lambda_star / (1.0 - ch.lambda3);
    return FixedPointState{from_bloch(BlochVector{1.0, 0.0, 0.0, z})};
}

PhaseCovariantChannel compose(const PhaseCovariantChannel& a, const PhaseCovariantChannel& b) {
    return PhaseCovariantChannel{a.lambda1 * b.lambda1, a.lambda3 * b.lambda3,
                                 a.lambda_star + a.lambda3 * b.lambda_star};
}

PhaseCovariantChannel convex_mix(std::span<const PhaseCovariantChannel> channels,
                                 std::span<const double> weights, double weight_tol) {
    if (channels.empty() || channels.size() != weights.size()) {
        throw std::invalid_argument("convex_mix: need matching, nonempty channels and weights");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("convex_mix: weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > weight_tol) {
        throw std::invalid_argument("convex_mix: weights must sum to 1");
    }
    PhaseCovariantChannel out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < channels.size(); ++i) {
        out.lambda1 += weights[i] * channels[i].lambda1;
        out.lambda3 += weights[i] * channels[i].lambda3;
        out.lambda_star += weights[i] * channels[i].lambda_star;
    }
    return out;
}

bool is_unital(const PhaseCovariantChannel& ch, double tol) {
    return std::abs(ch.lambda_star) <= tol;
}

double covariance_defect(const PhaseCovariantChannel& ch, double phi, const Mat2& x) {
    Mat2 u;
    u(0, 0) = std::exp(Complex(0.0, -phi));
    u(1, 1) = std::exp(Complex(0.0, phi));
    const Mat2 udag = adjoint(u);
    const Mat2 lhs = apply(ch, u * x * udag);
    const Mat2 rhs = u * apply(ch, x) * udag;
    return max_abs(lhs - rhs);
}

}  // namespace phasecov
