#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "phasecov/qubit_algebra.hpp"
#include "phasecov/sampling.hpp"

using namespace phasecov;

namespace {

Mat4 random_hermitian4(SampleStream& stream, double scale = 1.0) {
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
        m(r, r) = stream.uniform(-scale, scale);
        for (int c = r + 1; c < 4; ++c) {
            const Complex z(stream.uniform(-scale, scale), stream.uniform(-scale, scale));
            m(r, c) = z;
            m(c, r) = std::conj(z);
        }
    }
    return m;
}

// Gram-Schmidt on random complex columns.
Mat4 random_unitary4(SampleStream& stream) {
    Mat4 u;
    for (int c = 0; c < 4; ++c) {
        std::array<Complex, 4> col;
        for (int r = 0; r < 4; ++r) {
            col[r] = Complex(stream.uniform(-1.0, 1.0), stream.uniform(-1.0, 1.0));
        }
        for (int prev = 0; prev < c; ++prev) {
            Complex overlap = 0.0;
            for (int r = 0; r < 4; ++r) overlap += std::conj(u(r, prev)) * col[r];
            for (int r = 0; r < 4; ++r) col[r] -= overlap * u(r, prev);
        }
        double norm = 0.0;
        for (int r = 0; r < 4; ++r) norm += std::norm(col[r]);
        norm = std::sqrt(norm);
        for (int r = 0; r < 4; ++r) u(r, c) = col[r] / norm;
    }
    return u;
}

Mat4 conjugate(const Mat4& u, const Mat4& m) {
    Mat4 um;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            Complex acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += u(r, k) * m(k, c);
            um(r, c) = acc;
        }
    Mat4 out;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            Complex acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += um(r, k) * std::conj(u(c, k));
            out(r, c) = acc;
        }
    return out;
}

// Choi-shaped matrix: diagonal from (l3, ls), corners l1.
Mat4 choi_form(double l1, double l3, double ls) {
    Mat4 c;
    c(0, 0) = 0.5 * (1.0 + ls + l3);
    c(1, 1) = 0.5 * (1.0 - ls - l3);
    c(2, 2) = 0.5 * (1.0 + ls - l3);
    c(3, 3) = 0.5 * (1.0 - ls + l3);
    c(0, 3) = l1;
    c(3, 0) = l1;
    return c;
}

// Independent spectrum of choi_form from its 2x2 blocks.
std::array<double, 4> choi_block_spectrum(double l1, double l3, double ls) {
    const double mid_lo = 0.5 * (1.0 - l3 - ls);
    const double mid_hi = 0.5 * (1.0 - l3 + ls);
    const double mean = 0.5 * (1.0 + l3);
    const double radius = std::sqrt(0.25 * ls * ls + l1 * l1);
    std::array<double, 4> ev{mid_lo, mid_hi, mean - radius, mean + radius};
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace

TEST_CASE("to_bloch on basis operators") {
    const BlochVector id = to_bloch(identity2());
    CHECK(id.trace_part == doctest::Approx(2.0));
    CHECK(id.b1 == 0.0);
    CHECK(id.b2 == 0.0);
    CHECK(id.b3 == 0.0);

    const BlochVector p0 = to_bloch(projector0());
    CHECK(p0.trace_part == doctest::Approx(1.0));
    CHECK(p0.b3 == doctest::Approx(1.0));
    CHECK(p0.b1 == 0.0);
    CHECK(p0.b2 == 0.0);

    const BlochVector s1 = to_bloch(sigma1());
    CHECK(s1.trace_part == 0.0);
    CHECK(s1.b1 == doctest::Approx(2.0));
    CHECK(s1.b2 == 0.0);
    CHECK(s1.b3 == 0.0);
}

TEST_CASE("from_bloch on basis vectors") {
    CHECK(max_abs(from_bloch(BlochVector{2, 0, 0, 0}) - identity2()) == 0.0);
    CHECK(max_abs(from_bloch(BlochVector{1, 0, 0, 1}) - projector0()) == 0.0);
    CHECK(max_abs(from_bloch(BlochVector{0, 0, 2, 0}) - sigma2()) == 0.0);
}

TEST_CASE("bloch round trip is exact to 1e-14") {
    SampleStream stream(11);
    for (int i = 0; i < 200; ++i) {
        const BlochVector v{stream.uniform(-3, 3), stream.uniform(-3, 3), stream.uniform(-3, 3),
                            stream.uniform(-3, 3)};
        const BlochVector w = to_bloch(from_bloch(v));
        CHECK(std::abs(w.trace_part - v.trace_part) <= 1e-14);
        CHECK(std::abs(w.b1 - v.b1) <= 1e-14);
        CHECK(std::abs(w.b2 - v.b2) <= 1e-14);
        CHECK(std::abs(w.b3 - v.b3) <= 1e-14);
    }
}

TEST_CASE("to_bloch rejects non-Hermitian input") {
    Mat2 bad;
    bad(0, 1) = 1.0;  // adjoint entry missing
    CHECK_THROWS_AS(to_bloch(bad), std::invalid_argument);
}

TEST_CASE("hermitian4 eigenvalues on diagonal input") {
    Mat4 m;
    m(3, 3) = 2.0;
    const auto ev = hermitian4_eigenvalues(m).eigenvalues;
    CHECK(std::abs(ev[0]) <= 1e-15);
    CHECK(std::abs(ev[1]) <= 1e-15);
    CHECK(std::abs(ev[2]) <= 1e-15);
    CHECK(ev[3] == doctest::Approx(2.0));
}

TEST_CASE("hermitian4 eigenvalues of the identity-channel Choi form") {
    const auto ev = hermitian4_eigenvalues(choi_form(1.0, 1.0, 0.0)).eigenvalues;
    CHECK(std::abs(ev[0]) <= 1e-12);
    CHECK(std::abs(ev[1]) <= 1e-12);
    CHECK(std::abs(ev[2]) <= 1e-12);
    CHECK(ev[3] == doctest::Approx(2.0));
}

TEST_CASE("boundary channel Choi form has min eigenvalue 0") {
    // lambda1 = sqrt(1/2) puts the corner block exactly on the positivity
    // boundary; the five-digit rounding 0.70711 would not.
    const auto ev = hermitian4_eigenvalues(choi_form(std::sqrt(0.5), 0.5, 0.5)).eigenvalues;
    CHECK(std::abs(ev[0]) <= 1e-9);
}

TEST_CASE("eigensolver matches the closed-form block spectrum") {
    SampleStream stream(12);
    for (int i = 0; i < 500; ++i) {
        const double l1 = stream.uniform(-1.5, 1.5);
        const double l3 = stream.uniform(-1.5, 1.5);
        const double ls = stream.uniform(-1.5, 1.5);
        const auto got = hermitian4_eigenvalues(choi_form(l1, l3, ls)).eigenvalues;
        const auto want = choi_block_spectrum(l1, l3, ls);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-12);
    }
}

TEST_CASE("spectrum is invariant under unitary conjugation") {
    SampleStream stream(13);
    for (int i = 0; i < 100; ++i) {
        const Mat4 m = random_hermitian4(stream, 2.0);
        const Mat4 u = random_unitary4(stream);
        const auto a = hermitian4_eigenvalues(m).eigenvalues;
        const auto b = hermitian4_eigenvalues(conjugate(u, m)).eigenvalues;
        for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-9);
    }
}

TEST_CASE("eigenpairs satisfy the residual bound") {
    SampleStream stream(14);
    for (int i = 0; i < 100; ++i) {
        const Mat4 m = random_hermitian4(stream, 3.0);
        const auto sys = hermitian4_eigensystem(m);
        const double scale = max_abs(m);
        for (int k = 0; k < 4; ++k) {
            for (int r = 0; r < 4; ++r) {
                Complex mv = 0.0;
                for (int c = 0; c < 4; ++c) mv += m(r, c) * sys.eigenvectors(c, k);
                const Complex residual = mv - sys.eigenvalues[k] * sys.eigenvectors(r, k);
                CHECK(std::abs(residual) <= 1e-9 * std::max(scale, 1.0));
            }
        }
        CHECK(std::abs(trace(m).real() - (sys.eigenvalues[0] + sys.eigenvalues[1] +
                                          sys.eigenvalues[2] + sys.eigenvalues[3])) <= 1e-10);
    }
}

TEST_CASE("eigensolver rejects non-Hermitian input") {
    Mat4 bad;
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian4_eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("apply_superop basics") {
    const AffineSuperop id = AffineSuperop::identity();
    const BlochVector v{0.3, -1.0, 0.7, 2.0};
    const BlochVector w = apply_superop(id, v);
    CHECK(w.trace_part == v.trace_part);
    CHECK(w.b1 == v.b1);
    CHECK(w.b2 == v.b2);
    CHECK(w.b3 == v.b3);

    AffineSuperop ch;
    ch(0, 0) = 1.0;
    ch(1, 1) = 0.4;
    ch(2, 2) = 0.4;
    ch(3, 3) = 0.9;
    ch(3, 0) = 0.05;
    const BlochVector out = apply_superop(ch, BlochVector{1, 0, 0, 0});
    CHECK(out.trace_part == doctest::Approx(1.0));
    CHECK(out.b3 == doctest::Approx(0.05));
    CHECK(ch.is_trace_preserving());
}

TEST_CASE("superop product agrees with sequential application") {
    SampleStream stream(15);
    for (int i = 0; i < 100; ++i) {
        AffineSuperop a;
        AffineSuperop b;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                a(r, c) = stream.uniform(-1, 1);
                b(r, c) = stream.uniform(-1, 1);
            }
        const BlochVector v{stream.uniform(-1, 1), stream.uniform(-1, 1), stream.uniform(-1, 1),
                            stream.uniform(-1, 1)};
        const BlochVector lhs = apply_superop(a * b, v);
        const BlochVector rhs = apply_superop(a, apply_superop(b, v));
        CHECK(std::abs(lhs.trace_part - rhs.trace_part) <= 1e-12);
        CHECK(std::abs(lhs.b1 - rhs.b1) <= 1e-12);
        CHECK(std::abs(lhs.b2 - rhs.b2) <= 1e-12);
        CHECK(std::abs(lhs.b3 - rhs.b3) <= 1e-12);
    }
}
