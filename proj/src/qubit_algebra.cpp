#include "phasecov/qubit_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phasecov {

Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

Mat2 operator*(Complex s, const Mat2& a) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.e[i] = s * a.e[i];
    return r;
}

Mat2 operator*(double s, const Mat2& a) { return Complex(s, 0.0) * a; }

Mat2 adjoint(const Mat2& a) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = std::conj(a(j, i));
    return r;
}

Complex trace(const Mat2& a) { return a(0, 0) + a(1, 1); }

double max_abs(const Mat2& a) {
    double m = 0.0;
    for (const auto& z : a.e) m = std::max(m, std::abs(z));
    return m;
}

double hermiticity_defect(const Mat2& a) { return max_abs(a - adjoint(a)); }

Mat2 identity2() {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    return m;
}

Mat2 sigma1() {
    Mat2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Mat2 sigma2() {
    Mat2 m;
    m(0, 1) = Complex(0.0, -1.0);
    m(1, 0) = Complex(0.0, 1.0);
    return m;
}

Mat2 sigma3() {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Mat2 sigma_plus() {
    Mat2 m;
    m(0, 1) = 1.0;
    return m;
}

Mat2 sigma_minus() {
    Mat2 m;
    m(1, 0) = 1.0;
    return m;
}

Mat2 projector0() {
    Mat2 m;
    m(0, 0) = 1.0;
    return m;
}

Mat2 projector1() {
    Mat2 m;
    m(1, 1) = 1.0;
    return m;
}

BlochVector to_bloch(const Mat2& x, double herm_tol) {
    const double defect = hermiticity_defect(x);
    if (defect > herm_tol) {
        throw std::invalid_argument("to_bloch: input is not Hermitian (defect " +
                                    std::to_string(defect) + ")");
    }
    BlochVector v;
    v.trace_part = (x(0, 0) + x(1, 1)).real();
    v.b1 = (x(0, 1) + x(1, 0)).real();
    v.b2 = (Complex(0.0, 1.0) * (x(0, 1) - x(1, 0))).real();
    v.b3 = (x(0, 0) - x(1, 1)).real();
    return v;
}

Mat2 from_bloch(const BlochVector& v) {
    Mat2 m;
    m(0, 0) = 0.5 * (v.trace_part + v.b3);
    m(1, 1) = 0.5 * (v.trace_part - v.b3);
    m(0, 1) = 0.5 * Complex(v.b1, -v.b2);
    m(1, 0) = 0.5 * Complex(v.b1, v.b2);
    return m;
}

AffineSuperop AffineSuperop::identity() {
    AffineSuperop s;
    for (int i = 0; i < 4; ++i) s(i, i) = 1.0;
    return s;
}

bool AffineSuperop::is_trace_preserving(double tol) const {
    const AffineSuperop& s = *this;
    return std::abs(s(0, 0) - 1.0) <= tol && std::abs(s(0, 1)) <= tol &&
           std::abs(s(0, 2)) <= tol && std::abs(s(0, 3)) <= tol;
}

AffineSuperop operator*(const AffineSuperop& a, const AffineSuperop& b) {
    AffineSuperop r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += a(i, k) * b(k, j);
            r(i, j) = acc;
        }
    return r;
}

BlochVector apply_superop(const AffineSuperop& s, const BlochVector& v) {
    const std::array<double, 4> in{v.trace_part, v.b1, v.b2, v.b3};
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) out[i] += s(i, k) * in[k];
    return BlochVector{out[0], out[1], out[2], out[3]};
}

Complex trace(const Mat4& a) { return a(0, 0) + a(1, 1) + a(2, 2) + a(3, 3); }

double max_abs(const Mat4& a) {
    double m = 0.0;
    for (const auto& z : a.e) m = std::max(m, std::abs(z));
    return m;
}

double hermiticity_defect(const Mat4& a) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
    return d;
}

namespace {

// One complex Jacobi rotation zeroing a(p,q). The unitary is the real Givens
// rotation composed with the phase that makes a(p,q) real, so the classical
// convergence argument for symmetric Jacobi applies unchanged.
void jacobi_rotate(Mat4& a, Mat4& v, int p, int q) {
    const Complex apq = a(p, q);
    const double absb = std::abs(apq);
    if (absb == 0.0) return;

    const Complex phase = apq / absb;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * absb);
    const double t = (tau >= 0.0) ? 1.0 / (tau + std::hypot(1.0, tau))
                                  : -1.0 / (-tau + std::hypot(1.0, tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Complex sphase = s * std::conj(phase);

    for (int k = 0; k < 4; ++k) {
        if (k == p || k == q) continue;
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp - sphase * akq;
        a(k, q) = s * akp + c * std::conj(phase) * akq;
        a(p, k) = std::conj(a(k, p));
        a(q, k) = std::conj(a(k, q));
    }
    a(p, p) = app - t * absb;
    a(q, q) = aqq + t * absb;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (int k = 0; k < 4; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp - sphase * vkq;
        v(k, q) = s * vkp + c * std::conj(phase) * vkq;
    }
}

double off_diagonal_norm(const Mat4& a) {
    double acc = 0.0;
    for (int p = 0; p < 4; ++p)
        for (int q = p + 1; q < 4; ++q) acc += std::norm(a(p, q));
    return std::sqrt(acc);
}

}  // namespace

Hermitian4Eigensystem hermitian4_eigensystem(const Mat4& m, double herm_tol) {
    const double defect = hermiticity_defect(m);
    if (defect > herm_tol) {
        throw std::invalid_argument("hermitian4_eigensystem: input is not Hermitian (defect " +
                                    std::to_string(defect) + ")");
    }

    // Symmetrize to remove the sub-tolerance asymmetry before iterating.
    Mat4 a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    Mat4 v;
    for (int i = 0; i < 4; ++i) v(i, i) = 1.0;

    const double scale = std::max(max_abs(a), 1e-300);
    for (int sweep = 0; sweep < 50; ++sweep) {
        if (off_diagonal_norm(a) <= 1e-15 * scale) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) jacobi_rotate(a, v, p, q);
    }

    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&a](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    Hermitian4Eigensystem out;
    for (int k = 0; k < 4; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (int r = 0; r < 4; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

Hermitian4Spectrum hermitian4_eigenvalues(const Mat4& m, double herm_tol) {
    return Hermitian4Spectrum{hermitian4_eigensystem(m, herm_tol).eigenvalues};
}

}  // namespace phasecov
