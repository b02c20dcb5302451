#pragma once

#include <array>
#include <complex>

#include "phasecov/tolerances.hpp"

namespace phasecov {

using Complex = std::complex<double>;

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
    std::array<Complex, 4> e{};

    Complex& operator()(int r, int c) { return e[2 * r + c]; }
    const Complex& operator()(int r, int c) const { return e[2 * r + c]; }
};

Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex s, const Mat2& a);
Mat2 operator*(double s, const Mat2& a);

Mat2 adjoint(const Mat2& a);
Complex trace(const Mat2& a);
/// Largest |entry|.
double max_abs(const Mat2& a);
/// Largest |entry| of A - A's adjoint; zero for Hermitian input.
double hermiticity_defect(const Mat2& a);

Mat2 identity2();
Mat2 sigma1();
Mat2 sigma2();
Mat2 sigma3();
Mat2 sigma_plus();   // |0><1|
Mat2 sigma_minus();  // |1><0|
Mat2 projector0();   // |0><0|
Mat2 projector1();   // |1><1|

/// Affine coordinates of a Hermitian operator: (tr X, tr s1 X, tr s2 X, tr s3 X).
struct BlochVector {
    double trace_part = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double b3 = 0.0;
};

/// Throws std::invalid_argument when X is not Hermitian within herm_tol.
BlochVector to_bloch(const Mat2& x, double herm_tol = kDefaultTol.hermiticity2);
/// X = (trace_part*I + b1*s1 + b2*s2 + b3*s3) / 2; exact inverse of to_bloch.
Mat2 from_bloch(const BlochVector& v);

/// 4x4 real matrix acting on (trace_part, b1, b2, b3).
struct AffineSuperop {
    std::array<double, 16> m{};

    double& operator()(int r, int c) { return m[4 * r + c]; }
    const double& operator()(int r, int c) const { return m[4 * r + c]; }

    static AffineSuperop identity();
    /// Trace preservation is equivalent to the first row being (1, 0, 0, 0).
    bool is_trace_preserving(double tol = kDefaultTol.hermiticity2) const;
};

AffineSuperop operator*(const AffineSuperop& a, const AffineSuperop& b);
BlochVector apply_superop(const AffineSuperop& s, const BlochVector& v);

/// Dense 4x4 complex matrix, row-major.
struct Mat4 {
    std::array<Complex, 16> e{};

    Complex& operator()(int r, int c) { return e[4 * r + c]; }
    const Complex& operator()(int r, int c) const { return e[4 * r + c]; }
};

Complex trace(const Mat4& a);
double max_abs(const Mat4& a);
double hermiticity_defect(const Mat4& a);

/// Eigenvalues of a 4x4 Hermitian matrix, ascending.
struct Hermitian4Spectrum {
    std::array<double, 4> eigenvalues{};
};

/// Full eigensystem; column k of eigenvectors pairs with eigenvalues[k].
struct Hermitian4Eigensystem {
    std::array<double, 4> eigenvalues{};
    Mat4 eigenvectors;
};

/// Cyclic complex Jacobi rotations; throws std::invalid_argument when the
/// input fails the Hermiticity check.
Hermitian4Eigensystem hermitian4_eigensystem(const Mat4& m,
                                             double herm_tol = kDefaultTol.hermiticity4);
Hermitian4Spectrum hermitian4_eigenvalues(const Mat4& m,
                                          double herm_tol = kDefaultTol.hermiticity4);

}  // namespace phasecov
