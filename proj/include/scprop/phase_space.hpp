#pragma once

/*
 * phase_space.hpp — symplectic geometry of one-degree-of-freedom systems.
 *
 * Conventions used throughout the library:
 *
 *   phase-space point  x = (p, q), stored as a column 2-vector
 *   symplectic form    a ∧ b = P_a Q_b − Q_a P_b = (J a)·b
 *   symplectic matrix  J = [[0, −1], [1, 0]]
 *
 * From a symplectic monodromy matrix M (det M = 1) the whole matrix family
 * entering the Gaussian propagator algebra is derived:
 *
 *   B       Cayley form,      J B = (1 − M)(1 + M)^{-1},  B symmetric
 *   V       = C − iB          (C is the metric of the scalar product)
 *   Ṽ       = J^T V^{-1} J    = C̄ − i B̄   (equals V / det V for symmetric V)
 *   D       = (M+1)^{-T} B̄ (M+1)^{-1}
 *   E       = (M+1)^{-T} C̄ (M+1)^{-1}
 *
 * All quadratic forms transform by congruence A ↦ T^T A T under a basis
 * change x = T x'.  For a hyperbolic map the same family has closed forms in
 * the (ζ_u, ζ_s) eigenbasis, parametrised by tanh(λt/2) alone.
 */

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "scprop/errors.hpp"

namespace scprop {

using complexd = std::complex<double>;

// ── 2-vectors and 2×2 matrices ────────────────────────────────────────────

struct Vec2 {
    double p = 0.0;
    double q = 0.0;

    Vec2() = default;
    Vec2(double p_, double q_) : p(p_), q(q_) {}

    Vec2 operator+(const Vec2& o) const { return {p + o.p, q + o.q}; }
    Vec2 operator-(const Vec2& o) const { return {p - o.p, q - o.q}; }
    Vec2 operator-() const { return {-p, -q}; }
    Vec2 operator*(double s) const { return {p * s, q * s}; }
    friend Vec2 operator*(double s, const Vec2& v) { return v * s; }

    double dot(const Vec2& o) const { return p * o.p + q * o.q; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

using PhasePoint = Vec2;

// Integer lattice vector (windings, periodization images).
struct IVec2 {
    long long p = 0;
    long long q = 0;

    IVec2() = default;
    IVec2(long long p_, long long q_) : p(p_), q(q_) {}

    Vec2 to_vec2() const { return {double(p), double(q)}; }
    IVec2 operator+(const IVec2& o) const { return {p + o.p, q + o.q}; }
    IVec2 operator-(const IVec2& o) const { return {p - o.p, q - o.q}; }
    bool operator==(const IVec2& o) const { return p == o.p && q == o.q; }
};

// x ∧ x' = P Q' − Q P' = (J x)·x'
inline double wedge(const Vec2& a, const Vec2& b) { return a.p * b.q - a.q * b.p; }

struct Mat2 {
    // row-major: [[a, b], [c, d]] acting on column (p, q)
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
    // J = [[0, −1], [1, 0]]
    static Mat2 symplectic_j() { return {0.0, -1.0, 1.0, 0.0}; }

    Vec2 operator*(const Vec2& v) const { return {a * v.p + b * v.q, c * v.p + d * v.q}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    friend Mat2 operator*(double s, const Mat2& m) { return m * s; }

    Mat2 transpose() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    Mat2 inverse() const {
        const double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    // x^T A x
    double quad(const Vec2& x) const { return x.p * (a * x.p + b * x.q) + x.q * (c * x.p + d * x.q); }

    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    }
    double max_asym() const { return std::abs(b - c); }
};

struct Mat2c {
    complexd a{0.0}, b{0.0}, c{0.0}, d{0.0};

    Mat2c() = default;
    Mat2c(complexd a_, complexd b_, complexd c_, complexd d_) : a(a_), b(b_), c(c_), d(d_) {}
    Mat2c(const Mat2& re, const Mat2& im)
        : a(re.a, im.a), b(re.b, im.b), c(re.c, im.c), d(re.d, im.d) {}

    static Mat2c from_real(const Mat2& m) { return Mat2c(m, Mat2::zero()); }

    Mat2c operator*(const Mat2c& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2c operator+(const Mat2c& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2c operator-(const Mat2c& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2c operator*(complexd s) const { return {a * s, b * s, c * s, d * s}; }

    complexd det() const { return a * d - b * c; }
    Mat2c inverse() const {
        const complexd dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    Mat2c transpose() const { return {a, c, b, d}; }
    Mat2 real() const { return {a.real(), b.real(), c.real(), d.real()}; }
    Mat2 imag() const { return {a.imag(), b.imag(), c.imag(), d.imag()}; }

    complexd quad(const Vec2& x) const {
        return x.p * (a * x.p + b * x.q) + x.q * (c * x.p + d * x.q);
    }
    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    }
};

// ── Symplectic maps and hyperbolic frames ─────────────────────────────────

inline constexpr double kSymplecticTol = 1e-12;
inline constexpr double kCausticTol = 1e-12;

// Real 2×2 matrix with unit determinant.
struct SymplecticMap2 {
    Mat2 m;

    SymplecticMap2() : m(Mat2::identity()) {}
    explicit SymplecticMap2(const Mat2& mat) : m(mat) {
        if (std::abs(m.det() - 1.0) > kSymplecticTol * std::max(1.0, m.max_abs() * m.max_abs()))
            throw std::invalid_argument("SymplecticMap2: det != 1 (got " +
                                        std::to_string(m.det()) + ")");
    }
    SymplecticMap2(double a, double b, double c, double d) : SymplecticMap2(Mat2{a, b, c, d}) {}

    Vec2 operator*(const Vec2& v) const { return m * v; }
    SymplecticMap2 operator*(const SymplecticMap2& o) const { return SymplecticMap2(m * o.m); }
    SymplecticMap2 inverse() const { return SymplecticMap2(m.inverse()); }
};

// Unstable/stable eigendirections of a hyperbolic map, normalised to
// ζ_u ∧ ζ_s = 1, together with the Lyapunov exponent per unit time.
struct HyperbolicFrame {
    Vec2 zeta_u;
    Vec2 zeta_s;
    double lambda = 0.0;

    HyperbolicFrame(const Vec2& zu, const Vec2& zs, double lam)
        : zeta_u(zu), zeta_s(zs), lambda(lam) {
        if (std::abs(wedge(zeta_u, zeta_s) - 1.0) > 1e-12)
            throw std::invalid_argument("HyperbolicFrame: zeta_u ^ zeta_s != 1");
    }

    // Column matrix T = [ζ_u | ζ_s]; x_cart = T x_basis, det T = 1.
    Mat2 basis_matrix() const { return {zeta_u.p, zeta_s.p, zeta_u.q, zeta_s.q}; }
};

// ── Cayley form and metric ────────────────────────────────────────────────

// B with J B = (1 − M)(1 + M)^{-1}; symmetric for symplectic M.
inline Mat2 cayley_of(const SymplecticMap2& M) {
    const Mat2 one = Mat2::identity();
    const Mat2 mp1 = M.m + one;
    if (std::abs(mp1.det()) < kCausticTol)
        throw CausticError("cayley_of: det(M+1) = " + std::to_string(mp1.det()));
    const Mat2 jb = (one - M.m) * mp1.inverse();
    // B = J^{-1} (JB) = −J (JB)
    const Mat2 j = Mat2::symplectic_j();
    return (j * jb) * -1.0;
}

// Scalar-product matrix of the (ζ_u, ζ_s) basis; det C = 1 since the basis
// change from the orthonormal frame is symplectic.
inline Mat2 metric_of(const HyperbolicFrame& f) {
    const double uu = f.zeta_u.dot(f.zeta_u);
    const double ss = f.zeta_s.dot(f.zeta_s);
    const double us = f.zeta_u.dot(f.zeta_s);
    return {uu, us, us, ss};
}

// ── The full matrix family attached to one (M, C) pair ────────────────────

struct FrameMatrixSet {
    Mat2 C;            // metric of the scalar product in the working basis
    Mat2 B;            // Cayley form of M
    Mat2c V;           // V = C − iB
    double detV_mod;   // |det V|
    double epsilon;    // arg det V, principal value in (−π, π]
    Mat2 Cbar, Bbar;   // Ṽ = J^T V^{-1} J = C̄ − i B̄
    Mat2 D, E;         // (M+1)^{-T} B̄ (M+1)^{-1},  (M+1)^{-T} C̄ (M+1)^{-1}
    double detM1;      // |det(M + 1)|
    complexd detW;     // det[V (M+1)], never zero for one degree of freedom
};

namespace detail {

inline Mat2c jt_a_j(const Mat2c& A) {
    // J^T A J = [[a22, −a21], [−a12, a11]]
    return {A.d, -A.c, -A.b, A.a};
}

inline FrameMatrixSet assemble_set(const Mat2& C, const Mat2& B, const Mat2& mp1) {
    FrameMatrixSet s;
    s.C = C;
    s.B = B;
    s.V = Mat2c(C, B * -1.0);
    const complexd dv = s.V.det();
    if (std::abs(dv) < 1e-12)
        throw SingularVError("matrix set: det V = 0; input is not a valid (M, C) pair");
    s.detV_mod = std::abs(dv);
    s.epsilon = std::arg(dv);
    const Mat2c vtilde = jt_a_j(s.V.inverse());
    s.Cbar = vtilde.real();
    s.Bbar = vtilde.imag() * -1.0;
    const Mat2 mp1_inv = mp1.inverse();
    const Mat2 mp1_invT = mp1_inv.transpose();
    s.D = mp1_invT * s.Bbar * mp1_inv;
    s.E = mp1_invT * s.Cbar * mp1_inv;
    s.detM1 = std::abs(mp1.det());
    s.detW = dv * complexd(mp1.det(), 0.0);
    return s;
}

}  // namespace detail

// General construction, valid for any symplectic M with det(M+1) != 0.
// M and C must be expressed in the same coordinates.
inline FrameMatrixSet matrix_set_general(const SymplecticMap2& M, const Mat2& C) {
    const Mat2 mp1 = M.m + Mat2::identity();
    if (std::abs(mp1.det()) < kCausticTol)
        throw CausticError("matrix_set_general: det(M+1) = " + std::to_string(mp1.det()));
    const Mat2 B = cayley_of(M);
    return detail::assemble_set(C, B, mp1);
}

// Closed forms for a hyperbolic map in its (ζ_u, ζ_s) eigenbasis, then
// congruence-transformed to Cartesian coordinates.  No caustics exist:
// det(M^t + 1) = 4 cosh²(λt/2) ≥ 4.
inline FrameMatrixSet matrix_set_hyperbolic(const HyperbolicFrame& f, double t) {
    const double x = 0.5 * f.lambda * t;
    if (!std::isfinite(x))
        throw std::invalid_argument("matrix_set_hyperbolic: lambda*t not finite");
    const double tau = std::tanh(x);

    // ζ-basis ingredients
    const double uu = f.zeta_u.dot(f.zeta_u);
    const double ss = f.zeta_s.dot(f.zeta_s);
    const double w = f.zeta_u.dot(f.zeta_s);
    const Mat2 Cz{uu, w, w, ss};
    const Mat2 Bz{0.0, tau, tau, 0.0};

    // det V = 1 + tanh² + 2i (ζ_u·ζ_s) tanh  (basis independent)
    const double th2 = 1.0 + tau * tau;
    const complexd detV(th2, 2.0 * w * tau);
    const double detv_mod2 = std::norm(detV);

    // Ṽ = V/det V  ⇒  C̄ = [C th2 − 2wτ B]/|det V|²,  B̄ = [B th2 + 2wτ C]/|det V|²
    const Mat2 Cbz = (Cz * th2 - Bz * (2.0 * w * tau)) * (1.0 / detv_mod2);
    const Mat2 Bbz = (Bz * th2 + Cz * (2.0 * w * tau)) * (1.0 / detv_mod2);

    // (M+1)^{-1} = diag(e^{-x}, e^{x}) / (2 cosh x) in the eigenbasis
    const double ch = std::cosh(x);
    const double det1 = 4.0 * ch * ch * detv_mod2;
    const double emx = std::exp(-x), epx = std::exp(x);
    auto sandwich = [&](const Mat2& A) -> Mat2 {
        // diag(e^{-x}, e^{x}) A diag(e^{-x}, e^{x}) / (4 cosh² |detV|²) — with
        // the |detV|² already inside A removed (A here carries 1/|detV|²), so
        // divide by 4cosh² only.
        return Mat2{A.a * emx * emx, A.b, A.c, A.d * epx * epx} * (1.0 / (4.0 * ch * ch));
    };
    const Mat2 Dz = sandwich(Bbz);
    const Mat2 Ez = sandwich(Cbz);
    (void)det1;

    // Congruence to Cartesian coordinates: A_cart = T^{-T} A_z T^{-1}.
    const Mat2 T{f.zeta_u.p, f.zeta_s.p, f.zeta_u.q, f.zeta_s.q};
    const Mat2 Tinv = T.inverse();
    const Mat2 TinvT = Tinv.transpose();
    auto to_cart = [&](const Mat2& A) { return TinvT * A * Tinv; };

    FrameMatrixSet s;
    s.C = to_cart(Cz);
    s.B = to_cart(Bz);
    s.V = Mat2c(s.C, s.B * -1.0);
    s.detV_mod = std::abs(detV);
    s.epsilon = std::arg(detV);
    s.Cbar = to_cart(Cbz);
    s.Bbar = to_cart(Bbz);
    s.D = to_cart(Dz);
    s.E = to_cart(Ez);
    s.detM1 = 4.0 * ch * ch;
    s.detW = detV * s.detM1;
    return s;
}

}  // namespace scprop
