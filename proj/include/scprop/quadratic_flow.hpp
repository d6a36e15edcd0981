#pragma once

/*
 * quadratic_flow.hpp — linear Hamiltonian flows generated by H(x) = ½ x·𝓗x.
 *
 * The monodromy is M^t = exp(t J𝓗).  With A = J𝓗 (traceless) and
 * Δ = −det 𝓗 = (trace of A²)/2, Cayley–Hamilton gives A² = Δ·1 and the
 * closed-form families
 *
 *   Δ < 0 (elliptic,   ω = √(det 𝓗)):  M^t = cos(ωt)·1 + sin(ωt)/ω · A
 *   Δ > 0 (hyperbolic, λ = √Δ):        M^t = cosh(λt)·1 + sinh(λt)/λ · A
 *   Δ = 0 (shear):                     M^t = 1 + t A
 *
 * Only the elliptic family has caustics, det(M^t+1) = 4cos²(ωt/2) touching
 * zero at ωt = π mod 2π.  Near those times the Cayley form B_t and several
 * derived matrices diverge individually while the propagator combinations
 * stay finite; this header also provides those combinations in caustic-free
 * closed form (see ScFlowData):
 *
 *   det W  = det[V(M+1)]          (= 4cos(ωt) + 2i(h/ω)sin(ωt), h = tr 𝓗)
 *   E                              Gaussian width of the drift term
 *   F      = B/4 + D               phase curvature of the drift term
 *   S_γ2(x0) = −¼ x0ᵀ(1+M)ᵀJ(1−M) x0   center action of the orbit through x0
 *   ε_u    = continuously unwrapped arg det V_t
 *
 * They follow from P = M+1 = κ·m_h with m_h = exp(tA/2), κ = 2cos(ωt/2)
 * (resp. cosh, 2), energy conservation m_h^{-T}𝓗 m_h^{-1} = 𝓗, and
 * E − iD = [G^{-1} + i a 𝓗]/det W with G = m_h m_hᵀ and B = −a𝓗.
 */

#include <cmath>
#include <complex>
#include <vector>

#include "scprop/phase_space.hpp"

namespace scprop {

struct QuadraticHamiltonian {
    Mat2 H;              // Hessian 𝓗 (symmetric); H_c(x) = ½ x·𝓗x
    double hbar = 1.0;

    QuadraticHamiltonian(const Mat2& hessian, double hb = 1.0) : H(hessian), hbar(hb) {
        if (std::abs(H.b - H.c) > 1e-14)
            throw std::invalid_argument("QuadraticHamiltonian: Hessian must be symmetric");
        if (hbar <= 0.0) throw std::invalid_argument("QuadraticHamiltonian: hbar must be > 0");
    }

    double classical(const Vec2& x) const { return 0.5 * H.quad(x); }

    // A = J𝓗, Δ = −det𝓗, h = tr𝓗
    Mat2 a_matrix() const {
        const Mat2 j = Mat2::symplectic_j();
        return j * H;
    }
    double discriminant() const { return -H.det(); }
    double h_trace() const { return H.trace(); }
};

enum class FlowKind { Elliptic, Hyperbolic, Shear };

namespace detail {

inline FlowKind classify(double delta) {
    if (delta < -1e-14) return FlowKind::Elliptic;
    if (delta > 1e-14) return FlowKind::Hyperbolic;
    return FlowKind::Shear;
}

// (cos-like, sin-like/freq) pair so that exp(sA) = c·1 + s·A.
inline void exp_scalars(FlowKind kind, double delta, double t, double& c, double& s) {
    switch (kind) {
        case FlowKind::Elliptic: {
            const double w = std::sqrt(-delta);
            c = std::cos(w * t);
            s = std::sin(w * t) / w;
            return;
        }
        case FlowKind::Hyperbolic: {
            const double l = std::sqrt(delta);
            c = std::cosh(l * t);
            s = std::sinh(l * t) / l;
            return;
        }
        case FlowKind::Shear:
            c = 1.0;
            s = t;
            return;
    }
    c = 1.0;
    s = t;
}

}  // namespace detail

// M^t = exp(t J𝓗), evaluated in closed form.
inline SymplecticMap2 monodromy(const QuadraticHamiltonian& h, double t) {
    const Mat2 A = h.a_matrix();
    const double delta = h.discriminant();
    double c, s;
    detail::exp_scalars(detail::classify(delta), delta, t, c, s);
    return SymplecticMap2(Mat2::identity() * c + A * s);
}

// det(M^t + 1) = 2 + tr M^t; ≥ 0 for every 2×2 flow of this kind.
inline double det_m_plus_1(const QuadraticHamiltonian& h, double t) {
    return 2.0 + monodromy(h, t).m.trace();
}

// S^t(x) = x·B_t x with B_t the Cayley form of M^t; B_t = −a(t)𝓗 with
// a = tan(ωt/2)/ω (elliptic), tanh(λt/2)/λ (hyperbolic), t/2 (shear).
inline double cayley_scalar(const QuadraticHamiltonian& h, double t) {
    const double delta = h.discriminant();
    switch (detail::classify(delta)) {
        case FlowKind::Elliptic: {
            const double w = std::sqrt(-delta);
            return std::tan(0.5 * w * t) / w;
        }
        case FlowKind::Hyperbolic: {
            const double l = std::sqrt(delta);
            return std::tanh(0.5 * l * t) / l;
        }
        case FlowKind::Shear:
            return 0.5 * t;
    }
    return 0.5 * t;
}

inline double center_action_quadratic(const QuadraticHamiltonian& h, const Vec2& x, double t) {
    const double p = det_m_plus_1(h, t);
    if (std::abs(p) < kCausticTol)
        throw CausticError("center_action_quadratic: t lies on a caustic");
    const double a = cayley_scalar(h, t);
    return -a * h.H.quad(x);
}

inline Mat2 cayley_matrix(const QuadraticHamiltonian& h, double t) {
    const double p = det_m_plus_1(h, t);
    if (std::abs(p) < kCausticTol) throw CausticError("cayley_matrix: t lies on a caustic");
    return h.H * (-cayley_scalar(h, t));
}

// ── Morse index tracking ──────────────────────────────────────────────────

struct FlowState {
    double t = 0.0;
    SymplecticMap2 M;
    Mat2 B;                           // Cayley form; meaningless when at_caustic
    bool at_caustic = false;
    int alpha = 0;                    // number of caustics in (0, t]
    std::vector<double> caustic_times;
};

// Counts the zeros of det(M^s + 1) for s ∈ (0, t].  The determinant touches
// zero quadratically (it is 4cos²(ωs/2) in the elliptic family), so zeros are
// located by bisecting its derivative d/ds det(M^s+1) = tr(A M^s) and keeping
// minima where the value vanishes.
inline FlowState morse_track(const QuadraticHamiltonian& h, double t, double dt) {
    FlowState st;
    st.t = t;
    st.M = monodromy(h, t);
    const double p_end = 2.0 + st.M.m.trace();
    st.at_caustic = std::abs(p_end) < 1e-9;
    if (!st.at_caustic) st.B = cayley_matrix(h, t);

    const Mat2 A = h.a_matrix();
    auto dp = [&](double s) { return (A * monodromy(h, s).m).trace(); };
    auto pval = [&](double s) { return det_m_plus_1(h, s); };

    double s0 = 0.0;
    double d0 = dp(s0);
    for (double s = dt; s <= t + 0.5 * dt; s += dt) {
        const double s1 = std::min(s, t);
        const double d1 = dp(s1);
        if (d0 < 0.0 && d1 >= 0.0) {
            // derivative sign change: candidate minimum of det(M^s+1)
            double lo = s0, hi = s1;
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                (dp(mid) < 0.0 ? lo : hi) = mid;
            }
            const double sc = 0.5 * (lo + hi);
            if (pval(sc) < 1e-9 && sc > 1e-12 && sc <= t + 1e-12) {
                st.alpha += 1;
                st.caustic_times.push_back(sc);
            }
        }
        s0 = s1;
        d0 = d1;
        if (s1 >= t) break;
    }
    return st;
}

// ── Caustic-free propagator data ──────────────────────────────────────────

struct ScFlowData {
    SymplecticMap2 M;
    complexd detW;       // det[V(M+1)]
    Mat2 E;              // Gaussian width matrix for the drift
    Mat2 F;              // B/4 + D, phase curvature for the drift
    double eps_unwrapped;  // arg det V_t, continuous in t with ε(0) = 0
    Mat2 action_form;      // S_γ2(x0) = x0ᵀ(action_form)x0, smooth at caustics
};

// All SC ingredients for the flow at time t, in forms finite at caustics.
inline ScFlowData sc_flow_data(const QuadraticHamiltonian& h, double t) {
    const double delta = h.discriminant();
    const FlowKind kind = detail::classify(delta);
    const double hh = h.h_trace();

    ScFlowData out;
    out.M = monodromy(h, t);
    const Mat2 one = Mat2::identity();
    const Mat2 P = out.M.m + one;
    const Mat2 Q = one - out.M.m;
    const Mat2 J = Mat2::symplectic_j();

    // S_γ2(x0) = −¼ x0ᵀ Pᵀ J Q x0 (polynomial in M, exact for the orbit
    // through x0: the value x·B_t x at the orbit's own center).
    out.action_form = (P.transpose() * J * Q) * -0.25;

    // det W and the unwrapped argument of det V = det W / det(M+1)
    double rew, imw;        // det W = rew + i·imw
    double e_extra;         // a·Im(det W)   (finite everywhere)
    double k_f;             // a·(¼ + Re detW/|detW|²)  (finite everywhere)
    switch (kind) {
        case FlowKind::Elliptic: {
            const double w = std::sqrt(-delta);
            const double th = w * t;
            rew = 4.0 * std::cos(th);
            imw = 2.0 * (hh / w) * std::sin(th);
            const double x = 0.5 * th;
            const double sx = std::sin(x), cx = std::cos(x);
            const double mod2 = rew * rew + imw * imw;
            e_extra = 4.0 * (hh / (w * w)) * sx * sx;
            // a(|w|²+4Re w) = sin x cos x [32cos(2x) + 16(h/ω)² sin²x]/ω
            k_f = sx * cx * (32.0 * std::cos(th) + 16.0 * (hh / w) * (hh / w) * sx * sx) /
                  (4.0 * w * mod2);
            break;
        }
        case FlowKind::Hyperbolic: {
            const double l = std::sqrt(delta);
            const double th = l * t;
            rew = 4.0 * std::cosh(th);
            imw = 2.0 * (hh / l) * std::sinh(th);
            const double a = std::tanh(0.5 * th) / l;
            const double mod2 = rew * rew + imw * imw;
            e_extra = a * imw;
            k_f = a * (0.25 + rew / mod2);
            break;
        }
        case FlowKind::Shear:
        default: {
            rew = 4.0;
            imw = 2.0 * t * hh;
            const double a = 0.5 * t;
            const double mod2 = rew * rew + imw * imw;
            e_extra = a * imw;
            k_f = a * (0.25 + rew / mod2);
            break;
        }
    }
    out.detW = complexd(rew, imw);

    // ε unwrapped: det(M+1) ≥ 0 so arg det V = arg det W mod 2π.  For the
    // elliptic family det W traverses an origin-enclosing ellipse with the
    // quadrant of sign(h)·ωt, so the principal value plus the matching 2π
    // shell is exact; the other families never leave Re > 0.
    const double principal = std::atan2(imw, rew);
    if (kind == FlowKind::Elliptic) {
        const double w = std::sqrt(-delta);
        const double guide = (hh >= 0.0 ? 1.0 : -1.0) * w * t;
        out.eps_unwrapped =
            principal + 2.0 * M_PI * std::round((guide - principal) / (2.0 * M_PI));
    } else {
        out.eps_unwrapped = principal;
    }

    // E − iD = [G^{-1} + i a 𝓗]/det W with G = m_h m_hᵀ; assemble E and
    // F = B/4 + D from the caustic-free scalars above:
    //   E = Re{G^{-1}/det W} + (e_extra/|det W|²) 𝓗
    //   F = −Im{G^{-1}/det W} − k_f 𝓗
    double ch, sh;
    detail::exp_scalars(kind, delta, 0.5 * t, ch, sh);
    const Mat2 mh = one * ch + h.a_matrix() * sh;
    const Mat2 G = mh * mh.transpose();
    const Mat2 Ginv = G.inverse();  // det G = 1
    const complexd invW = 1.0 / out.detW;
    const double mod2 = std::norm(out.detW);
    out.E = Ginv * invW.real() + h.H * (e_extra / mod2);
    out.F = Ginv * (-invW.imag()) - h.H * k_f;
    return out;
}

}  // namespace scprop
