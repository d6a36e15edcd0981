#pragma once

/*
 * semiclassical.hpp — semiclassical coherent-state matrix elements of linear
 * maps and quadratic flows, in three flavours:
 *
 *   SC1  center-orbit sum with a chord-mismatch Gaussian,
 *          2^l e^{(i/ħ)[S̃(X) − ½X1∧X2] − (1/4ħ)(ξ_γ−ξ0)²} / |det(M+1)|^{1/2}
 *   SC2  chord-orbit sum with a center-displacement Gaussian,
 *          2^l e^{(i/ħ)[S̃(ξ0) + ½X1∧X2] − (1/ħ)(x0−X)²} / |det(M−1)|^{1/2}
 *   SC3  full Gaussian evaluation of the transformation integral,
 *          2^l |det[V(M+1)]|^{-1/2} e^{−δᵀC̄δ/ħ}
 *              × e^{(i/ħ)[S̃(X) − ½X1∧X2 + δᵀB̄δ] − iε/2}
 *   SC3-linearized: the same element written purely in terms of the orbit
 *   through X2 (drift d, matrices D, E), exact for linear dynamics.
 *
 * Conventions pinned by the exact torus propagator and the number-basis
 * oracle:
 *   · the Gaussian-integral branch gives e^{−iε/2}, ε = arg det V (the
 *     prefactor is 1/√det V with the principal square root);
 *   · for flows ε is unwrapped continuously in t, which absorbs the Morse
 *     phase entirely (for the harmonic oscillator ε(t) = t);
 *   · on the torus the sum over windings m at fixed center equals the sum
 *     over periodization images k of single-orbit plane elements, term by
 *     term (m = −M^t k), so each map element below already returns the
 *     complete torus answer and torus_periodize is its plane-image form;
 *   · torus elements carry the constant (4πħ)^{-1/2} = √(N/2) of the
 *     unnormalized periodic coherent states.
 *
 * Winding phases reach ~10⁴ rad for higher powers of the map, so orbit
 * geometry and action phases are assembled in long double from the exact
 * integer Cayley numerator p·B before reduction mod 2π.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "scprop/cat_map.hpp"
#include "scprop/fock_oracle.hpp"
#include "scprop/phase_space.hpp"
#include "scprop/quadratic_flow.hpp"
#include "scprop/torus_quantum.hpp"

namespace scprop::sc {

enum class Method { Exact, SC1, SC2, SC3, SC3Lin };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::SC1: return "sc1";
        case Method::SC2: return "sc2";
        case Method::SC3: return "sc3";
        case Method::SC3Lin: return "sc3lin";
    }
    return "?";
}

struct CSElement {
    complexd value{0.0, 0.0};
    Method method = Method::SC3;
    IVec2 dominant_m{0, 0};       // winding of the dominant orbit
    Vec2 delta{0.0, 0.0};         // point shift δ of the dominant orbit
    Vec2 drift{0.0, 0.0};         // drift d of the dominant orbit
    double gauss_exponent = 0.0;  // dimensionless Gaussian exponent of the dominant orbit
};

// ⟨X1|X2⟩ for plane coherent states.
inline complexd plane_cs_overlap(const Vec2& X1, const Vec2& X2, double hbar) {
    const Vec2 d = X1 - X2;
    return std::exp(complexd(-d.norm2() / (4.0 * hbar), -wedge(X1, X2) / (2.0 * hbar)));
}

namespace detail {

// extended-precision 2-vector for orbit geometry with large windings
struct LVec2 {
    long double p = 0.0L, q = 0.0L;
    LVec2() = default;
    LVec2(long double p_, long double q_) : p(p_), q(q_) {}
    explicit LVec2(const Vec2& v) : p(v.p), q(v.q) {}
    Vec2 to_vec2() const { return {double(p), double(q)}; }
    LVec2 operator+(const LVec2& o) const { return {p + o.p, q + o.q}; }
    LVec2 operator-(const LVec2& o) const { return {p - o.p, q - o.q}; }
    LVec2 operator*(long double s) const { return {p * s, q * s}; }
};

inline complexd unit_phase(long double phi) {
    return std::polar(1.0, double(remainderl(phi, 2.0L * M_PIl)));
}

// Torus matrix elements are expressed in the same convention as the
// unnormalized periodic coherent states: N position samples per unit cell
// and the dropped plane-Gaussian normalization contribute the constant
// √(N/2) = (4πħ)^{-1/2} relative to normalized plane states.
inline double torus_state_norm(double hbar) { return 1.0 / std::sqrt(4.0 * M_PI * hbar); }

}  // namespace detail

// Per-call evaluation context for a map power: the matrix family of
// (M^t, C = 1), the exact rational Cayley data, and the window policy.
struct SCContext {
    Method method = Method::SC3;
    double hbar = 1.0;
    FrameMatrixSet matrix_set;
    Mat2 m_t = Mat2::identity();
    IMat2 m_int{1, 0, 0, 1};
    Mat2 mp1_inv = Mat2::identity() * 0.5;
    IMat2 cayley_num{0, 0, 0, 0};  // p·B, exact
    long long p_den = 4;           // det(M^t + 1)
    double log_window = 40.0;      // keep windings within e^{-40} of the best
};

namespace detail {

inline SCContext make_map_context(const CatMap& map, int t, double hbar, Method method) {
    SCContext ctx;
    ctx.method = method;
    ctx.hbar = hbar;
    if (t == 0) {
        ctx.m_t = Mat2::identity();
        ctx.m_int = IMat2::identity();
        ctx.matrix_set = matrix_set_general(SymplecticMap2(ctx.m_t), Mat2::identity());
        ctx.cayley_num = IMat2{0, 0, 0, 0};
        ctx.p_den = 4;
    } else {
        const CatMap mt = (t == 1) ? map : map.power(t);
        ctx.m_t = mt.map().m;
        ctx.m_int = mt.m_int();
        ctx.matrix_set = matrix_set_general(mt.map(), Mat2::identity());
        ctx.cayley_num = mt.cayley_numerator();
        ctx.p_den = mt.cayley_denominator();
    }
    ctx.mp1_inv = (ctx.m_t + Mat2::identity()).inverse();
    return ctx;
}

// (1/ħ) S(x, m) with S(x,m) = x·Bx + x·(B−J)m + ¼m·(B+J̃)m, assembled in
// long double from the integer numerator p·B.  Unreduced angle.
inline long double action_phase(const SCContext& ctx, const LVec2& x, const IVec2& m) {
    const long double invh = 1.0L / (long double)ctx.hbar;
    const long double pd = (long double)ctx.p_den;
    const IMat2& Bn = ctx.cayley_num;
    const long double xbx =
        x.p * (Bn.a * x.p + Bn.b * x.q) + x.q * (Bn.c * x.p + Bn.d * x.q);
    // w = (p·B − p·J)m, exact integers
    const long long wp = Bn.a * m.p + (Bn.b + ctx.p_den) * m.q;
    const long long wq = (Bn.c - ctx.p_den) * m.p + Bn.d * m.q;
    const long double xw = x.p * (long double)wp + x.q * (long double)wq;
    // m·(p·B)·m + 2p·m_p m_q, exact integers
    const long double mm = (long double)m.p * (Bn.a * m.p + Bn.b * m.q) +
                           (long double)m.q * (Bn.c * m.p + Bn.d * m.q) +
                           2.0L * (long double)ctx.p_den * (long double)m.p * (long double)m.q;
    return invh * ((xbx + xw + 0.25L * mm) / pd);
}

// x₋ = (M^t+1)^{-1}(2X + m) via the exact integer adjugate.
inline LVec2 orbit_start(const SCContext& ctx, const Vec2& X, const IVec2& m) {
    const IMat2& M = ctx.m_int;
    const long long pa = M.d + 1, pb = -M.b, pc = -M.c, pd = M.a + 1;  // adj(M+1)
    const LVec2 v{2.0L * (long double)X.p + (long double)m.p,
                  2.0L * (long double)X.q + (long double)m.q};
    const long double inv_det = 1.0L / (long double)ctx.p_den;
    return {(pa * v.p + pb * v.q) * inv_det, (pc * v.p + pd * v.q) * inv_det};
}

// chord of the orbit with center X and winding m: (M^t−1)x₋ − m
inline LVec2 orbit_chord(const SCContext& ctx, const Vec2& X, const IVec2& m) {
    const LVec2 xm = orbit_start(ctx, X, m);
    const IMat2& M = ctx.m_int;
    return {(M.a - 1) * xm.p + M.b * xm.q - (long double)m.p,
            M.c * xm.p + (M.d - 1) * xm.q - (long double)m.q};
}

// end point of the orbit through x with winding m: M^t x − m
inline LVec2 orbit_end(const SCContext& ctx, const Vec2& x, const IVec2& m) {
    const IMat2& M = ctx.m_int;
    return {M.a * (long double)x.p + M.b * (long double)x.q - (long double)m.p,
            M.c * (long double)x.p + M.d * (long double)x.q - (long double)m.q};
}

// Sum of term(m) over the integer window around the continuous minimizer of
// gauss(m) (a non-negative quadratic).  Expands Chebyshev shells until one
// whole shell lies above best + log_window.
template <typename GaussFn, typename TermFn>
inline void window_sum(const Vec2& m_star, GaussFn&& gauss, TermFn&& term, double log_window) {
    const IVec2 m0{(long long)std::llround(m_star.p), (long long)std::llround(m_star.q)};
    double best = gauss(m0);
    std::vector<IVec2> pending;
    for (int r = 0;; ++r) {
        double shell_min = std::numeric_limits<double>::infinity();
        bool any = false;
        for (long long dp = -r; dp <= r; ++dp)
            for (long long dq = -r; dq <= r; ++dq) {
                if (std::max(std::llabs(dp), std::llabs(dq)) != r) continue;
                const IVec2 m{m0.p + dp, m0.q + dq};
                const double g = gauss(m);
                shell_min = std::min(shell_min, g);
                best = std::min(best, g);
                pending.push_back(m);
                any = true;
            }
        if (any && r > 0 && shell_min > best + log_window) break;
        if (r > 4096) break;  // safety against non-positive-definite input
    }
    for (const IVec2& m : pending)
        if (gauss(m) <= best + log_window) term(m);
}

}  // namespace detail

// ── Plane elements (single orbit, no windings) ────────────────────────────

// SC3 for a plane linear map with metric C: the unique orbit with center
// X = (X1+X2)/2.  The metric argument makes the construction usable in any
// symplectic coordinate frame (C = T^T T for a frame T).
inline CSElement sc3_plane_element(const SymplecticMap2& M, const Mat2& C, const Vec2& X1,
                                   const Vec2& X2, double hbar) {
    const FrameMatrixSet ms = matrix_set_general(M, C);
    if (std::abs(ms.detW) < 1e-12)
        throw AccidentalCausticError("sc3_plane_element: det[V(M+1)] = 0");
    const Vec2 X = (X1 + X2) * 0.5;
    const Vec2 d = M.m * X2 - X1;
    const Vec2 delta = (M.m + Mat2::identity()).inverse() * d;
    const double s_center = ms.B.quad(X);
    const double gauss = ms.Cbar.quad(delta) / hbar;
    const double phase =
        (s_center - 0.5 * wedge(X1, X2) + ms.Bbar.quad(delta)) / hbar - 0.5 * ms.epsilon;
    CSElement el;
    el.method = Method::SC3;
    el.value = 2.0 / std::sqrt(std::abs(ms.detW)) * std::exp(complexd(-gauss, phase));
    el.delta = delta;
    el.drift = d;
    el.gauss_exponent = gauss;
    return el;
}

// ── Torus cat-map elements (winding sums) ─────────────────────────────────

// SC1: orbits with center X = (X1+X2)/2, one per winding m.
inline CSElement sc1_element(const CatMap& map, const Vec2& X1, const Vec2& X2, int t,
                             double hbar) {
    const SCContext ctx = detail::make_map_context(map, t, hbar, Method::SC1);
    const Vec2 X = (X1 + X2) * 0.5;
    const Vec2 xi0 = X1 - X2;
    const Mat2 mm1 = ctx.m_t - Mat2::identity();

    auto gauss = [&](const IVec2& m) {
        const Vec2 dx = detail::orbit_chord(ctx, X, m).to_vec2() - xi0;
        return dx.norm2() / (4.0 * hbar);
    };
    // continuous minimizer: chord(m) = ξ0, i.e. solve
    // [(M−1)(M+1)^{-1} − 1]·m = ξ0 − (M−1)(M+1)^{-1}·2X
    const Mat2 K = mm1 * ctx.mp1_inv - Mat2::identity();
    const Vec2 m_cont = K.inverse() * (xi0 - mm1 * ctx.mp1_inv * (X * 2.0));

    CSElement el;
    el.method = Method::SC1;
    double best = std::numeric_limits<double>::infinity();
    const double amp = detail::torus_state_norm(hbar) * 2.0 / std::sqrt(ctx.matrix_set.detM1);
    const long double w12 = 0.5L * (long double)wedge(X1, X2) / (long double)hbar;
    detail::window_sum(
        m_cont, gauss,
        [&](const IVec2& m) {
            const double g = gauss(m);
            const long double phase = detail::action_phase(ctx, detail::LVec2(X), m) - w12;
            el.value += amp * std::exp(-g) * detail::unit_phase(phase);
            if (g < best) {
                best = g;
                el.dominant_m = m;
                el.delta = (detail::orbit_chord(ctx, X, m).to_vec2() - xi0) * 0.5;
                el.gauss_exponent = g;
            }
        },
        ctx.log_window);
    return el;
}

// SC2: orbits with chord ξ0 = X1 − X2, one per winding m; the chord action
// is the Legendre transform S̃(ξ0) = S(x0) − ξ0∧x0.
inline CSElement sc2_element(const CatMap& map, const Vec2& X1, const Vec2& X2, int t,
                             double hbar) {
    const SCContext ctx = detail::make_map_context(map, t, hbar, Method::SC2);
    const Mat2 mm1 = ctx.m_t - Mat2::identity();
    const double dmm1 = std::abs(mm1.det());
    if (dmm1 < 1e-10)
        throw ShortTimeDivergence("sc2_element: |det(M^t - 1)| = " + std::to_string(dmm1));
    const Vec2 X = (X1 + X2) * 0.5;
    const Vec2 xi0 = X1 - X2;

    // x₋ = (M−1)^{-1}(ξ0 + m) through the integer adjugate of M−1
    const IMat2& Mi = ctx.m_int;
    const long long qdet = ctx.m_int.det() - ctx.m_int.trace() + 1;  // det(M−1) = 2 − tr M
    auto center_of = [&](const IVec2& m) -> detail::LVec2 {
        const long long aa = Mi.d - 1, bb = -Mi.b, cc = -Mi.c, dd = Mi.a - 1;  // adj(M−1)
        const detail::LVec2 v{(long double)xi0.p + m.p, (long double)xi0.q + m.q};
        const long double inv_det = 1.0L / (long double)qdet;
        const detail::LVec2 xm{(aa * v.p + bb * v.q) * inv_det, (cc * v.p + dd * v.q) * inv_det};
        return {xm.p + 0.5L * xi0.p, xm.q + 0.5L * xi0.q};
    };
    auto gauss = [&](const IVec2& m) {
        const Vec2 dx = center_of(m).to_vec2() - X;
        return dx.norm2() / hbar;
    };
    const Vec2 m_cont = mm1 * (X - xi0 * 0.5) - xi0;

    CSElement el;
    el.method = Method::SC2;
    double best = std::numeric_limits<double>::infinity();
    const double amp = detail::torus_state_norm(hbar) * 2.0 / std::sqrt(dmm1);
    const long double w12 = 0.5L * (long double)wedge(X1, X2) / (long double)hbar;
    detail::window_sum(
        m_cont, gauss,
        [&](const IVec2& m) {
            const double g = gauss(m);
            const detail::LVec2 x0 = center_of(m);
            const long double s = detail::action_phase(ctx, x0, m);
            // −(1/ħ) ξ0 ∧ x0
            const long double wx =
                ((long double)xi0.p * x0.q - (long double)xi0.q * x0.p) / (long double)hbar;
            el.value += amp * std::exp(-g) * detail::unit_phase(s - wx + w12);
            if (g < best) {
                best = g;
                el.dominant_m = m;
                el.drift = (x0.to_vec2() - X);
                el.gauss_exponent = g;
            }
        },
        ctx.log_window);
    return el;
}

// SC3: same orbit family as SC1, evaluated with the full Gaussian integral
// (matrices C̄, B̄ and the e^{−iε/2} branch phase).
inline CSElement sc3_element(const CatMap& map, const Vec2& X1, const Vec2& X2, int t,
                             double hbar) {
    const SCContext ctx = detail::make_map_context(map, t, hbar, Method::SC3);
    const FrameMatrixSet& ms = ctx.matrix_set;
    if (std::abs(ms.detW) < 1e-12) throw AccidentalCausticError("sc3_element: det[V(M+1)] = 0");
    const Vec2 X = (X1 + X2) * 0.5;
    const Vec2 xi0 = X1 - X2;
    const Mat2 mm1 = ctx.m_t - Mat2::identity();

    auto delta_of = [&](const IVec2& m) {
        return (detail::orbit_chord(ctx, X, m).to_vec2() - xi0) * 0.5;
    };
    auto gauss = [&](const IVec2& m) { return ms.Cbar.quad(delta_of(m)) / hbar; };
    const Mat2 K = mm1 * ctx.mp1_inv - Mat2::identity();
    const Vec2 m_cont = K.inverse() * (xi0 - mm1 * ctx.mp1_inv * (X * 2.0));

    CSElement el;
    el.method = Method::SC3;
    double best = std::numeric_limits<double>::infinity();
    const double amp = detail::torus_state_norm(hbar) * 2.0 / std::sqrt(std::abs(ms.detW));
    const long double w12 = 0.5L * (long double)wedge(X1, X2) / (long double)hbar;
    const long double half_eps = 0.5L * (long double)ms.epsilon;
    detail::window_sum(
        m_cont, gauss,
        [&](const IVec2& m) {
            const Vec2 delta = delta_of(m);
            const double g = ms.Cbar.quad(delta) / hbar;
            const long double phase = detail::action_phase(ctx, detail::LVec2(X), m) - w12 +
                                      (long double)(ms.Bbar.quad(delta) / hbar) - half_eps;
            el.value += amp * std::exp(-g) * detail::unit_phase(phase);
            if (g < best) {
                best = g;
                el.dominant_m = m;
                el.delta = delta;
                el.drift = (ctx.m_t + Mat2::identity()) * delta;
                el.gauss_exponent = g;
            }
        },
        ctx.log_window);
    return el;
}

// SC3 evaluated from the orbits through X2 alone (drift form).  For the
// linear map this is an exact rewriting of sc3_element, term by term.
inline CSElement sc3_linearized(const CatMap& map, const Vec2& X1, const Vec2& X2, int t,
                                double hbar) {
    const SCContext ctx = detail::make_map_context(map, t, hbar, Method::SC3Lin);
    const FrameMatrixSet& ms = ctx.matrix_set;
    if (std::abs(ms.detW) < 1e-12)
        throw AccidentalCausticError("sc3_linearized: det[V(M+1)] = 0");
    const Vec2 X = (X1 + X2) * 0.5;
    const Vec2 xi0 = X1 - X2;

    auto drift_of = [&](const IVec2& m) {
        const detail::LVec2 x2f = detail::orbit_end(ctx, X2, m);
        return Vec2{double(x2f.p - X1.p), double(x2f.q - X1.q)};
    };
    auto gauss = [&](const IVec2& m) { return ms.E.quad(drift_of(m)) / hbar; };
    const Vec2 m_cont = ctx.m_t * X2 - X1;

    CSElement el;
    el.method = Method::SC3Lin;
    double best = std::numeric_limits<double>::infinity();
    const double amp = detail::torus_state_norm(hbar) * 2.0 / std::sqrt(std::abs(ms.detW));
    const Mat2 phase_form = ms.B * 0.25 + ms.D;
    const long double half_eps = 0.5L * (long double)ms.epsilon;
    const long double invh = 1.0L / (long double)hbar;
    detail::window_sum(
        m_cont, gauss,
        [&](const IVec2& m) {
            const detail::LVec2 x2f = detail::orbit_end(ctx, X2, m);
            const detail::LVec2 xi_g2 = x2f - detail::LVec2(X2);
            const detail::LVec2 x_g2{0.5L * (x2f.p + X2.p), 0.5L * (x2f.q + X2.q)};
            const Vec2 d{double(x2f.p - X1.p), double(x2f.q - X1.q)};
            const double g = ms.E.quad(d) / hbar;
            // ½(ξ_γ2 + X)∧ξ0 in long double
            const long double wl = 0.5L *
                                   ((xi_g2.p + X.p) * (long double)xi0.q -
                                    (xi_g2.q + X.q) * (long double)xi0.p) *
                                   invh;
            const long double phase = detail::action_phase(ctx, x_g2, m) + wl +
                                      (long double)(phase_form.quad(d) / hbar) - half_eps;
            el.value += amp * std::exp(-g) * detail::unit_phase(phase);
            if (g < best) {
                best = g;
                el.dominant_m = m;
                el.drift = d;
                el.delta = ctx.mp1_inv * d;
                el.gauss_exponent = g;
            }
        },
        ctx.log_window);
    return el;
}

// ── Quadratic-flow elements ───────────────────────────────────────────────

// SC3 for the flow of H(x) = ½x·𝓗x over time t.  The center-orbit form and
// the drift form coincide identically for linear flows; the evaluation uses
// the caustic-free combinations of sc_flow_data, so caustic times are fine.
inline CSElement sc3_element(const QuadraticHamiltonian& h, const Vec2& X1, const Vec2& X2,
                             double t) {
    const ScFlowData fd = sc_flow_data(h, t);
    const double hbar = h.hbar;
    const Vec2 X = (X1 + X2) * 0.5;
    const Vec2 xi0 = X1 - X2;
    const Vec2 x2f = fd.M * X2;
    const Vec2 d = x2f - X1;
    const Vec2 xi_g2 = x2f - X2;
    const double s_g2 = fd.action_form.quad(X2);
    const double gauss = fd.E.quad(d) / hbar;
    const double phase = (s_g2 + 0.5 * wedge(xi_g2 + X, xi0) + fd.F.quad(d)) / hbar -
                         0.5 * fd.eps_unwrapped;
    CSElement el;
    el.method = Method::SC3;
    el.value = 2.0 / std::sqrt(std::abs(fd.detW)) * std::exp(complexd(-gauss, phase));
    el.drift = d;
    const double p = (fd.M.m + Mat2::identity()).det();
    if (std::abs(p) > 1e-6) el.delta = (fd.M.m + Mat2::identity()).inverse() * d;
    el.gauss_exponent = gauss;
    return el;
}

inline CSElement sc3_linearized(const QuadraticHamiltonian& h, const Vec2& X1, const Vec2& X2,
                                double t) {
    CSElement el = sc3_element(h, X1, X2, t);
    el.method = Method::SC3Lin;
    return el;
}

// ── Torus periodization ───────────────────────────────────────────────────

// Periodize a plane element function over integer chords:
//   ⟨X1|Â|X2⟩_torus = √(N/2) Σ_k e^{iπ(N/2)k·J̃k} e^{−(i/2ħ)X2∧k} fn(X1, X2+k)
// The √(N/2) = N·(πħ)^{1/2} constant bridges the unnormalized periodic
// coherent states (N position samples per unit cell, dropped Gaussian
// normalization) to normalized plane states; it is fixed by the t = 0
// identity against the exact periodized overlap.
inline CSElement torus_periodize(const std::function<complexd(Vec2, Vec2)>& element_fn,
                                 const TorusHilbert& space, const Vec2& X1, const Vec2& X2,
                                 double rel_floor = 1e-16) {
    const double hbar = space.hbar;
    const double norm = std::sqrt(0.5 * space.N);
    CSElement el;
    double best = 0.0;
    complexd sum = 0.0;
    for (int r = 0;; ++r) {
        double shell_max = 0.0;
        for (long long kp = -r; kp <= r; ++kp)
            for (long long kq = -r; kq <= r; ++kq) {
                if (std::max(std::llabs(kp), std::llabs(kq)) != r) continue;
                const Vec2 k{double(kp), double(kq)};
                const double jt_phase = M_PI * 0.5 * space.N * 2.0 * double(kp) * double(kq);
                const double w_phase = -wedge(X2, k) / (2.0 * hbar);
                const complexd ph = std::exp(complexd(0.0, jt_phase + w_phase));
                const complexd term = ph * element_fn(X1, X2 + k);
                sum += term;
                shell_max = std::max(shell_max, std::abs(term));
                if (std::abs(term) > best) {
                    best = std::abs(term);
                    el.dominant_m = IVec2{kp, kq};
                }
            }
        if (r > 0 && shell_max < rel_floor * std::max(best, 1e-300)) break;
        if (r > 64) break;
    }
    el.value = norm * sum;
    return el;
}

// ── Error sweeps (Figure-2 style tables) ──────────────────────────────────

struct SweepRow {
    int N = 0;
    Method method = Method::SC3;
    complexd sc_value{0.0, 0.0};
    complexd exact_value{0.0, 0.0};
    double amp_error = 0.0;    // ||A_sc| − |A_ex|| / |A_ex|
    double phase_error = 0.0;  // principal arg(A_sc / A_ex)
    bool ok = true;
    std::string message;
};

inline std::vector<SweepRow> error_sweep(const CatMap& map, const std::vector<int>& Ns, int t,
                                         const Vec2& X1, const Vec2& X2,
                                         const std::vector<Method>& methods) {
    std::vector<SweepRow> rows;
    for (int N : Ns) {
        const TorusHilbert space(N);
        const complexd exact = exact_cs_element(space, X1, X2, t);
        for (Method m : methods) {
            SweepRow row;
            row.N = N;
            row.method = m;
            row.exact_value = exact;
            try {
                CSElement el;
                switch (m) {
                    case Method::SC1: el = sc1_element(map, X1, X2, t, space.hbar); break;
                    case Method::SC2: el = sc2_element(map, X1, X2, t, space.hbar); break;
                    case Method::SC3: el = sc3_element(map, X1, X2, t, space.hbar); break;
                    case Method::SC3Lin: el = sc3_linearized(map, X1, X2, t, space.hbar); break;
                    case Method::Exact: el.value = exact; break;
                }
                row.sc_value = el.value;
                row.amp_error = std::abs(std::abs(el.value) - std::abs(exact)) / std::abs(exact);
                row.phase_error = std::arg(el.value / exact);
            } catch (const std::exception& e) {
                row.ok = false;
                row.message = e.what();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

// Spearman rank correlation of y against x (ties broken by order).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    auto ranks = [&](const std::vector<double>& v) {
        std::vector<size_t> idx(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        for (size_t i = 0; i < n; ++i) r[idx[i]] = double(i);
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    double d2 = 0.0;
    for (size_t i = 0; i < n; ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    return 1.0 - 6.0 * d2 / (double(n) * (double(n) * double(n) - 1.0));
}

}  // namespace scprop::sc
