#pragma once

/*
 * torus_quantum.hpp — exact quantum mechanics on the N-dimensional torus
 * Hilbert space, ħ = 1/(2πN).
 *
 * Position basis: periodic combs |q_k⟩ at q = k/N, k = 0..N−1.  The cat map
 * propagator in this basis is the Hannay–Berry matrix
 *   U_{kj} = (i/N)^{1/2} exp[(2πi/N)(k² − jk + j²)]
 * (principal branch (i/N)^{1/2} = e^{iπ/4}/√N).  Torus coherent states are
 * periodized plane Gaussians, kept unnormalized:
 *   c_k(X) = Σ_j exp[−(1/ħ)(iP(j + Q/2 − k/N) + ½(j + Q − k/N)²)].
 */

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "scprop/cat_map.hpp"
#include "scprop/phase_space.hpp"

namespace scprop {

using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

struct TorusHilbert {
    int N;
    double hbar;

    explicit TorusHilbert(int n) : N(n), hbar(1.0 / (2.0 * M_PI * n)) {
        if (n < 1) throw std::invalid_argument("TorusHilbert: N >= 1 required");
    }
};

// ── Hannay–Berry propagator ───────────────────────────────────────────────

inline OperatorMatrix hannay_berry(const TorusHilbert& space) {
    const int N = space.N;
    OperatorMatrix U(N, N);
    const complexd pref = std::exp(complexd(0.0, M_PI / 4.0)) / std::sqrt(double(N));
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j) {
            const int e = ((k * k - j * k + j * j) % N + N) % N;  // exact reduction
            const double phase = 2.0 * M_PI / N * double(e);
            U(k, j) = pref * std::exp(complexd(0.0, phase));
        }
    return U;
}

inline double unitarity_defect(const OperatorMatrix& U) {
    const int N = int(U.rows());
    return (U.adjoint() * U - OperatorMatrix::Identity(N, N)).cwiseAbs().maxCoeff();
}

inline OperatorMatrix operator_power(const OperatorMatrix& U, int t) {
    const int N = int(U.rows());
    if (t == 0) return OperatorMatrix::Identity(N, N);
    if (t < 0) return operator_power(OperatorMatrix(U.adjoint()), -t);
    OperatorMatrix r = U;
    for (int i = 1; i < t; ++i) r = r * U;
    return r;
}

// ── Nilpotency ────────────────────────────────────────────────────────────

struct NilpotencyResult {
    int k = 0;        // smallest power with U^k = e^{iφ}·1
    double phi = 0.0; // the global phase, measured
    double defect = 0.0;
};

inline NilpotencyResult nilpotency_period(const TorusHilbert& space, const OperatorMatrix& U) {
    if (space.N > 64)
        throw std::invalid_argument("nilpotency_period: brute-force search limited to N <= 64");
    const int N = space.N;
    const int cap = 4 * N;
    OperatorMatrix P = OperatorMatrix::Identity(N, N);
    for (int k = 1; k <= cap; ++k) {
        P = P * U;
        double off = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (i != j) off = std::max(off, std::abs(P(i, j)));
        // diagonal must be a constant unit-modulus value
        complexd diag_mean = P.diagonal().mean();
        double diag_dev = 0.0;
        for (int i = 0; i < N; ++i) diag_dev = std::max(diag_dev, std::abs(P(i, i) - diag_mean));
        const double defect = std::max(off, diag_dev);
        if (defect < 1e-10) {
            NilpotencyResult r;
            r.k = k;
            r.phi = std::arg(diag_mean);
            r.defect = defect;
            return r;
        }
    }
    throw NotFound("nilpotency_period: no k <= 4N found for N = " + std::to_string(N));
}

// ── Torus coherent states ─────────────────────────────────────────────────

struct TorusCoherentState {
    Vec2 X;
    StateVector coeffs;
    int trunc = 0;  // number of images used on each side of the peak
};

// Periodized coherent state, unnormalized.  Converges like exp(−πN j²); the
// image sum stops once terms drop below 1e-18 relative.
inline TorusCoherentState coherent_state(const TorusHilbert& space, const Vec2& X,
                                         int extra_images = 0) {
    const int N = space.N;
    const double inv_hbar = 2.0 * M_PI * N;
    TorusCoherentState st;
    st.X = X;
    st.coeffs = StateVector::Zero(N);
    int used = 0;
    const long double inv_hbar_ld = 2.0L * M_PIl * N;
    for (int k = 0; k < N; ++k) {
        const double u0 = X.q - double(k) / N;  // j + Q − k/N at j = 0
        // center the image sum on the integer minimizing the Gaussian
        const int jc = int(std::lround(-u0));
        complexd sum = 0.0;
        int j = 0;
        int width = 0;
        for (;; ++width) {
            bool small_tail = true;
            for (int side = 0; side < 2; ++side) {
                j = jc + (side == 0 ? width : -width);
                if (side == 1 && width == 0) continue;
                const double u = double(j) + u0;
                const double gauss = -0.5 * inv_hbar * u * u;
                const long double arg =
                    -inv_hbar_ld * (long double)X.p *
                    ((long double)j + 0.5L * (long double)X.q - (long double)k / N);
                const double ph = double(remainderl(arg, 2.0L * M_PIl));
                const complexd term = std::exp(complexd(gauss, ph));
                sum += term;
                if (gauss > -42.0) small_tail = false;  // e^{-42} ≈ 5.7e-19
            }
            if (small_tail && width > extra_images) break;
        }
        used = std::max(used, width);
        st.coeffs(k) = sum;
    }
    st.trunc = used;
    return st;
}

// ⟨X1|Â|X2⟩ in the unnormalized torus-CS convention.
inline complexd cs_sandwich(const TorusHilbert& space, const Vec2& X1, const OperatorMatrix& A,
                            const Vec2& X2, int extra_images = 0) {
    const auto c1 = coherent_state(space, X1, extra_images);
    const auto c2 = coherent_state(space, X2, extra_images);
    return c1.coeffs.dot(A * c2.coeffs);  // Eigen::dot conjugates the left factor
}

// ⟨X1|Û^t|X2⟩ for the cat-map propagator.
inline complexd exact_cs_element(const TorusHilbert& space, const Vec2& X1, const Vec2& X2, int t,
                                 int extra_images = 0) {
    const OperatorMatrix U = hannay_berry(space);
    return cs_sandwich(space, X1, operator_power(U, t), X2, extra_images);
}

// ── Torus Weyl symbol ─────────────────────────────────────────────────────

// Weyl symbol of A on the center grid x = (a/N, b/N), a,b ∈ [0,N−1], odd N:
//   A_W(a,b) = Σ_k exp[4πi a (b−k)/N] A(k, (2b−k) mod N)
// normalized so the identity has symbol 1 everywhere.
inline complexd torus_weyl_symbol_at(const TorusHilbert& space, const OperatorMatrix& A, int a,
                                     int b) {
    const int N = space.N;
    if (N % 2 == 0) throw EvenNUnsupported("torus_weyl_symbol: N must be odd");
    complexd sum = 0.0;
    for (int k = 0; k < N; ++k) {
        const int jj = ((2 * b - k) % N + N) % N;
        const double ph = 4.0 * M_PI * double(a) * double(b - k) / N;
        sum += std::exp(complexd(0.0, ph)) * A(k, jj);
    }
    return sum;
}

inline Eigen::MatrixXcd torus_weyl_symbol(const TorusHilbert& space, const OperatorMatrix& A) {
    const int N = space.N;
    if (N % 2 == 0) throw EvenNUnsupported("torus_weyl_symbol: N must be odd");
    Eigen::MatrixXcd W(N, N);  // W(a, b), a = p index, b = q index
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) W(a, b) = torus_weyl_symbol_at(space, A, a, b);
    return W;
}

// Analytic Weyl symbol of the quantized map on the center grid x = (a/N, b/N):
//   U_M(x) = 2 |det(M+1)|^{-1/2} Σ_γ exp[i 2πN S(x, m_γ)]
// where γ runs over the torus orbits of M^t with center x, i.e. the windings
// m with initial point x₋ = (M^t+1)^{-1}(2x + m) in the unit cell.  The total
// orbit weight is |det(M^t+1)|; initial points landing exactly on a cell edge
// are shared between two winding representatives and count 1/2 each (1/4 at
// corners).  The returned value carries the bridge constant i^t/2 relating
// this convention to the principal-branch (i/N)^{1/2} propagator phase and
// the Tr[R̂_x·1] = 1 symbol normalization used by torus_weyl_symbol.
inline complexd cat_weyl_symbol_reference(const TorusHilbert& space, const CatMap& map, int t,
                                          const Vec2& x) {
    const CatMap mt = (t == 1) ? map : map.power(t);
    const Mat2 mp1 = mt.map().m + Mat2::identity();
    const Mat2 mp1_inv = mp1.inverse();
    const double inv_hbar = 2.0 * M_PI * space.N;
    const long long box =
        (long long)std::llround(std::abs(mp1.a) + std::abs(mp1.b) + std::abs(mp1.c) +
                                std::abs(mp1.d)) +
        3;
    const double eps = 1e-9;
    complexd sum = 0.0;
    for (long long mp = -box; mp <= box; ++mp)
        for (long long mq = -box; mq <= box; ++mq) {
            const Vec2 xm = mp1_inv * (x * 2.0 + Vec2(double(mp), double(mq)));
            double w = 1.0;
            for (double comp : {xm.p, xm.q}) {
                if (comp > eps && comp < 1.0 - eps) continue;
                if (std::abs(comp) < eps || std::abs(comp - 1.0) < eps)
                    w *= 0.5;
                else {
                    w = 0.0;
                    break;
                }
            }
            if (w == 0.0) continue;
            const double S = mt.center_action(x, IVec2{mp, mq});
            sum += w * std::exp(complexd(0.0, inv_hbar * S));
        }
    const complexd bridge = std::pow(complexd(0.0, 1.0), t) * 0.5;
    return bridge * (2.0 / std::sqrt(std::abs(mp1.det()))) * sum;
}

}  // namespace scprop
