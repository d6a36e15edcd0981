#pragma once

/*
 * weyl_ops.hpp — translation (Heisenberg) and reflection operators on the
 * N-torus Hilbert space, odd N.
 *
 * Translations live on the 1/N lattice, ξ = (r/N, s/N):
 *   T̂_ξ |q_a⟩ = e^{(i/ħ)p(q_a + q/2)} |q_a + q⟩
 * Reflections live on the half-lattice, x = (d/2N, c/2N):
 *   R̂_x |q_a⟩ = e^{(2i/ħ)(x_q − q_a)x_p} |2x_q − q_a⟩
 * Both transcribe the continuum actions; all torus wraparound phases are
 * multiples of 2π on these lattices, which is what singles the lattices out.
 *
 * These operators satisfy, with ∧ the symplectic form and lattice arguments,
 *   T̂_{ξ2}T̂_{ξ1} = T̂_{ξ1+ξ2} e^{−(i/2ħ) ξ1∧ξ2}
 *   R̂_x T̂_ξ    = R̂_{x−ξ/2} e^{−(i/ħ) x∧ξ}
 *   T̂_ξ R̂_x    = R̂_{x+ξ/2} e^{−(i/ħ) x∧ξ}
 *   R̂_{x1}R̂_{x2} = T̂_{2(x1−x2)} e^{−(2i/ħ) x1∧x2}
 *   R̂_{x2}R̂_x R̂_{x1} = e^{(i/ħ)Δ₃} R̂_{x2−x+x1},  Δ₃ = 2(x2−x)∧(x1−x)
 *   R̂_x² = 1,   (1/2N) Σ_x R̂_x = 1   (sum over the (2N)² half-lattice)
 *
 * Tr R̂_x = (−1)^{cd}; the Weyl symbol normalization absorbs this parity so
 * that the identity operator has symbol 1 on every half-lattice point.
 */

#include <cmath>
#include <vector>

#include "scprop/torus_quantum.hpp"

namespace scprop {

// Translation label on the 1/N lattice.
struct LatticeChord {
    long long r;  // p = r/N
    long long s;  // q = s/N

    static LatticeChord from_point(const TorusHilbert& space, const Vec2& xi) {
        const double rp = xi.p * space.N, rq = xi.q * space.N;
        const auto r = (long long)std::llround(rp);
        const auto s = (long long)std::llround(rq);
        if (std::abs(rp - r) > 1e-9 || std::abs(rq - s) > 1e-9)
            throw OffLattice("translation label not on the 1/N lattice");
        return {r, s};
    }
    Vec2 to_point(const TorusHilbert& space) const {
        return {double(r) / space.N, double(s) / space.N};
    }
};

// Reflection center on the half-lattice (1/2N grid).
struct LatticeCenter {
    long long d;  // p = d/2N
    long long c;  // q = c/2N

    static LatticeCenter from_point(const TorusHilbert& space, const Vec2& x) {
        const double rp = 2.0 * x.p * space.N, rq = 2.0 * x.q * space.N;
        const auto d = (long long)std::llround(rp);
        const auto c = (long long)std::llround(rq);
        if (std::abs(rp - d) > 1e-9 || std::abs(rq - c) > 1e-9)
            throw OffLattice("reflection center not on the half-lattice");
        return {d, c};
    }
    Vec2 to_point(const TorusHilbert& space) const {
        return {double(d) / (2.0 * space.N), double(c) / (2.0 * space.N)};
    }
};

namespace detail {
inline int posmod(long long v, int n) {
    const long long r = v % n;
    return int(r < 0 ? r + n : r);
}
}  // namespace detail

inline OperatorMatrix translation(const TorusHilbert& space, const LatticeChord& xi) {
    const int N = space.N;
    if (N % 2 == 0) throw EvenNUnsupported("translation: odd N required");
    OperatorMatrix T = OperatorMatrix::Zero(N, N);
    for (int a = 0; a < N; ++a) {
        const int target = detail::posmod(a + xi.s, N);
        // (i/ħ) p (q_a + q/2) = (2π/N)(r a + r s/2)
        const double phase = 2.0 * M_PI / N * (double(xi.r) * a + 0.5 * double(xi.r * xi.s));
        T(target, a) = std::exp(complexd(0.0, phase));
    }
    return T;
}

inline OperatorMatrix translation(const TorusHilbert& space, const Vec2& xi) {
    return translation(space, LatticeChord::from_point(space, xi));
}

inline OperatorMatrix reflection(const TorusHilbert& space, const LatticeCenter& x) {
    const int N = space.N;
    if (N % 2 == 0) throw EvenNUnsupported("reflection: odd N required");
    OperatorMatrix R = OperatorMatrix::Zero(N, N);
    for (int a = 0; a < N; ++a) {
        const int target = detail::posmod(x.c - a, N);
        // (2i/ħ)(x_q − q_a)x_p = (π/N) d (c − 2a)
        const double phase = M_PI / N * double(x.d) * double(x.c - 2 * a);
        R(target, a) = std::exp(complexd(0.0, phase));
    }
    return R;
}

inline OperatorMatrix reflection(const TorusHilbert& space, const Vec2& x) {
    return reflection(space, LatticeCenter::from_point(space, x));
}

// A_W(x) = ν(x)·Tr[R̂_x A], with ν(x) = (−1)^{cd} fixing A = 1 ↦ symbol 1 on
// the whole half-lattice (ν ≡ 1 on the integer sublattice).
inline complexd weyl_symbol_via_reflection(const TorusHilbert& space, const OperatorMatrix& A,
                                           const LatticeCenter& x) {
    const int N = space.N;
    if (N % 2 == 0) throw EvenNUnsupported("weyl_symbol_via_reflection: odd N required");
    complexd tr = 0.0;
    for (int a = 0; a < N; ++a) {
        const int k = detail::posmod(x.c - a, N);
        const double phase = M_PI / N * double(x.d) * double(x.c - 2 * a);
        tr += std::exp(complexd(0.0, phase)) * A(a, k);
    }
    const double parity = ((x.c * x.d) % 2 == 0) ? 1.0 : -1.0;
    return parity * tr;
}

inline complexd weyl_symbol_via_reflection(const TorusHilbert& space, const OperatorMatrix& A,
                                           const Vec2& x) {
    return weyl_symbol_via_reflection(space, A, LatticeCenter::from_point(space, x));
}

// ── Operator-algebra verification ─────────────────────────────────────────

struct IdentityReport {
    double dev_tt = 0.0;            // translation group law
    double dev_t_inverse = 0.0;     // T̂_ξ† = T̂_{−ξ}
    double dev_rt = 0.0;            // R̂ T̂ composition
    double dev_tr = 0.0;            // T̂ R̂ composition
    double dev_rr = 0.0;            // R̂ R̂ = T̂ with phase
    double dev_rrr = 0.0;           // three-reflection law
    double dev_r_involutive = 0.0;  // R̂² = 1
    double dev_unitarity = 0.0;     // max over all operators built
    double dev_completeness = 0.0;  // (1/2N) Σ_x R̂_x = 1
    double dev_trace_orthogonality = 0.0;  // Tr[R̂_x1 R̂_x2] on the integer sublattice
    double max_deviation() const {
        double m = dev_tt;
        for (double v : {dev_t_inverse, dev_rt, dev_tr, dev_rr, dev_rrr, dev_r_involutive,
                         dev_unitarity, dev_completeness, dev_trace_orthogonality})
            m = std::max(m, v);
        return m;
    }
    bool all_pass(double tol) const { return max_deviation() < tol; }
};

inline IdentityReport compose_identities_report(const TorusHilbert& space) {
    const int N = space.N;
    if (N % 2 == 0 || N > 31)
        throw std::invalid_argument("compose_identities_report: odd N <= 31 required");
    const double inv_hbar = 2.0 * M_PI * N;
    IdentityReport rep;
    const OperatorMatrix one = OperatorMatrix::Identity(N, N);

    auto dev = [](const OperatorMatrix& A, const OperatorMatrix& B) {
        return (A - B).cwiseAbs().maxCoeff();
    };

    // representative lattice chords and centers (all residues for small N)
    std::vector<LatticeChord> chords;
    for (long long r = 0; r < N; ++r)
        for (long long s = 0; s < N; ++s) chords.push_back({r, s});
    std::vector<LatticeCenter> centers;
    for (long long d = 0; d < 2 * N; ++d)
        for (long long c = 0; c < 2 * N; ++c) centers.push_back({d, c});

    // thin the sets for larger N to keep the report fast
    const size_t stride_c = chords.size() > 64 ? chords.size() / 64 : 1;
    const size_t stride_r = centers.size() > 64 ? centers.size() / 64 : 1;
    std::vector<LatticeChord> xs;
    for (size_t i = 0; i < chords.size(); i += stride_c) xs.push_back(chords[i]);
    std::vector<LatticeCenter> cs;
    for (size_t i = 0; i < centers.size(); i += stride_r) cs.push_back(centers[i]);

    for (const auto& xi : xs) rep.dev_unitarity = std::max(rep.dev_unitarity, unitarity_defect(translation(space, xi)));
    for (const auto& x : cs) rep.dev_unitarity = std::max(rep.dev_unitarity, unitarity_defect(reflection(space, x)));

    auto wedge_l = [&](double ap, double aq, double bp, double bq) { return ap * bq - aq * bp; };

    // (tt): T̂_{ξ2}T̂_{ξ1} = T̂_{ξ1+ξ2} e^{−(i/2ħ)ξ1∧ξ2}
    for (const auto& xi1 : xs)
        for (const auto& xi2 : xs) {
            const OperatorMatrix lhs = translation(space, xi2) * translation(space, xi1);
            const double w = wedge_l(double(xi1.r) / N, double(xi1.s) / N, double(xi2.r) / N,
                                     double(xi2.s) / N);
            const OperatorMatrix rhs = translation(space, LatticeChord{xi1.r + xi2.r, xi1.s + xi2.s}) *
                                       std::exp(complexd(0.0, -0.5 * inv_hbar * w));
            rep.dev_tt = std::max(rep.dev_tt, dev(lhs, rhs));
        }

    // inverse: T̂_ξ† = T̂_{−ξ}
    for (const auto& xi : xs) {
        const OperatorMatrix lhs = translation(space, xi).adjoint();
        const OperatorMatrix rhs = translation(space, LatticeChord{-xi.r, -xi.s});
        rep.dev_t_inverse = std::max(rep.dev_t_inverse, dev(lhs, rhs));
    }

    // (rt) and (tr): reflections shift by half-chords, ξ/2 on the half-lattice
    for (const auto& x : cs)
        for (const auto& xi : xs) {
            const Vec2 xp = x.to_point(space);
            const Vec2 xip = xi.to_point(space);
            const double w = wedge_l(xp.p, xp.q, xip.p, xip.q);
            const OperatorMatrix rt = reflection(space, x) * translation(space, xi);
            const OperatorMatrix rt_ref =
                reflection(space, LatticeCenter{x.d - xi.r, x.c - xi.s}) *
                std::exp(complexd(0.0, -inv_hbar * w));
            rep.dev_rt = std::max(rep.dev_rt, dev(rt, rt_ref));
            const OperatorMatrix tr = translation(space, xi) * reflection(space, x);
            const OperatorMatrix tr_ref =
                reflection(space, LatticeCenter{x.d + xi.r, x.c + xi.s}) *
                std::exp(complexd(0.0, -inv_hbar * w));
            rep.dev_tr = std::max(rep.dev_tr, dev(tr, tr_ref));
        }

    // (rr): R̂_{x1}R̂_{x2} = T̂_{2(x1−x2)} e^{−(2i/ħ)x1∧x2}
    for (const auto& x1 : cs)
        for (const auto& x2 : cs) {
            const Vec2 p1 = x1.to_point(space), p2 = x2.to_point(space);
            const OperatorMatrix lhs = reflection(space, x1) * reflection(space, x2);
            const OperatorMatrix rhs =
                translation(space, LatticeChord{x1.d - x2.d, x1.c - x2.c}) *
                std::exp(complexd(0.0, -2.0 * inv_hbar * wedge_l(p1.p, p1.q, p2.p, p2.q)));
            rep.dev_rr = std::max(rep.dev_rr, dev(lhs, rhs));
        }

    // three reflections: R̂_{x2}R̂_x R̂_{x1} = e^{(i/ħ)Δ₃}R̂_{x2−x+x1}
    for (size_t i = 0; i + 2 < cs.size(); i += 3) {
        const auto &x1 = cs[i], &x = cs[i + 1], &x2 = cs[i + 2];
        const Vec2 p1 = x1.to_point(space), p = x.to_point(space), p2 = x2.to_point(space);
        const double delta3 =
            2.0 * wedge_l(p2.p - p.p, p2.q - p.q, p1.p - p.p, p1.q - p.q);
        const OperatorMatrix lhs =
            reflection(space, x2) * reflection(space, x) * reflection(space, x1);
        const OperatorMatrix rhs =
            reflection(space, LatticeCenter{x2.d - x.d + x1.d, x2.c - x.c + x1.c}) *
            std::exp(complexd(0.0, inv_hbar * delta3));
        rep.dev_rrr = std::max(rep.dev_rrr, dev(lhs, rhs));
    }

    // R̂² = 1 and completeness over the whole half-lattice
    OperatorMatrix sum = OperatorMatrix::Zero(N, N);
    for (const auto& x : centers) {
        const OperatorMatrix R = reflection(space, x);
        rep.dev_r_involutive = std::max(rep.dev_r_involutive, dev(R * R, one));
        sum += R;
    }
    rep.dev_completeness = dev(sum / (2.0 * N), one);

    // trace orthogonality on the integer sublattice: Tr[R̂_{x1}R̂_{x2}] = N δ
    for (long long d1 = 0; d1 < N; ++d1)
        for (long long c1 = 0; c1 < N; ++c1) {
            const OperatorMatrix R1 = reflection(space, LatticeCenter{2 * d1, 2 * c1});
            for (long long d2 = 0; d2 < N; ++d2)
                for (long long c2 = 0; c2 < N; ++c2) {
                    if (N > 7 && ((d2 + c2) % 3 != 0)) continue;  // thin large cases
                    const OperatorMatrix R2 = reflection(space, LatticeCenter{2 * d2, 2 * c2});
                    const complexd tr = (R1 * R2).trace();
                    const complexd want = (d1 == d2 && c1 == c2) ? complexd(N, 0) : complexd(0, 0);
                    rep.dev_trace_orthogonality =
                        std::max(rep.dev_trace_orthogonality, std::abs(tr - want));
                }
        }
    return rep;
}

}  // namespace scprop
