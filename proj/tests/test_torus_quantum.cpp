#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "scprop/torus_quantum.hpp"

using namespace scprop;

namespace {

complexd plane_overlap(const Vec2& X1, const Vec2& X2, double hbar) {
    const Vec2 d = X1 - X2;
    return std::exp(complexd(-d.norm2() / (4.0 * hbar), -wedge(X1, X2) / (2.0 * hbar)));
}

// plane coherent-state wavefunction of Eq-type ⟨q|X⟩
complexd plane_psi(double q, const Vec2& X, double hbar) {
    const double gauss = -(q - X.q) * (q - X.q) / (2.0 * hbar);
    const double phase = X.p * (q - 0.5 * X.q) / hbar;
    return std::pow(M_PI * hbar, -0.25) * std::exp(complexd(gauss, phase));
}

}  // namespace

TEST_CASE("plane CS overlap against quadrature") {
    // ∫ dq ψ̄_{X1}(q) ψ_{X2}(q) must reproduce the closed-form overlap
    const double hbar = 0.11;
    const Vec2 X1{0.3, -0.4}, X2{-0.2, 0.5};
    const double lo = -8.0, hi = 8.0;
    const int n = 20000;
    const double dq = (hi - lo) / n;
    complexd acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double q = lo + i * dq;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * std::conj(plane_psi(q, X1, hbar)) * plane_psi(q, X2, hbar);
    }
    acc *= dq;
    REQUIRE(std::abs(acc - plane_overlap(X1, X2, hbar)) < 1e-10);
}

TEST_CASE("hannay_berry propagator") {
    SECTION("unitarity for N up to 64") {
        for (int N = 1; N <= 64; ++N) {
            const TorusHilbert space(N);
            REQUIRE(unitarity_defect(hannay_berry(space)) < 1e-12);
        }
    }
    SECTION("explicit entry at N=3") {
        const TorusHilbert space(3);
        const OperatorMatrix U = hannay_berry(space);
        const complexd want = std::exp(complexd(0.0, M_PI / 4.0)) / std::sqrt(3.0);
        REQUIRE(std::abs(U(0, 0) - want) < 1e-15);
    }
    SECTION("symmetric in (j,k)") {
        const TorusHilbert space(11);
        const OperatorMatrix U = hannay_berry(space);
        REQUIRE((U - U.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("nilpotency of the quantized map") {
    SECTION("N = 1 is trivially periodic") {
        const TorusHilbert space(1);
        const auto r = nilpotency_period(space, hannay_berry(space));
        REQUIRE(r.k == 1);
    }
    SECTION("periodicity holds for all N <= 32") {
        for (int N = 1; N <= 32; ++N) {
            const TorusHilbert space(N);
            const OperatorMatrix U = hannay_berry(space);
            const auto r = nilpotency_period(space, U);
            REQUIRE(r.defect < 1e-10);
            // eigenvalues must lie on the k(N) allowed sites
            Eigen::ComplexEigenSolver<OperatorMatrix> es(U);
            for (int i = 0; i < N; ++i) {
                const double th = std::arg(es.eigenvalues()(i));
                double best = 1e9;
                for (int m = 0; m <= r.k; ++m) {
                    const double site = (2.0 * M_PI * m + r.phi) / r.k;
                    double diff = std::remainder(th - site, 2.0 * M_PI);
                    best = std::min(best, std::abs(diff));
                }
                REQUIRE(best < 1e-8);
            }
        }
    }
}

TEST_CASE("torus coherent states") {
    SECTION("origin state is real, positive, peaked at k = 0") {
        const TorusHilbert space(31);
        const auto st = coherent_state(space, {0.0, 0.0});
        int peak = 0;
        for (int k = 1; k < 31; ++k)
            if (std::abs(st.coeffs(k)) > std::abs(st.coeffs(peak))) peak = k;
        REQUIRE(peak == 0);
        REQUIRE(st.coeffs(0).real() > 0.99);
        REQUIRE(std::abs(st.coeffs(0).imag()) < 1e-14);
        for (int k = 0; k < 31; ++k) REQUIRE(st.coeffs(k).real() > -1e-15);
    }
    SECTION("shifting by one lattice site moves the peak") {
        const TorusHilbert space(21);
        const auto st = coherent_state(space, {0.0, 5.0 / 21.0});
        int peak = 0;
        for (int k = 1; k < 21; ++k)
            if (std::abs(st.coeffs(k)) > std::abs(st.coeffs(peak))) peak = k;
        REQUIRE(peak == 5);
        const auto st2 = coherent_state(space, {0.0, 6.0 / 21.0});
        int peak2 = 0;
        for (int k = 1; k < 21; ++k)
            if (std::abs(st2.coeffs(k)) > std::abs(st2.coeffs(peak2))) peak2 = k;
        REQUIRE(peak2 == 6);
    }
    SECTION("coefficients stable under one extra image") {
        const TorusHilbert space(9);
        const Vec2 X{0.77, 0.13};
        const auto a = coherent_state(space, X, 0);
        const auto b = coherent_state(space, X, 1);
        REQUIRE((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("exact CS matrix elements") {
    const CatMap cat;
    SECTION("t=0 diagonal element is the squared norm") {
        const TorusHilbert space(7);
        const Vec2 X{0.4, 0.6};
        const complexd el = exact_cs_element(space, X, X, 0);
        const auto st = coherent_state(space, X);
        REQUIRE(std::abs(el - complexd(st.coeffs.squaredNorm(), 0.0)) < 1e-12);
    }
    SECTION("unitarity conjugation: <X1|U^t|X2> = conj(<X2|U^-t|X1>)") {
        const TorusHilbert space(9);
        const Vec2 X1{0.15, 0.85}, X2{0.55, 0.35};
        for (int t : {1, 2, 3}) {
            const complexd a = exact_cs_element(space, X1, X2, t);
            const complexd b = exact_cs_element(space, X2, X1, -t);
            REQUIRE(std::abs(a - std::conj(b)) < 1e-12);
        }
    }
    SECTION("t=0 equals the periodized plane overlap") {
        // Σ_k e^{iπ(N/2)k·J̃k} e^{−(i/2ħ)X2∧k} ⟨X1|X2+k⟩ times √(N/2)
        for (int N : {3, 7, 11}) {
            const TorusHilbert space(N);
            const double hbar = space.hbar;
            const Vec2 X1{0.13, 0.57}, X2{0.71, 0.29};
            complexd sum = 0.0;
            for (int kp = -6; kp <= 6; ++kp)
                for (int kq = -6; kq <= 6; ++kq) {
                    const Vec2 k{double(kp), double(kq)};
                    const double ph =
                        M_PI * double(N) * kp * kq - wedge(X2, k) / (2.0 * hbar);
                    sum += std::exp(complexd(0.0, ph)) * plane_overlap(X1, X2 + k, hbar);
                }
            sum *= std::sqrt(0.5 * N);
            const complexd exact = exact_cs_element(space, X1, X2, 0);
            REQUIRE(std::abs(sum - exact) < 1e-12 * std::abs(exact));
        }
    }
    SECTION("element stable under extra periodization images") {
        const TorusHilbert space(5);
        const Vec2 X1{0.25, 0.45}, X2{0.65, 0.95};
        const OperatorMatrix U = hannay_berry(space);
        const complexd a = cs_sandwich(space, X1, U, X2, 0);
        const complexd b = cs_sandwich(space, X1, U, X2, 1);
        REQUIRE(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("torus Weyl symbol") {
    const CatMap cat;
    SECTION("identity has unit symbol") {
        const TorusHilbert space(7);
        const auto W = torus_weyl_symbol(space, OperatorMatrix::Identity(7, 7));
        for (int a = 0; a < 7; ++a)
            for (int b = 0; b < 7; ++b) REQUIRE(std::abs(W(a, b) - 1.0) < 1e-13);
    }
    SECTION("even N is rejected") {
        const TorusHilbert space(4);
        REQUIRE_THROWS_AS(torus_weyl_symbol(space, OperatorMatrix::Identity(4, 4)),
                          EvenNUnsupported);
    }
    SECTION("matches the analytic winding sum for the quantized map") {
        for (int N : {3, 5, 9}) {
            const TorusHilbert space(N);
            const OperatorMatrix U = hannay_berry(space);
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) {
                    const complexd direct = torus_weyl_symbol_at(space, U, a, b);
                    const complexd ref = cat_weyl_symbol_reference(
                        space, cat, 1, {double(a) / N, double(b) / N});
                    REQUIRE(std::abs(direct - ref) < 1e-10);
                }
        }
    }
    SECTION("time-reversal symmetry of the symbol") {
        // The equal-diagonal map gives U* = U† in the position basis.  On the
        // symbol this reads |W(p,q)| = |W(−p,q)| = |W(p,−q)| together with
        // conj(W_U(−p,q)) = W_{U†}(p,q); the phases of the bare reflection
        // identity depend on the propagator's global phase branch.
        for (int N : {3, 5, 7, 31}) {
            const TorusHilbert space(N);
            const OperatorMatrix U1 = hannay_berry(space);
            for (int t : {1, 2, 3}) {
                const OperatorMatrix Ut = operator_power(U1, t);
                const OperatorMatrix Utd = Ut.adjoint();
                const auto W = torus_weyl_symbol(space, Ut);
                const auto Wd = torus_weyl_symbol(space, Utd);
                for (int a = 0; a < N; ++a)
                    for (int b = 0; b < N; ++b) {
                        const int am = (N - a) % N, bm = (N - b) % N;
                        REQUIRE(std::abs(std::abs(W(a, b)) - std::abs(W(am, b))) < 1e-10);
                        REQUIRE(std::abs(std::abs(W(a, b)) - std::abs(W(a, bm))) < 1e-10);
                        REQUIRE(std::abs(std::conj(W(am, b)) - Wd(a, b)) < 1e-10);
                    }
            }
        }
    }
}
