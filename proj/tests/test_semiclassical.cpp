#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "scprop/semiclassical.hpp"

using namespace scprop;
using namespace scprop::sc;

namespace {

SymplecticMap2 random_symplectic(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(rng), b = u(rng), th = u(rng);
    const Mat2 shear_q{1.0, 0.0, a, 1.0};
    const Mat2 shear_p{1.0, b, 0.0, 1.0};
    const Mat2 rot{std::cos(th), -std::sin(th), std::sin(th), std::cos(th)};
    return SymplecticMap2(shear_q * rot * shear_p);
}

}  // namespace

TEST_CASE("plane SC3 at t = 0 is the coherent-state overlap, bit for bit") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const SymplecticMap2 identity(1, 0, 0, 1);
    for (int i = 0; i < 100; ++i) {
        const Vec2 X1{u(rng), u(rng)}, X2{u(rng), u(rng)};
        const double hbar = 0.25 + 0.75 * std::abs(u(rng));
        const CSElement el = sc3_plane_element(identity, Mat2::identity(), X1, X2, hbar);
        const complexd want = plane_cs_overlap(X1, X2, hbar);
        REQUIRE(std::abs(el.value) == std::abs(want));  // amplitudes bitwise equal
        REQUIRE(std::abs(std::arg(el.value / want)) < 1e-14);
    }
}

TEST_CASE("cat-map SC3 equals the exact propagator element") {
    const CatMap cat;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t : {1, 2, 3}) {
        for (int N : {3, 7, 13}) {
            const TorusHilbert sp(N);
            complexd convention{0, 0};
            for (int i = 0; i < 5; ++i) {
                const Vec2 X1{u(rng), u(rng)}, X2{u(rng), u(rng)};
                const complexd exact = exact_cs_element(sp, X1, X2, t);
                const CSElement s3 = sc3_element(cat, X1, X2, t, sp.hbar);
                REQUIRE(std::abs(std::abs(s3.value) - std::abs(exact)) <
                        1e-10 * std::abs(exact));
                const complexd ratio = s3.value / exact;
                if (i == 0)
                    convention = ratio / std::abs(ratio);
                else
                    REQUIRE(std::abs(std::arg(ratio / convention)) < 1e-10);
            }
            // the measured convention phase is (−i)^t, independent of N
            const complexd expect = std::pow(complexd(0, -1), t);
            REQUIRE(std::abs(convention - expect) < 1e-9);
        }
    }
}

TEST_CASE("SC3 linearized equals SC3 on the cat map") {
    const CatMap cat;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t : {1, 2, 3}) {
        const TorusHilbert sp(9);
        for (int i = 0; i < 20; ++i) {
            const Vec2 X1{u(rng), u(rng)}, X2{u(rng), u(rng)};
            const CSElement a = sc3_element(cat, X1, X2, t, sp.hbar);
            const CSElement b = sc3_linearized(cat, X1, X2, t, sp.hbar);
            REQUIRE(std::abs(a.value - b.value) <= 1e-12 * std::max(1.0, std::abs(a.value)));
            // point-shift reconstruction (M+1)δ = d
            const Mat2 mp1 = cat.power(t).map().m + Mat2::identity();
            const Vec2 lhs = mp1 * b.delta;
            REQUIRE(std::abs(lhs.p - b.drift.p) < 1e-12);
            REQUIRE(std::abs(lhs.q - b.drift.q) < 1e-12);
        }
    }
}

TEST_CASE("winding sum equals periodized plane elements") {
    const CatMap cat;
    const TorusHilbert sp(7);
    const Vec2 X1{0.21, 0.67}, X2{0.83, 0.12};
    for (int t : {1, 2}) {
        const CSElement ws = sc3_element(cat, X1, X2, t, sp.hbar);
        SymplecticMap2 mt = cat.map();
        for (int i = 1; i < t; ++i) mt = mt * cat.map();
        auto plane_fn = [&](Vec2 x1, Vec2 x2) {
            return sc3_plane_element(mt, Mat2::identity(), x1, x2, sp.hbar).value;
        };
        const CSElement per = torus_periodize(plane_fn, sp, X1, X2);
        REQUIRE(std::abs(ws.value - per.value) < 1e-12 * std::max(1.0, std::abs(ws.value)));
    }
}

TEST_CASE("torus periodization") {
    const CatMap cat;
    SECTION("applied to the exact plane overlap reproduces the exact element at t=0") {
        for (int N : {3, 9, 15}) {
            const TorusHilbert sp(N);
            const Vec2 X1{0.31, 0.44}, X2{0.72, 0.91};
            auto overlap_fn = [&](Vec2 a, Vec2 b) { return plane_cs_overlap(a, b, sp.hbar); };
            const CSElement per = torus_periodize(overlap_fn, sp, X1, X2);
            const complexd exact = exact_cs_element(sp, X1, X2, 0);
            REQUIRE(std::abs(per.value - exact) < 1e-12 * std::abs(exact));
        }
    }
    SECTION("single image dominates for central points at large N") {
        const TorusHilbert sp(41);
        const Vec2 X1{0.52, 0.49}, X2{0.47, 0.55};
        auto overlap_fn = [&](Vec2 a, Vec2 b) { return plane_cs_overlap(a, b, sp.hbar); };
        const CSElement per = torus_periodize(overlap_fn, sp, X1, X2);
        const complexd single = std::sqrt(0.5 * 41.0) * plane_cs_overlap(X1, X2, sp.hbar);
        REQUIRE(std::abs(per.value - single) < 1e-12 * std::abs(single));
    }
    SECTION("stable under enlarging the image window") {
        const TorusHilbert sp(5);
        const Vec2 X1{0.05, 0.95}, X2{0.9, 0.1};
        auto overlap_fn = [&](Vec2 a, Vec2 b) { return plane_cs_overlap(a, b, sp.hbar); };
        const CSElement a = torus_periodize(overlap_fn, sp, X1, X2, 1e-16);
        const CSElement b = torus_periodize(overlap_fn, sp, X1, X2, 1e-22);
        REQUIRE(std::abs(a.value - b.value) < 1e-12 * std::abs(a.value));
    }
}

TEST_CASE("SC1 structure") {
    const CatMap cat;
    SECTION("fixed-point diagonal element has the bare 2/sqrt(6) term") {
        // at N = 31 the nearest competing winding is damped below 1e-9
        const TorusHilbert sp(31);
        const CSElement el = sc1_element(cat, {0, 0}, {0, 0}, 1, sp.hbar);
        REQUIRE(el.dominant_m == IVec2{0, 0});
        REQUIRE(el.gauss_exponent == 0.0);
        const double bare = std::abs(el.value) / (std::sqrt(0.5 * 31.0));
        REQUIRE(bare == Catch::Approx(2.0 / std::sqrt(6.0)).margin(1e-9));
    }
    SECTION("t=0 reduces to the periodized overlap") {
        const TorusHilbert sp(5);
        const Vec2 X1{0.31, 0.62}, X2{0.75, 0.2};
        const CSElement el = sc1_element(cat, X1, X2, 0, sp.hbar);
        const complexd exact = exact_cs_element(sp, X1, X2, 0);
        REQUIRE(std::abs(el.value - exact) < 1e-12 * std::abs(exact));
    }
    SECTION("amplitude error against exact exceeds 10% on the reference configuration") {
        const TorusHilbert sp(7);
        const Vec2 X1{0.15, 0.35}, X2{0.65, 0.80};
        const complexd exact = exact_cs_element(sp, X1, X2, 1);
        const CSElement el = sc1_element(cat, X1, X2, 1, sp.hbar);
        const double err = std::abs(std::abs(el.value) - std::abs(exact)) / std::abs(exact);
        REQUIRE(err > 0.1);
    }
    SECTION("window enlargement changes the sum below 1e-8 relative") {
        // windings beyond the adaptive window are damped below the floor
        const CatMap map;
        const TorusHilbert sp(5);
        const Vec2 X1{0.41, 0.13}, X2{0.87, 0.59};
        const CSElement base = sc1_element(map, X1, X2, 1, sp.hbar);
        // brute-force reference with a huge fixed window
        const SCContext ctx = sc::detail::make_map_context(map, 1, sp.hbar, Method::SC1);
        const Vec2 X = (X1 + X2) * 0.5;
        const Vec2 xi0 = X1 - X2;
        const Mat2 mm1 = ctx.m_t - Mat2::identity();
        complexd brute = 0.0;
        const double amp =
            sc::detail::torus_state_norm(sp.hbar) * 2.0 / std::sqrt(ctx.matrix_set.detM1);
        for (long long mp = -30; mp <= 30; ++mp)
            for (long long mq = -30; mq <= 30; ++mq) {
                const IVec2 m{mp, mq};
                const Vec2 xm = ctx.mp1_inv * (X * 2.0 + m.to_vec2());
                const Vec2 chord = mm1 * xm - m.to_vec2();
                const double g = (chord - xi0).norm2() / (4.0 * sp.hbar);
                const double s = CatMap::center_action_with(ctx.matrix_set.B, X, m);
                brute += amp * std::exp(complexd(-g, (s - 0.5 * wedge(X1, X2)) / sp.hbar));
            }
        REQUIRE(std::abs(base.value - brute) < 1e-8 * std::abs(brute));
    }
}

TEST_CASE("SC2 structure") {
    const CatMap cat;
    SECTION("diverges at t = 0") {
        const TorusHilbert sp(5);
        REQUIRE_THROWS_AS(sc2_element(cat, {0.1, 0.2}, {0.3, 0.4}, 0, sp.hbar),
                          ShortTimeDivergence);
    }
    SECTION("|det(M−1)| = 2 for t = 1") {
        const Mat2 mm1 = cat.map().m - Mat2::identity();
        REQUIRE(std::abs(mm1.det()) == Catch::Approx(2.0));
    }
    SECTION("fixed-point diagonal element carries no Gaussian suppression") {
        const TorusHilbert sp(7);
        const CSElement el = sc2_element(cat, {0, 0}, {0, 0}, 1, sp.hbar);
        REQUIRE(el.dominant_m == IVec2{0, 0});
        REQUIRE(el.gauss_exponent == 0.0);
    }
    SECTION("amplitude error grows with N on the reference configuration") {
        std::vector<int> Ns;
        for (int n = 3; n <= 31; n += 2) Ns.push_back(n);
        const auto rows =
            error_sweep(cat, Ns, 1, {0.15, 0.35}, {0.65, 0.80}, {Method::SC2});
        std::vector<double> ns, errs;
        for (const auto& r : rows) {
            REQUIRE(r.ok);
            ns.push_back(r.N);
            errs.push_back(r.amp_error);
        }
        REQUIRE(spearman(ns, errs) > 0.9);
    }
}

TEST_CASE("symplectic invariance of the SC3 amplitude") {
    // conjugating the map and transforming the metric congruently leaves
    // |SC3| invariant
    const CatMap cat;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double hbar = 1.0 / (2.0 * M_PI * 7);
    for (int i = 0; i < 12; ++i) {
        const SymplecticMap2 T0 = random_symplectic(rng);
        const Mat2 t0i = T0.m.inverse();
        const SymplecticMap2 conjugated(t0i * cat.map().m * T0.m);
        const Mat2 metric = T0.m.transpose() * T0.m;
        const Vec2 X1{u(rng), u(rng)}, X2{u(rng), u(rng)};
        const CSElement plain =
            sc3_plane_element(cat.map(), Mat2::identity(), X1, X2, hbar);
        const CSElement trans =
            sc3_plane_element(conjugated, metric, t0i * X1, t0i * X2, hbar);
        REQUIRE(std::abs(std::abs(plain.value) - std::abs(trans.value)) <
                1e-10 * std::abs(plain.value));
    }
}

TEST_CASE("flow SC3 against the number-basis oracle") {
    SECTION("harmonic oscillator across caustics") {
        const QuadraticHamiltonian ho{Mat2::identity(), 1.0};
        const Vec2 X1{0.4, -0.2}, X2{-0.3, 0.5};
        for (int i = 0; i <= 64; ++i) {
            const double t = 4.0 * M_PI * i / 64.0;
            const auto oracle = exact_cs_propagator(ho, X1, X2, t);
            const CSElement s3 = sc3_element(ho, X1, X2, t);
            const double tol = 10.0 * std::max(oracle.tolerance, 1e-12);
            REQUIRE(std::abs(s3.value - oracle.value) < tol);
        }
        // exactly at the caustics
        for (double t : {M_PI, 3.0 * M_PI}) {
            const auto oracle = exact_cs_propagator(ho, X1, X2, t);
            const CSElement s3 = sc3_element(ho, X1, X2, t);
            REQUIRE(std::isfinite(std::abs(s3.value)));
            REQUIRE(std::abs(s3.value - oracle.value) < 1e-10);
        }
    }
    SECTION("inverted oscillator") {
        const QuadraticHamiltonian inv{Mat2{1, 0, 0, -1}, 1.0};
        const Vec2 X1{0.3, 0.1}, X2{-0.2, 0.4};
        for (double t : {0.25, 0.5, 1.0, 1.5, 2.0}) {
            const auto oracle = exact_cs_propagator(inv, X1, X2, t);
            const CSElement s3 = sc3_element(inv, X1, X2, t);
            const double tol = 10.0 * std::max(oracle.tolerance, 1e-12);
            REQUIRE(std::abs(s3.value - oracle.value) < tol);
        }
    }
    SECTION("zero drift reduces the linearized form to the center form") {
        const QuadraticHamiltonian ho{Mat2::identity(), 1.0};
        const double t = 1.1;
        const Vec2 X2{0.6, -0.3};
        const Vec2 X1 = monodromy(ho, t) * X2;  // d = 0 exactly
        const CSElement lin = sc3_linearized(ho, X1, X2, t);
        REQUIRE(lin.drift.norm() < 1e-14);
        REQUIRE(std::abs(std::abs(lin.value) -
                         2.0 / std::sqrt(std::abs(sc_flow_data(ho, t).detW))) < 1e-13);
    }
}

TEST_CASE("error_sweep rows") {
    const CatMap cat;
    const auto rows = error_sweep(cat, {3, 5}, 1, {0.15, 0.35}, {0.65, 0.80},
                                  {Method::SC1, Method::SC3});
    REQUIRE(rows.size() == 4);
    REQUIRE(rows[0].N == 3);
    REQUIRE(rows[0].method == Method::SC1);
    REQUIRE(rows[1].method == Method::SC3);
    for (const auto& r : rows) REQUIRE(r.ok);
    // a failing method propagates the error without aborting the sweep
    const auto rows2 = error_sweep(cat, {3}, 0, {0.1, 0.1}, {0.2, 0.2}, {Method::SC2});
    REQUIRE(rows2.size() == 1);
    REQUIRE_FALSE(rows2[0].ok);
    REQUIRE(rows2[0].message.find("det(M^t - 1)") != std::string::npos);
}
