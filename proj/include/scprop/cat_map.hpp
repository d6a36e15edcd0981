#pragma once

/*
 * cat_map.hpp — classical cat map dynamics on the 2-torus.
 *
 * The map is a hyperbolic integer symplectic matrix M acting mod 1:
 *   x₊ = M x₋ − m,  m ∈ ℤ² the winding vector.
 * Orbit segments are described by centers x = (x₊+x₋)/2 and chords
 * ξ = x₊ − x₋, with the center generating function
 *   S(x, m) = x·Bx + x·(B−J)m + ¼ m·(B+J̃)m,    J̃ = [[0,1],[1,0]],
 * whose symplectic gradient reproduces the chord: ξ = −J ∂S/∂x.
 */

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "scprop/phase_space.hpp"

namespace scprop {

// floor-based mod 1; maps exact integers to 0.
inline double mod1(double x) { return x - std::floor(x); }
inline Vec2 mod1(const Vec2& v) { return {mod1(v.p), mod1(v.q)}; }

// Integer 2×2 matrix with exact arithmetic for map powers and windings.
struct IMat2 {
    long long a = 1, b = 0, c = 0, d = 1;

    static IMat2 identity() { return {1, 0, 0, 1}; }

    IMat2 operator*(const IMat2& o) const {
        auto mul = [](long long x, long long y) {
            long long r;
            if (__builtin_mul_overflow(x, y, &r)) throw IntegerOverflow("IMat2: entry overflow");
            return r;
        };
        auto add = [](long long x, long long y) {
            long long r;
            if (__builtin_add_overflow(x, y, &r)) throw IntegerOverflow("IMat2: entry overflow");
            return r;
        };
        return {add(mul(a, o.a), mul(b, o.c)), add(mul(a, o.b), mul(b, o.d)),
                add(mul(c, o.a), mul(d, o.c)), add(mul(c, o.b), mul(d, o.d))};
    }
    IVec2 operator*(const IVec2& v) const { return {a * v.p + b * v.q, c * v.p + d * v.q}; }
    Vec2 operator*(const Vec2& v) const { return {a * v.p + b * v.q, c * v.p + d * v.q}; }
    long long det() const { return a * d - b * c; }
    long long trace() const { return a + d; }
    Mat2 to_mat2() const { return {double(a), double(b), double(c), double(d)}; }
};

// One t-step segment of torus dynamics.
struct OrbitSegment {
    Vec2 x_minus;   // start point
    Vec2 x_plus;    // end point, in [0,1)² when produced by iteration
    IVec2 m;        // winding, x_plus = M^t x_minus − m exactly
    int t = 1;
    Vec2 center;    // (x_plus + x_minus)/2
    Vec2 chord;     // x_plus − x_minus
    double action = 0.0;
};

class CatMap {
  public:
    // Default map of the study: M = [[2,3],[1,2]], λ = ln(2+√3),
    // ζ_u = (1, 1/√3), ζ_s = (−√3/2, 1/2).
    CatMap() : CatMap(IMat2{2, 3, 1, 2}) {}

    explicit CatMap(const IMat2& m) : mi_(m) {
        if (mi_.det() != 1) throw std::invalid_argument("CatMap: det M != 1");
        if (mi_.trace() <= 2) throw std::invalid_argument("CatMap: trace M <= 2, not hyperbolic");
        map_ = SymplecticMap2(mi_.to_mat2());
        cayley_ = cayley_of(map_);
        // eigenvalues e^{±λ} with e^{λ} = (tr + sqrt(tr² − 4)) / 2
        const double tr = double(mi_.trace());
        const double mu = 0.5 * (tr + std::sqrt(tr * tr - 4.0));
        lambda_ = std::log(mu);
    }

    const IMat2& m_int() const { return mi_; }
    const SymplecticMap2& map() const { return map_; }
    const Mat2& cayley() const { return cayley_; }
    double lambda() const { return lambda_; }

    // Exact rational Cayley form: B = cayley_numerator() / det(M+1), with
    // cayley_numerator() = −J(1−M)·adj(M+1), all integer arithmetic.
    IMat2 cayley_numerator() const {
        const IMat2 one_minus{1 - mi_.a, -mi_.b, -mi_.c, 1 - mi_.d};
        const IMat2 adj_p1{mi_.d + 1, -mi_.b, -mi_.c, mi_.a + 1};
        const IMat2 prod = one_minus * adj_p1;
        // −J·prod
        return IMat2{prod.c, prod.d, -prod.a, -prod.b};
    }
    long long cayley_denominator() const { return 2 + mi_.trace(); }

    // Unstable/stable eigendirections, ζ_u ∧ ζ_s = 1.  For the default map
    // this reproduces ζ_u = (1, 1/√3), ζ_s = (−√3/2, 1/2).
    HyperbolicFrame frame() const {
        const double mu = std::exp(lambda_);
        const double a = double(mi_.a), b = double(mi_.b), c = double(mi_.c), d = double(mi_.d);
        // b = 0 is impossible for an integer hyperbolic map (ad = 1, a+d > 2).
        const Vec2 zu{1.0, (mu - a) / b};
        Vec2 zs{1.0 / mu - d, c};  // row-2 eigenvector for e^{-λ}
        // rescale ζ_s alone so ζ_u ∧ ζ_s = 1 while ζ_u keeps unit p-component
        zs = zs * (1.0 / wedge(zu, zs));
        return HyperbolicFrame(zu, zs, lambda_);
    }

    // Map of M^t with its own Cayley form and λ_t = t·λ.
    CatMap power(int t) const {
        if (t < 1) throw std::invalid_argument("CatMap::power: t >= 1 required");
        if (t > 30) throw IntegerOverflow("CatMap::power: t > 30 exceeds the integer guard");
        IMat2 r = IMat2::identity();
        for (int i = 0; i < t; ++i) r = r * mi_;
        return CatMap(r);
    }

    // Single torus step: x₊ = M x − m with x₊ ∈ [0,1)².
    OrbitSegment step(const Vec2& x) const {
        const Vec2 y = map_ * x;
        OrbitSegment s;
        s.x_minus = x;
        s.x_plus = mod1(y);
        s.m = IVec2{(long long)std::floor(y.p), (long long)std::floor(y.q)};
        s.t = 1;
        s.center = (s.x_plus + s.x_minus) * 0.5;
        s.chord = s.x_plus - s.x_minus;
        s.action = center_action(s.center, s.m);
        return s;
    }

    // S(x, m) = x·Bx + x·(B−J)m + ¼ m·(B+J̃)m for this map's Cayley form.
    double center_action(const Vec2& x, const IVec2& m) const {
        return center_action_with(cayley_, x, m);
    }

    static double center_action_with(const Mat2& B, const Vec2& x, const IVec2& m) {
        const Mat2 J = Mat2::symplectic_j();
        const Mat2 Jt{0.0, 1.0, 1.0, 0.0};
        const Vec2 mv = m.to_vec2();
        const double xbx = B.quad(x);
        const Vec2 bmj = (B - J) * mv;
        const double xm = x.dot(bmj);
        const double mm = 0.25 * mv.dot((B + Jt) * mv);
        return xbx + xm + mm;
    }

    // Analytic gradient ∂S/∂x = 2Bx + (B−J)m; chord ξ = −J ∂S/∂x.
    Vec2 action_gradient(const Vec2& x, const IVec2& m) const {
        const Mat2 J = Mat2::symplectic_j();
        return cayley_ * x * 2.0 + (cayley_ - J) * m.to_vec2();
    }

    // Compose t steps, accumulating the total winding exactly.  The action is
    // evaluated in one shot through the center generating function of M^t.
    OrbitSegment orbit_through(const Vec2& x_start, int t) const {
        Vec2 x = x_start;
        IVec2 m_total{0, 0};
        IMat2 acc = IMat2::identity();
        // x_t = M^t x_0 − Σ_j M^{t-1-j} m_j, so the total winding is that sum
        std::vector<IVec2> ms;
        ms.reserve(size_t(t));
        for (int i = 0; i < t; ++i) {
            OrbitSegment s1 = step(x);
            ms.push_back(s1.m);
            x = s1.x_plus;
        }
        for (int j = t - 1; j >= 0; --j) {
            m_total = m_total + acc * ms[size_t(j)];
            acc = acc * mi_;
        }
        const CatMap mt = (t == 1) ? *this : power(t);
        OrbitSegment s;
        s.x_minus = x_start;
        s.x_plus = x;
        s.m = m_total;
        s.t = t;
        s.center = (s.x_plus + s.x_minus) * 0.5;
        s.chord = s.x_plus - s.x_minus;
        s.action = mt.center_action(s.center, s.m);
        return s;
    }

    // Orbit of M^t with center X and winding m: solve (M^t + 1) x₋ = 2X + m.
    OrbitSegment orbit_with_center(const Vec2& X, const IVec2& m, int t) const {
        const CatMap mt = (t == 1) ? *this : power(t);
        const Mat2 mp1 = mt.map().m + Mat2::identity();
        const Vec2 xm = mp1.inverse() * (X * 2.0 + m.to_vec2());
        OrbitSegment s;
        s.x_minus = xm;
        s.x_plus = mt.map() * xm - m.to_vec2();
        s.m = m;
        s.t = t;
        s.center = (s.x_plus + s.x_minus) * 0.5;
        s.chord = s.x_plus - s.x_minus;
        s.action = mt.center_action(s.center, s.m);
        return s;
    }

    // Orbit of M^t with chord ξ0 and winding m: solve (M^t − 1) x₋ = ξ0 + m.
    OrbitSegment orbit_with_chord(const Vec2& xi0, const IVec2& m, int t) const {
        const CatMap mt = (t == 1) ? *this : power(t);
        const Mat2 mm1 = mt.map().m - Mat2::identity();
        if (std::abs(mm1.det()) < 1e-12)
            throw ShortTimeDivergence("orbit_with_chord: det(M^t - 1) = 0");
        const Vec2 xm = mm1.inverse() * (xi0 + m.to_vec2());
        OrbitSegment s;
        s.x_minus = xm;
        s.x_plus = mt.map() * xm - m.to_vec2();
        s.m = m;
        s.t = t;
        s.center = (s.x_plus + s.x_minus) * 0.5;
        s.chord = s.x_plus - s.x_minus;
        s.action = mt.center_action(s.center, s.m);
        return s;
    }

  private:
    IMat2 mi_;
    SymplecticMap2 map_;
    Mat2 cayley_;
    double lambda_ = 0.0;
};

}  // namespace scprop
