#pragma once

/*
 * fock_oracle.hpp — exact propagator for quadratic Hamiltonians in a
 * truncated number basis.  Ground truth for the semiclassical module on
 * continuous flows; shares no matrix code with it beyond scalar arithmetic.
 *
 * The Hamiltonian matrix is built with Weyl (symmetric) ordering,
 *   Ĥ = ½ [ 𝓗_pp p̂² + 𝓗_qq q̂² + 𝓗_pq (p̂q̂ + q̂p̂) ],
 * so its Weyl symbol is exactly the classical ½ x·𝓗x.  Coherent states use
 * z = (Q + iP)/√(2ħ), the convention whose pairwise overlap is
 *   ⟨X|X'⟩ = exp[−(X−X')²/4ħ − i X∧X'/2ħ].
 */

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "scprop/quadratic_flow.hpp"

namespace scprop {

struct FockTruncation {
    int n_max = 128;
    double hbar = 1.0;

    FockTruncation(int n, double hb) : n_max(n), hbar(hb) {
        if (n_max < 8) throw std::invalid_argument("FockTruncation: n_max >= 8 required");
    }
};

// Number-basis coefficients of |X⟩; throws if the tail mass beyond n_max
// exceeds 1e-12.
inline Eigen::VectorXcd cs_fock_coefficients(const Vec2& X, const FockTruncation& trunc) {
    const int n = trunc.n_max;
    const complexd z = complexd(X.q, X.p) / std::sqrt(2.0 * trunc.hbar);
    Eigen::VectorXcd c(n);
    c(0) = std::exp(-0.5 * std::norm(z));
    for (int k = 1; k < n; ++k) c(k) = c(k - 1) * z / std::sqrt(double(k));
    const double norm2 = c.squaredNorm();
    if (1.0 - norm2 > 1e-12)
        throw TruncationError("cs_fock_coefficients: tail mass " + std::to_string(1.0 - norm2) +
                              " exceeds 1e-12 at n_max = " + std::to_string(n));
    return c;
}

namespace detail {

// Weyl-ordered Ĥ in the number basis (Hermitian, bandwidth 2).
inline Eigen::MatrixXcd fock_hamiltonian(const QuadraticHamiltonian& h, int n_max) {
    const double hb = h.hbar;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n_max, n_max);
    const double hpp = h.H.a, hpq = h.H.b, hqq = h.H.d;
    for (int n = 0; n < n_max; ++n) {
        // p̂² and q̂² diagonals: ħ(n + ½)
        H(n, n) = 0.5 * (hpp + hqq) * hb * (n + 0.5);
        if (n + 2 < n_max) {
            const double s = 0.5 * hb * std::sqrt(double(n + 1) * double(n + 2));
            // q̂²: +s, p̂²: −s on the (n, n+2) off-diagonal
            H(n, n + 2) += 0.5 * (hqq - hpp) * s;
            H(n + 2, n) += 0.5 * (hqq - hpp) * s;
            // (p̂q̂ + q̂p̂)/ħ = i(a†² − a²): contributes ±i s · 2 / ħ · ...
            // p̂q̂ + q̂p̂ = iħ(a†² − a²)
            H(n, n + 2) += 0.5 * hpq * complexd(0.0, -2.0 * s);
            H(n + 2, n) += 0.5 * hpq * complexd(0.0, 2.0 * s);
        }
    }
    return H;
}

struct PropagatorCache {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

inline PropagatorCache diagonalize(const QuadraticHamiltonian& h, int n_max) {
    const Eigen::MatrixXcd H = fock_hamiltonian(h, n_max);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success)
        throw TruncationError("fock oracle: eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

inline complexd element_at(const QuadraticHamiltonian& h, const Vec2& X1, const Vec2& X2,
                           double t, int n_max) {
    const auto pc = diagonalize(h, n_max);
    const FockTruncation tr(n_max, h.hbar);
    const Eigen::VectorXcd c1 = cs_fock_coefficients(X1, tr);
    const Eigen::VectorXcd c2 = cs_fock_coefficients(X2, tr);
    const Eigen::VectorXcd a1 = pc.eigenvectors.adjoint() * c1;
    const Eigen::VectorXcd a2 = pc.eigenvectors.adjoint() * c2;
    complexd sum = 0.0;
    for (int k = 0; k < n_max; ++k)
        sum += std::conj(a1(k)) * std::exp(complexd(0.0, -t * pc.eigenvalues(k) / h.hbar)) * a2(k);
    return sum;
}

}  // namespace detail

struct OracleResult {
    complexd value;
    double tolerance;  // |value(n_max) − value(n_max+8)|, the truncation estimate
    int n_max_used;
};

// ⟨X1|exp(−itĤ/ħ)|X2⟩ with automatic escalation of the basis size until the
// result is stable to 1e-9 under n_max → n_max + 8.
inline OracleResult exact_cs_propagator(const QuadraticHamiltonian& h, const Vec2& X1,
                                        const Vec2& X2, double t,
                                        FockTruncation trunc = {128, 1.0}) {
    trunc.hbar = h.hbar;
    int n = trunc.n_max;
    for (;;) {
        const complexd v0 = detail::element_at(h, X1, X2, t, n);
        const complexd v1 = detail::element_at(h, X1, X2, t, n + 8);
        const double diff = std::abs(v0 - v1);
        if (diff < 1e-9) return {v1, diff, n + 8};
        if (n >= 1024)
            throw TruncationError("exact_cs_propagator: no convergence by n_max = 1024 (diff " +
                                  std::to_string(diff) + ")");
        n *= 2;
    }
}

}  // namespace scprop
