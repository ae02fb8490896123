#pragma once

// Transverse-field Ising chain with periodic boundary:
//   H = -sum_i (sigma^x_i sigma^x_{i+1} + h sigma^z_i),  sigma^x_{N+1} = sigma^x_1.
// Builds the dense Hamiltonian, exact ground states, and the closed-form
// ground states for N = 3 and N = 4.

#include <bit>
#include <cmath>
#include <cstdint>

#include "gme/qkernel.hpp"

namespace gme {

struct TfimParams {
    int n_qubits = 3;
    double h = 0.0; // transverse field, Ising coupling fixed to 1

    void validate() const {
        if (n_qubits < 3 || n_qubits > kMaxQubits) {
            throw InvalidInput("TfimParams: n_qubits must be in [3, " +
                               std::to_string(kMaxQubits) + "]");
        }
        if (!std::isfinite(h) || h < 0.0) {
            throw InvalidInput("TfimParams: h must be finite and >= 0");
        }
    }
};

// Closed-form ground-state coefficients for N = 3 and N = 4.
struct AnalyticCoefficients {
    double gamma1 = 0.0; // -1 + 2h + 2 sqrt(1 - h + h^2)
    double gamma2 = 0.0; // -1 + 2h^2 + 2 sqrt(1 + h^4)
    double gamma3 = 0.0; // sqrt(1 + h^2 + sqrt(1 + h^4))
    double norm1 = 0.0;  // 3 + gamma1^2
    double norm2 = 0.0;
};

inline AnalyticCoefficients analytic_coefficients(double h) {
    if (!(h >= 0.0)) throw InvalidInput("analytic_coefficients: h must be >= 0");
    AnalyticCoefficients c;
    c.gamma1 = -1.0 + 2.0 * h + 2.0 * std::sqrt(1.0 - h + h * h);
    c.norm1 = 3.0 + c.gamma1 * c.gamma1;
    const double r = std::sqrt(1.0 + h * h * h * h);
    c.gamma2 = -1.0 + 2.0 * h * h + 2.0 * r;
    c.gamma3 = std::sqrt(1.0 + h * h + r);
    const double s2 = std::sqrt(2.0);
    const double c_nn = h + c.gamma3 / s2;
    const double c_alt = (4.0 * h + 2.0 * s2 * c.gamma3) / (2.0 * s2 * c.gamma3);
    const double c_0 = c.gamma2 - 2.0 * s2 * h / c.gamma3 + 2.0 * s2 * h * c.gamma3;
    c.norm2 = 1.0 + 4.0 * c_nn * c_nn + 2.0 * c_alt * c_alt + c_0 * c_0;
    return c;
}

// Dense 2^N x 2^N matrix of H. Diagonal entry of basis state b is
// -h (N - 2 popcount(b)); each Ising bond contributes -1 on the pair of
// states that differ by flipping qubits (i, i+1 mod N).
inline HermitianOperator build_hamiltonian(const TfimParams& p) {
    p.validate();
    const int n = p.n_qubits;
    const std::int64_t dim = std::int64_t{1} << n;
    HermitianOperator H;
    H.entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t b = 0; b < dim; ++b) {
        const int pop = std::popcount(static_cast<std::uint64_t>(b));
        H.entries(b, b) = -p.h * (n - 2 * pop);
    }
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const std::int64_t mask =
            (std::int64_t{1} << (n - 1 - i)) | (std::int64_t{1} << (n - 1 - j));
        for (std::int64_t b = 0; b < dim; ++b) {
            H.entries(b, b ^ mask) += -1.0;
        }
    }
    return H;
}

// Spin-flip parity prod_j sigma^z_j: diagonal with (-1)^popcount(b).
inline HermitianOperator parity_operator(int n_qubits) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    HermitianOperator P;
    P.entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t b = 0; b < dim; ++b) {
        P.entries(b, b) = (std::popcount(static_cast<std::uint64_t>(b)) % 2 == 0) ? 1.0 : -1.0;
    }
    return P;
}

struct GroundStateResult {
    QuantumState state;
    double energy = 0.0;
    double gap = 0.0; // second eigenvalue minus energy, full spectrum
};

namespace detail {

// Ground state of H restricted to the even spin-flip-parity sector.
inline std::pair<QuantumState, double> even_sector_ground(const HermitianOperator& H,
                                                          int n_qubits) {
    const std::int64_t dim = std::int64_t{1} << n_qubits;
    std::vector<std::int64_t> idx;
    idx.reserve(static_cast<std::size_t>(dim) / 2);
    for (std::int64_t b = 0; b < dim; ++b) {
        if (std::popcount(static_cast<std::uint64_t>(b)) % 2 == 0) idx.push_back(b);
    }
    const std::int64_t sd = static_cast<std::int64_t>(idx.size());
    Eigen::MatrixXcd Hs = Eigen::MatrixXcd::Zero(sd, sd);
    for (std::int64_t r = 0; r < sd; ++r) {
        for (std::int64_t c = 0; c < sd; ++c) {
            Hs(r, c) = H.entries(idx[static_cast<std::size_t>(r)],
                                 idx[static_cast<std::size_t>(c)]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Hs);
    QuantumState s;
    s.n_qubits = n_qubits;
    s.amplitudes = Eigen::VectorXcd::Zero(dim);
    for (std::int64_t r = 0; r < sd; ++r) {
        s.amplitudes[idx[static_cast<std::size_t>(r)]] = solver.eigenvectors().col(0)[r];
    }
    s.amplitudes.normalize();
    canonicalize_phase(s.amplitudes);
    return {std::move(s), solver.eigenvalues()[0]};
}

} // namespace detail

// Exact ground state. For h > 0 the ground state is unique; a gap below 1e-9
// there raises DegenerateGroundState. At h = 0 the ground level is doubly
// degenerate and the h -> 0+ limit is returned: the minimizer within the +1
// eigensector of the spin-flip parity prod_j sigma^z_j (gap reported as 0).
inline GroundStateResult ground_state(const TfimParams& p) {
    p.validate();
    const HermitianOperator H = build_hamiltonian(p);
    GroundStateResult out;
    if (p.h == 0.0) {
        auto [state, energy] = detail::even_sector_ground(H, p.n_qubits);
        out.state = std::move(state);
        out.energy = energy;
        out.gap = 0.0;
        return out;
    }
    GroundEigenpair g = ground_eigenpair(H, 1e-9);
    out.state = std::move(g.state);
    out.energy = g.energy;
    out.gap = g.gap;
    return out;
}

// |psi_3> = (gamma1 |000> + |011> + |101> + |110>) / sqrt(3 + gamma1^2).
inline QuantumState analytic_ground_state_3(double h) {
    const AnalyticCoefficients c = analytic_coefficients(h);
    QuantumState s;
    s.n_qubits = 3;
    s.amplitudes = Eigen::VectorXcd::Zero(8);
    const double inv = 1.0 / std::sqrt(c.norm1);
    s.amplitudes[0b000] = c.gamma1 * inv;
    s.amplitudes[0b011] = inv;
    s.amplitudes[0b101] = inv;
    s.amplitudes[0b110] = inv;
    return s;
}

// Closed-form N = 4 ground state, supported on the eight even-weight basis
// states. The |0000> coefficient gamma2 - 2 sqrt(2) h (1 - gamma3^2)/gamma3
// equals gamma2 - 2 sqrt(2) h / gamma3 + 2 sqrt(2) h gamma3.
inline QuantumState analytic_ground_state_4(double h) {
    const AnalyticCoefficients c = analytic_coefficients(h);
    const double s2 = std::sqrt(2.0);
    const double c_nn = h + c.gamma3 / s2;                               // |0011>,|0110>,|1100>,|1001>
    const double c_alt = (4.0 * h + 2.0 * s2 * c.gamma3) / (2.0 * s2 * c.gamma3); // |0101>,|1010>
    const double c_0 = c.gamma2 - 2.0 * s2 * h * (1.0 - c.gamma3 * c.gamma3) / c.gamma3;
    QuantumState s;
    s.n_qubits = 4;
    s.amplitudes = Eigen::VectorXcd::Zero(16);
    const double inv = 1.0 / std::sqrt(c.norm2);
    s.amplitudes[0b0000] = c_0 * inv;
    s.amplitudes[0b0011] = c_nn * inv;
    s.amplitudes[0b0101] = c_alt * inv;
    s.amplitudes[0b0110] = c_nn * inv;
    s.amplitudes[0b1001] = c_nn * inv;
    s.amplitudes[0b1010] = c_alt * inv;
    s.amplitudes[0b1100] = c_nn * inv;
    s.amplitudes[0b1111] = inv;
    return s;
}

// |<a|b>|, insensitive to global phase.
inline double fidelity(const QuantumState& a, const QuantumState& b) {
    return std::abs(a.amplitudes.dot(b.amplitudes));
}

} // namespace gme
