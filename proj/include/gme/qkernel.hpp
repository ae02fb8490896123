#pragma once

// Minimal dense complex linear-algebra kernel for small multi-qubit systems:
// states, single-qubit operators acting on tensor factors, product-observable
// expectation values, and a dense Hermitian ground-eigenpair solver.

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gme/errors.hpp"

namespace gme {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 12;

// Construction-time invariant tolerances.
inline constexpr double kNormTol = 1e-12;
// Input-validation tolerance (unit vectors, Hermiticity of observables).
inline constexpr double kInputTol = 1e-9;

// Real 3-vector; a unit one represents a measurement direction on the Bloch
// sphere.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
    bool is_unit(double tol = kInputTol) const { return std::abs(norm() - 1.0) <= tol; }
};

inline bool approx_equal(const Vec3& a, const Vec3& b, double tol) {
    return (a - b).norm() <= tol;
}

// Normalized amplitude vector over the 2^n computational basis.
// Basis index b = sum_j b_j 2^(n-j): qubit 1 is the most significant bit and
// |0> is the sigma_z = +1 eigenstate.
struct QuantumState {
    int n_qubits = 0;
    Eigen::VectorXcd amplitudes;

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }

    double norm_error() const { return std::abs(amplitudes.norm() - 1.0); }

    static QuantumState basis_state(int n, std::size_t b) {
        QuantumState s;
        s.n_qubits = n;
        s.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
        s.amplitudes[static_cast<std::int64_t>(b)] = 1.0;
        return s;
    }

    // (|0...0> + |1...1>)/sqrt(2)
    static QuantumState ghz(int n) {
        QuantumState s;
        s.n_qubits = n;
        const std::int64_t d = std::int64_t{1} << n;
        s.amplitudes = Eigen::VectorXcd::Zero(d);
        s.amplitudes[0] = 1.0 / std::sqrt(2.0);
        s.amplitudes[d - 1] = 1.0 / std::sqrt(2.0);
        return s;
    }
};

// Dense Hermitian matrix, dim a power of two.
struct HermitianOperator {
    Eigen::MatrixXcd entries;

    int dim() const { return static_cast<int>(entries.rows()); }

    double hermiticity_error() const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    }
};

namespace pauli {
inline const Eigen::Matrix2cd& x() {
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    return m;
}
inline const Eigen::Matrix2cd& y() {
    static const Eigen::Matrix2cd m =
        (Eigen::Matrix2cd() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    return m;
}
inline const Eigen::Matrix2cd& z() {
    static const Eigen::Matrix2cd m = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    return m;
}
inline const Eigen::Matrix2cd& id() {
    static const Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    return m;
}
} // namespace pauli

// Spin projection n.sigma for a unit vector n. Eigenvalues are +-1
// (trace 0, determinant -1).
inline Eigen::Matrix2cd spin_projection(const Vec3& n) {
    if (!n.is_unit()) {
        throw InvalidInput("spin_projection: direction is not a unit vector (|n| = " +
                           std::to_string(n.norm()) + ")");
    }
    Eigen::Matrix2cd m;
    m << Complex(n.z, 0), Complex(n.x, -n.y), Complex(n.x, n.y), Complex(-n.z, 0);
    return m;
}

// In-place action of a 2x2 matrix on one tensor factor. qubit is 1-based,
// qubit 1 = most significant bit.
inline void apply_local_inplace(Eigen::VectorXcd& amps, const Eigen::Matrix2cd& op, int qubit,
                                int n_qubits) {
    if (qubit < 1 || qubit > n_qubits) {
        throw InvalidInput("apply_local: qubit index " + std::to_string(qubit) +
                           " out of range [1, " + std::to_string(n_qubits) + "]");
    }
    const std::size_t stride = std::size_t{1} << (n_qubits - qubit);
    const std::size_t dim = std::size_t{1} << n_qubits;
    const Complex m00 = op(0, 0), m01 = op(0, 1), m10 = op(1, 0), m11 = op(1, 1);
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const Complex a0 = amps[static_cast<std::int64_t>(i0)];
            const Complex a1 = amps[static_cast<std::int64_t>(i1)];
            amps[static_cast<std::int64_t>(i0)] = m00 * a0 + m01 * a1;
            amps[static_cast<std::int64_t>(i1)] = m10 * a0 + m11 * a1;
        }
    }
}

// op acting on the tensor factor of the given qubit; linear in the input,
// result generally unnormalized.
inline Eigen::VectorXcd apply_local(const QuantumState& state, const Eigen::Matrix2cd& op,
                                    int qubit) {
    Eigen::VectorXcd out = state.amplitudes;
    apply_local_inplace(out, op, qubit, state.n_qubits);
    return out;
}

inline double hermiticity_error_2x2(const Eigen::Matrix2cd& m) {
    double e = std::abs(m(0, 1) - std::conj(m(1, 0)));
    e = std::max(e, std::abs(m(0, 0).imag()));
    e = std::max(e, std::abs(m(1, 1).imag()));
    return e;
}

// <psi| A_1 x ... x A_N |psi> for one 2x2 Hermitian A_j per qubit, computed by
// applying each A_j to its tensor factor in turn (the full 2^N x 2^N product
// is never formed). The result is real for Hermitian inputs.
inline double expectation_product(const QuantumState& state,
                                  std::span<const Eigen::Matrix2cd> local_ops) {
    if (static_cast<int>(local_ops.size()) != state.n_qubits) {
        throw InvalidInput("expectation_product: got " + std::to_string(local_ops.size()) +
                           " operators for " + std::to_string(state.n_qubits) + " qubits");
    }
    for (const auto& op : local_ops) {
        if (hermiticity_error_2x2(op) > kInputTol) {
            throw InvalidInput("expectation_product: non-Hermitian local operator");
        }
    }
    Eigen::VectorXcd phi = state.amplitudes;
    for (int q = 1; q <= state.n_qubits; ++q) {
        apply_local_inplace(phi, local_ops[static_cast<std::size_t>(q - 1)], q, state.n_qubits);
    }
    return state.amplitudes.dot(phi).real();
}

// Reorders tensor factors: new qubit k holds what old qubit sigma[k-1] held
// (sigma is a 1-based permutation of {1..N}).
inline QuantumState permute_qubits(const QuantumState& state, std::span<const int> sigma) {
    const int n = state.n_qubits;
    if (static_cast<int>(sigma.size()) != n) {
        throw InvalidInput("permute_qubits: permutation length mismatch");
    }
    QuantumState out;
    out.n_qubits = n;
    out.amplitudes = Eigen::VectorXcd::Zero(state.amplitudes.size());
    for (std::int64_t b = 0; b < state.amplitudes.size(); ++b) {
        std::int64_t nb = 0;
        for (int k = 1; k <= n; ++k) {
            const int src = sigma[static_cast<std::size_t>(k - 1)];
            const std::int64_t bit = (b >> (n - src)) & 1;
            nb |= bit << (n - k);
        }
        out.amplitudes[nb] = state.amplitudes[b];
    }
    return out;
}

struct GroundEigenpair {
    double energy = 0.0;
    QuantumState state;
    double gap = 0.0;
};

// Fix the global phase so the amplitude of largest magnitude is real and
// positive (ties broken by lowest basis index).
inline void canonicalize_phase(Eigen::VectorXcd& v) {
    std::int64_t imax = 0;
    double best = -1.0;
    for (std::int64_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best + 1e-15) {
            best = a;
            imax = i;
        }
    }
    const Complex lead = v[imax];
    if (std::abs(lead) > 0) v *= std::conj(lead) / std::abs(lead);
}

// Lowest eigenpair of a dense Hermitian matrix (dim <= 2^12) plus the spectral
// gap to the next eigenvalue. Throws DegenerateGroundState when gap < gap_tol.
inline GroundEigenpair ground_eigenpair(const HermitianOperator& H, double gap_tol) {
    const int d = H.dim();
    if (d < 1 || d > (1 << kMaxQubits)) {
        throw InvalidInput("ground_eigenpair: dimension out of range");
    }
    if (H.hermiticity_error() > kInputTol) {
        throw InvalidInput("ground_eigenpair: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.entries);
    if (solver.info() != Eigen::Success) {
        throw Error("ground_eigenpair: eigensolver failed to converge");
    }
    GroundEigenpair out;
    out.energy = solver.eigenvalues()[0];
    out.gap = (d > 1) ? solver.eigenvalues()[1] - out.energy : 0.0;
    if (out.gap < gap_tol) {
        throw DegenerateGroundState("ground_eigenpair: spectral gap " + std::to_string(out.gap) +
                                    " below tolerance " + std::to_string(gap_tol));
    }
    int n = 0;
    while ((1 << n) < d) ++n;
    out.state.n_qubits = n;
    out.state.amplitudes = solver.eigenvectors().col(0);
    out.state.amplitudes.normalize();
    canonicalize_phase(out.state.amplitudes);
    return out;
}

} // namespace gme
