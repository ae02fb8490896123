#pragma once

// Shared test utilities: seeded random states/settings and independent dense
// oracles (full Kronecker products, SU(2) <-> SO(3) maps) used to cross-check
// the tensor-contraction kernels.

#include <random>
#include <vector>

#include "gme/gme.hpp"

namespace test {

inline gme::QuantumState random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    gme::QuantumState s;
    s.n_qubits = n;
    s.amplitudes = gme::detail::haar_state(std::int64_t{1} << n, rng);
    return s;
}

inline gme::MeasurementSettings random_settings(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return gme::detail::random_settings(n, rng);
}

inline gme::Vec3 random_unit(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return gme::detail::random_unit_vector(rng);
}

// Full 2^N x 2^N product operator, qubit 1 as the most significant factor.
inline Eigen::MatrixXcd kron_all(const std::vector<Eigen::Matrix2cd>& ops) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto& op : ops) {
        Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block(2 * r, 2 * c, 2, 2) = out(r, c) * op;
            }
        }
        out = std::move(next);
    }
    return out;
}

// Expectation value through the explicit dense product, an independent path
// from expectation_product.
inline double dense_expectation(const gme::QuantumState& state,
                                const std::vector<Eigen::Matrix2cd>& ops) {
    const Eigen::MatrixXcd O = kron_all(ops);
    return (state.amplitudes.adjoint() * O * state.amplitudes)(0, 0).real();
}

// exp(-i alpha/2 axis.sigma)
inline Eigen::Matrix2cd su2_rotation(double alpha, const gme::Vec3& axis) {
    const Eigen::Matrix2cd ns = gme::spin_projection(axis);
    return std::cos(alpha / 2) * Eigen::Matrix2cd::Identity() -
           gme::Complex(0, 1) * std::sin(alpha / 2) * ns;
}

// SO(3) image of U: U (n.sigma) U^dag = (R n).sigma.
inline Eigen::Matrix3d so3_of_su2(const Eigen::Matrix2cd& U) {
    const Eigen::Matrix2cd sig[3] = {gme::pauli::x(), gme::pauli::y(), gme::pauli::z()};
    Eigen::Matrix3d R;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            R(a, b) = 0.5 * (sig[a] * U * sig[b] * U.adjoint()).trace().real();
        }
    }
    return R;
}

inline gme::Vec3 apply_so3(const Eigen::Matrix3d& R, const gme::Vec3& n) {
    const Eigen::Vector3d v = R * Eigen::Vector3d(n.x, n.y, n.z);
    return {v[0], v[1], v[2]};
}

// Reference angle set reaching sqrt(2) on the zero-field 3-spin ground state.
inline gme::MeasurementSettings reference_angles_h0() {
    const double pi = M_PI;
    return gme::MeasurementSettings::from_angles({
        {gme::AnglePair{0, pi / 3}, gme::AnglePair{pi / 2, pi / 2}},
        {gme::AnglePair{0, 0}, gme::AnglePair{pi / 2, pi / 2}},
        {gme::AnglePair{-pi / 4, pi / 2}, gme::AnglePair{pi / 4, pi / 2}},
    });
}

// Reference angle set at the critical field h = 1 (value 1.08866).
inline gme::MeasurementSettings reference_angles_h1() {
    const double pi = M_PI;
    const double a = 19.0 * pi / 97.0;
    return gme::MeasurementSettings::from_angles({
        {gme::AnglePair{-a, pi / 2}, gme::AnglePair{a, pi / 2}},
        {gme::AnglePair{-a, -pi / 2}, gme::AnglePair{78.0 * pi / 97.0, pi / 2}},
        {gme::AnglePair{-a, pi / 2}, gme::AnglePair{a, pi / 2}},
    });
}

} // namespace test
