#pragma once

// N-party Bell expressions of Seevinck-Svetlichny type:
//   I = 2^{-(N-1)} sum_K V_{kappa(K)} Q_K,   Q_K = <prod_j n^{j}_{k_j}.sigma_j>,
// where K picks one of two measurement directions per party and kappa(K)
// counts the parties measuring their second setting. The hybrid
// local-nonlocal bound is 1, so I > 1 witnesses genuine multipartite
// entanglement.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "gme/qkernel.hpp"

namespace gme {

// Sign sequence V^+/V^- of the Bell expression: coefficient at kappa is
// (-1)^(kappa(kappa+1)/2) for Plus and (-1)^(kappa(kappa-1)/2) for Minus.
enum class SignVariant { Minus, Plus };

inline const char* to_string(SignVariant v) {
    return v == SignVariant::Minus ? "minus" : "plus";
}

// Period-4 pattern: Minus repeats (+,+,-,-), Plus repeats (+,-,-,+).
inline int sign_coefficient(SignVariant v, int kappa) {
    if (kappa < 0) throw InvalidInput("sign_coefficient: kappa must be >= 0");
    const int r = kappa % 4;
    if (v == SignVariant::Minus) return (r == 0 || r == 1) ? 1 : -1;
    return (r == 0 || r == 3) ? 1 : -1;
}

// Spherical angles of a measurement direction,
// n = (sin t cos p, sin t sin p, cos t). Any real angles are accepted on
// input; canonical output has theta in [0, pi] and phi in [0, 2 pi).
struct AnglePair {
    double theta = 0.0;
    double phi = 0.0;
};

inline Vec3 direction_from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline AnglePair angles_from_direction(const Vec3& n) {
    AnglePair a;
    const double z = std::clamp(n.z, -1.0, 1.0);
    a.theta = std::acos(z);
    if (std::hypot(n.x, n.y) < 1e-12) {
        a.phi = 0.0; // polar direction: phi is arbitrary, pick 0
        return a;
    }
    a.phi = std::atan2(n.y, n.x);
    if (a.phi < 0.0) a.phi += 2.0 * M_PI;
    return a;
}

// Two measurement directions per party.
struct MeasurementSettings {
    std::vector<std::array<Vec3, 2>> parties;

    int n_parties() const { return static_cast<int>(parties.size()); }

    const Vec3& direction(int party, int setting) const {
        return parties[static_cast<std::size_t>(party - 1)][static_cast<std::size_t>(setting - 1)];
    }

    static MeasurementSettings from_angles(const std::vector<std::array<AnglePair, 2>>& angles) {
        MeasurementSettings s;
        s.parties.reserve(angles.size());
        for (const auto& pa : angles) {
            s.parties.push_back({direction_from_angles(pa[0].theta, pa[0].phi),
                                 direction_from_angles(pa[1].theta, pa[1].phi)});
        }
        return s;
    }

    std::vector<std::array<AnglePair, 2>> to_angles() const {
        std::vector<std::array<AnglePair, 2>> out;
        out.reserve(parties.size());
        for (const auto& p : parties) {
            out.push_back({angles_from_direction(p[0]), angles_from_direction(p[1])});
        }
        return out;
    }
};

// One setting choice per party, values in {1, 2}; kappa = number of 2s.
struct SettingIndex {
    std::vector<int> k;

    int kappa() const {
        int c = 0;
        for (int v : k) c += (v == 2);
        return c;
    }

    // Bit i of mask selects setting 2 for party i+1.
    static SettingIndex from_mask(std::uint64_t mask, int n_parties) {
        SettingIndex s;
        s.k.resize(static_cast<std::size_t>(n_parties));
        for (int j = 0; j < n_parties; ++j) {
            s.k[static_cast<std::size_t>(j)] = ((mask >> j) & 1u) ? 2 : 1;
        }
        return s;
    }
};

// Correlation function Q_K = <psi| X^{1}_{k_1} x ... x X^{N}_{k_N} |psi> with
// X = n.sigma. Always in [-1, 1].
inline double correlation(const QuantumState& state, const MeasurementSettings& settings,
                          const SettingIndex& K) {
    if (settings.n_parties() != state.n_qubits ||
        static_cast<int>(K.k.size()) != state.n_qubits) {
        throw InvalidInput("correlation: party count does not match qubit count");
    }
    std::vector<Eigen::Matrix2cd> ops;
    ops.reserve(static_cast<std::size_t>(state.n_qubits));
    for (int j = 1; j <= state.n_qubits; ++j) {
        ops.push_back(spin_projection(settings.direction(j, K.k[static_cast<std::size_t>(j - 1)])));
    }
    return expectation_product(state, ops);
}

// Full Bell expression: direct sum over all 2^N setting tuples. |I| <= 2 for
// any inputs; values above 1 certify genuine multipartite entanglement.
inline double bell_value(const QuantumState& state, const MeasurementSettings& settings,
                         SignVariant v) {
    const int n = state.n_qubits;
    if (settings.n_parties() != n) {
        throw InvalidInput("bell_value: party count does not match qubit count");
    }
    std::array<std::array<Eigen::Matrix2cd, 2>, kMaxQubits> ops;
    for (int j = 1; j <= n; ++j) {
        ops[static_cast<std::size_t>(j - 1)][0] = spin_projection(settings.direction(j, 1));
        ops[static_cast<std::size_t>(j - 1)][1] = spin_projection(settings.direction(j, 2));
    }
    const std::uint64_t tuples = std::uint64_t{1} << n;
    double sum = 0.0;
    Eigen::VectorXcd phi(state.amplitudes.size());
    for (std::uint64_t mask = 0; mask < tuples; ++mask) {
        phi = state.amplitudes;
        for (int j = 1; j <= n; ++j) {
            const std::size_t slot = (mask >> (j - 1)) & 1u;
            apply_local_inplace(phi, ops[static_cast<std::size_t>(j - 1)][slot], j, n);
        }
        const int kappa = std::popcount(mask);
        sum += sign_coefficient(v, kappa) * state.amplitudes.dot(phi).real();
    }
    return sum / static_cast<double>(std::uint64_t{1} << (n - 1));
}

// Hand-expanded three-party Minus form,
//   (Q111 + Q112 + Q121 + Q211 - Q122 - Q212 - Q221 - Q222) / 4,
// kept as an independent code path against the generic sum.
inline double bell_value_3q(const QuantumState& state, const MeasurementSettings& settings) {
    if (state.n_qubits != 3 || settings.n_parties() != 3) {
        throw InvalidInput("bell_value_3q: requires exactly 3 qubits");
    }
    const auto q = [&](int k1, int k2, int k3) {
        SettingIndex K;
        K.k = {k1, k2, k3};
        return correlation(state, settings, K);
    };
    return (q(1, 1, 1) + q(1, 1, 2) + q(1, 2, 1) + q(2, 1, 1) - q(1, 2, 2) - q(2, 1, 2) -
            q(2, 2, 1) - q(2, 2, 2)) /
           4.0;
}

} // namespace gme
