#pragma once

// Maximizes the Bell expression over all measurement directions. The
// expression is exactly linear in each party's pair of vectors, so the global
// per-party update (replace the pair by the normalized effective vectors) is
// a monotone see-saw; multi-start restarts handle the remaining landscape.

#include <atomic>
#include <cstdint>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "gme/svetlichny.hpp"

namespace gme {

struct OptimizerConfig {
    int restarts = 64;
    int max_sweeps = 200;
    double improvement_tol = 1e-12;
    std::uint64_t seed = 12345;
    int threads = 1; // restarts are independent; any count gives identical results

    void validate() const {
        if (restarts < 1) throw InvalidInput("OptimizerConfig: restarts must be >= 1");
        if (max_sweeps < 1) throw InvalidInput("OptimizerConfig: max_sweeps must be >= 1");
        if (!(improvement_tol > 0)) throw InvalidInput("OptimizerConfig: improvement_tol must be > 0");
    }
};

struct MaximizationResult {
    double value = 0.0;
    MeasurementSettings settings;
    int sweeps_used = 0;
    int restart_index = 0; // -1 when the warm-start candidate won
};

// Effective vectors of one party: the unique (a, b) with
// I = a.n1 + b.n2 identically as that party's directions vary. Equivalent to
// evaluating I with the party's observables replaced by sigma^x/y/z in each
// slot; computed here by contracting each of the 2^(N-1) partner-setting
// environments against the three sigma-applied states at once.
struct EffectiveVectors {
    Vec3 a;
    Vec3 b;
};

inline EffectiveVectors effective_vectors(const QuantumState& state,
                                          const MeasurementSettings& settings, int party,
                                          SignVariant v) {
    const int n = state.n_qubits;
    if (party < 1 || party > n) {
        throw InvalidInput("effective_vectors: party index out of range");
    }
    if (settings.n_parties() != n) {
        throw InvalidInput("effective_vectors: party count does not match qubit count");
    }
    const Eigen::VectorXcd sig_x = apply_local(state, pauli::x(), party);
    const Eigen::VectorXcd sig_y = apply_local(state, pauli::y(), party);
    const Eigen::VectorXcd sig_z = apply_local(state, pauli::z(), party);

    std::vector<int> others;
    others.reserve(static_cast<std::size_t>(n - 1));
    for (int j = 1; j <= n; ++j) {
        if (j != party) others.push_back(j);
    }
    std::vector<std::array<Eigen::Matrix2cd, 2>> ops(others.size());
    for (std::size_t i = 0; i < others.size(); ++i) {
        ops[i][0] = spin_projection(settings.direction(others[i], 1));
        ops[i][1] = spin_projection(settings.direction(others[i], 2));
    }

    Vec3 a{}, b{};
    const std::uint64_t tuples = std::uint64_t{1} << (n - 1);
    Eigen::VectorXcd phi(state.amplitudes.size());
    for (std::uint64_t mask = 0; mask < tuples; ++mask) {
        phi = state.amplitudes;
        for (std::size_t i = 0; i < others.size(); ++i) {
            const std::size_t slot = (mask >> i) & 1u;
            apply_local_inplace(phi, ops[i][slot], others[i], n);
        }
        const int k0 = std::popcount(mask);
        const double s1 = sign_coefficient(v, k0);
        const double s2 = sign_coefficient(v, k0 + 1);
        const double px = sig_x.dot(phi).real();
        const double py = sig_y.dot(phi).real();
        const double pz = sig_z.dot(phi).real();
        a.x += s1 * px;
        a.y += s1 * py;
        a.z += s1 * pz;
        b.x += s2 * px;
        b.y += s2 * py;
        b.z += s2 * pz;
    }
    const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << (n - 1));
    return {a * scale, b * scale};
}

// Effective vectors shorter than this leave the direction unchanged (any unit
// vector is then optimal; keeping the old one preserves determinism).
inline constexpr double kDegenerateDirectionTol = 1e-14;

// One full sweep: parties 1..N in order get their pair replaced by the
// normalized effective vectors. Each replacement maximizes a linear
// functional over the sphere, so the value never decreases. Returns the
// updated settings and the Bell value they attain.
inline std::pair<MeasurementSettings, double> seesaw_step(const QuantumState& state,
                                                          MeasurementSettings settings,
                                                          SignVariant v) {
    const int n = state.n_qubits;
    double value = 0.0;
    for (int party = 1; party <= n; ++party) {
        const EffectiveVectors ev = effective_vectors(state, settings, party, v);
        auto& pair = settings.parties[static_cast<std::size_t>(party - 1)];
        const double na = ev.a.norm();
        const double nb = ev.b.norm();
        if (na >= kDegenerateDirectionTol) pair[0] = ev.a * (1.0 / na);
        if (nb >= kDegenerateDirectionTol) pair[1] = ev.b * (1.0 / nb);
        value = ev.a.dot(pair[0]) + ev.b.dot(pair[1]);
    }
    return {std::move(settings), value};
}

namespace detail {

// Portable uniform double in [0, 1) from the raw 64-bit stream.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Area-uniform direction on the sphere.
inline Vec3 random_unit_vector(std::mt19937_64& rng) {
    const double z = 1.0 - 2.0 * uniform01(rng);
    const double phi = 2.0 * M_PI * uniform01(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

inline MeasurementSettings random_settings(int n_parties, std::mt19937_64& rng) {
    MeasurementSettings s;
    s.parties.resize(static_cast<std::size_t>(n_parties));
    for (auto& p : s.parties) {
        p[0] = random_unit_vector(rng);
        p[1] = random_unit_vector(rng);
    }
    return s;
}

struct RunOutcome {
    double value = -2.0;
    MeasurementSettings settings;
    int sweeps = 0;
};

inline RunOutcome run_seesaw(const QuantumState& state, SignVariant v,
                             MeasurementSettings start, int max_sweeps, double tol) {
    RunOutcome out;
    out.settings = std::move(start);
    double value = bell_value(state, out.settings, v);
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        auto [next, next_value] = seesaw_step(state, out.settings, v);
        out.settings = std::move(next);
        out.sweeps = sweep;
        if (next_value - value < tol) {
            value = std::max(value, next_value);
            break;
        }
        value = next_value;
    }
    out.value = value;
    return out;
}

} // namespace detail

// Best see-saw outcome over cfg.restarts independent runs from random unit
// vectors (sub-seed of restart r is seed xor r). When warm_start is given it
// is refined as one extra candidate (reported as restart_index -1), so a
// warm-started search can never do worse than a cold one. Ties go to the
// lower restart index. The returned value is attained by the returned
// settings, hence a certified lower bound on the true maximum.
inline MaximizationResult maximize(const QuantumState& state, SignVariant v,
                                   const OptimizerConfig& cfg,
                                   const MeasurementSettings* warm_start = nullptr) {
    cfg.validate();
    const int n_candidates = cfg.restarts + (warm_start ? 1 : 0);
    std::vector<detail::RunOutcome> outcomes(static_cast<std::size_t>(n_candidates));

    // candidate index c < cfg.restarts is random restart c; the last slot,
    // when present, is the warm start
    auto run_candidate = [&](int c) {
        if (warm_start && c == cfg.restarts) {
            outcomes[static_cast<std::size_t>(c)] = detail::run_seesaw(
                state, v, *warm_start, cfg.max_sweeps, cfg.improvement_tol);
            return;
        }
        std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(c));
        outcomes[static_cast<std::size_t>(c)] = detail::run_seesaw(
            state, v, detail::random_settings(state.n_qubits, rng), cfg.max_sweeps,
            cfg.improvement_tol);
    };

    const int n_threads = std::max(1, cfg.threads);
    if (n_threads == 1 || n_candidates == 1) {
        for (int c = 0; c < n_candidates; ++c) run_candidate(c);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        const int pool = std::min(n_threads, n_candidates);
        workers.reserve(static_cast<std::size_t>(pool));
        for (int t = 0; t < pool; ++t) {
            workers.emplace_back([&] {
                for (int c = next.fetch_add(1); c < n_candidates; c = next.fetch_add(1)) {
                    run_candidate(c);
                }
            });
        }
        for (auto& w : workers) w.join();
    }

    // deterministic reduction: best value, then lowest candidate index
    int best = 0;
    for (int c = 1; c < n_candidates; ++c) {
        if (outcomes[static_cast<std::size_t>(c)].value > outcomes[static_cast<std::size_t>(best)].value) {
            best = c;
        }
    }
    MaximizationResult res;
    res.settings = std::move(outcomes[static_cast<std::size_t>(best)].settings);
    res.value = bell_value(state, res.settings, v);
    res.sweeps_used = outcomes[static_cast<std::size_t>(best)].sweeps;
    res.restart_index = (warm_start && best == cfg.restarts) ? -1 : best;
    return res;
}

} // namespace gme
