#pragma once

// Independent brute-force verifiers for the see-saw optimizer: an exhaustive
// angle-grid search, random biseparable-state probes of the bound, and
// central finite-difference checks of the effective vectors.

#include <atomic>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "gme/optimizer.hpp"

namespace gme {

// Uniform angle grid, theta_i = i pi / theta_steps and
// phi_k = 2 pi k / phi_steps, so doubling the step counts refines the grid
// in place (coarse grids are subsets of fine ones).
struct GridSpec {
    int theta_steps = 8;
    int phi_steps = 8;

    void validate() const {
        if (theta_steps < 2 || phi_steps < 2) {
            throw InvalidInput("GridSpec: steps must be >= 2");
        }
    }
};

struct GridSearchResult {
    double value = -2.0;
    MeasurementSettings settings;
};

namespace detail {

// Real correlation tensor T[a1..aN] = <sigma_{a1} x ... x sigma_{aN}>,
// indices over {x, y, z}.
inline std::vector<double> correlation_tensor(const QuantumState& state) {
    const int n = state.n_qubits;
    std::size_t size = 1;
    for (int i = 0; i < n; ++i) size *= 3;
    std::vector<double> T(size);
    std::vector<Eigen::Matrix2cd> ops(static_cast<std::size_t>(n));
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::size_t rem = idx;
        for (int j = 0; j < n; ++j) {
            const std::size_t a = rem % 3;
            rem /= 3;
            ops[static_cast<std::size_t>(j)] =
                (a == 0) ? pauli::x() : (a == 1) ? pauli::y() : pauli::z();
        }
        T[idx] = expectation_product(state, ops);
    }
    return T;
}

// Effective vectors of one party from the correlation tensor, with every
// other party's directions fixed. Independent evaluation path from
// optimizer::effective_vectors.
inline EffectiveVectors tensor_effective_vectors(const std::vector<double>& T, int n,
                                                 const std::vector<std::array<Vec3, 2>>& dirs,
                                                 int party0, SignVariant v) {
    Vec3 a{}, b{};
    const std::uint64_t tuples = std::uint64_t{1} << (n - 1);
    std::vector<int> others;
    for (int j = 0; j < n; ++j) {
        if (j != party0) others.push_back(j);
    }
    std::size_t stride_party = 1;
    for (int j = 0; j < party0; ++j) stride_party *= 3;

    for (std::uint64_t mask = 0; mask < tuples; ++mask) {
        // contract all parties but party0 against their chosen directions
        Vec3 w{};
        std::size_t size = 1;
        for (int i = 0; i < n; ++i) size *= 3;
        for (std::size_t idx = 0; idx < size; ++idx) {
            std::size_t rem = idx;
            double weight = 1.0;
            std::size_t axis_party0 = 0;
            int oi = 0;
            bool zero = false;
            for (int j = 0; j < n; ++j) {
                const std::size_t ax = rem % 3;
                rem /= 3;
                if (j == party0) {
                    axis_party0 = ax;
                    continue;
                }
                const std::size_t slot = (mask >> oi) & 1u;
                ++oi;
                const Vec3& d = dirs[static_cast<std::size_t>(j)][slot];
                const double comp = (ax == 0) ? d.x : (ax == 1) ? d.y : d.z;
                if (comp == 0.0) {
                    zero = true;
                    break;
                }
                weight *= comp;
            }
            if (zero) continue;
            const double c = T[idx] * weight;
            if (axis_party0 == 0) w.x += c;
            else if (axis_party0 == 1) w.y += c;
            else w.z += c;
        }
        const int k0 = std::popcount(mask);
        a = a + w * static_cast<double>(sign_coefficient(v, k0));
        b = b + w * static_cast<double>(sign_coefficient(v, k0 + 1));
    }
    const double scale = 1.0 / static_cast<double>(std::uint64_t{1} << (n - 1));
    return {a * scale, b * scale};
}

} // namespace detail

// Exhaustive maximum of the Bell expression over the discrete angle grid for
// N <= 3: the first party's setting pair is enumerated over all grid
// combinations, and for each the remaining parties are driven to a grid
// fixpoint by exact per-party grid maximization (each update enumerates every
// grid direction for both slots). Returns grid-valued settings, hence a lower
// bound on the true optimum.
inline GridSearchResult grid_search(const QuantumState& state, SignVariant v,
                                    const GridSpec& grid, int threads = 1) {
    grid.validate();
    const int n = state.n_qubits;
    if (n < 2 || n > 3) throw InvalidInput("grid_search: supported only for N in {2, 3}");
    const std::uint64_t g = static_cast<std::uint64_t>(grid.theta_steps) *
                            static_cast<std::uint64_t>(grid.phi_steps);
    const double projected = static_cast<double>(n - 1) * static_cast<double>(g) *
                             static_cast<double>(g);
    if (projected > 1e9) {
        throw EvaluationCapExceeded("grid_search: " + std::to_string(projected) +
                                    " enumerated combinations exceed the 1e9 cap");
    }

    std::vector<Vec3> dirs;
    dirs.reserve(g);
    for (int i = 0; i < grid.theta_steps; ++i) {
        const double theta = M_PI * static_cast<double>(i) / grid.theta_steps;
        for (int k = 0; k < grid.phi_steps; ++k) {
            const double phi = 2.0 * M_PI * static_cast<double>(k) / grid.phi_steps;
            dirs.push_back(direction_from_angles(theta, phi));
        }
    }
    const std::vector<double> T = detail::correlation_tensor(state);

    const auto best_on_grid = [&](const Vec3& w, std::size_t& arg) {
        double best = -2.0;
        arg = 0;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const double d = w.dot(dirs[i]);
            if (d > best) {
                best = d;
                arg = i;
            }
        }
        return best;
    };

    struct Best {
        double value = -2.0;
        std::vector<std::array<Vec3, 2>> dirs;
    };

    // grid points closest to the coordinate axes, used to seed the inner
    // ascent from structurally different starts (an all-z start can sit on a
    // flat plateau where every conditional effective vector vanishes)
    const std::size_t xi = static_cast<std::size_t>(grid.theta_steps / 2) *
                           static_cast<std::size_t>(grid.phi_steps);
    const std::size_t yi = xi + static_cast<std::size_t>(grid.phi_steps / 4);
    const std::array<std::array<std::size_t, 2>, 3> seeds = {{{0, 0}, {xi, yi}, {0, xi}}};

    const auto search_range = [&](std::uint64_t first, std::uint64_t last) {
        Best local;
        std::vector<std::array<Vec3, 2>> chosen(static_cast<std::size_t>(n));
        for (std::uint64_t outer = first; outer < last; ++outer) {
            const std::size_t ga = static_cast<std::size_t>(outer / g);
            const std::size_t gb = static_cast<std::size_t>(outer % g);
            for (const auto& seed : seeds) {
                chosen[0] = {dirs[ga], dirs[gb]};
                for (int j = 1; j < n; ++j) {
                    chosen[static_cast<std::size_t>(j)] = {dirs[seed[0]], dirs[seed[1]]};
                }
                double value = -2.0;
                for (int pass = 0; pass < 64; ++pass) {
                    double pass_value = value;
                    for (int p = 1; p < n; ++p) {
                        const EffectiveVectors ev =
                            detail::tensor_effective_vectors(T, n, chosen, p, v);
                        std::size_t i1 = 0, i2 = 0;
                        const double va = best_on_grid(ev.a, i1);
                        const double vb = best_on_grid(ev.b, i2);
                        chosen[static_cast<std::size_t>(p)] = {dirs[i1], dirs[i2]};
                        pass_value = va + vb;
                    }
                    if (pass_value <= value) break;
                    value = pass_value;
                }
                if (value > local.value) {
                    local.value = value;
                    local.dirs = chosen;
                }
            }
        }
        return local;
    };

    const std::uint64_t total = g * g;
    Best best;
    const int pool = std::max(1, threads);
    if (pool == 1) {
        best = search_range(0, total);
    } else {
        std::vector<Best> partial(static_cast<std::size_t>(pool));
        std::vector<std::thread> workers;
        for (int t = 0; t < pool; ++t) {
            const std::uint64_t first = total * static_cast<std::uint64_t>(t) /
                                        static_cast<std::uint64_t>(pool);
            const std::uint64_t last = total * static_cast<std::uint64_t>(t + 1) /
                                       static_cast<std::uint64_t>(pool);
            workers.emplace_back([&, t, first, last] {
                partial[static_cast<std::size_t>(t)] = search_range(first, last);
            });
        }
        for (auto& w : workers) w.join();
        for (const Best& p : partial) {
            if (p.value > best.value) best = p;
        }
    }

    GridSearchResult out;
    out.settings.parties = best.dirs;
    out.value = bell_value(state, out.settings, v);
    return out;
}

namespace detail {

// Haar-random pure state from normalized complex Gaussian amplitudes.
inline Eigen::VectorXcd haar_state(std::int64_t dim, std::mt19937_64& rng) {
    Eigen::VectorXcd psi(dim);
    for (std::int64_t i = 0; i < dim; ++i) {
        // Box-Muller on the portable uniform stream
        const double u1 = std::max(uniform01(rng), 1e-300);
        const double u2 = uniform01(rng);
        const double u3 = std::max(uniform01(rng), 1e-300);
        const double u4 = uniform01(rng);
        const double re = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        const double im = std::sqrt(-2.0 * std::log(u3)) * std::cos(2.0 * M_PI * u4);
        psi[i] = Complex(re, im);
    }
    psi.normalize();
    return psi;
}

// Product state psiA x psiB across the bipartition given by group_mask
// (bit j-1 set = party j belongs to group A).
inline QuantumState bipartite_product(int n, std::uint64_t group_mask, std::mt19937_64& rng) {
    std::vector<int> bits_a, bits_b; // bit positions in the basis index, MSB first
    for (int j = 1; j <= n; ++j) {
        const int bitpos = n - j;
        if ((group_mask >> (j - 1)) & 1u) bits_a.push_back(bitpos);
        else bits_b.push_back(bitpos);
    }
    const Eigen::VectorXcd psi_a = haar_state(std::int64_t{1} << bits_a.size(), rng);
    const Eigen::VectorXcd psi_b = haar_state(std::int64_t{1} << bits_b.size(), rng);
    QuantumState s;
    s.n_qubits = n;
    s.amplitudes.resize(std::int64_t{1} << n);
    for (std::int64_t b = 0; b < s.amplitudes.size(); ++b) {
        std::int64_t ia = 0, ib = 0;
        for (std::size_t i = 0; i < bits_a.size(); ++i) {
            ia = (ia << 1) | ((b >> bits_a[i]) & 1);
        }
        for (std::size_t i = 0; i < bits_b.size(); ++i) {
            ib = (ib << 1) | ((b >> bits_b[i]) & 1);
        }
        s.amplitudes[b] = psi_a[ia] * psi_b[ib];
    }
    return s;
}

} // namespace detail

// Draws random pure product states across every bipartition of the parties and
// maximizes the Bell expression on each; biseparable states obey the
// inequality, so the returned maximum is expected to stay at or below 1.
inline double biseparable_probe(int n_qubits, int samples, std::uint64_t seed,
                                SignVariant v = SignVariant::Minus) {
    if (n_qubits < 3 || n_qubits > 4) {
        throw InvalidInput("biseparable_probe: supported for N in {3, 4}");
    }
    if (samples < 1) throw InvalidInput("biseparable_probe: samples must be >= 1");
    OptimizerConfig cfg;
    cfg.restarts = 8;
    cfg.max_sweeps = 100;
    double worst = -2.0;
    // masks with party 1 in group A enumerate each unordered bipartition once
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n_qubits); mask += 2) {
        if (mask == (std::uint64_t{1} << n_qubits) - 1) continue; // trivial split
        for (int s = 0; s < samples; ++s) {
            std::mt19937_64 rng(seed ^ (mask * 0x9e3779b97f4a7c15ULL) ^
                                static_cast<std::uint64_t>(s));
            const QuantumState state = detail::bipartite_product(n_qubits, mask, rng);
            cfg.seed = seed ^ (mask << 8) ^ static_cast<std::uint64_t>(s);
            const double val = maximize(state, v, cfg).value;
            if (val > worst) worst = val;
        }
    }
    return worst;
}

// Compares the effective-vector projections against central finite
// differences of the Bell value along two tangent directions at every
// direction vector. Returns the largest absolute deviation; second-order
// accuracy bounds it by ~10 delta^2.
inline double fd_gradient_check(const QuantumState& state, const MeasurementSettings& settings,
                                SignVariant v, double delta) {
    if (!(delta >= 1e-7 && delta <= 1e-3)) {
        throw InvalidInput("fd_gradient_check: delta must be in [1e-7, 1e-3]");
    }
    const int n = state.n_qubits;
    double worst = 0.0;
    for (int party = 1; party <= n; ++party) {
        const EffectiveVectors ev = effective_vectors(state, settings, party, v);
        for (int slot = 0; slot < 2; ++slot) {
            const Vec3 g = (slot == 0) ? ev.a : ev.b;
            const Vec3 nvec = settings.parties[static_cast<std::size_t>(party - 1)]
                                              [static_cast<std::size_t>(slot)];
            // orthonormal tangents at nvec
            const Vec3 ref = (std::abs(nvec.z) < 0.9) ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
            const Vec3 t1 = ref.cross(nvec).normalized();
            const Vec3 t2 = nvec.cross(t1);
            for (const Vec3& t : {t1, t2}) {
                MeasurementSettings plus = settings;
                MeasurementSettings minus = settings;
                plus.parties[static_cast<std::size_t>(party - 1)]
                            [static_cast<std::size_t>(slot)] =
                    nvec * std::cos(delta) + t * std::sin(delta);
                minus.parties[static_cast<std::size_t>(party - 1)]
                             [static_cast<std::size_t>(slot)] =
                    nvec * std::cos(delta) - t * std::sin(delta);
                const double fd =
                    (bell_value(state, plus, v) - bell_value(state, minus, v)) / (2.0 * delta);
                worst = std::max(worst, std::abs(fd - g.dot(t)));
            }
        }
    }
    return worst;
}

} // namespace gme
