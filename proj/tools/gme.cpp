// Command-line frontend: exact ground states of the transverse-field Ising
// chain, maximized Svetlichny-type Bell values, violation-vs-field sweeps,
// threshold fields, and a self-verification suite.
//
// Exit codes: 0 success, 1 computational error, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gme/gme.hpp"

namespace {

using nlohmann::ordered_json;

double round_sig12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return std::strtod(buf, nullptr);
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("GME_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 12345;
}

gme::SignVariant parse_variant(const std::string& s) {
    if (s == "minus") return gme::SignVariant::Minus;
    if (s == "plus") return gme::SignVariant::Plus;
    throw CLI::ValidationError("--variant", "must be 'minus' or 'plus'");
}

ordered_json angles_json(const gme::MeasurementSettings& settings) {
    ordered_json out = ordered_json::array();
    for (const auto& pa : settings.to_angles()) {
        out.push_back({{"theta", {round_sig12(pa[0].theta), round_sig12(pa[1].theta)}},
                       {"phi", {round_sig12(pa[0].phi), round_sig12(pa[1].phi)}}});
    }
    return out;
}

void print_angles_text(const gme::MeasurementSettings& settings) {
    const auto angles = settings.to_angles();
    for (std::size_t j = 0; j < angles.size(); ++j) {
        std::printf("party %zu: theta = (%.9f, %.9f)  phi = (%.9f, %.9f)\n", j + 1,
                    angles[j][0].theta, angles[j][1].theta, angles[j][0].phi,
                    angles[j][1].phi);
    }
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw gme::Error("cannot open output file '" + out_path + "'");
    f << text;
}

int run_ground(int n, double h, const std::string& format) {
    const gme::GroundStateResult g = gme::ground_state({n, h});
    if (format == "json") {
        ordered_json j;
        j["n"] = n;
        j["h"] = h;
        j["energy"] = round_sig12(g.energy);
        j["gap"] = round_sig12(g.gap);
        ordered_json amps = ordered_json::array();
        for (std::int64_t b = 0; b < g.state.amplitudes.size(); ++b) {
            amps.push_back({g.state.amplitudes[b].real(), g.state.amplitudes[b].imag()});
        }
        j["amplitudes"] = std::move(amps);
        std::printf("%s\n", j.dump(2).c_str());
    } else if (format == "csv") {
        std::printf("# n=%d h=%.12g energy=%.12g gap=%.12g\n", n, h, g.energy, g.gap);
        std::printf("index,re,im\n");
        for (std::int64_t b = 0; b < g.state.amplitudes.size(); ++b) {
            std::printf("%lld,%.17g,%.17g\n", static_cast<long long>(b),
                        g.state.amplitudes[b].real(), g.state.amplitudes[b].imag());
        }
    } else {
        std::printf("energy = %.12f\n", g.energy);
        std::printf("gap    = %.12f\n", g.gap);
        for (std::int64_t b = 0; b < g.state.amplitudes.size(); ++b) {
            const gme::Complex a = g.state.amplitudes[b];
            if (std::abs(a) < 1e-12) continue;
            std::string bits;
            for (int q = n - 1; q >= 0; --q) bits += ((b >> q) & 1) ? '1' : '0';
            std::printf("|%s>  %+.12f %+.12fi\n", bits.c_str(), a.real(), a.imag());
        }
    }
    return 0;
}

int run_maximize(int n, double h, const std::string& variant_str,
                 const gme::OptimizerConfig& cfg, const std::string& format) {
    const gme::SignVariant variant = parse_variant(variant_str);
    const gme::GroundStateResult g = gme::ground_state({n, h});
    const gme::MaximizationResult r = gme::maximize(g.state, variant, cfg);
    if (format == "json") {
        ordered_json j;
        j["n"] = n;
        j["h"] = h;
        j["variant"] = variant_str;
        j["value"] = round_sig12(r.value);
        j["angles"] = angles_json(r.settings);
        j["restarts"] = cfg.restarts;
        j["seed"] = cfg.seed;
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("value = %.6f\n", r.value);
        std::printf("violated = %s\n", r.value > 1.0 + gme::kViolationTol ? "true" : "false");
        std::printf("sweeps = %d (restart %d)\n", r.sweeps_used, r.restart_index);
        print_angles_text(r.settings);
    }
    return 0;
}

int run_sweep(const gme::SweepSpec& spec, const std::string& format,
              const std::string& out_path) {
    const gme::SweepResult result = gme::sweep_h(spec);
    write_output(format == "json" ? gme::to_json(result) : gme::to_csv(result), out_path);
    return 0;
}

int run_threshold(int n, const std::string& variant_str, const gme::OptimizerConfig& cfg,
                  std::vector<double> bracket, double tol, const std::string& format) {
    const gme::SignVariant variant = parse_variant(variant_str);
    if (bracket.empty()) bracket = {0.1, 2.0};
    const gme::ThresholdResult t =
        gme::find_threshold(n, variant, cfg, {bracket[0], bracket[1]}, tol);
    if (format == "json") {
        ordered_json j;
        j["n"] = n;
        j["variant"] = variant_str;
        j["bracket"] = {bracket[0], bracket[1]};
        j["tol"] = tol;
        j["threshold"] = round_sig12(t.h_star);
        if (t.warning) j["warning"] = *t.warning;
        j["seed"] = cfg.seed;
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("threshold h* = %.6f\n", t.h_star);
        if (t.warning) std::printf("warning: %s\n", t.warning->c_str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify: the oracle suite as pass/fail lines with measured margins.

struct VerifyState {
    int failures = 0;

    void check(const std::string& name, bool ok, double margin, const std::string& unit) {
        std::printf("%s %-55s margin=%.3e %s\n", ok ? "PASS" : "FAIL", name.c_str(), margin,
                    unit.c_str());
        if (!ok) ++failures;
    }
};

gme::MeasurementSettings random_settings_seeded(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return gme::detail::random_settings(n, rng);
}

gme::QuantumState random_state(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    gme::QuantumState s;
    s.n_qubits = n;
    s.amplitudes = gme::detail::haar_state(std::int64_t{1} << n, rng);
    return s;
}

int run_verify(bool quick, std::uint64_t seed, int threads) {
    using namespace gme;
    VerifyState v;
    const int instances = quick ? 20 : 100;
    const int probe_samples = quick ? 10 : 50;

    // see-saw monotonicity across steps on random instances
    {
        double worst_drop = 0.0;
        for (int i = 0; i < instances; ++i) {
            const QuantumState psi = random_state(3, seed + 1000 + i);
            MeasurementSettings s = random_settings_seeded(3, seed + 2000 + i);
            double value = bell_value(psi, s, SignVariant::Minus);
            for (int step = 0; step < 50; ++step) {
                auto [next, next_value] = seesaw_step(psi, s, SignVariant::Minus);
                worst_drop = std::max(worst_drop, value - next_value);
                s = std::move(next);
                value = next_value;
            }
        }
        v.check("seesaw monotonicity (" + std::to_string(instances) + " instances)",
                worst_drop <= 1e-12, worst_drop, "max drop");
    }

    // effective-vector reconstruction + finite differences
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const QuantumState psi = random_state(3, seed + 3000 + i);
            const MeasurementSettings s = random_settings_seeded(3, seed + 4000 + i);
            double recon = 0.0;
            const EffectiveVectors ev = effective_vectors(psi, s, 1, SignVariant::Minus);
            recon = ev.a.dot(s.direction(1, 1)) + ev.b.dot(s.direction(1, 2));
            worst = std::max(worst, std::abs(recon - bell_value(psi, s, SignVariant::Minus)));
        }
        v.check("effective-vector reconstruction identity", worst <= 1e-10, worst, "abs dev");
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const QuantumState psi = random_state(3, seed + 5000 + i);
            const MeasurementSettings s = random_settings_seeded(3, seed + 6000 + i);
            worst = std::max(worst, fd_gradient_check(psi, s, SignVariant::Minus, 1e-5));
        }
        v.check("finite-difference gradient check (delta 1e-5)", worst <= 1e-9, worst,
                "abs dev");
    }

    // grid search vs see-saw on N=3 ground states
    {
        OptimizerConfig cfg;
        cfg.seed = seed;
        cfg.threads = threads;
        double worst_excess = -1.0;
        double worst_gap = 0.0;
        for (double h : {0.0, 0.5, 1.0}) {
            const GroundStateResult g = ground_state({3, h});
            const double ss = maximize(g.state, SignVariant::Minus, cfg).value;
            const double gv = grid_search(g.state, SignVariant::Minus, {16, 16}, threads).value;
            worst_excess = std::max(worst_excess, gv - ss);
            worst_gap = std::max(worst_gap, ss - gv);
            if (!quick) {
                const double gv32 =
                    grid_search(g.state, SignVariant::Minus, {32, 32}, threads).value;
                worst_excess = std::max(worst_excess, gv32 - ss);
                worst_gap = std::max(worst_gap, ss - gv32);
            }
        }
        v.check("grid search never exceeds see-saw", worst_excess <= 1e-9, worst_excess,
                "max excess");
        v.check(quick ? "grid search agreement at 16x16" : "grid search agreement at 16x16/32x32",
                worst_gap <= 0.02, worst_gap, "max gap");
    }

    // biseparable states never violate
    {
        double worst = biseparable_probe(3, probe_samples, seed);
        if (!quick) worst = std::max(worst, biseparable_probe(4, probe_samples, seed + 1));
        v.check("biseparable probe stays at or below the bound", worst <= 1.0 + 1e-6,
                worst - 1.0, "max value - 1");
    }

    // permutation covariance
    {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const QuantumState psi = random_state(3, seed + 7000 + i);
            const MeasurementSettings s = random_settings_seeded(3, seed + 8000 + i);
            const std::vector<int> sigma = {2, 3, 1};
            const QuantumState psi_p = permute_qubits(psi, sigma);
            MeasurementSettings s_p;
            s_p.parties = {s.parties[1], s.parties[2], s.parties[0]};
            worst = std::max(worst, std::abs(bell_value(psi_p, s_p, SignVariant::Minus) -
                                             bell_value(psi, s, SignVariant::Minus)));
        }
        v.check("permutation covariance", worst <= 1e-12, worst, "abs dev");
    }

    // GHZ family maxima
    {
        OptimizerConfig cfg;
        cfg.seed = seed;
        cfg.restarts = 16;
        cfg.threads = threads;
        double worst = 0.0;
        for (int n : {3, 4, 5}) {
            const double val = maximize(QuantumState::ghz(n), SignVariant::Minus, cfg).value;
            worst = std::max(worst, std::abs(val - std::sqrt(2.0)));
        }
        v.check("GHZ family maxima at sqrt(2)", worst <= 1e-6, worst, "abs dev");
    }

    std::printf("%s (%d failure%s)\n", v.failures == 0 ? "OK" : "FAILED", v.failures,
                v.failures == 1 ? "" : "s");
    return v.failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genuine multipartite entanglement detection in the transverse-field "
                 "Ising chain via Svetlichny-type Bell inequalities"};
    app.require_subcommand(1);
    // --h is a model parameter here, so help is long-form only
    app.set_help_flag("--help", "Print help");

    int threads_default = static_cast<int>(std::thread::hardware_concurrency());
    if (threads_default < 1) threads_default = 1;

    // ground
    auto* ground = app.add_subcommand("ground", "Exact ground state of the Ising chain");
    ground->set_help_flag("--help", "Print help");
    int g_n = 3;
    double g_h = 0.0;
    std::string g_format = "json";
    ground->add_option("--n", g_n, "chain length")->required()->check(CLI::Range(3, 12));
    ground->add_option("--h", g_h, "transverse field")->required()
          ->check(CLI::NonNegativeNumber);
    ground->add_option("--format", g_format)->check(CLI::IsMember({"text", "json", "csv"}));

    // maximize
    auto* maxi = app.add_subcommand("maximize", "Maximal Bell value of the ground state");
    maxi->set_help_flag("--help", "Print help");
    int m_n = 3;
    double m_h = 0.0;
    std::string m_variant = "minus", m_format = "json";
    gme::OptimizerConfig m_cfg;
    m_cfg.seed = default_seed();
    m_cfg.threads = threads_default;
    maxi->add_option("--n", m_n, "chain length")->required()->check(CLI::Range(3, 12));
    maxi->add_option("--h", m_h, "transverse field")->required()
        ->check(CLI::NonNegativeNumber);
    maxi->add_option("--variant", m_variant)->check(CLI::IsMember({"minus", "plus"}));
    maxi->add_option("--restarts", m_cfg.restarts)->check(CLI::PositiveNumber);
    maxi->add_option("--max-sweeps", m_cfg.max_sweeps)->check(CLI::PositiveNumber);
    maxi->add_option("--seed", m_cfg.seed);
    maxi->add_option("--threads", m_cfg.threads)->check(CLI::PositiveNumber);
    maxi->add_option("--format", m_format)->check(CLI::IsMember({"text", "json"}));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Violation-vs-field curve");
    sweep->set_help_flag("--help", "Print help");
    gme::SweepSpec s_spec;
    s_spec.optimizer.seed = default_seed();
    s_spec.optimizer.threads = threads_default;
    std::string s_variant = "minus", s_format = "csv", s_out;
    sweep->add_option("--n", s_spec.n_qubits, "chain length")->required()
         ->check(CLI::Range(3, 12));
    sweep->add_option("--h-min", s_spec.h_min)->required()->check(CLI::NonNegativeNumber);
    sweep->add_option("--h-max", s_spec.h_max)->required()->check(CLI::NonNegativeNumber);
    sweep->add_option("--points", s_spec.points)->required()->check(CLI::Range(2, 100000));
    sweep->add_option("--variant", s_variant)->check(CLI::IsMember({"minus", "plus", "both"}));
    sweep->add_option("--restarts", s_spec.optimizer.restarts)->check(CLI::PositiveNumber);
    sweep->add_option("--max-sweeps", s_spec.optimizer.max_sweeps)->check(CLI::PositiveNumber);
    sweep->add_option("--seed", s_spec.optimizer.seed);
    sweep->add_option("--threads", s_spec.optimizer.threads)->check(CLI::PositiveNumber);
    sweep->add_option("--out", s_out, "output file (default stdout)");
    sweep->add_option("--format", s_format)->check(CLI::IsMember({"csv", "json"}));

    // threshold
    auto* thr = app.add_subcommand("threshold", "Largest field with a Bell violation");
    thr->set_help_flag("--help", "Print help");
    int t_n = 3;
    std::string t_variant = "minus", t_format = "json";
    std::vector<double> t_bracket;
    double t_tol = 1e-3;
    gme::OptimizerConfig t_cfg;
    t_cfg.seed = default_seed();
    t_cfg.threads = threads_default;
    thr->add_option("--n", t_n, "chain length")->required()->check(CLI::Range(3, 12));
    thr->add_option("--variant", t_variant)->check(CLI::IsMember({"minus", "plus"}));
    thr->add_option("--bracket", t_bracket, "h_lo h_hi")->expected(2);
    thr->add_option("--tol", t_tol)->check(CLI::PositiveNumber);
    thr->add_option("--restarts", t_cfg.restarts)->check(CLI::PositiveNumber);
    thr->add_option("--seed", t_cfg.seed);
    thr->add_option("--threads", t_cfg.threads)->check(CLI::PositiveNumber);
    thr->add_option("--format", t_format)->check(CLI::IsMember({"text", "json"}));

    // verify
    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    verify->set_help_flag("--help", "Print help");
    bool v_quick = false;
    std::uint64_t v_seed = default_seed();
    int v_threads = threads_default;
    verify->add_flag("--quick", v_quick, "reduced instance counts");
    verify->add_option("--seed", v_seed);
    verify->add_option("--threads", v_threads)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ground) return run_ground(g_n, g_h, g_format);
        if (*maxi) return run_maximize(m_n, m_h, m_variant, m_cfg, m_format);
        if (*sweep) {
            s_spec.variant = gme::sweep_variant_from_string(s_variant);
            return run_sweep(s_spec, s_format, s_out);
        }
        if (*thr) return run_threshold(t_n, t_variant, t_cfg, t_bracket, t_tol, t_format);
        if (*verify) return run_verify(v_quick, v_seed, v_threads);
    } catch (const gme::BracketError& e) {
        std::fprintf(stderr, "error: invalid_bracket: %s\n", e.what());
        return 1;
    } catch (const gme::DegenerateGroundState& e) {
        std::fprintf(stderr, "error: degenerate_ground_state: %s\n", e.what());
        return 1;
    } catch (const gme::EvaluationCapExceeded& e) {
        std::fprintf(stderr, "error: evaluation_cap: %s\n", e.what());
        return 1;
    } catch (const gme::InvalidInput& e) {
        std::fprintf(stderr, "error: invalid_input: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 1;
    }
    return 0;
}
