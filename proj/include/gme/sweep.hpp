#pragma once

// Violation-vs-field curves and threshold fields: for each grid point the
// ground state is computed and the Bell expression maximized, warm-starting
// from the previous point's optimum. find_threshold bisects on the violation
// predicate to locate the largest field at which the ground state still
// violates the inequality.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gme/optimizer.hpp"
#include "gme/tfim.hpp"

namespace gme {

// A point violates the inequality when its value exceeds 1 by more than this.
inline constexpr double kViolationTol = 1e-9;

enum class SweepVariant { Minus, Plus, Both };

inline const char* to_string(SweepVariant v) {
    switch (v) {
        case SweepVariant::Minus: return "minus";
        case SweepVariant::Plus: return "plus";
        default: return "both";
    }
}

struct SweepSpec {
    int n_qubits = 3;
    SweepVariant variant = SweepVariant::Minus;
    double h_min = 0.0;
    double h_max = 2.0;
    int points = 81;
    OptimizerConfig optimizer;

    void validate() const {
        TfimParams{n_qubits, std::max(h_min, 0.0)}.validate();
        if (!(h_min >= 0.0) || !(h_min < h_max)) {
            throw InvalidInput("SweepSpec: need 0 <= h_min < h_max");
        }
        if (points < 2) throw InvalidInput("SweepSpec: points must be >= 2");
        optimizer.validate();
    }
};

struct SweepRow {
    double h = 0.0;
    double value = 0.0;
    bool violated = false;
    MeasurementSettings settings;
    // populated when both variants are swept (odd N)
    std::optional<double> value_minus;
    std::optional<double> value_plus;
};

struct SweepResult {
    SweepSpec spec;
    std::uint64_t seed = 0;
    std::string timestamp;
    std::vector<SweepRow> rows;
};

namespace detail {

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

// Maximized value at every grid field. The first candidate of each point
// after the first is warm-started from the previous optimum (continuation);
// for SweepVariant::Both each variant keeps its own continuation chain and
// the row reports the larger value.
inline SweepResult sweep_h(const SweepSpec& spec) {
    spec.validate();
    SweepResult out;
    out.spec = spec;
    out.seed = spec.optimizer.seed;
    out.timestamp = detail::utc_timestamp();
    out.rows.reserve(static_cast<std::size_t>(spec.points));

    const bool do_minus = spec.variant != SweepVariant::Plus;
    const bool do_plus = spec.variant != SweepVariant::Minus;
    std::optional<MeasurementSettings> warm_minus, warm_plus;

    for (int i = 0; i < spec.points; ++i) {
        const double h =
            spec.h_min + (spec.h_max - spec.h_min) * static_cast<double>(i) /
                             static_cast<double>(spec.points - 1);
        const GroundStateResult gs = ground_state({spec.n_qubits, h});

        SweepRow row;
        row.h = h;
        std::optional<MaximizationResult> rm, rp;
        if (do_minus) {
            rm = maximize(gs.state, SignVariant::Minus, spec.optimizer,
                          warm_minus ? &*warm_minus : nullptr);
            warm_minus = rm->settings;
        }
        if (do_plus) {
            rp = maximize(gs.state, SignVariant::Plus, spec.optimizer,
                          warm_plus ? &*warm_plus : nullptr);
            warm_plus = rp->settings;
        }
        if (rm && rp) {
            row.value_minus = rm->value;
            row.value_plus = rp->value;
            const MaximizationResult& winner = (rp->value > rm->value) ? *rp : *rm;
            row.value = winner.value;
            row.settings = winner.settings;
        } else {
            const MaximizationResult& only = rm ? *rm : *rp;
            row.value = only.value;
            row.settings = only.settings;
        }
        row.violated = row.value > 1.0 + kViolationTol;
        out.rows.push_back(std::move(row));
    }
    return out;
}

struct ThresholdResult {
    double h_star = 0.0;
    std::optional<std::string> warning;
};

// Bisection for the field h* where the maximized value stops exceeding
// 1 + 1e-9. The bracket must have a violating low end and a non-violating
// high end; the strict form I(h_hi) < 1 is not required because for some N
// the maximum floors at exactly 1 once the violation is lost (a deterministic
// +-z strategy on the parity-definite ground state attains the bound).
inline ThresholdResult find_threshold(int n_qubits, SignVariant variant,
                                      const OptimizerConfig& cfg,
                                      std::pair<double, double> bracket, double tol) {
    double lo = bracket.first;
    double hi = bracket.second;
    if (!(lo >= 0.0) || !(lo < hi)) throw InvalidInput("find_threshold: need 0 <= h_lo < h_hi");
    if (!(tol > 0.0)) throw InvalidInput("find_threshold: tol must be > 0");

    std::vector<std::pair<double, double>> evaluated;
    const auto value_at = [&](double h) {
        const GroundStateResult gs = ground_state({n_qubits, h});
        const double v = maximize(gs.state, variant, cfg).value;
        evaluated.emplace_back(h, v);
        return v;
    };
    const auto violates = [](double v) { return v > 1.0 + kViolationTol; };

    const double v_lo = value_at(lo);
    const double v_hi = value_at(hi);
    if (!violates(v_lo) || violates(v_hi)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "find_threshold: invalid bracket, I(%g) = %.9f and I(%g) = %.9f "
                      "(need violation only at the low end)",
                      lo, v_lo, hi, v_hi);
        throw BracketError(msg);
    }

    while (hi - lo >= tol) {
        const double mid = 0.5 * (lo + hi);
        if (violates(value_at(mid))) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    ThresholdResult out;
    out.h_star = 0.5 * (lo + hi);
    std::sort(evaluated.begin(), evaluated.end());
    for (std::size_t i = 1; i < evaluated.size(); ++i) {
        if (evaluated[i].second > evaluated[i - 1].second + 1e-4) {
            out.warning = "non-monotone maximized value across bisection points";
            break;
        }
    }
    return out;
}

namespace detail {

// Fixed-point decimal with 12 significant digits (values < 1 get 12
// decimals, e.g. 0.000000000000 and 1.41421356237).
inline std::string format_sig12(double x) {
    int int_digits = 0;
    const double ax = std::abs(x);
    if (ax >= 1.0) int_digits = static_cast<int>(std::floor(std::log10(ax))) + 1;
    int decimals = 12 - int_digits;
    if (decimals < 0) decimals = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

} // namespace detail

// CSV with columns exactly h,value,violated.
inline std::string to_csv(const SweepResult& result) {
    if (result.rows.empty()) throw InvalidInput("to_csv: empty sweep result");
    std::string out = "h,value,violated\n";
    for (const SweepRow& r : result.rows) {
        out += detail::format_sig12(r.h);
        out += ',';
        out += detail::format_sig12(r.value);
        out += ',';
        out += r.violated ? "true" : "false";
        out += '\n';
    }
    return out;
}

namespace detail {

inline nlohmann::ordered_json angles_to_json(const MeasurementSettings& settings) {
    nlohmann::ordered_json parties = nlohmann::ordered_json::array();
    for (const auto& pa : settings.to_angles()) {
        parties.push_back({{"theta", {pa[0].theta, pa[1].theta}},
                           {"phi", {pa[0].phi, pa[1].phi}}});
    }
    return parties;
}

inline MeasurementSettings settings_from_json(const nlohmann::json& parties) {
    std::vector<std::array<AnglePair, 2>> angles;
    for (const auto& p : parties) {
        angles.push_back({AnglePair{p.at("theta")[0], p.at("phi")[0]},
                          AnglePair{p.at("theta")[1], p.at("phi")[1]}});
    }
    return MeasurementSettings::from_angles(angles);
}

} // namespace detail

// JSON with the full spec echo, seed, timestamp, and per-row optimal angles.
// Doubles round-trip bit-exactly.
inline std::string to_json(const SweepResult& result) {
    if (result.rows.empty()) throw InvalidInput("to_json: empty sweep result");
    nlohmann::ordered_json j;
    j["spec"] = {{"n", result.spec.n_qubits},
                 {"variant", to_string(result.spec.variant)},
                 {"h_min", result.spec.h_min},
                 {"h_max", result.spec.h_max},
                 {"points", result.spec.points},
                 {"optimizer",
                  {{"restarts", result.spec.optimizer.restarts},
                   {"max_sweeps", result.spec.optimizer.max_sweeps},
                   {"improvement_tol", result.spec.optimizer.improvement_tol},
                   {"seed", result.spec.optimizer.seed},
                   {"threads", result.spec.optimizer.threads}}}};
    j["seed"] = result.seed;
    j["timestamp"] = result.timestamp;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const SweepRow& r : result.rows) {
        nlohmann::ordered_json row = {{"h", r.h},
                                      {"value", r.value},
                                      {"violated", r.violated},
                                      {"angles", detail::angles_to_json(r.settings)}};
        if (r.value_minus) row["value_minus"] = *r.value_minus;
        if (r.value_plus) row["value_plus"] = *r.value_plus;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

inline SweepVariant sweep_variant_from_string(const std::string& s) {
    if (s == "minus") return SweepVariant::Minus;
    if (s == "plus") return SweepVariant::Plus;
    if (s == "both") return SweepVariant::Both;
    throw InvalidInput("unknown variant '" + s + "'");
}

inline SweepResult sweep_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SweepResult out;
    const auto& spec = j.at("spec");
    out.spec.n_qubits = spec.at("n");
    out.spec.variant = sweep_variant_from_string(spec.at("variant"));
    out.spec.h_min = spec.at("h_min");
    out.spec.h_max = spec.at("h_max");
    out.spec.points = spec.at("points");
    const auto& opt = spec.at("optimizer");
    out.spec.optimizer.restarts = opt.at("restarts");
    out.spec.optimizer.max_sweeps = opt.at("max_sweeps");
    out.spec.optimizer.improvement_tol = opt.at("improvement_tol");
    out.spec.optimizer.seed = opt.at("seed");
    out.spec.optimizer.threads = opt.at("threads");
    out.seed = j.at("seed");
    out.timestamp = j.at("timestamp");
    for (const auto& row : j.at("rows")) {
        SweepRow r;
        r.h = row.at("h");
        r.value = row.at("value");
        r.violated = row.at("violated");
        r.settings = detail::settings_from_json(row.at("angles"));
        if (row.contains("value_minus")) r.value_minus = row.at("value_minus").get<double>();
        if (row.contains("value_plus")) r.value_plus = row.at("value_plus").get<double>();
        out.rows.push_back(std::move(r));
    }
    return out;
}

} // namespace gme
