#pragma once

// Batch front-end: run configurations, command dispatch and the (h0, rho)
// sweep. The config is a JSON document; see configs/ and README.md.

#include "freefront/classify.hpp"
#include "freefront/compare.hpp"
#include "freefront/errors.hpp"
#include "freefront/io.hpp"
#include "freefront/model.hpp"
#include "freefront/pde_solver.hpp"
#include "freefront/semiwave.hpp"
#include "freefront/steady_state.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace freefront {

enum class Command { Simulate, Classify, Sweep, SemiWave, Equilibrium, Thresholds, Compare };

inline const char* toString(Command c) {
    switch (c) {
        case Command::Simulate: return "simulate";
        case Command::Classify: return "classify";
        case Command::Sweep: return "sweep";
        case Command::SemiWave: return "semiwave";
        case Command::Equilibrium: return "equilibrium";
        case Command::Thresholds: return "thresholds";
        default: return "compare";
    }
}

inline std::optional<Command> parseCommand(const std::string& s) {
    for (auto c : {Command::Simulate, Command::Classify, Command::Sweep, Command::SemiWave,
                   Command::Equilibrium, Command::Thresholds, Command::Compare}) {
        if (s == toString(c)) return c;
    }
    return std::nullopt;
}

inline bool needsInit(Command c) {
    return c == Command::Simulate || c == Command::Classify || c == Command::Sweep ||
           c == Command::Compare;
}

struct SweepAxes {
    std::vector<double> h0, rho;
};

struct RhoBracket {
    double lo = 1e-3;
    double hi = 1e3;
    int levels = 8;
    int probesPerLevel = 1;
};

struct RunConfig {
    Command command = Command::Simulate;
    ModelParams params;
    std::optional<InitialData> init;
    SolverConfig solver;
    ClassifyRules rules;
    bool earlyStop = true;
    std::optional<RhoBracket> rhoBracket;  ///< classify: also bracket the critical rho
    std::optional<SweepAxes> sweep;
    std::optional<SemiWaveProblem> semiwave;  ///< absent: bracket from params
    double semiwaveYMax = 0.0;
    double semiwaveTol = 1e-8;
    double compareTol = 1e-3;
    std::optional<double> densityBoundK;  ///< thresholds: K for the speed constants
    std::string output = "out";
    std::uint64_t seed = 0;
    int threads = 0;  ///< 0: processor count
};

namespace detail {

inline int lineOfOffset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

/// Best-effort source line of a key: first occurrence of "key" in the text.
inline int lineOfKey(const std::string& text, const std::string& key) {
    const auto pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 0 : lineOfOffset(text, pos);
}

class ConfigReader {
public:
    explicit ConfigReader(const std::string& text) : text_(text) {}

    template <class T>
    T get(const Json& obj, const std::string& key, const std::string& path, T fallback) const {
        if (!obj.contains(key)) return fallback;
        return as<T>(obj.at(key), key, path);
    }

    template <class T>
    T require(const Json& obj, const std::string& key, const std::string& path) const {
        if (!obj.contains(key)) {
            throw ConfigParseError("missing field " + join(path, key), lineOfKey(text_, path),
                                   join(path, key));
        }
        return as<T>(obj.at(key), key, path);
    }

    const Json& section(const Json& obj, const std::string& key) const {
        const auto& s = obj.at(key);
        if (!s.is_object()) {
            throw ConfigParseError("field " + key + " must be an object", lineOfKey(text_, key), key);
        }
        return s;
    }

    [[noreturn]] void fail(const std::string& what, const std::string& field) const {
        const auto leaf = field.substr(field.find_last_of('.') + 1);
        throw ConfigParseError(what, lineOfKey(text_, leaf), field);
    }

private:
    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    template <class T>
    T as(const Json& v, const std::string& key, const std::string& path) const {
        try {
            return v.get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigParseError("field " + join(path, key) + " has the wrong type",
                                   lineOfKey(text_, key), join(path, key));
        }
    }

    const std::string& text_;
};

}  // namespace detail

/// Parses and validates a run configuration. Structural problems raise
/// ConfigParseError (with line and field); invariant and regime failures
/// raise ValidationError / OutOfRegime naming the inequality.
inline RunConfig parseConfig(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigParseError(std::string("config is not valid JSON: ") + e.what(),
                               detail::lineOfOffset(text, e.byte == 0 ? 0 : e.byte - 1), "");
    }
    if (!doc.is_object()) {
        throw ConfigParseError("config must be a JSON object", 1, "");
    }
    const detail::ConfigReader rd(text);
    RunConfig cfg;

    const int version = rd.get<int>(doc, "schema_version", "", kSchemaVersion);
    if (version != kSchemaVersion) {
        rd.fail("unsupported schema_version " + std::to_string(version), "schema_version");
    }
    const auto cmdName = rd.require<std::string>(doc, "command", "");
    const auto cmd = parseCommand(cmdName);
    if (!cmd) rd.fail("unknown command " + cmdName, "command");
    cfg.command = *cmd;

    if (doc.contains("params")) {
        const auto& p = rd.section(doc, "params");
        auto& mp = cfg.params;
        mp.lambda = rd.require<double>(p, "lambda", "params");
        mp.mu = rd.require<double>(p, "mu", "params");
        mp.b = rd.require<double>(p, "b", "params");
        mp.c = rd.require<double>(p, "c", "params");
        mp.d = rd.require<double>(p, "d", "params");
        mp.m = rd.require<double>(p, "m", "params");
        mp.rho = rd.require<double>(p, "rho", "params");
    } else if (cfg.command != Command::SemiWave || !doc.contains("semiwave")) {
        rd.fail("missing field params", "params");
    }

    if (doc.contains("init")) {
        const auto& in = rd.section(doc, "init");
        const double h0 = rd.require<double>(in, "h0", "init");
        const auto family = rd.get<std::string>(in, "family", "init", "cosine");
        if (family == "cosine") {
            InitialData init;
            init.h0 = h0;
            init.ampU = rd.require<double>(in, "amp_u", "init");
            init.ampV = rd.require<double>(in, "amp_v", "init");
            init.validate();
            cfg.init = init;
        } else if (family == "samples") {
            cfg.init = initialFromSamples(h0, rd.require<std::vector<double>>(in, "u0", "init"),
                                          rd.require<std::vector<double>>(in, "v0", "init"));
        } else {
            rd.fail("unknown init family " + family, "init.family");
        }
    }

    if (doc.contains("solver")) {
        const auto& s = rd.section(doc, "solver");
        auto& sc = cfg.solver;
        sc.nGrid = rd.get<int>(s, "n_grid", "solver", sc.nGrid);
        sc.dt = rd.get<double>(s, "dt", "solver", sc.dt);
        sc.adaptive = rd.get<bool>(s, "adaptive", "solver", sc.adaptive);
        sc.cfl = rd.get<double>(s, "cfl", "solver", sc.cfl);
        sc.tMax = rd.get<double>(s, "t_max", "solver", sc.tMax);
        sc.snapshotInterval = rd.get<double>(s, "snapshot_interval", "solver", sc.snapshotInterval);
        sc.clampNegatives = rd.get<bool>(s, "clamp_negatives", "solver", sc.clampNegatives);
        sc.maxClampFraction =
            rd.get<double>(s, "max_clamp_fraction", "solver", sc.maxClampFraction);
    }
    cfg.solver.validate();

    if (doc.contains("classify")) {
        const auto& c = rd.section(doc, "classify");
        auto& r = cfg.rules;
        r.marginLambda = rd.get<double>(c, "margin_lambda", "classify", r.marginLambda);
        r.tolH = rd.get<double>(c, "tol_h", "classify", r.tolH);
        r.tolU = rd.get<double>(c, "tol_u", "classify", r.tolU);
        r.windowFraction = rd.get<double>(c, "window_fraction", "classify", r.windowFraction);
        r.gridTol = rd.get<double>(c, "grid_tol", "classify", r.gridTol);
        cfg.earlyStop = rd.get<bool>(c, "early_stop", "classify", cfg.earlyStop);
        if (c.contains("rho_bracket")) {
            const auto& b = rd.section(c, "rho_bracket");
            RhoBracket rb;
            rb.lo = rd.require<double>(b, "lo", "classify.rho_bracket");
            rb.hi = rd.require<double>(b, "hi", "classify.rho_bracket");
            rb.levels = rd.get<int>(b, "levels", "classify.rho_bracket", rb.levels);
            rb.probesPerLevel =
                rd.get<int>(b, "probes_per_level", "classify.rho_bracket", rb.probesPerLevel);
            if (!(rb.lo > 0.0) || !(rb.hi > rb.lo) || rb.levels < 0 || rb.probesPerLevel < 1) {
                throw ValidationError("rho_bracket requires 0 < lo < hi, levels >= 0, probes >= 1");
            }
            cfg.rhoBracket = rb;
        }
    }

    if (doc.contains("sweep")) {
        const auto& s = rd.section(doc, "sweep");
        SweepAxes ax;
        ax.h0 = rd.require<std::vector<double>>(s, "h0", "sweep");
        ax.rho = rd.require<std::vector<double>>(s, "rho", "sweep");
        cfg.sweep = ax;
    }

    if (doc.contains("semiwave")) {
        const auto& s = rd.section(doc, "semiwave");
        SemiWaveProblem prob;
        prob.a = rd.require<double>(s, "a", "semiwave");
        prob.bcoef = rd.get<double>(s, "b", "semiwave", 1.0);
        prob.d = rd.get<double>(s, "d", "semiwave", 1.0);
        prob.rho = rd.require<double>(s, "rho", "semiwave");
        prob.validate();
        cfg.semiwave = prob;
        cfg.semiwaveYMax = rd.get<double>(s, "y_max", "semiwave", 0.0);
        cfg.semiwaveTol = rd.get<double>(s, "tol", "semiwave", cfg.semiwaveTol);
    }

    if (doc.contains("compare")) {
        cfg.compareTol = rd.get<double>(rd.section(doc, "compare"), "tol", "compare", cfg.compareTol);
    }
    if (doc.contains("thresholds")) {
        const auto& t = rd.section(doc, "thresholds");
        if (t.contains("K")) cfg.densityBoundK = rd.require<double>(t, "K", "thresholds");
    }
    cfg.output = rd.get<std::string>(doc, "output", "", cfg.output);
    cfg.seed = rd.get<std::uint64_t>(doc, "seed", "", cfg.seed);
    cfg.threads = rd.get<int>(doc, "threads", "", cfg.threads);

    // Consistency and regime checks, eagerly.
    if (cfg.sweep && cfg.command != Command::Sweep) {
        throw ValidationError("sweep axes are only allowed with command sweep");
    }
    if (cfg.command == Command::Sweep && (!cfg.sweep || cfg.sweep->h0.empty() || cfg.sweep->rho.empty())) {
        throw ValidationError("command sweep needs non-empty sweep.h0 and sweep.rho");
    }
    if (needsInit(cfg.command) && !cfg.init) {
        throw ValidationError(std::string("command ") + toString(cfg.command) + " needs an init section");
    }
    if (cfg.sweep) {
        for (double h0 : cfg.sweep->h0) {
            if (!(h0 > 0.0)) throw ValidationError("sweep h0 values must be positive");
        }
        for (double rho : cfg.sweep->rho) {
            if (!(rho > 0.0)) throw ValidationError("sweep rho values must be positive");
        }
    }
    if (doc.contains("params")) {
        cfg.params.validate();
    }
    switch (cfg.command) {
        case Command::Equilibrium: detail::requireCoexist(cfg.params); break;
        case Command::Classify:
        case Command::Sweep:
        case Command::Thresholds:
        case Command::Compare: detail::requirePreySurvives(cfg.params); break;
        case Command::SemiWave:
            if (!cfg.semiwave) detail::requirePreySurvives(cfg.params);
            break;
        default: break;
    }
    return cfg;
}

inline RunConfig loadConfig(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parseConfig(ss.str());
}

inline Json toJson(const RunConfig& cfg) {
    Json j{{"schema_version", kSchemaVersion}, {"command", toString(cfg.command)},
           {"params", toJson(cfg.params)}};
    if (cfg.init) j["init"] = toJson(*cfg.init);
    j["solver"] = toJson(cfg.solver);
    j["seed"] = cfg.seed;
    return j;
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepRow {
    double h0 = 0.0;
    double rho = 0.0;
    Verdict verdict = Verdict::Undetermined;
    double hFinal = 0.0;
    std::optional<double> speed;
    std::string error;  ///< error kind if the run failed
    std::optional<Trajectory> trajectory;
};

inline std::string errorKind(const std::exception& e) {
    if (dynamic_cast<const NumericalBlowup*>(&e)) return "NumericalBlowup";
    if (dynamic_cast<const StefanViolation*>(&e)) return "StefanViolation";
    if (dynamic_cast<const SolverFailure*>(&e)) return "SolverFailure";
    if (dynamic_cast<const OutOfRegime*>(&e)) return "OutOfRegime";
    if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "Exception";
}

/// Runs every (h0, rho) pair on a bounded worker pool. Rows come back
/// ordered by (h0, rho) in axis order regardless of scheduling. A failed
/// run is recorded with its error kind and the sweep continues.
inline std::vector<SweepRow> runSweep(const RunConfig& cfg, int threads, bool keepTrajectories = true) {
    if (!cfg.sweep || !cfg.init) {
        throw ValidationError("runSweep needs sweep axes and init");
    }
    std::vector<SweepRow> rows;
    for (double h0 : cfg.sweep->h0) {
        for (double rho : cfg.sweep->rho) {
            SweepRow r;
            r.h0 = h0;
            r.rho = rho;
            rows.push_back(r);
        }
    }
    auto runOne = [&](SweepRow& row) {
        try {
            ModelParams p = cfg.params;
            p.rho = row.rho;
            InitialData init = *cfg.init;
            if (init.family == InitialData::Family::Samples) {
                init.h0 = row.h0;
            } else {
                init = initialCosineProfile(row.h0, init.ampU, init.ampV);
            }
            Trajectory tr = cfg.earlyStop ? simulateUntilVerdict(p, init, cfg.solver, cfg.rules)
                                          : simulate(p, init, cfg.solver);
            const auto out = classifyRun(tr, p, cfg.rules);
            row.verdict = out.verdict;
            row.hFinal = tr.finalFront();
            row.speed = out.speedEstimate;
            if (keepTrajectories) row.trajectory = std::move(tr);
        } catch (const std::exception& e) {
            row.error = errorKind(e);
        }
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(rows.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) runOne(rows[i]);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

inline void writeSweepCsv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    CsvWriter w(path, "sweep", {"h0", "rho", "verdict", "h_final", "speed", "error"});
    for (const auto& r : rows) {
        w.writeRow(std::vector<std::string>{formatNumber(r.h0), formatNumber(r.rho),
                                            r.error.empty() ? toString(r.verdict) : "error",
                                            formatNumber(r.hFinal),
                                            r.speed ? formatNumber(*r.speed) : "",
                                            r.error});
    }
}

// ---------------------------------------------------------------------------
// Commands

inline int exitCodeFor(ErrorFamily f) {
    switch (f) {
        case ErrorFamily::Validation: return 1;
        case ErrorFamily::Numerical: return 2;
        default: return 3;
    }
}

inline int resolveThreads(const RunConfig& cfg, std::optional<int> cliThreads) {
    if (cliThreads && *cliThreads > 0) return *cliThreads;
    if (const char* env = std::getenv("FREEFRONT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    if (cfg.threads > 0) return cfg.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

inline std::filesystem::path resolveOutput(const RunConfig& cfg, std::optional<std::string> cliOut) {
    if (cliOut && !cliOut->empty()) return *cliOut;
    if (const char* env = std::getenv("FREEFRONT_OUT"); env != nullptr && *env != '\0') return env;
    return cfg.output;
}

namespace detail {

inline Json vanishingPredatorCheck(const RunConfig& cfg, const Trajectory& tr, const Outcome& out,
                                   const std::filesystem::path& dir) {
    const auto& p = cfg.params;
    const double threshold = 0.5 * std::numbers::pi * std::sqrt(p.d / p.mu);
    const double hInf = *out.hInfEstimate;
    Json j{{"predator_threshold", threshold}, {"final_sup_v", tr.supV.back()}};
    if (hInf > threshold * (1.0 + cfg.rules.gridTol)) {
        const auto prof = solveLogisticBVP(p.d, p.mu, hInf, cfg.solver.nGrid);
        const auto& last = tr.snapshots.back();
        double diff = 0.0;
        for (std::size_t k = 0; k < last.V.size(); ++k) {
            diff = std::max(diff, std::abs(last.V[k] - prof.values[k]));
        }
        const double scale = supOf(prof.values);
        j["steady_profile_sup"] = scale;
        j["relative_sup_distance"] = scale > 0.0 ? diff / scale : diff;
        writeSteadyProfileCsv(dir / "steady_profile.csv", prof);
    }
    return j;
}

}  // namespace detail

/// Executes one configuration, writing artifacts under `outDir`.
/// Returns the process exit code; errors propagate as exceptions.
inline int runCommand(const RunConfig& cfg, const std::filesystem::path& outDir, int threads,
                      std::ostream& log = std::cout) {
    std::filesystem::create_directories(outDir);
    Json meta = metadataJson(toString(cfg.command), Json{{"config", toJson(cfg)}, {"threads", threads}});
    int code = 0;

    switch (cfg.command) {
        case Command::Simulate: {
            Trajectory partial;
            try {
                const auto tr = simulate(cfg.params, *cfg.init, cfg.solver, {}, &partial);
                writeTrajectoryCsv(outDir / "trajectory.csv", tr);
                writeSnapshots(outDir / "profiles", tr);
                log << "t = " << tr.finalTime() << ", h = " << tr.finalFront() << '\n';
            } catch (const Error&) {
                writeTrajectoryCsv(outDir / "trajectory_partial.csv", partial);
                throw;
            }
            break;
        }
        case Command::Classify: {
            const auto tr = cfg.earlyStop ? simulateUntilVerdict(cfg.params, *cfg.init, cfg.solver, cfg.rules)
                                          : simulate(cfg.params, *cfg.init, cfg.solver);
            const auto out = classifyRun(tr, cfg.params, cfg.rules);
            Json report{{"schema_version", kSchemaVersion},
                        {"params", toJson(cfg.params)},
                        {"init", toJson(*cfg.init)}};
            const Json outcome = toJson(out);
            for (const auto& [k, v] : outcome.items()) report[k] = v;
            if (out.verdict == Verdict::Vanishing && !tr.snapshots.empty()) {
                report["predator"] = detail::vanishingPredatorCheck(cfg, tr, out, outDir);
            }
            if (cfg.rhoBracket) {
                const auto& b = *cfg.rhoBracket;
                const auto est = findRhoCritical(cfg.params, *cfg.init, cfg.solver, b.lo, b.hi,
                                                 b.levels, cfg.rules, b.probesPerLevel, threads);
                report["rho_critical"] = toJson(est);
            }
            writeTrajectoryCsv(outDir / "trajectory.csv", tr);
            writeJson(outDir / "verdict.json", report);
            log << toString(out.verdict) << ": " << out.evidence << '\n';
            break;
        }
        case Command::Sweep: {
            const auto rows = runSweep(cfg, threads);
            writeSweepCsv(outDir / "summary.csv", rows);
            std::filesystem::create_directories(outDir / "runs");
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (!rows[i].trajectory) continue;
                char name[48];
                std::snprintf(name, sizeof name, "run_%04zu.csv", i);
                writeTrajectoryCsv(outDir / "runs" / name, *rows[i].trajectory);
            }
            std::size_t failed = 0;
            for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
            log << rows.size() << " runs, " << failed << " failed\n";
            break;
        }
        case Command::SemiWave: {
            Json report{{"schema_version", kSchemaVersion}};
            auto solveOne = [&](const SemiWaveProblem& prob, const std::string& tag) {
                const auto sol = solveSemiWave(prob, cfg.semiwaveYMax, cfg.semiwaveTol);
                const auto asym = semiWaveAsymptotics(prob, sol.c);
                writeSemiWaveCsv(outDir / ("semiwave_" + tag + ".csv"), sol);
                log << tag << ": c = " << formatNumber(sol.c) << '\n';
                return Json{{"a", prob.a}, {"b", prob.bcoef}, {"d", prob.d}, {"rho", prob.rho},
                            {"c", sol.c}, {"converged", sol.converged}, {"tail_gap", sol.tailGap},
                            {"residual", semiWaveResidual(sol, prob)},
                            {"c_over_kpp", asym.cOver2SqrtAd}, {"small_rho_ratio", asym.smallRhoRatio}};
            };
            if (cfg.semiwave) {
                report["solution"] = solveOne(*cfg.semiwave, "profile");
            } else {
                const auto& p = cfg.params;
                report["lower"] = solveOne({p.lambda - p.b / p.m, 1.0, 1.0, p.rho}, "lower");
                report["upper"] = solveOne({p.lambda, 1.0, 1.0, p.rho}, "upper");
            }
            writeJson(outDir / "semiwave.json", report);
            break;
        }
        case Command::Equilibrium: {
            const auto eq = equilibriumClosedForm(cfg.params);
            const auto it = iterateEquilibrium(cfg.params);
            writeJson(outDir / "equilibrium.json",
                      Json{{"schema_version", kSchemaVersion},
                           {"params", toJson(cfg.params)},
                           {"u_star", eq.uStar}, {"v_star", eq.vStar}, {"A", eq.A},
                           {"delta1", eq.delta1}, {"residual1", eq.residual1},
                           {"residual2", eq.residual2},
                           {"iteration", {{"iterations", it.iterations}, {"converged", it.converged},
                                          {"monotone", it.monotone},
                                          {"u_upper", it.uUpper.back()}, {"u_lower", it.uLower.back()},
                                          {"v_upper", it.vUpper.back()}, {"v_lower", it.vLower.back()}}}});
            log << "u* = " << formatNumber(eq.uStar) << ", v* = " << formatNumber(eq.vStar) << '\n';
            break;
        }
        case Command::Thresholds: {
            const auto& p = cfg.params;
            const auto th = spreadingBarrier(p);
            const double K = cfg.densityBoundK.value_or(std::max({p.lambda, p.mu + p.c}));
            const auto sc = speedConstants(p, K);
            Json consts{{"c1", sc.c1}, {"c2", sc.c2}, {"c3", sc.c3}, {"c4", sc.c4}, {"s", sc.s}, {"K", sc.K}};
            if (sc.c5) {
                consts["c5"] = *sc.c5;
                consts["c5_above_c1"] = sc.c5AboveC1;
            }
            writeJson(outDir / "thresholds.json",
                      Json{{"schema_version", kSchemaVersion},
                           {"params", toJson(p)},
                           {"Lambda", th.Lambda},
                           {"h_star_lower", th.hStarLower},
                           {"predator_threshold", 0.5 * std::numbers::pi * std::sqrt(p.d / p.mu)},
                           {"regimes", {{"prey_survives", p.preySurvives()},
                                        {"coexist", p.coexistRegime()},
                                        {"prey_faster", p.preyFaster()}}},
                           {"speed_constants", consts}});
            log << "Lambda = " << formatNumber(th.Lambda) << '\n';
            break;
        }
        case Command::Compare: {
            const auto rep = verifyLogisticSandwich(cfg.params, *cfg.init, cfg.solver, cfg.compareTol,
                                                    false, threads);
            Json checks = Json::array();
            for (const auto& c : rep.checks) checks.push_back(toJson(c));
            bool pass = rep.pass();
            try {
                const auto up = buildExplicitUpper(cfg.params, *cfg.init);
                if (cfg.params.rho <= up.rho0) {
                    const auto ur = verifyUpperOrdering(rep.coupled, up, cfg.compareTol, false);
                    checks.push_back(toJson(ur.density));
                    checks.push_back(toJson(ur.front));
                    pass = pass && ur.pass();
                }
            } catch (const PremiseViolated&) {
            }
            writeJson(outDir / "compare.json",
                      Json{{"schema_version", kSchemaVersion}, {"pass", pass}, {"checks", checks}});
            log << (pass ? "all orderings hold" : "ordering violated") << '\n';
            code = pass ? 0 : exitCodeFor(ErrorFamily::Property);
            break;
        }
    }
    writeJson(outDir / "metadata.json", meta);
    return code;
}

}  // namespace freefront
