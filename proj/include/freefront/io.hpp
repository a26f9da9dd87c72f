#pragma once

// CSV and JSON artifacts. Every CSV starts with a comment line
// "# freefront <kind> schema_version=1 ..." followed by a header row.
// Numbers are written with %.17g so files round-trip exactly and identical
// runs produce identical bytes.

#include "freefront/classify.hpp"
#include "freefront/compare.hpp"
#include "freefront/model.hpp"
#include "freefront/pde_solver.hpp"
#include "freefront/semiwave.hpp"
#include "freefront/steady_state.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef FREEFRONT_VERSION
#define FREEFRONT_VERSION "0.1.0"
#endif

namespace freefront {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

inline std::string formatNumber(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& kind,
              const std::vector<std::string>& header, const std::string& extra = {})
        : out_(path, std::ios::binary) {
        if (!out_) {
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        }
        out_ << "# freefront " << kind << " schema_version=" << kSchemaVersion;
        if (!extra.empty()) out_ << ' ' << extra;
        out_ << '\n';
        writeRow(header);
    }

    void writeRow(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void writeRow(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << formatNumber(values[i]);
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t columnIndex(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw std::out_of_range("no column " + name);
    }

    std::vector<double> column(const std::string& name) const {
        const auto i = columnIndex(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(std::stod(r.at(i)));
        return out;
    }

    /// schema_version from the first comment line, or -1.
    int schemaVersion() const {
        for (const auto& c : comments) {
            const auto pos = c.find("schema_version=");
            if (pos != std::string::npos) return std::stoi(c.substr(pos + 15));
        }
        return -1;
    }
};

inline CsvTable readCsv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            table.comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (table.header.empty()) {
            table.header = std::move(cells);
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

inline void writeJson(const std::filesystem::path& path, const Json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << doc.dump(2) << '\n';
}

inline Json readJson(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return Json::parse(in);
}

// --- writers -------------------------------------------------------------

inline void writeTrajectoryCsv(const std::filesystem::path& path, const Trajectory& tr) {
    CsvWriter w(path, "trajectory", {"t", "h", "h_prime", "front_gradient", "sup_u", "sup_v"});
    for (std::size_t k = 0; k < tr.size(); ++k) {
        w.writeRow(std::vector<double>{tr.times[k], tr.fronts[k], tr.frontSpeeds[k],
                                       tr.frontGradients[k], tr.supU[k],
                                       tr.supV.empty() ? 0.0 : tr.supV[k]});
    }
}

inline void writeSnapshotCsv(const std::filesystem::path& path, const Snapshot& s) {
    CsvWriter w(path, "profile", {"xi", "x", "u", "v"}, "t=" + formatNumber(s.t));
    const double dxi = 1.0 / static_cast<double>(s.U.size() - 1);
    for (std::size_t j = 0; j < s.U.size(); ++j) {
        const double xi = static_cast<double>(j) * dxi;
        w.writeRow(std::vector<double>{xi, xi * s.h, s.U[j], s.V.empty() ? 0.0 : s.V[j]});
    }
}

/// One file per snapshot, profile_0000.csv, ...
inline void writeSnapshots(const std::filesystem::path& dir, const Trajectory& tr) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "profile_%04zu.csv", i);
        writeSnapshotCsv(dir / name, tr.snapshots[i]);
    }
}

inline void writeSteadyProfileCsv(const std::filesystem::path& path, const SteadyProfile& prof) {
    CsvWriter w(path, "steady_profile", {"x", "V"});
    for (std::size_t j = 0; j < prof.values.size(); ++j) {
        w.writeRow(std::vector<double>{prof.grid[j], prof.values[j]});
    }
}

inline void writeSemiWaveCsv(const std::filesystem::path& path, const SemiWaveSolution& sol) {
    CsvWriter w(path, "semiwave_profile", {"y", "q", "q_prime"}, "c=" + formatNumber(sol.c));
    for (std::size_t j = 0; j < sol.yGrid.size(); ++j) {
        w.writeRow(std::vector<double>{sol.yGrid[j], sol.q[j], sol.qPrime[j]});
    }
}

// --- JSON views ----------------------------------------------------------

inline Json toJson(const ModelParams& p) {
    return Json{{"lambda", p.lambda}, {"mu", p.mu}, {"b", p.b}, {"c", p.c},
                {"d", p.d},           {"m", p.m},   {"rho", p.rho}};
}

inline Json toJson(const SolverConfig& c) {
    return Json{{"n_grid", c.nGrid},
                {"dt", c.dt},
                {"adaptive", c.adaptive},
                {"cfl", c.cfl},
                {"t_max", c.tMax},
                {"snapshot_interval", c.snapshotInterval},
                {"clamp_negatives", c.clampNegatives},
                {"max_clamp_fraction", c.maxClampFraction}};
}

inline Json toJson(const InitialData& init) {
    Json j{{"h0", init.h0}};
    if (init.family == InitialData::Family::Cosine) {
        j["family"] = "cosine";
        j["amp_u"] = init.ampU;
        j["amp_v"] = init.ampV;
    } else {
        j["family"] = "samples";
        j["u0"] = init.u0;
        j["v0"] = init.v0;
    }
    return j;
}

inline Json toJson(const Outcome& o) {
    Json j{{"verdict", toString(o.verdict)},
           {"evidence", {{"rule", o.rule}, {"t", o.evidenceTime}, {"detail", o.evidence}}}};
    if (o.hInfEstimate) j["h_inf_estimate"] = *o.hInfEstimate;
    if (o.speedEstimate) j["speed_estimate"] = *o.speedEstimate;
    if (o.equilibriumError) j["equilibrium_error"] = *o.equilibriumError;
    return j;
}

inline Json toJson(const OrderingReport& r) {
    return Json{{"check", r.check},
                {"worstMargin", r.worstMargin},
                {"location", {{"t", r.t}, {"x", r.x}}},
                {"pass", r.pass}};
}

inline Json toJson(const ThresholdEstimate& est) {
    Json probes = Json::array();
    for (const auto& pr : est.probes) {
        probes.push_back({{"value", pr.value}, {"verdict", toString(pr.verdict)},
                          {"h_final", pr.finalFront}});
    }
    return Json{{"kind", est.kind == ThresholdEstimate::Kind::RhoCritical ? "rho_critical" : "h0_band"},
                {"lower", est.lower},
                {"upper", est.upper},
                {"runs", est.runs},
                {"levels", est.levels},
                {"stalled", est.stalled},
                {"probes", probes}};
}

/// Run metadata; `created_utc` is the only non-deterministic field.
inline Json metadataJson(const std::string& command, const Json& extra = Json::object()) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    Json j{{"schema_version", kSchemaVersion},
           {"code_version", FREEFRONT_VERSION},
           {"command", command},
           {"created_utc", stamp}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

}  // namespace freefront
