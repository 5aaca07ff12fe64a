#pragma once

#include <string>

#include "branchwalk/config.hpp"
#include "branchwalk/ensemble.hpp"
#include "branchwalk/exponents.hpp"
#include "branchwalk/ssa.hpp"

namespace branchwalk {

// analyze: per-trait walk tables (simple paths with t and theta, the
// admissible set, exact weight-polynomial pieces). Byte-identical across runs.
void write_analyze_report(const ScenarioConfig& config, const std::string& out_dir);
std::string analyze_report_json(const ScenarioConfig& config);

// exponents: breakpoints, per-trait slopes, the event log, and closed-form
// cross-check columns when a closed form applies.
void write_exponents_report(const ScenarioConfig& config, const std::string& out_dir);
std::string exponents_report_json(const ScenarioConfig& config);

// ensemble: raw observable CSV plus comparison reports.
void write_ensemble_report(const ScenarioConfig& config, const EnsembleStats& stats,
                           const std::string& out_dir);
std::string ensemble_csv(const EnsembleStats& stats);

// simulate: trajectory snapshots, stopping times, optional binary event log.
void write_simulation_report(const ScenarioConfig& config, const Trajectory& traj,
                             const std::string& out_dir);

void write_manifest(const ScenarioConfig& config, const std::string& out_dir,
                    const std::string& command, int exit_code, bool budget_overflow);

// Binary event log: 16-byte header "BWEL" + u16 version + u16 pad + u64 count,
// then (f64 time, i32 trait, i8 delta, 3 pad bytes) little-endian records.
void write_event_log(const std::string& path, const std::vector<EventRec>& log);
std::vector<EventRec> read_event_log(const std::string& path);

std::uint64_t file_hash(const std::string& path);  // FNV-1a, for manifests and tests

}  // namespace branchwalk
