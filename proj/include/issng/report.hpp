#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "issng/solver.hpp"

namespace issng {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// Iteration-history CSV. Header (verbatim):
//   k, norm_F, norm_ry, norm_rp, eta, gmres_iters, gmres_relres, delta,
//   backtracks, tau, merit
// one data row per outer iteration, shortest round-trip numbers, LF endings.
std::string csv_string(const std::vector<IterationRecord>& records);
void write_csv(const std::string& path,
               const std::vector<IterationRecord>& records);

// JSON report: configuration echo, per-iteration records, outcome, final
// norms, optional control-error metrics, wall time, and peak Krylov bytes.
// Doubles survive a serialize/parse round trip exactly.
nlohmann::json records_json(const std::vector<IterationRecord>& records);
std::vector<IterationRecord> records_from_json(const nlohmann::json& j);

nlohmann::json config_json(const SolverConfig& cfg);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace issng
