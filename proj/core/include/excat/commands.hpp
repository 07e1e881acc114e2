#pragma once

// Command execution against a loaded workspace, producing deterministic
// machine-readable reports. Every claim in a report is accompanied by the
// witnesses (matrices, traces, dimensions) needed to re-verify it against
// the workspace without re-running the engine.

#include "excat/workspace.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace excat {

struct CommandRequest {
  std::string command;
  std::vector<std::string> args;
  std::string structure = "abelian";  // "abelian" or "relative:NAME"
  std::string universe;               // optional universe / cuniverse name
  std::size_t budget = 16;
  std::optional<std::pair<int, int>> window;  // corollary42 override
  std::size_t bridge_samples = 30;
  std::uint64_t seed = 0x5eedc0de;
};

struct Report {
  nlohmann::ordered_json body;
  int exit_code = 0;  // 0 ok, 1 verification failure, 2 budget exhausted, 3 load error
};

Report run_command(const Workspace& ws, const CommandRequest& req);

nlohmann::ordered_json matrix_to_json(const Matrix& m);
nlohmann::ordered_json trace_to_json(const CellTrace& t);

}  // namespace excat
