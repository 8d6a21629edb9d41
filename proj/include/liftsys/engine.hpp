#ifndef LIFTSYS_ENGINE_HPP
#define LIFTSYS_ENGINE_HPP

// Runs scenario tasks and builds deterministic reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liftsys/errors.hpp"
#include "liftsys/scenario.hpp"

namespace liftsys::engine {

using Report = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::optional<int> truncation;             // overrides ring.truncation
  std::optional<int> horizon;                // overrides every task's n_max
  std::optional<std::uint32_t> characteristic;
  std::optional<std::uint64_t> seed;         // overrides random schedule seeds
  bool timing = false;                       // adds wall_ms per task (breaks byte-identical output)
};

struct RunResult {
  Report report;
  ExitCode exit = ExitCode::ok;  // certificate_failure when a certificate check failed
};

// Input and cap errors propagate as exceptions; assertion failures are
// recorded in the failing task and reflected in `exit`.
RunResult run(const scenario::Scenario& s, const RunOptions& options = {});

struct Verification {
  RunResult result;
  std::vector<std::string> mismatches;
  bool passed() const { return result.exit == ExitCode::ok && mismatches.empty(); }
};

// Runs the scenario and checks its `expect` manifest.
Verification verify(const scenario::Scenario& s, const RunOptions& options = {});

std::string render_text(const Report& report);

const std::vector<std::string>& known_ops();

}  // namespace liftsys::engine

#endif  // LIFTSYS_ENGINE_HPP
