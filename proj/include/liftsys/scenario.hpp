#ifndef LIFTSYS_SCENARIO_HPP
#define LIFTSYS_SCENARIO_HPP

// Field-independent scenario description as read from JSON. Polynomials stay
// strings here; the engine parses them once a ring is fixed.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace liftsys::scenario {

using Json = nlohmann::json;
using MatrixSpec = std::vector<std::vector<std::string>>;

struct RingSpec {
  std::vector<std::string> variables;
  std::uint32_t characteristic = 32003;
  int truncation = 12;
};

// sigma_{level, generator} with 1-based indices.
struct SchedulePart {
  int level = 1;
  int generator = 1;
  MatrixSpec matrix;
};

struct RandomSchedule {
  std::uint64_t seed = 1;
  double density = 0.15;
  std::vector<int> rows;  // 1-based rows that may be perturbed; empty = all
};

struct ScheduleSpec {
  std::string ideal;
  int horizon = 0;
  std::vector<SchedulePart> parts;
  std::optional<RandomSchedule> random;
};

// Without a schedule the system uses the zero schedule of the given horizon.
struct SystemSpec {
  std::string presentation;
  std::string ideal;
  std::optional<std::string> schedule;
  int horizon = 0;
};

struct TaskSpec {
  std::string id;
  std::string op;
  Json args;
};

// Compares the value at `path` in task `task` against `value`, or against the
// value at `ref_path` in task `ref_task`.
struct Expectation {
  std::string task;
  std::string path;
  std::string relation = "==";
  std::optional<Json> value;
  std::optional<std::string> ref_task;
  std::optional<std::string> ref_path;
};

struct Scenario {
  std::string name;
  std::string description;
  RingSpec ring;
  std::map<std::string, std::vector<std::string>> ideals;
  std::map<std::string, MatrixSpec> presentations;
  std::map<std::string, ScheduleSpec> schedules;
  std::map<std::string, SystemSpec> systems;
  std::vector<TaskSpec> tasks;
  std::vector<Expectation> expect;
};

// Parses JSON text; syntax errors become ParseError with the 0-based byte offset.
Json load_json(std::string_view text, const std::string& source);

// Structural validation with the JSON location of the first problem in every
// error message. Names are resolved here; polynomials are parsed later.
Scenario parse_scenario(const Json& doc);

// Reads a matrix written inline as rows separated by ';' and entries by ','.
MatrixSpec parse_inline_matrix(std::string_view text);
std::vector<std::string> split_list(std::string_view text, char separator = ',');

}  // namespace liftsys::scenario

#endif  // LIFTSYS_SCENARIO_HPP
