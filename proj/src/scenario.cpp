#include "liftsys/scenario.hpp"

#include <algorithm>
#include <set>

#include "liftsys/errors.hpp"

namespace liftsys::scenario {

namespace {

// Task arguments that name an entry of another block.
const std::map<std::string, std::string> kReferenceKeys = {
    {"system", "systems"},       {"presentation", "presentations"}, {"ideal", "ideals"},
    {"other_ideal", "ideals"},   {"bound_ideal", "ideals"},         {"bound_extra", "ideals"},
};

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

std::string as_string(const Json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

int as_int(const Json& v, const std::string& where, int min_value) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min_value || x > 1'000'000) fail(where, "value " + std::to_string(x) + " out of range");
  return static_cast<int>(x);
}

std::vector<std::string> string_list(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

MatrixSpec matrix(const Json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a nonempty array of rows");
  MatrixSpec out;
  for (std::size_t r = 0; r < v.size(); ++r) {
    out.push_back(string_list(v[r], where + "[" + std::to_string(r) + "]"));
    if (out.back().size() != out.front().size()) fail(where, "rows have different lengths");
  }
  return out;
}

template <class Map>
void check_name(const Map& map, const std::string& name, const std::string& kind, const std::string& where) {
  if (!map.count(name)) fail(where, "unknown " + kind + " '" + name + "'");
}

}  // namespace

Json load_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // nlohmann counts bytes from 1; positions elsewhere are 0-based offsets.
    throw ParseError(source + ": " + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
}

Scenario parse_scenario(const Json& doc) {
  Scenario s;
  if (!doc.is_object()) fail("scenario", "expected a JSON object");
  s.name = doc.contains("name") ? as_string(doc["name"], "name") : "scenario";
  if (doc.contains("description")) s.description = as_string(doc["description"], "description");

  const auto& ring = require(doc, "ring", "scenario");
  s.ring.variables = string_list(require(ring, "variables", "ring"), "ring.variables");
  if (s.ring.variables.empty()) fail("ring.variables", "at least one variable is required");
  if (ring.contains("characteristic")) {
    const auto& c = ring["characteristic"];
    if (!c.is_number_unsigned() && !(c.is_number_integer() && c.get<std::int64_t>() == 0))
      fail("ring.characteristic", "expected a nonnegative integer");
    s.ring.characteristic = c.get<std::uint32_t>();
  }
  if (ring.contains("truncation")) s.ring.truncation = as_int(ring["truncation"], "ring.truncation", 1);

  if (doc.contains("ideals")) {
    for (const auto& [name, gens] : doc["ideals"].items())
      s.ideals[name] = string_list(gens, "ideals." + name);
  }
  if (doc.contains("presentations")) {
    for (const auto& [name, m] : doc["presentations"].items()) s.presentations[name] = matrix(m, "presentations." + name);
  }
  if (doc.contains("schedules")) {
    for (const auto& [name, spec] : doc["schedules"].items()) {
      const std::string where = "schedules." + name;
      ScheduleSpec sched;
      sched.ideal = as_string(require(spec, "ideal", where), where + ".ideal");
      check_name(s.ideals, sched.ideal, "ideal", where + ".ideal");
      sched.horizon = as_int(require(spec, "horizon", where), where + ".horizon", 0);
      if (spec.contains("random")) {
        const auto& rnd = spec["random"];
        RandomSchedule r;
        if (rnd.contains("seed")) r.seed = static_cast<std::uint64_t>(as_int(rnd["seed"], where + ".random.seed", 0));
        if (rnd.contains("density")) {
          if (!rnd["density"].is_number()) fail(where + ".random.density", "expected a number");
          r.density = rnd["density"].get<double>();
          if (r.density < 0 || r.density > 1) fail(where + ".random.density", "must lie in [0, 1]");
        }
        if (rnd.contains("rows")) {
          const auto& rows = rnd["rows"];
          if (!rows.is_array()) fail(where + ".random.rows", "expected an array of row numbers");
          for (std::size_t i = 0; i < rows.size(); ++i)
            r.rows.push_back(as_int(rows[i], where + ".random.rows[" + std::to_string(i) + "]", 1));
        }
        sched.random = r;
      }
      if (spec.contains("parts")) {
        if (sched.random) fail(where, "a schedule is either random or given by parts");
        const auto& parts = spec["parts"];
        if (!parts.is_array()) fail(where + ".parts", "expected an array");
        for (std::size_t i = 0; i < parts.size(); ++i) {
          const std::string pw = where + ".parts[" + std::to_string(i) + "]";
          SchedulePart part;
          part.level = as_int(require(parts[i], "level", pw), pw + ".level", 1);
          part.generator = as_int(require(parts[i], "generator", pw), pw + ".generator", 1);
          part.matrix = matrix(require(parts[i], "matrix", pw), pw + ".matrix");
          if (part.level > sched.horizon) fail(pw + ".level", "exceeds the schedule horizon");
          if (static_cast<std::size_t>(part.generator) > s.ideals[sched.ideal].size())
            fail(pw + ".generator", "ideal '" + sched.ideal + "' has fewer generators");
          sched.parts.push_back(std::move(part));
        }
      }
      s.schedules[name] = std::move(sched);
    }
  }
  if (doc.contains("systems")) {
    for (const auto& [name, spec] : doc["systems"].items()) {
      const std::string where = "systems." + name;
      SystemSpec sys;
      sys.presentation = as_string(require(spec, "presentation", where), where + ".presentation");
      check_name(s.presentations, sys.presentation, "presentation", where + ".presentation");
      sys.ideal = as_string(require(spec, "ideal", where), where + ".ideal");
      check_name(s.ideals, sys.ideal, "ideal", where + ".ideal");
      if (spec.contains("schedule")) {
        sys.schedule = as_string(spec["schedule"], where + ".schedule");
        check_name(s.schedules, *sys.schedule, "schedule", where + ".schedule");
        const auto& sched = s.schedules[*sys.schedule];
        if (sched.ideal != sys.ideal) fail(where + ".schedule", "schedule is certified against a different ideal");
        const auto& phi = s.presentations[sys.presentation];
        if (sched.random)
          for (int row : sched.random->rows)
            if (static_cast<std::size_t>(row) > phi.size())
              fail(where + ".schedule", "random schedule perturbs row " + std::to_string(row) + " of a " +
                                            std::to_string(phi.size()) + "-row presentation");
        for (const auto& part : sched.parts) {
          if (part.matrix.size() != phi.size() || part.matrix.front().size() != phi.front().size())
            fail(where + ".schedule", "schedule part shape differs from the presentation");
        }
        if (spec.contains("horizon")) fail(where + ".horizon", "the horizon of a scheduled system is the schedule's");
        sys.horizon = sched.horizon;
      } else {
        sys.horizon = as_int(require(spec, "horizon", where), where + ".horizon", 0);
      }
      s.systems[name] = std::move(sys);
    }
  }

  const auto& tasks = require(doc, "tasks", "scenario");
  if (!tasks.is_array()) fail("tasks", "expected an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string where = "tasks[" + std::to_string(i) + "]";
    TaskSpec t;
    t.op = as_string(require(tasks[i], "op", where), where + ".op");
    t.id = tasks[i].contains("id") ? as_string(tasks[i]["id"], where + ".id") : t.op + "_" + std::to_string(i + 1);
    if (!ids.insert(t.id).second) fail(where + ".id", "duplicate task id '" + t.id + "'");
    t.args = tasks[i];
    t.args.erase("op");
    t.args.erase("id");
    for (const auto& [key, block] : kReferenceKeys) {
      if (!t.args.contains(key)) continue;
      const auto name = as_string(t.args[key], where + "." + key);
      const std::string kind = block.substr(0, block.size() - 1);
      if (block == "systems") check_name(s.systems, name, kind, where + "." + key);
      else if (block == "presentations") check_name(s.presentations, name, kind, where + "." + key);
      else check_name(s.ideals, name, kind, where + "." + key);
    }
    s.tasks.push_back(std::move(t));
  }

  if (doc.contains("expect")) {
    const auto& ex = doc["expect"];
    if (!ex.is_array()) fail("expect", "expected an array");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      const std::string where = "expect[" + std::to_string(i) + "]";
      Expectation e;
      e.task = as_string(require(ex[i], "task", where), where + ".task");
      if (!ids.count(e.task)) fail(where + ".task", "unknown task id '" + e.task + "'");
      e.path = as_string(require(ex[i], "path", where), where + ".path");
      if (ex[i].contains("relation")) e.relation = as_string(ex[i]["relation"], where + ".relation");
      static const std::set<std::string> relations = {"==", ">=", "<=", "all>=", "all==", "contains"};
      if (!relations.count(e.relation)) fail(where + ".relation", "unknown relation '" + e.relation + "'");
      if (ex[i].contains("value")) e.value = ex[i]["value"];
      if (ex[i].contains("ref")) {
        const auto& ref = ex[i]["ref"];
        e.ref_task = as_string(require(ref, "task", where + ".ref"), where + ".ref.task");
        if (!ids.count(*e.ref_task)) fail(where + ".ref.task", "unknown task id '" + *e.ref_task + "'");
        e.ref_path = as_string(require(ref, "path", where + ".ref"), where + ".ref.path");
      }
      if (e.value.has_value() == e.ref_task.has_value()) fail(where, "give exactly one of 'value' and 'ref'");
      s.expect.push_back(std::move(e));
    }
  }
  return s;
}

std::vector<std::string> split_list(std::string_view text, char separator) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(separator, start);
    if (end == std::string_view::npos) end = text.size();
    auto item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

MatrixSpec parse_inline_matrix(std::string_view text) {
  MatrixSpec out;
  for (const auto& row : split_list(text, ';')) {
    out.push_back(split_list(row, ','));
    if (out.back().size() != out.front().size()) throw InputError("inline matrix: rows have different lengths");
  }
  if (out.empty()) throw InputError("inline matrix: no rows");
  return out;
}

}  // namespace liftsys::scenario
