#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "liftsys/bundled.hpp"
#include "liftsys/engine.hpp"
#include "liftsys/errors.hpp"
#include "liftsys/scenario.hpp"

namespace {

using liftsys::ExitCode;
using liftsys::engine::Report;
using liftsys::scenario::Json;

struct CommonFlags {
  std::optional<int> trunc;
  std::optional<int> horizon;
  std::optional<std::uint32_t> characteristic;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  bool timing = false;

  liftsys::engine::RunOptions options() const { return {trunc, horizon, characteristic, seed, timing}; }
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--trunc", f.trunc, "Default truncation degree of the ring");
  cmd->add_option("--horizon", f.horizon, "Largest level n used by every task");
  cmd->add_option("--char", f.characteristic, "Field characteristic (0 = rationals)");
  cmd->add_option("--seed", f.seed, "Seed for randomized schedules");
  cmd->add_option("--out", f.out, "Also write the report to this file");
  cmd->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("--timing", f.timing, "Add wall-clock time per task");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw liftsys::InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const Report& report, const CommonFlags& flags) {
  const std::string text = flags.format == "text" ? liftsys::engine::render_text(report) : report.dump(2) + "\n";
  std::cout << text;
  if (!flags.out.empty()) {
    std::ofstream out(flags.out, std::ios::binary);
    if (!out) throw liftsys::InputError("cannot write '" + flags.out + "'");
    out << text;
  }
  return 0;
}

// Scenarios with an `expect` block are also checked against it.
int run_scenario(const liftsys::scenario::Scenario& s, const CommonFlags& flags) {
  if (s.expect.empty()) {
    const auto result = liftsys::engine::run(s, flags.options());
    emit(result.report, flags);
    return static_cast<int>(result.exit);
  }
  auto v = liftsys::engine::verify(s, flags.options());
  auto report = v.result.report;
  report["verification"] = {{"passed", v.passed()}, {"mismatches", v.mismatches}};
  emit(report, flags);
  std::cerr << "VERIFY " << s.name << ": " << (v.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& m : v.mismatches) std::cerr << "  - " << m << "\n";
  if (v.result.exit != ExitCode::ok) return static_cast<int>(v.result.exit);
  return v.passed() ? 0 : static_cast<int>(ExitCode::certificate_failure);
}

int run_doc(const Json& doc, const CommonFlags& flags) { return run_scenario(liftsys::scenario::parse_scenario(doc), flags); }

int verify_one(const std::string& id, const CommonFlags& flags) {
  const auto text = liftsys::bundled::scenario_text(id);
  if (!text) {
    std::string known;
    for (const auto& n : liftsys::bundled::names()) known += " " + n;
    throw liftsys::InputError("unknown example id '" + id + "' (known:" + known + ")");
  }
  return run_scenario(liftsys::scenario::parse_scenario(liftsys::scenario::load_json(*text, id)), flags);
}

// A one-task scenario over k[[vars]].
Json inline_doc(const std::string& vars, Json tasks) {
  Json doc;
  doc["name"] = "inline";
  doc["ring"] = {{"variables", liftsys::scenario::split_list(vars)}};
  doc["tasks"] = std::move(tasks);
  return doc;
}

Json matrix_json(const std::string& text) { return liftsys::scenario::parse_inline_matrix(text); }

Json ideal_json(const std::string& text) { return liftsys::scenario::split_list(text); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifting systems, Fitting ideals, Koszul homology and growth certificates over k[[x_1..x_v]]"};
  app.require_subcommand(1);
  CommonFlags flags;

  std::string path, id, vars, matrix, ideal, values, method = "auslander";
  int index = 0, degree = 1, window = 4;

  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", path, "Scenario JSON file")->required();
  add_common(run, flags);

  auto* verify = app.add_subcommand("verify-paper", "Run a bundled example and check its expected certificates");
  verify->add_option("id", id, "Example id, or 'all'")->required();
  add_common(verify, flags);

  auto add_ring = [&](CLI::App* cmd) {
    cmd->add_option("--vars", vars, "Comma-separated variable names")->required();
    add_common(cmd, flags);
  };
  auto* length = app.add_subcommand("length", "Length of coker(matrix) or of R/ideal");
  add_ring(length);
  length->add_option("--matrix", matrix, "Rows separated by ';', entries by ','");
  length->add_option("--ideal", ideal, "Comma-separated generators");
  auto* dim = app.add_subcommand("dim", "Krull dimension of R/ideal from its Hilbert-Samuel function");
  add_ring(dim);
  dim->add_option("--ideal", ideal)->required();
  auto* fitt = app.add_subcommand("fitt", "Fitting ideal of coker(matrix)");
  add_ring(fitt);
  fitt->add_option("--matrix", matrix)->required();
  fitt->add_option("--index", index, "Fitting index");
  auto* mu = app.add_subcommand("mu", "Minimal number of generators of an ideal");
  add_ring(mu);
  mu->add_option("--ideal", ideal)->required();
  auto* spread = app.add_subcommand("spread", "Analytic spread of an ideal");
  add_ring(spread);
  spread->add_option("--ideal", ideal)->required();
  auto* tor = app.add_subcommand("tor", "Tor inverse system of coker(matrix) along ideal with the zero schedule");
  add_ring(tor);
  tor->add_option("--matrix", matrix)->required();
  tor->add_option("--ideal", ideal)->required();
  tor->add_option("--degree", degree, "Homological degree");
  auto* depth = app.add_subcommand("depth", "Depth certificate for coker(matrix) along ideal with the zero schedule");
  add_ring(depth);
  depth->add_option("--matrix", matrix)->required();
  depth->add_option("--ideal", ideal)->required();
  depth->add_option("--method", method)->check(CLI::IsMember({"auslander", "determinant"}));
  auto* growth = app.add_subcommand("growth", "Growth degree of an integer sequence");
  growth->add_option("--values", values, "Comma-separated values for n = 1, 2, ...")->required();
  growth->add_option("--window", window, "Tail window");
  add_common(growth, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::input_error);
  }

  try {
    if (run->parsed()) return run_doc(liftsys::scenario::load_json(read_file(path), path), flags);
    if (verify->parsed()) {
      if (id != "all") return verify_one(id, flags);
      int worst = 0;
      for (const auto& name : liftsys::bundled::names()) worst = std::max(worst, verify_one(name, flags));
      return worst;
    }
    const int n_max = flags.horizon.value_or(4);
    if (length->parsed()) {
      if (matrix.empty() == ideal.empty()) throw liftsys::InputError("length: give exactly one of --matrix and --ideal");
      Json doc = inline_doc(vars, Json::array());
      if (!matrix.empty()) {
        doc["presentations"] = {{"M", matrix_json(matrix)}};
        doc["tasks"].push_back({{"op", "length"}, {"presentation", "M"}});
      } else {
        doc["ideals"] = {{"I", ideal_json(ideal)}};
        doc["tasks"].push_back({{"op", "length"}, {"ideal", "I"}});
      }
      return run_doc(doc, flags);
    }
    for (auto [cmd, op] : {std::pair{dim, "dim"}, std::pair{mu, "mu"}, std::pair{spread, "spread"}}) {
      if (!cmd->parsed()) continue;
      Json doc = inline_doc(vars, Json::array({{{"op", op}, {"ideal", "I"}}}));
      doc["ideals"] = {{"I", ideal_json(ideal)}};
      return run_doc(doc, flags);
    }
    if (fitt->parsed()) {
      Json doc = inline_doc(vars, Json::array({{{"op", "fitt"}, {"presentation", "M"}, {"index", index}}}));
      doc["presentations"] = {{"M", matrix_json(matrix)}};
      return run_doc(doc, flags);
    }
    if (tor->parsed() || depth->parsed()) {
      Json task;
      if (tor->parsed()) task = {{"op", "tor"}, {"system", "L"}, {"degree", degree}, {"n_max", n_max}};
      else if (method == "auslander") task = {{"op", "depth"}, {"system", "L"}, {"n_max", n_max}};
      else task = {{"op", "depth_determinant"}, {"system", "L"}, {"horizon", 0}};
      Json doc = inline_doc(vars, Json::array({task}));
      doc["presentations"] = {{"M", matrix_json(matrix)}};
      doc["ideals"] = {{"a", ideal_json(ideal)}};
      doc["systems"] = {{"L", {{"presentation", "M"}, {"ideal", "a"}, {"horizon", std::max(0, n_max - 1)}}}};
      return run_doc(doc, flags);
    }
    if (growth->parsed()) {
      Json seq = Json::array();
      for (const auto& v : liftsys::scenario::split_list(values)) {
        try {
          seq.push_back(std::stoll(v));
        } catch (const std::exception&) {
          throw liftsys::InputError("growth: '" + v + "' is not an integer");
        }
      }
      Json doc = inline_doc("n", Json::array({{{"op", "growth"}, {"values", seq}, {"window", window}}}));
      return run_doc(doc, flags);
    }
  } catch (const liftsys::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::input_error);
  }
  return 0;
}
