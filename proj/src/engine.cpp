#include "liftsys/engine.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "liftsys/field.hpp"
#include "liftsys/fitting.hpp"
#include "liftsys/growth.hpp"
#include "liftsys/ideals.hpp"
#include "liftsys/koszul.hpp"
#include "liftsys/lifting.hpp"
#include "liftsys/ring.hpp"

namespace liftsys::engine {

namespace {

using scenario::Json;
using scenario::MatrixSpec;
using scenario::Scenario;
using scenario::TaskSpec;

double rounded(double x) { return std::round(x * 1e6) / 1e6; }

Report growth_json(const growth::GrowthReport& g) {
  Report out;
  out["sequence"] = g.sequence;
  out["window"] = g.window;
  out["fd_degree"] = g.fd_degree ? Report(*g.fd_degree) : Report(nullptr);
  out["loglog_degree"] = g.loglog_degree;
  out["loglog_slope"] = rounded(g.loglog_slope);
  out["loglog_residual"] = rounded(g.loglog_residual);
  out["agreement"] = g.agreement;
  out["degree"] = g.degree;
  return out;
}

struct TaskOutput {
  Report results = Report::object();
  std::vector<std::string> stamps;
  Report truncations = Report::object();
};

template <class F>
class Runner {
 public:
  using Poly = ring::Polynomial<F>;
  using Ideal = ideals::Ideal<F>;
  using Matrix = lifting::Matrix<F>;
  using System = lifting::LiftingSystem<F>;

  Runner(const Scenario& s, const RunOptions& options, F field)
      : s_(s), options_(options),
        ring_(ring::make_ring(std::move(field), s.ring.variables, options.truncation.value_or(s.ring.truncation))) {
    for (const auto& [name, gens] : s_.ideals) {
      std::vector<Poly> polys;
      for (std::size_t i = 0; i < gens.size(); ++i)
        polys.push_back(poly(gens[i], "ideals." + name + "[" + std::to_string(i) + "]"));
      ideals_.emplace(name, Ideal(ring_, std::move(polys)));
    }
    for (const auto& [name, m] : s_.presentations) presentations_.emplace(name, matrix(m, "presentations." + name));
    for (const auto& [name, spec] : s_.systems) systems_.emplace(name, build_system(name, spec));
  }

  RunResult run() {
    RunResult out;
    Report& rep = out.report;
    rep["tool"] = "liftsys";
    rep["version"] = kVersion;
    rep["scenario"] = s_.name;
    if (!s_.description.empty()) rep["description"] = s_.description;
    rep["ring"] = {{"variables", ring_->names()},
                   {"characteristic", characteristic()},
                   {"truncation", ring_->truncation()}};
    Report systems = Report::object();
    for (const auto& [name, sys] : systems_) {
      systems[name] = {{"presentation", s_.systems.at(name).presentation},
                       {"ideal", s_.systems.at(name).ideal},
                       {"schedule_horizon", sys.horizon()},
                       {"schedule", s_.systems.at(name).schedule ? Report(*s_.systems.at(name).schedule) : Report("zero")}};
      if (const auto& sched = s_.systems.at(name).schedule; sched && s_.schedules.at(*sched).random)
        systems[name]["seed"] = seed_for(s_.schedules.at(*sched));
    }
    if (!systems.empty()) rep["systems"] = systems;
    rep["tasks"] = Report::array();
    bool failed = false;
    for (const auto& task : s_.tasks) {
      Report entry;
      entry["id"] = task.id;
      entry["op"] = task.op;
      entry["inputs"] = Report::parse(task.args.dump());
      const auto start = std::chrono::steady_clock::now();
      try {
        auto result = dispatch(task);
        entry["results"] = std::move(result.results);
        entry["stamps"] = result.stamps;
        entry["truncations"] = std::move(result.truncations);
        entry["status"] = "ok";
      } catch (const AssertionFailure& e) {
        entry["results"] = Report::object();
        entry["stamps"] = {"ASSERTION-FAILED"};
        entry["status"] = "failed";
        entry["error"] = e.what();
        failed = true;
      }
      if (options_.timing) {
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        entry["wall_ms"] = rounded(ms);
      }
      rep["tasks"].push_back(std::move(entry));
    }
    rep["status"] = failed ? "failed" : "ok";
    out.exit = failed ? ExitCode::certificate_failure : ExitCode::ok;
    return out;
  }

 private:
  std::uint32_t characteristic() const {
    if constexpr (std::is_same_v<F, PrimeField>) return ring_->field().characteristic();
    else return 0;
  }

  std::string str(const Poly& p) const { return ring::to_string(p, *ring_); }

  Report matrix_json(const Matrix& m) const {
    Report rows = Report::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Report row = Report::array();
      for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(str(m.at(i, j)));
      rows.push_back(std::move(row));
    }
    return rows;
  }

  Report polys_json(const std::vector<Poly>& ps) const {
    Report out = Report::array();
    for (const auto& p : ps) out.push_back(str(p));
    return out;
  }

  Poly poly(const std::string& text, const std::string& where) const {
    try {
      return ring::parse_poly(text, *ring_);
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.detail(), e.position());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }

  Matrix matrix(const MatrixSpec& spec, const std::string& where) const {
    std::vector<std::vector<Poly>> rows;
    for (std::size_t r = 0; r < spec.size(); ++r) {
      rows.emplace_back();
      for (std::size_t c = 0; c < spec[r].size(); ++c)
        rows.back().push_back(poly(spec[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    }
    return Matrix::from_rows(ring_, rows);
  }

  std::uint64_t seed_for(const scenario::ScheduleSpec& spec) const {
    return options_.seed.value_or(spec.random ? spec.random->seed : 0);
  }

  System build_system(const std::string& name, const scenario::SystemSpec& spec) const {
    const auto& a = ideals_.at(spec.ideal);
    const auto& phi = presentations_.at(spec.presentation);
    if (!spec.schedule)
      return System(a, phi, lifting::PerturbationSchedule<F>::zero(ring_, phi.rows(), phi.cols(), spec.horizon));
    const auto& sched = s_.schedules.at(*spec.schedule);
    lifting::PerturbationSchedule<F> schedule;
    if (sched.random) {
      std::mt19937_64 rng(seed_for(sched));
      std::vector<std::size_t> rows;
      for (int r : sched.random->rows) rows.push_back(static_cast<std::size_t>(r - 1));
      schedule = lifting::random_certified_schedule(a, phi.rows(), phi.cols(), sched.horizon, rng, sched.random->density,
                                                    rows);
    } else {
      std::vector<std::vector<Matrix>> parts(static_cast<std::size_t>(sched.horizon),
                                             std::vector<Matrix>(a.size(), Matrix(ring_, phi.rows(), phi.cols())));
      for (std::size_t i = 0; i < sched.parts.size(); ++i) {
        const auto& part = sched.parts[i];
        if (static_cast<std::size_t>(part.generator) > a.size())
          throw InputError("schedules." + *spec.schedule + ".parts[" + std::to_string(i) +
                           "].generator: ideal has fewer nonzero generators");
        auto& slot = parts[static_cast<std::size_t>(part.level - 1)][static_cast<std::size_t>(part.generator - 1)];
        slot = lifting::matrix_add(
            slot, matrix(part.matrix, "schedules." + *spec.schedule + ".parts[" + std::to_string(i) + "].matrix"));
      }
      schedule = lifting::PerturbationSchedule<F>::from_parts(a, std::move(parts));
    }
    System sys(a, phi, std::move(schedule));
    const auto check = lifting::validate_schedule(sys);
    if (!check.valid) {
      std::string msg = "systems." + name + ": schedule is not certified";
      for (const auto& p : check.problems) msg += "; " + p;
      throw InputError(msg);
    }
    return sys;
  }

  // ---- argument access

  static std::string where(const TaskSpec& t, const std::string& key) { return "tasks[" + t.id + "]." + key; }

  std::optional<int> opt_int(const TaskSpec& t, const std::string& key) const {
    if (!t.args.contains(key)) return std::nullopt;
    const auto& v = t.args[key];
    if (!v.is_number_integer()) throw InputError(where(t, key) + ": expected an integer");
    return v.get<int>();
  }

  int get_int(const TaskSpec& t, const std::string& key, std::optional<int> fallback = std::nullopt) const {
    if (auto v = opt_int(t, key)) return *v;
    if (fallback) return *fallback;
    throw InputError(where(t, key) + ": missing argument");
  }

  int n_max(const TaskSpec& t, std::optional<int> fallback = std::nullopt) const {
    if (options_.horizon) return *options_.horizon;
    const int n = get_int(t, "n_max", fallback);
    if (n < 1) throw InputError(where(t, "n_max") + ": must be >= 1");
    return n;
  }

  std::string name_arg(const TaskSpec& t, const std::string& key) const {
    if (!t.args.contains(key)) throw InputError(where(t, key) + ": missing argument");
    return t.args[key].get<std::string>();
  }

  const Ideal& ideal(const TaskSpec& t, const std::string& key = "ideal") const { return ideals_.at(name_arg(t, key)); }
  const Matrix& presentation(const TaskSpec& t) const { return presentations_.at(name_arg(t, "presentation")); }
  const System& system(const TaskSpec& t) const { return systems_.at(name_arg(t, "system")); }

  // ---- dispatch

  TaskOutput dispatch(const TaskSpec& t) {
    using Handler = TaskOutput (Runner::*)(const TaskSpec&);
    static const std::map<std::string, Handler> handlers = {
        {"length", &Runner::op_length},
        {"minimal_presentation", &Runner::op_minimal_presentation},
        {"fitt", &Runner::op_fitt},
        {"mu", &Runner::op_mu},
        {"colength", &Runner::op_colength},
        {"dim", &Runner::op_dim},
        {"spread", &Runner::op_spread},
        {"equimultiple", &Runner::op_equimultiple},
        {"power_membership", &Runner::op_power_membership},
        {"intersect_properly", &Runner::op_intersect_properly},
        {"regular_sequence", &Runner::op_regular_sequence},
        {"koszul_homology", &Runner::op_koszul_homology},
        {"validate_schedule", &Runner::op_validate_schedule},
        {"build_phi", &Runner::op_build_phi},
        {"invariants", &Runner::op_invariants},
        {"fitting_sequence", &Runner::op_fitting_sequence},
        {"tor", &Runner::op_tor},
        {"depth", &Runner::op_depth_auslander},
        {"depth_determinant", &Runner::op_depth_determinant},
        {"eta_witness", &Runner::op_eta_witness},
        {"growth", &Runner::op_growth},
    };
    auto it = handlers.find(t.op);
    if (it == handlers.end()) throw InputError("tasks[" + t.id + "].op: unknown operation '" + t.op + "'");
    return (this->*(it->second))(t);
  }

  // ---- operations

  TaskOutput op_length(const TaskSpec& t) {
    TaskOutput out;
    const Matrix m = t.args.contains("presentation") ? presentation(t) : Matrix::cyclic(ideal(t));
    const auto res = fitting::module_length(m);
    out.results = {{"length", res.length}, {"witness_degree", res.witness_degree}};
    out.truncations = {{"truncation", res.truncation}, {"witness_cap", fitting::kModuleWitnessCap}};
    return out;
  }

  TaskOutput op_minimal_presentation(const TaskSpec& t) {
    TaskOutput out;
    const auto mp = fitting::minimal_presentation(presentation(t));
    out.results = {{"mu", mp.mu}, {"matrix", matrix_json(mp.module)}};
    return out;
  }

  TaskOutput op_fitt(const TaskSpec& t) {
    TaskOutput out;
    const int index = get_int(t, "index", 0);
    if (index < 0) throw InputError(where(t, "index") + ": must be >= 0");
    const auto fi = fitting::fitting_ideal(presentation(t), static_cast<std::size_t>(index));
    out.results = {{"index", index}, {"generators", polys_json(fi.generators())}, {"unit", fi.is_unit()},
                   {"zero", fi.is_zero()}};
    out.truncations = {{"minor_cap", fitting::kMinorCountCap}};
    return out;
  }

  TaskOutput op_mu(const TaskSpec& t) {
    TaskOutput out;
    const auto mg = ideals::min_generators(ideal(t));
    out.results = {{"mu", mg.mu}, {"representatives", polys_json(mg.representatives)}};
    out.truncations = {{"truncation", mg.truncation}, {"multiplier_degree", mg.multiplier_degree}};
    return out;
  }

  TaskOutput op_colength(const TaskSpec& t) {
    TaskOutput out;
    const auto c = ideals::colength(ideal(t));
    out.results = {{"length", c.length}, {"witness_degree", c.witness_degree}};
    out.truncations = {{"truncation", c.truncation}, {"cap", ideals::kColengthCap}};
    return out;
  }

  TaskOutput op_dim(const TaskSpec& t) {
    TaskOutput out;
    const int horizon = get_int(t, "horizon", ideals::kGrowthHorizon);
    const auto hs = ideals::hs_dimension(ideal(t), horizon);
    out.results = {{"dim", hs.dim}, {"growth", growth_json(hs.report)}};
    out.truncations = {{"truncation", hs.truncation}, {"horizon", horizon}};
    return out;
  }

  TaskOutput op_spread(const TaskSpec& t) {
    TaskOutput out;
    const int horizon = get_int(t, "horizon", ideals::kGrowthHorizon);
    const auto sp = ideals::analytic_spread(ideal(t), horizon);
    out.results = {{"spread", sp.spread}, {"growth", growth_json(sp.report)}};
    out.truncations = {{"horizon", horizon}};
    return out;
  }

  TaskOutput op_equimultiple(const TaskSpec& t) {
    TaskOutput out;
    const int horizon = get_int(t, "horizon", ideals::kGrowthHorizon);
    const auto eq = ideals::equimultiple_check(ideal(t), horizon);
    out.results = {{"equimultiple", eq.is_equimultiple}, {"height", eq.height}, {"spread", eq.spread},
                   {"quotient_dim", eq.quotient_dim.dim}};
    out.stamps = {eq.is_equimultiple ? "EQUIMULTIPLE" : "NOT-EQUIMULTIPLE"};
    out.truncations = {{"horizon", horizon}, {"truncation", eq.quotient_dim.truncation}};
    return out;
  }

  // Every minimal generator of a^n tested against b. NotMember at truncation
  // deg g is exact: g is not even in b + m^{deg g + 1}.
  TaskOutput op_power_membership(const TaskSpec& t) {
    TaskOutput out;
    const auto& a = ideal(t);
    const auto& b = ideal(t, "other_ideal");
    const int top = n_max(t);
    Report levels = Report::array();
    bool all_not_member = true;
    for (int n = 1; n <= top; ++n) {
      const auto gens = ideals::min_generators(ideals::ideal_power(a, n)).representatives;
      Report statuses = Report::array();
      for (const auto& g : gens) {
        const auto v = ideals::membership(g, b, std::max(1, g.degree()));
        statuses.push_back(ideals::to_string(v.status));
        all_not_member = all_not_member && v.status == ideals::MembershipStatus::NotMember;
      }
      levels.push_back({{"n", n}, {"generators", gens.size()}, {"statuses", statuses}});
    }
    out.results = {{"levels", levels}, {"all_not_member", all_not_member}};
    out.truncations = {{"n_max", top}, {"rule", "truncation = degree of the tested generator"}};
    return out;
  }

  TaskOutput op_intersect_properly(const TaskSpec& t) {
    TaskOutput out;
    const auto& a = ideal(t);
    const auto& b = ideal(t, "other_ideal");
    const int horizon = get_int(t, "horizon", ideals::kGrowthHorizon);
    bool cofinite = true;
    try {
      ideals::colength(ideals::ideal_sum(a, b));
    } catch (const NotArtinianWithinCap&) {
      cofinite = false;
    }
    const auto da = ideals::hs_dimension(a, horizon);
    const auto db = ideals::hs_dimension(b, horizon);
    const int dim_r = static_cast<int>(ring_->nvars());
    const bool proper = cofinite && da.dim + db.dim == dim_r;
    out.results = {{"dim_quotient_a", da.dim}, {"dim_quotient_b", db.dim}, {"sum", da.dim + db.dim},
                   {"dim_ring", dim_r},         {"sum_primary_to_maximal", cofinite}, {"proper", proper}};
    out.stamps = {proper ? "INTERSECT-PROPERLY" : "NOT-PROPER"};
    out.truncations = {{"horizon", horizon}, {"colength_cap", ideals::kColengthCap}};
    return out;
  }

  TaskOutput op_regular_sequence(const TaskSpec& t) {
    TaskOutput out;
    const auto rc = koszul::regular_sequence_certificate(ring_, ideal(t).generators());
    out.results = {{"ambient_dim", rc.ambient_dim}, {"quotient_dim", rc.quotient_dim}, {"length", rc.length}};
    out.stamps = {koszul::to_string(rc.stamp)};
    return out;
  }

  TaskOutput op_koszul_homology(const TaskSpec& t) {
    TaskOutput out;
    const int degree = get_int(t, "degree");
    if (degree < 0) throw InputError(where(t, "degree") + ": must be >= 0");
    const auto h = koszul::koszul_homology(ideal(t).generators(), presentation(t), static_cast<std::size_t>(degree));
    out.results = {{"degree", degree}, {"dim", h.dim}, {"label", h.label()}};
    out.stamps = {h.is_tor ? "REGULAR" : "UNCERTIFIED"};
    return out;
  }

  TaskOutput op_validate_schedule(const TaskSpec& t) {
    TaskOutput out;
    const auto rep = lifting::validate_schedule(system(t));
    out.results = {{"valid", rep.valid}, {"horizon", system(t).horizon()}, {"checked_entries", rep.entries.size()},
                   {"problems", rep.problems}};
    out.stamps = {rep.valid ? "SCHEDULE-CERTIFIED" : "SCHEDULE-REJECTED"};
    Report truncs = Report::array();
    for (const auto& e : rep.entries) truncs.push_back(e.truncation);
    out.truncations = {{"exclusion_truncations", truncs}};
    return out;
  }

  TaskOutput op_build_phi(const TaskSpec& t) {
    TaskOutput out;
    const int level = get_int(t, "level");
    const auto m = lifting::build_phi_n(system(t), level);
    out.results = {{"level", level}, {"rows", m.rows()}, {"cols", m.cols()}, {"matrix", matrix_json(m)}};
    return out;
  }

  TaskOutput op_invariants(const TaskSpec& t) {
    TaskOutput out;
    const int top = n_max(t);
    const auto rep = lifting::verify_system_invariants(system(t), top);
    Report levels = Report::array();
    for (const auto& l : rep.levels)
      levels.push_back({{"n", l.n}, {"mu", l.mu}, {"length", l.length}, {"quotient_matches", l.quotient_matches},
                        {"annihilated", l.annihilated}});
    out.results = {{"passed", rep.passed()},       {"mu_constant", rep.mu_constant},
                   {"quotients_consistent", rep.quotients_consistent}, {"annihilation", rep.annihilation},
                   {"levels", levels},             {"failures", rep.failures}};
    if (!rep.passed()) {
      std::string msg = "system invariants fail";
      for (const auto& f : rep.failures) msg += "; " + f;
      throw AssertionFailure(msg);
    }
    out.stamps = {"INVARIANTS-HOLD"};
    out.truncations = {{"n_max", top}};
    return out;
  }

  TaskOutput op_fitting_sequence(const TaskSpec& t) {
    TaskOutput out;
    const auto& sys = system(t);
    const int top = n_max(t);
    const int window = get_int(t, "window", growth::kDefaultWindow);
    const auto cert = lifting::liftable_dim_certificate(sys, top, std::nullopt, window);
    out.results = {{"lengths", cert.lengths},
                   {"growth", growth_json(cert.growth)},
                   {"degree", cert.degree},
                   {"expected", cert.expected},
                   {"ambient_dim", cert.ambient_dim},
                   {"quotient_dim", cert.quotient_dim}};
    if (t.args.contains("bound_ideal")) {
      const auto& base = ideal(t, "bound_ideal");
      const int factor = get_int(t, "bound_factor", 1);
      const int bound_top = std::min(top, get_int(t, "bound_n_max", top));
      Report values = Report::array();
      bool holds = true;
      for (int n = 1; n <= bound_top; ++n) {
        auto target = ideals::ideal_power(base, n);
        if (t.args.contains("bound_extra")) target = ideals::ideal_sum(target, ideal(t, "bound_extra"));
        const auto value = static_cast<std::int64_t>(factor) * static_cast<std::int64_t>(ideals::colength(target).length);
        values.push_back(value);
        holds = holds && cert.lengths[static_cast<std::size_t>(n - 1)] >= value;
      }
      out.results["bound"] = {{"factor", factor}, {"n_max", bound_top}, {"values", values}, {"holds", holds}};
    }
    out.stamps = {lifting::to_string(cert.stamp)};
    out.truncations = {{"n_max", top}, {"window", window}, {"schedule_horizon", sys.horizon()}};
    return out;
  }

  template <class T>
  Report tor_levels(const koszul::TorReport<T>& rep) const {
    Report levels = Report::array();
    for (const auto& l : rep.levels)
      levels.push_back({{"n", l.n},
                        {"module_dim", l.module_dim},
                        {"dim", l.dim},
                        {"image_dims", l.image_dims},
                        {"stable_image", l.stable_image},
                        {"stabilized", l.stabilized}});
    return levels;
  }

  TaskOutput op_tor(const TaskSpec& t) {
    TaskOutput out;
    const int degree = get_int(t, "degree");
    if (degree < 0) throw InputError(where(t, "degree") + ": must be >= 0");
    const int top = n_max(t);
    const int window = get_int(t, "window", koszul::kStabilizationWindow);
    const auto rep = koszul::tor_inverse_system(system(t), static_cast<std::size_t>(degree), top, window);
    out.results = {{"degree", degree},
                   {"label", rep.label()},
                   {"stable_image", rep.levels.front().stable_image},
                   {"stabilized", rep.stabilized},
                   {"levels", tor_levels(rep)}};
    if (degree == 0) out.results["tor0_constant"] = rep.tor0_constant;
    out.stamps = {rep.regular ? "REGULAR" : "UNCERTIFIED", rep.stabilized ? "STABILIZED" : "NOT-STABILIZED"};
    out.truncations = {{"n_max", top}, {"window", window}};
    return out;
  }

  TaskOutput op_depth_auslander(const TaskSpec& t) {
    TaskOutput out;
    const int top = n_max(t);
    const int window = get_int(t, "window", koszul::kStabilizationWindow);
    const auto cert = koszul::depth_certificate_auslander(system(t), top, window);
    Report stable = Report::array();
    for (const auto& rep : cert.tor) stable.push_back(rep.levels.front().stable_image);
    out.results = {{"pdim", cert.pdim},         {"q", cert.q},
                   {"depth_bound", cert.depth_bound}, {"witnessed", cert.witnessed},
                   {"stable_images", stable},   {"caveat", cert.caveat}};
    out.stamps = {koszul::to_string(cert.stamp)};
    out.truncations = {{"n_max", top}, {"window", window}};
    return out;
  }

  TaskOutput op_depth_determinant(const TaskSpec& t) {
    TaskOutput out;
    const auto& sys = system(t);
    const int j = get_int(t, "horizon", sys.horizon());
    const auto lift = lifting::associated_lift(sys, j);
    int order = std::numeric_limits<int>::max();
    for (const auto& g : sys.ideal().generators()) order = std::min(order, g.order());
    const auto cert = koszul::depth_certificate_determinant(lift.matrix, j, order);
    out.results = {{"horizon", j},
                   {"lift", matrix_json(lift.matrix)},
                   {"determinant", str(cert.determinant)},
                   {"depth", cert.depth ? Report(*cert.depth) : Report(nullptr)},
                   {"limit_certified", cert.limit_certified ? Report(*cert.limit_certified) : Report(nullptr)}};
    out.stamps = {koszul::to_string(cert.stamp)};
    out.truncations = {{"horizon", j}, {"lift_degree", lift.truncation}};
    return out;
  }

  TaskOutput op_eta_witness(const TaskSpec& t) {
    TaskOutput out;
    const auto& sys = system(t);
    const int top = n_max(t, sys.horizon());
    const auto w = koszul::eta_witness(sys, top);
    Report levels = Report::array();
    for (const auto& l : w.levels) {
      Report m = Report::array();
      for (const auto& part : l.m) m.push_back(polys_json(part));
      levels.push_back({{"n", l.n},
                        {"identity", l.identity_holds},
                        {"cycle", l.is_cycle},
                        {"nonzero_class", l.class_nonzero},
                        {"compatible", l.maps_to_previous},
                        {"m", m}});
    }
    out.results = {{"d", w.d}, {"base_cycle", w.base_cycle}, {"levels", levels}, {"note", w.trust_note}};
    out.stamps = {"UNLIFTABLE-WITNESSED"};
    out.truncations = {{"n_max", top}, {"schedule_horizon", sys.horizon()}};
    return out;
  }

  TaskOutput op_growth(const TaskSpec& t) {
    TaskOutput out;
    if (!t.args.contains("values") || !t.args["values"].is_array())
      throw InputError(where(t, "values") + ": expected an array of integers");
    growth::Sequence seq;
    for (const auto& v : t.args["values"]) {
      if (!v.is_number_integer()) throw InputError(where(t, "values") + ": expected integers");
      seq.push_back(v.get<std::int64_t>());
    }
    const int window = get_int(t, "window", growth::kDefaultWindow);
    const auto g = growth::growth_degree(seq, window);
    out.results = growth_json(g);
    out.stamps = {g.agreement ? "AGREEMENT" : "INDETERMINATE"};
    out.truncations = {{"window", window}};
    return out;
  }

  const Scenario& s_;
  RunOptions options_;
  ring::RingPtr<F> ring_;
  std::map<std::string, Ideal> ideals_;
  std::map<std::string, Matrix> presentations_;
  std::map<std::string, System> systems_;
};

// "results.levels.0.dim" -> /results/levels/0/dim
const Report* lookup(const Report& task, const std::string& path) {
  std::string pointer;
  for (const auto& part : scenario::split_list(path, '.')) pointer += "/" + part;
  const Report::json_pointer ptr(pointer);
  if (!task.contains(ptr)) return nullptr;
  return &task.at(ptr);
}

const Report* find_task(const Report& report, const std::string& id) {
  for (const auto& t : report["tasks"])
    if (t["id"] == id) return &t;
  return nullptr;
}

bool compare(const Report& actual, const std::string& relation, const Report& expected) {
  auto num = [](const Report& v) { return v.is_number() ? v.get<double>() : std::nan(""); };
  if (relation == "==") return actual == expected;
  if (relation == ">=") return num(actual) >= num(expected);
  if (relation == "<=") return num(actual) <= num(expected);
  if (relation == "contains") {
    if (!actual.is_array()) return false;
    for (const auto& v : actual)
      if (v == expected) return true;
    return false;
  }
  if (!actual.is_array() || actual.empty()) return false;
  for (const auto& v : actual) {
    if (relation == "all>=" && !(num(v) >= num(expected))) return false;
    if (relation == "all==" && v != expected) return false;
  }
  return true;
}

}  // namespace

RunResult run(const Scenario& s, const RunOptions& options) {
  const std::uint32_t p = options.characteristic.value_or(s.ring.characteristic);
  FieldConfig{p}.validate();
  if (p == 0) return Runner<RationalField>(s, options, RationalField()).run();
  return Runner<PrimeField>(s, options, PrimeField(p)).run();
}

Verification verify(const Scenario& s, const RunOptions& options) {
  Verification v;
  v.result = run(s, options);
  const auto& report = v.result.report;
  for (const auto& e : s.expect) {
    const std::string label = e.task + "." + e.path + " " + e.relation;
    const Report* task = find_task(report, e.task);
    const Report* actual = task ? lookup(*task, e.path) : nullptr;
    if (!actual) {
      v.mismatches.push_back(label + ": no value at this path");
      continue;
    }
    Report expected;
    if (e.value) {
      expected = Report::parse(e.value->dump());
    } else {
      const Report* ref_task = find_task(report, *e.ref_task);
      const Report* ref = ref_task ? lookup(*ref_task, *e.ref_path) : nullptr;
      if (!ref) {
        v.mismatches.push_back(label + ": reference " + *e.ref_task + "." + *e.ref_path + " has no value");
        continue;
      }
      expected = *ref;
    }
    if (!compare(*actual, e.relation, expected))
      v.mismatches.push_back(label + " " + expected.dump() + ": got " + actual->dump());
  }
  return v;
}

namespace {

void flatten(const Report& v, const std::string& prefix, std::ostringstream& os) {
  const bool scalar_array =
      v.is_array() && std::all_of(v.begin(), v.end(), [](const Report& x) { return !x.is_structured(); });
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, prefix.empty() ? k : prefix + "." + k, os);
  } else if (v.is_array() && !scalar_array) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), os);
  } else {
    os << "    " << prefix << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

}  // namespace

std::string render_text(const Report& report) {
  std::ostringstream os;
  os << "scenario " << report.value("scenario", "") << " (liftsys " << report.value("version", "") << ")\n";
  const auto& ring = report["ring"];
  os << "ring k[[";
  for (std::size_t i = 0; i < ring["variables"].size(); ++i) os << (i ? "," : "") << ring["variables"][i].get<std::string>();
  os << "]] char " << ring["characteristic"].dump() << " truncation " << ring["truncation"].dump() << "\n";
  for (const auto& t : report["tasks"]) {
    os << "\n[" << t["id"].get<std::string>() << "] " << t["op"].get<std::string>() << "  "
       << t["status"].get<std::string>() << "\n";
    if (!t["stamps"].empty()) {
      os << "  stamps:";
      for (const auto& s : t["stamps"]) os << " " << s.get<std::string>();
      os << "\n";
    }
    if (t.contains("error")) os << "  error: " << t["error"].get<std::string>() << "\n";
    os << "  results:\n";
    flatten(t["results"], "", os);
    if (t.contains("truncations") && !t["truncations"].empty()) {
      os << "  truncations:\n";
      flatten(t["truncations"], "", os);
    }
    if (t.contains("wall_ms")) os << "  wall_ms: " << t["wall_ms"].dump() << "\n";
  }
  os << "\nstatus: " << report.value("status", "") << "\n";
  if (report.contains("verification")) {
    const auto& v = report["verification"];
    os << "verification: " << (v["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
    for (const auto& m : v["mismatches"]) os << "  mismatch: " << m.get<std::string>() << "\n";
  }
  return os.str();
}

const std::vector<std::string>& known_ops() {
  static const std::vector<std::string> ops = {
      "length",       "minimal_presentation", "fitt",        "mu",
      "colength",     "dim",                  "spread",      "equimultiple",
      "power_membership", "intersect_properly", "regular_sequence", "koszul_homology",
      "validate_schedule", "build_phi",        "invariants",  "fitting_sequence",
      "tor",          "depth",                "depth_determinant", "eta_witness",
      "growth"};
  return ops;
}

}  // namespace liftsys::engine
