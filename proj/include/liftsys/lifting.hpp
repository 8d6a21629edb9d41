#ifndef LIFTSYS_LIFTING_HPP
#define LIFTSYS_LIFTING_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "liftsys/errors.hpp"
#include "liftsys/fitting.hpp"
#include "liftsys/growth.hpp"
#include "liftsys/ideals.hpp"
#include "liftsys/parallel.hpp"
#include "liftsys/ring.hpp"

namespace liftsys::lifting {

using fitting::ModuleVectorSpace;
using fitting::PresentedModule;
using ideals::Ideal;
using ideals::Poly;

template <class F>
using Matrix = PresentedModule<F>;

template <class F>
Matrix<F> matrix_add(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum shapes differ");
  Matrix<F> out(a.ring_ptr(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = ring::add(a.field(), a.at(i, j), b.at(i, j));
  return out;
}

template <class F>
bool matrix_is_zero(const Matrix<F>& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) return false;
  return true;
}

// sigma_j for j = 1..J. When parts are present, parts[j-1][k] is
// sigma_{j,k} and the total must equal sum_k sigma_{j,k} * g_k.
template <class F>
struct PerturbationSchedule {
  std::vector<Matrix<F>> totals;
  std::vector<std::optional<std::vector<Matrix<F>>>> parts;

  int horizon() const { return static_cast<int>(totals.size()); }

  static PerturbationSchedule zero(const ring::RingPtr<F>& ring, std::size_t rows, std::size_t cols, int horizon) {
    PerturbationSchedule s;
    for (int j = 0; j < horizon; ++j) {
      s.totals.emplace_back(ring, rows, cols);
      s.parts.emplace_back(std::nullopt);
    }
    return s;
  }

  // Builds totals from parts and the generators of a.
  static PerturbationSchedule from_parts(const Ideal<F>& a, std::vector<std::vector<Matrix<F>>> parts) {
    PerturbationSchedule s;
    const auto& f = a.field();
    for (auto& level : parts) {
      if (level.size() != a.size()) throw DimensionMismatch("schedule parts must match the generators of a");
      Matrix<F> total(a.ring_ptr(), level.front().rows(), level.front().cols());
      for (std::size_t k = 0; k < level.size(); ++k)
        for (std::size_t r = 0; r < total.rows(); ++r)
          for (std::size_t c = 0; c < total.cols(); ++c)
            total.at(r, c) = ring::add(f, total.at(r, c), ring::mul(f, level[k].at(r, c), a.generators()[k]));
      s.totals.push_back(std::move(total));
      s.parts.emplace_back(std::move(level));
    }
    return s;
  }
};

// A lifting system given by a base presentation phi (entries read in R), an
// ideal a with fixed generators, and a finite perturbation schedule. Levels
// n = 1..J+1 are available. Generator rows of a^n and vector-space
// realizations of M_n are cached.
template <class F>
class LiftingSystem {
 public:
  LiftingSystem(Ideal<F> a, Matrix<F> base, PerturbationSchedule<F> schedule)
      : a_(std::move(a)), base_(std::move(base)), schedule_(std::move(schedule)), cache_(std::make_shared<Cache>()) {
    if (a_.ring_ptr() != base_.ring_ptr() && a_.ring().nvars() != base_.ring().nvars())
      throw ArityMismatch("ideal and presentation live in different rings");
    for (const auto& t : schedule_.totals)
      if (t.rows() != base_.rows() || t.cols() != base_.cols())
        throw DimensionMismatch("perturbation shape differs from the base presentation");
  }

  const ring::RingContext<F>& ring() const { return base_.ring(); }
  const ring::RingPtr<F>& ring_ptr() const { return base_.ring_ptr(); }
  const F& field() const { return base_.field(); }
  const Ideal<F>& ideal() const noexcept { return a_; }
  const Matrix<F>& base() const noexcept { return base_; }
  const PerturbationSchedule<F>& schedule() const noexcept { return schedule_; }
  int horizon() const { return schedule_.horizon(); }
  int max_level() const { return horizon() + 1; }

  // Minimal generators of a^n in the deterministic representative order.
  std::vector<Poly<F>> power_generators(int n) const {
    std::lock_guard<std::mutex> lock(cache_->guard);
    auto it = cache_->powers.find(n);
    if (it != cache_->powers.end()) return it->second;
    auto reps = ideals::min_generators(ideals::ideal_power(a_, n)).representatives;
    cache_->powers.emplace(n, reps);
    return reps;
  }

  // phi + sigma_1 + ... + sigma_{n-1}.
  Matrix<F> perturbed(int n) const {
    Matrix<F> m = base_;
    for (int j = 1; j < n; ++j) m = matrix_add(m, schedule_.totals[static_cast<std::size_t>(j - 1)]);
    return m;
  }

  Matrix<F> phi(int n) const {
    if (n < 1 || n > max_level())
      throw HorizonExceeded("level " + std::to_string(n) + " needs a schedule horizon of at least " +
                            std::to_string(n - 1) + " (have " + std::to_string(horizon()) + ")");
    return fitting::with_diagonal_blocks(perturbed(n), power_generators(n));
  }

  std::shared_ptr<const ModuleVectorSpace<F>> module(int n) const {
    {
      std::lock_guard<std::mutex> lock(cache_->guard);
      auto it = cache_->modules.find(n);
      if (it != cache_->modules.end()) return it->second;
    }
    auto v = std::make_shared<const ModuleVectorSpace<F>>(phi(n));
    std::lock_guard<std::mutex> lock(cache_->guard);
    return cache_->modules.emplace(n, std::move(v)).first->second;
  }

 private:
  struct Cache {
    std::mutex guard;
    std::map<int, std::vector<Poly<F>>> powers;
    std::map<int, std::shared_ptr<const ModuleVectorSpace<F>>> modules;
  };

  Ideal<F> a_;
  Matrix<F> base_;
  PerturbationSchedule<F> schedule_;
  std::shared_ptr<Cache> cache_;
};

template <class F>
Matrix<F> build_phi_n(const LiftingSystem<F>& sys, int n) {
  return sys.phi(n);
}

// ---------------------------------------------------------------------------
// Schedule validation

template <class F>
struct ScheduleEntryCheck {
  int level = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  bool in_power = false;           // entry of sigma_j proven to lie in a^j
  bool excluded_from_next = false;  // NotMember of a^{j+1} at the stated truncation
  bool in_next_power = false;       // proven to lie in a^{j+1}: violates the convention
  int truncation = 0;
  std::string note;
};

template <class F>
struct ScheduleReport {
  bool valid = true;
  std::vector<ScheduleEntryCheck<F>> entries;
  std::vector<std::string> problems;
};

template <class F>
ScheduleReport<F> validate_schedule(const LiftingSystem<F>& sys) {
  ScheduleReport<F> out;
  const auto& a = sys.ideal();
  const auto& f = sys.field();
  const auto& s = sys.schedule();
  for (int j = 1; j <= s.horizon(); ++j) {
    const auto& total = s.totals[static_cast<std::size_t>(j - 1)];
    const auto& parts = s.parts[static_cast<std::size_t>(j - 1)];
    const auto lower = ideals::ideal_power(a, j - 1);
    const auto power = ideals::ideal_power(a, j);
    const auto next = ideals::ideal_power(a, j + 1);
    if (parts) {
      // The decomposition itself must reproduce the total.
      for (std::size_t r = 0; r < total.rows(); ++r)
        for (std::size_t c = 0; c < total.cols(); ++c) {
          auto sum = sys.ring().zero();
          for (std::size_t k = 0; k < parts->size(); ++k)
            sum = ring::add(f, sum, ring::mul(f, (*parts)[k].at(r, c), a.generators()[k]));
          if (!sum.equals(f, total.at(r, c))) {
            out.valid = false;
            out.problems.push_back("level " + std::to_string(j) + " entry (" + std::to_string(r + 1) + "," +
                                   std::to_string(c + 1) + "): parts do not sum to the total");
          }
        }
    }
    for (std::size_t r = 0; r < total.rows(); ++r)
      for (std::size_t c = 0; c < total.cols(); ++c) {
        const auto& entry = total.at(r, c);
        if (entry.is_zero()) continue;
        ScheduleEntryCheck<F> check;
        check.level = j;
        check.row = r;
        check.col = c;
        if (parts) {
          bool ok = true;
          for (const auto& p : *parts)
            ok = ok && (p.at(r, c).is_zero() || ideals::has_polynomial_representation(p.at(r, c), lower));
          check.in_power = ok;
          check.note = ok ? "certified from parts" : "a part is not in the previous power";
        } else {
          check.in_power = ideals::has_polynomial_representation(entry, power);
          check.note = check.in_power ? "certified by polynomial identity" : "membership in a^j not certified";
        }
        check.truncation = std::max(entry.degree() + 1, 2);
        check.excluded_from_next =
            ideals::membership(entry, next, check.truncation).status == ideals::MembershipStatus::NotMember;
        if (!check.excluded_from_next) check.in_next_power = ideals::has_polynomial_representation(entry, next);
        if (!check.in_power || !check.excluded_from_next) {
          out.valid = false;
          std::string what = "level " + std::to_string(j) + " entry (" + std::to_string(r + 1) + "," +
                             std::to_string(c + 1) + ") " + ring::to_string(entry, sys.ring()) + ": ";
          if (!check.in_power) what += "not certified in a^" + std::to_string(j);
          else if (check.in_next_power) what += "lies in a^" + std::to_string(j + 1);
          else what += "exclusion from a^" + std::to_string(j + 1) + " not refuted";
          out.problems.push_back(what);
        }
        out.entries.push_back(std::move(check));
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fitting sequence and the dimension certificate

template <class F>
struct FittingLevel {
  int n = 0;
  Ideal<F> ideal;
  std::size_t length = 0;
  int witness_degree = 0;
};

template <class F>
std::vector<FittingLevel<F>> fitting_sequence(const LiftingSystem<F>& sys, int n_max) {
  if (n_max > sys.max_level())
    throw HorizonExceeded("fitting sequence up to " + std::to_string(n_max) + " needs schedule horizon " +
                          std::to_string(n_max - 1));
  // Warm the generator cache in order so the parallel stage only reads it.
  for (int n = 1; n <= n_max; ++n) sys.power_generators(n);
  std::vector<std::optional<FittingLevel<F>>> levels(static_cast<std::size_t>(std::max(0, n_max)));
  parallel_for(levels.size(), [&](std::size_t idx) {
    const int n = static_cast<int>(idx) + 1;
    auto ideal = fitting::fitting_ideal(sys.phi(n), 0);
    try {
      const auto c = ideals::colength(ideal);
      levels[idx] = FittingLevel<F>{n, std::move(ideal), c.length, c.witness_degree};
    } catch (const NotArtinianWithinCap& e) {
      throw NotArtinianWithinCap("level n=" + std::to_string(n) + ": " + e.what(), ideals::kColengthCap);
    }
  });
  std::vector<FittingLevel<F>> out;
  for (auto& l : levels) out.push_back(std::move(*l));
  return out;
}

enum class DimensionStamp { CriterionMet, NotMetByThisSystem, Indeterminate };

inline const char* to_string(DimensionStamp s) {
  switch (s) {
    case DimensionStamp::CriterionMet: return "SERRE-LIFT-CRITERION-MET";
    case DimensionStamp::NotMetByThisSystem: return "NOT-MET-BY-THIS-SYSTEM";
    case DimensionStamp::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

struct DimensionCertificate {
  int degree = 0;
  int expected = 0;  // dim R - dim S
  int ambient_dim = 0;
  int quotient_dim = 0;
  growth::GrowthReport growth;
  DimensionStamp stamp = DimensionStamp::Indeterminate;
  std::vector<std::int64_t> lengths;
};

// Growth degree of l(R/I_n) against dim R - dim S. The ambient is the
// regular ring k[[x]], so dim R is the number of variables.
template <class F>
DimensionCertificate liftable_dim_certificate(const LiftingSystem<F>& sys, int n_max,
                                              std::optional<int> quotient_dim = std::nullopt,
                                              int window = growth::kDefaultWindow) {
  DimensionCertificate out;
  for (const auto& level : fitting_sequence(sys, n_max)) out.lengths.push_back(static_cast<std::int64_t>(level.length));
  out.growth = growth::growth_degree(out.lengths, window);
  out.degree = out.growth.degree;
  out.ambient_dim = static_cast<int>(sys.ring().nvars());
  out.quotient_dim = quotient_dim ? *quotient_dim : ideals::hs_dimension(sys.ideal()).dim;
  out.expected = out.ambient_dim - out.quotient_dim;
  if (!out.growth.agreement) out.stamp = DimensionStamp::Indeterminate;
  else if (out.degree == out.expected) out.stamp = DimensionStamp::CriterionMet;
  else out.stamp = DimensionStamp::NotMetByThisSystem;
  return out;
}

// ---------------------------------------------------------------------------
// Associated lift and canonical systems

template <class F>
struct AssociatedLiftTruncation {
  Matrix<F> matrix;
  int horizon = 0;     // J
  int truncation = 0;  // largest entry degree
};

template <class F>
AssociatedLiftTruncation<F> associated_lift(const LiftingSystem<F>& sys, int j) {
  if (j < 0 || j > sys.horizon())
    throw HorizonExceeded("associated lift to J=" + std::to_string(j) + " exceeds schedule horizon " +
                          std::to_string(sys.horizon()));
  auto m = sys.perturbed(j + 1);
  return {m, j, m.max_degree()};
}

// {L / a^n L}: zero schedule over L's own matrix, with levels up to n_max.
template <class F>
LiftingSystem<F> system_from_module(const Matrix<F>& l, const Ideal<F>& a, int n_max) {
  fitting::module_length(fitting::with_ideal_blocks(l, a));
  return LiftingSystem<F>(a, l, PerturbationSchedule<F>::zero(l.ring_ptr(), l.rows(), l.cols(), std::max(0, n_max - 1)));
}

// ---------------------------------------------------------------------------
// Invariant checks

template <class F>
struct InvariantLevel {
  int n = 0;
  std::size_t mu = 0;
  std::size_t length = 0;
  bool quotient_matches = true;  // M_{n+1} / a^n M_{n+1} against M_n
  bool annihilated = true;       // a^n kills M_n
  std::string detail;
};

template <class F>
struct InvariantReport {
  bool mu_constant = true;
  bool quotients_consistent = true;
  bool annihilation = true;
  bool passed() const { return mu_constant && quotients_consistent && annihilation; }
  std::vector<InvariantLevel<F>> levels;
  std::vector<std::string> failures;
  static constexpr const char* kind = "invariant-level agreement";
};

namespace detail {

// Exact comparison of ideals that both contain m^s: equal spans at N >= s.
template <class F>
bool same_cofinite_ideal(const Ideal<F>& a, const Ideal<F>& b, int truncation) {
  return ideals::truncated_echelon(a, truncation).equals(ideals::truncated_echelon(b, truncation));
}

}  // namespace detail

// (i) mu(M_n) constant; (ii) (phi_{n+1} | A_n blocks) has the length, mu and
// Fitting ideals of phi_n; (iii) each generator of a^n annihilates M_n.
template <class F>
InvariantReport<F> verify_system_invariants(const LiftingSystem<F>& sys, int n) {
  if (n + 1 > sys.max_level())
    throw HorizonExceeded("invariant check to n=" + std::to_string(n) + " needs schedule horizon " + std::to_string(n));
  InvariantReport<F> out;
  std::vector<InvariantLevel<F>> levels(static_cast<std::size_t>(n) + 1);
  for (int k = 1; k <= n + 1; ++k) sys.power_generators(k);
  parallel_for(levels.size(), [&](std::size_t idx) {
    const int k = static_cast<int>(idx) + 1;
    auto& level = levels[idx];
    level.n = k;
    const auto phi = sys.phi(k);
    level.mu = fitting::minimal_presentation(phi).mu;
    const auto v = sys.module(k);
    level.length = v->dim();
    for (const auto& g : sys.power_generators(k))
      if (!v->annihilated_by(g)) {
        level.annihilated = false;
        level.detail += "a^" + std::to_string(k) + " generator " + ring::to_string(g, sys.ring()) + " acts nonzero; ";
      }
    if (k > n) return;
    const auto reduced = fitting::with_diagonal_blocks(sys.phi(k + 1), sys.power_generators(k));
    const auto reduced_length = fitting::module_length(reduced);
    const auto reduced_mu = fitting::minimal_presentation(reduced).mu;
    if (reduced_length.length != level.length) {
      level.quotient_matches = false;
      level.detail += "length " + std::to_string(reduced_length.length) + " vs " + std::to_string(level.length) + "; ";
    }
    if (reduced_mu != level.mu) {
      level.quotient_matches = false;
      level.detail += "mu " + std::to_string(reduced_mu) + " vs " + std::to_string(level.mu) + "; ";
    }
    // Every Fitt_i contains Fitt_0, so both sides contain m^s and equal spans
    // at N = s mean equal ideals.
    const int truncation = std::max(ideals::colength(fitting::fitting_ideal(phi, 0)).witness_degree,
                                    ideals::colength(fitting::fitting_ideal(reduced, 0)).witness_degree);
    for (std::size_t i = 0; i < phi.rows() && level.quotient_matches; ++i) {
      const auto lhs = fitting::fitting_ideal(reduced, i);
      const auto rhs = fitting::fitting_ideal(phi, i);
      if (!detail::same_cofinite_ideal(lhs, rhs, truncation)) {
        level.quotient_matches = false;
        level.detail += "Fitt_" + std::to_string(i) + " differs at N=" + std::to_string(truncation) + "; ";
      }
    }
  });
  const std::size_t mu1 = levels.front().mu;
  for (const auto& level : levels) {
    if (level.mu != mu1) {
      out.mu_constant = false;
      out.failures.push_back("(i) mu(M_" + std::to_string(level.n) + ") = " + std::to_string(level.mu) +
                             " differs from mu(M_1) = " + std::to_string(mu1));
    }
    if (!level.quotient_matches) {
      out.quotients_consistent = false;
      out.failures.push_back("(ii) M_" + std::to_string(level.n + 1) + "/a^" + std::to_string(level.n) + " vs M_" +
                             std::to_string(level.n) + ": " + level.detail);
    }
    if (!level.annihilated) {
      out.annihilation = false;
      out.failures.push_back("(iii) M_" + std::to_string(level.n) + ": " + level.detail);
    }
  }
  out.levels = std::move(levels);
  return out;
}

// ---------------------------------------------------------------------------
// Randomized certified schedules

// sigma_{j,k} entries are zero or a unit scalar times a product of j-1
// generators of a, so sigma_j has entries in a^j by construction. Only the
// rows listed in `perturbed_rows` (0-based; empty = all) are touched.
template <class F>
PerturbationSchedule<F> random_certified_schedule(const Ideal<F>& a, std::size_t rows, std::size_t cols, int horizon,
                                                  std::mt19937_64& rng, double density = 0.15,
                                                  const std::vector<std::size_t>& perturbed_rows = {}) {
  for (auto r : perturbed_rows)
    if (r >= rows) throw DimensionMismatch("perturbed row " + std::to_string(r) + " outside the presentation");
  const auto& f = a.field();
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<std::size_t> pick_gen(0, a.size() - 1);
  std::uniform_int_distribution<int> scalar(1, 5);
  std::vector<std::vector<Matrix<F>>> parts;
  for (int j = 1; j <= horizon; ++j) {
    std::vector<Matrix<F>> level;
    for (std::size_t k = 0; k < a.size(); ++k) {
      Matrix<F> m(a.ring_ptr(), rows, cols);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          if (!perturbed_rows.empty() && std::find(perturbed_rows.begin(), perturbed_rows.end(), r) == perturbed_rows.end())
            continue;
          if (!keep(rng)) continue;
          auto p = ring::Polynomial<F>::constant(f, a.ring().nvars(), f.from_int(scalar(rng) * (rng() % 2 ? 1 : -1)));
          for (int e = 0; e + 1 < j; ++e) p = ring::mul(f, p, a.generators()[pick_gen(rng)]);
          m.at(r, c) = p;
        }
      level.push_back(std::move(m));
    }
    parts.push_back(std::move(level));
  }
  return PerturbationSchedule<F>::from_parts(a, std::move(parts));
}

// ---------------------------------------------------------------------------
// The dimension-d family over k[[x_1..x_d, y_1..y_d]] with
// g_i = x_i^d + y_i^d and the 2 x 2d base matrix
//   [ 0 ... 0            x_1^{d-1} ... x_d^{d-1} ]
//   [ y_1^{d-1} ... y_d^{d-1}   f_1 ... f_d      ],  f_i = prod_{j != i} x_j.

template <class F>
ring::RingPtr<F> obstruction_family_ring(const F& field, int d, int truncation) {
  std::vector<std::string> names;
  for (int i = 1; i <= d; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= d; ++i) names.push_back("y" + std::to_string(i));
  return ring::make_ring(field, names, truncation);
}

template <class F>
Ideal<F> obstruction_family_ideal(const ring::RingPtr<F>& r, int d) {
  const auto& f = r->field();
  std::vector<Poly<F>> gens;
  for (int i = 0; i < d; ++i)
    gens.push_back(ring::add(f, ring::pow(f, r->variable(static_cast<std::size_t>(i)), d),
                             ring::pow(f, r->variable(static_cast<std::size_t>(d + i)), d)));
  return Ideal<F>(r, gens);
}

template <class F>
Matrix<F> obstruction_family_matrix(const ring::RingPtr<F>& r, int d) {
  const auto& f = r->field();
  const auto du = static_cast<std::size_t>(d);
  Matrix<F> m(r, 2, 2 * du);
  for (std::size_t i = 0; i < du; ++i) {
    m.at(0, du + i) = ring::pow(f, r->variable(i), d - 1);
    m.at(1, i) = ring::pow(f, r->variable(du + i), d - 1);
    auto prod = r->one();
    for (std::size_t j = 0; j < du; ++j)
      if (j != i) prod = ring::mul(f, prod, r->variable(j));
    m.at(1, du + i) = prod;
  }
  return m;
}

template <class F>
LiftingSystem<F> obstruction_family_system(const ring::RingPtr<F>& r, int d, PerturbationSchedule<F> schedule) {
  return LiftingSystem<F>(obstruction_family_ideal(r, d), obstruction_family_matrix(r, d), std::move(schedule));
}

}  // namespace liftsys::lifting

#endif  // LIFTSYS_LIFTING_HPP
