#ifndef LIFTSYS_IDEALS_HPP
#define LIFTSYS_IDEALS_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftsys/errors.hpp"
#include "liftsys/growth.hpp"
#include "liftsys/linalg.hpp"
#include "liftsys/parallel.hpp"
#include "liftsys/ring.hpp"
#include "liftsys/sparse_echelon.hpp"

namespace liftsys::ideals {

inline constexpr int kColengthCap = 40;
inline constexpr int kGrowthHorizon = 12;

template <class F>
using Poly = ring::Polynomial<F>;

// Two nonzero polynomials with the same support and proportional coefficients.
template <class F>
bool is_scalar_multiple(const F& field, const Poly<F>& p, const Poly<F>& q) {
  if (p.size() != q.size() || p.is_zero()) return false;
  const auto ratio = field.div(q.terms().front().coeff, p.terms().front().coeff);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p.terms()[i].monomial == q.terms()[i].monomial)) return false;
    if (!field.equal(field.mul(p.terms()[i].coeff, ratio), q.terms()[i].coeff)) return false;
  }
  return true;
}

// A finite generator list in R = k[[x]]. Zero generators are dropped on
// construction; order is otherwise preserved.
template <class F>
class Ideal {
 public:
  Ideal() = default;
  Ideal(ring::RingPtr<F> ring, std::vector<Poly<F>> generators) : ring_(std::move(ring)) {
    for (auto& g : generators) {
      if (g.nvars() != ring_->nvars()) throw ArityMismatch("ideal generator");
      if (!g.is_zero()) gens_.push_back(std::move(g));
    }
  }

  static Ideal zero(ring::RingPtr<F> ring) { return Ideal(std::move(ring), {}); }
  static Ideal unit(ring::RingPtr<F> ring) {
    auto one = ring->one();
    return Ideal(std::move(ring), {one});
  }
  static Ideal maximal(ring::RingPtr<F> ring) {
    std::vector<Poly<F>> vars;
    for (std::size_t i = 0; i < ring->nvars(); ++i) vars.push_back(ring->variable(i));
    return Ideal(std::move(ring), std::move(vars));
  }

  const ring::RingContext<F>& ring() const { return *ring_; }
  const ring::RingPtr<F>& ring_ptr() const { return ring_; }
  const F& field() const { return ring_->field(); }
  const std::vector<Poly<F>>& generators() const noexcept { return gens_; }
  std::size_t size() const noexcept { return gens_.size(); }
  bool is_zero() const noexcept { return gens_.empty(); }

  // Some generator has a nonzero constant term.
  bool is_unit() const {
    return std::any_of(gens_.begin(), gens_.end(), [](const Poly<F>& g) { return g.order() == 0; });
  }

  int max_degree() const {
    int d = 0;
    for (const auto& g : gens_) d = std::max(d, g.degree());
    return d;
  }

  // Drops generators that are scalar multiples of earlier ones.
  Ideal deduplicated() const {
    std::vector<Poly<F>> kept;
    for (const auto& g : gens_) {
      bool dup = false;
      for (const auto& k : kept)
        if (is_scalar_multiple(field(), k, g)) {
          dup = true;
          break;
        }
      if (!dup) kept.push_back(g);
    }
    return Ideal(ring_, std::move(kept));
  }

 private:
  ring::RingPtr<F> ring_;
  std::vector<Poly<F>> gens_;
};

// Image of an ideal in R_N = R/m^{N+1}, kept in sparse echelon form over the
// degree-ordered monomial basis, plus the Hilbert function of its leading
// forms: hilbert[t] = #(degree-t monomials) - #(pivots of degree t).
template <class F>
class TruncatedSpan {
 public:
  TruncatedSpan(std::shared_ptr<const ring::MonomialBasis> basis, linalg::SparseEchelon<F> echelon)
      : basis_(std::move(basis)), echelon_(std::move(echelon)) {
    hilbert_.assign(static_cast<std::size_t>(basis_->max_degree()) + 1, 0);
    for (int t = 0; t <= basis_->max_degree(); ++t) {
      std::size_t pivots = 0;
      for (auto c = basis_->degree_offset(t); c < basis_->degree_offset(t + 1); ++c) pivots += echelon_.is_pivot(c);
      hilbert_[static_cast<std::size_t>(t)] = basis_->count_in_degree(t) - pivots;
    }
  }

  int truncation() const noexcept { return basis_->max_degree(); }
  const ring::MonomialBasis& basis() const noexcept { return *basis_; }
  const linalg::SparseEchelon<F>& echelon() const noexcept { return echelon_; }
  std::size_t dim() const noexcept { return echelon_.rank(); }
  const std::vector<std::size_t>& hilbert() const noexcept { return hilbert_; }

  // Least s <= N with m^s contained in the ideal (Nakayama on the leading forms).
  std::optional<int> cofinite_witness() const {
    for (std::size_t t = 0; t < hilbert_.size(); ++t)
      if (hilbert_[t] == 0) return static_cast<int>(t);
    return std::nullopt;
  }

  // dim_k R/(I + m^n) for n <= N + 1.
  std::size_t colength_below(int n) const {
    std::size_t sum = 0;
    for (int t = 0; t < n && t < static_cast<int>(hilbert_.size()); ++t) sum += hilbert_[static_cast<std::size_t>(t)];
    return sum;
  }

  linalg::SparseVector<F> coordinates(const F& field, const Poly<F>& p) const {
    return ring::sparse_coordinates(field, p, *basis_);
  }

  bool contains(const F& field, const Poly<F>& p) const { return echelon_.contains(coordinates(field, p)); }

  bool contains(const TruncatedSpan& other) const {
    if (other.truncation() != truncation()) throw DimensionMismatch("spans at different truncations");
    for (const auto& row : other.echelon_.rows())
      if (!echelon_.contains(row)) return false;
    return true;
  }

  bool equals(const TruncatedSpan& other) const {
    return dim() == other.dim() && contains(other);
  }

  linalg::Subspace<F> to_subspace() const { return echelon_.to_subspace(); }

 private:
  std::shared_ptr<const ring::MonomialBasis> basis_;
  linalg::SparseEchelon<F> echelon_;
  std::vector<std::size_t> hilbert_;
};

// Inserts rows sorted by leading column so the echelon grows from low degree.
template <class F>
void insert_rows(linalg::SparseEchelon<F>& echelon, std::vector<linalg::SparseVector<F>> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.empty() || b.empty()) return !a.empty() && b.empty();
    return a.index.front() < b.index.front();
  });
  for (const auto& r : rows) {
    if (r.empty()) continue;
    echelon.insert(r);
  }
}

// Inserts row(basis[m]) for the first `count` basis monomials m, where row(m)
// is the coordinate vector of m * g for one fixed element g. The shift
// x_i * m is skipped once m * g was already in the span: x_i times every row
// inserted before m * g comes before x_i * m * g, because the basis order is
// multiplicative. Callers insert one element at a time.
template <class F, class MakeRow>
void insert_shifts(linalg::SparseEchelon<F>& echelon, const ring::MonomialBasis& basis, std::size_t count,
                   MakeRow&& row) {
  std::vector<char> dead(count, 0);
  for (std::size_t m = 0; m < count; ++m) {
    auto exps = basis[m].exponents();
    bool skip = false;
    for (std::size_t i = 0; i < exps.size() && !skip; ++i) {
      if (exps[i] == 0) continue;
      --exps[i];
      skip = dead[static_cast<std::size_t>(basis.index_of(ring::Monomial(exps)))] != 0;
      ++exps[i];
    }
    if (skip || !echelon.insert(row(basis[m]))) dead[m] = 1;
  }
}

// Inserts monomial * g for every generator g and every monomial with
// deg(monomial) + ord(g) <= N. Since the generators are truncated at N these
// span exactly the image of the ideal in R_N.
template <class F>
void insert_macaulay_rows(linalg::SparseEchelon<F>& echelon, const F& field, const std::vector<Poly<F>>& gens,
                          const ring::MonomialBasis& basis) {
  std::vector<const Poly<F>*> order;
  for (const auto& g : gens)
    if (!g.is_zero()) order.push_back(&g);
  std::stable_sort(order.begin(), order.end(), [](const Poly<F>* a, const Poly<F>* b) {
    if (a->order() != b->order()) return a->order() < b->order();
    return a->terms().size() < b->terms().size();
  });
  for (const auto* g : order) {
    const int room = basis.max_degree() - g->order();
    if (room < 0) continue;
    insert_shifts(echelon, basis, basis.degree_offset(room + 1), [&](const ring::Monomial& shift) {
      return ring::sparse_coordinates(field, *g, basis, shift, [](std::size_t i) { return i; });
    });
  }
}

template <class F>
TruncatedSpan<F> truncated_echelon(const Ideal<F>& ideal, int truncation) {
  auto basis = ideal.ring().basis(truncation);
  linalg::SparseEchelon<F> echelon(ideal.field(), basis->size());
  insert_macaulay_rows(echelon, ideal.field(), ideal.generators(), *basis);
  return TruncatedSpan<F>(std::move(basis), std::move(echelon));
}

// The exact image of I in R_N as a dense RREF subspace.
template <class F>
linalg::Subspace<F> truncated_span(const Ideal<F>& ideal, int truncation) {
  return truncated_echelon(ideal, truncation).to_subspace();
}

// ---------------------------------------------------------------------------
// Ideal arithmetic

template <class F>
Ideal<F> ideal_sum(const Ideal<F>& a, const Ideal<F>& b) {
  auto gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return Ideal<F>(a.ring_ptr(), std::move(gens));
}

template <class F>
Ideal<F> ideal_product(const Ideal<F>& a, const Ideal<F>& b) {
  std::vector<Poly<F>> gens;
  for (const auto& p : a.generators())
    for (const auto& q : b.generators()) gens.push_back(ring::mul(a.field(), p, q));
  return Ideal<F>(a.ring_ptr(), std::move(gens)).deduplicated();
}

// Products of all size-n multisets of generators, in lexicographic order of
// the multisets (so (x^2, y^2)^n lists x^{2n}, x^{2n-2}y^2, ..., y^{2n}).
template <class F>
Ideal<F> ideal_power(const Ideal<F>& a, int n) {
  if (n < 0) throw InputError("ideal_power exponent must be >= 0");
  if (n == 0) return Ideal<F>::unit(a.ring_ptr());
  const auto& gens = a.generators();
  const F& field = a.field();
  std::vector<Poly<F>> out;
  std::vector<Poly<F>> prefix(static_cast<std::size_t>(n) + 1);
  prefix[0] = a.ring().one();
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == static_cast<std::size_t>(n)) {
      out.push_back(prefix[depth]);
      return;
    }
    for (std::size_t k = start; k < gens.size(); ++k) {
      prefix[depth + 1] = ring::mul(field, prefix[depth], gens[k]);
      self(self, depth + 1, k);
    }
  };
  recurse(recurse, 0, 0);
  return Ideal<F>(a.ring_ptr(), std::move(out)).deduplicated();
}

// ---------------------------------------------------------------------------
// Invariants

struct ColengthResult {
  std::size_t length = 0;
  int witness_degree = 0;
  int truncation = 0;
};

inline constexpr int kWitnessStartDegree = 4;

template <class F>
ColengthResult colength(const Ideal<F>& ideal, int cap = kColengthCap) {
  // High-degree generator terms rarely matter for the witness; start low and
  // grow geometrically.
  int n = std::min(cap, std::max(2, std::min(ideal.max_degree(), kWitnessStartDegree) + 1));
  while (true) {
    const auto span = truncated_echelon(ideal, n);
    if (auto s = span.cofinite_witness()) return {span.colength_below(*s), *s, n};
    if (n >= cap) throw NotArtinianWithinCap("colength of ideal", cap);
    n = std::min(cap, n + std::max(2, n / 2));
  }
}

template <class F>
struct MinGenerators {
  std::size_t mu = 0;
  std::vector<Poly<F>> representatives;
  // Truncation of the lower bound and multiplier degree of the upper bound
  // at which the two met.
  int truncation = 0;
  int multiplier_degree = 0;
};

inline constexpr int kMinGeneratorsSteps = 10;

namespace detail {

// Exact (untruncated) rank of the generators modulo the polynomial span of
// {monomial * g : 1 <= deg monomial <= D}. Every k-linear dependency found
// this way is a genuine relation in I/mI, so the result bounds mu(I) from
// above, and it reaches mu(I) for large D because syzygies of polynomial
// generators over R are generated by polynomial syzygies.
template <class F>
std::size_t min_generators_upper(const Ideal<F>& ideal, int multiplier_degree) {
  const F& field = ideal.field();
  const auto basis = ideal.ring().basis(multiplier_degree + ideal.max_degree());
  linalg::SparseEchelon<F> echelon(field, basis->size());
  std::vector<linalg::SparseVector<F>> rows;
  const auto first = basis->degree_offset(1);
  const auto last = basis->degree_offset(multiplier_degree + 1);
  for (const auto& g : ideal.generators())
    for (std::size_t m = first; m < last; ++m)
      rows.push_back(ring::sparse_coordinates(field, g, *basis, (*basis)[m], [](std::size_t i) { return i; }));
  insert_rows(echelon, std::move(rows));
  std::size_t rank = 0;
  for (const auto& g : ideal.generators()) rank += echelon.insert(ring::sparse_coordinates(field, g, *basis));
  return rank;
}

}  // namespace detail

// mu(I) = dim I/mI. The truncated quotient dim span(I,N) - dim span(mI,N) is a
// lower bound that increases with N; detail::min_generators_upper is an upper
// bound that decreases with D. Both are stepped until they meet, which makes
// the count exact. Representatives are picked greedily in generator order.
template <class F>
MinGenerators<F> min_generators(const Ideal<F>& ideal) {
  MinGenerators<F> out;
  if (ideal.is_zero()) return out;
  const auto m_ideal = ideal_product(Ideal<F>::maximal(ideal.ring_ptr()), ideal);
  const int start = std::max(1, ideal.max_degree());
  std::optional<std::size_t> upper;
  for (int step = 0; step <= kMinGeneratorsSteps; ++step) {
    const int n = start + step;
    const auto span_i = truncated_echelon(ideal, n);
    const auto span_mi = truncated_echelon(m_ideal, n);
    const std::size_t lower = span_i.dim() - span_mi.dim();
    if (lower < ideal.size()) {
      upper = detail::min_generators_upper(ideal, step + 1);
      if (*upper < lower) throw AssertionFailure("minimal generator bounds crossed");
    }
    if (lower == ideal.size() || (upper && *upper == lower)) {
      out.mu = lower;
      out.truncation = n;
      out.multiplier_degree = lower == ideal.size() ? 0 : step + 1;
      auto quotient = span_mi.echelon();
      for (const auto& g : ideal.generators()) {
        if (out.representatives.size() == lower) break;
        if (quotient.insert(span_mi.coordinates(ideal.field(), ring::truncate(ideal.field(), g, n))))
          out.representatives.push_back(g);
      }
      return out;
    }
  }
  throw CapExceeded("min_generators_stabilization",
                    "bounds on mu did not meet by truncation " + std::to_string(start + kMinGeneratorsSteps));
}

enum class MembershipStatus { NotMember, MemberUpTo, MemberExact };

inline const char* to_string(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::NotMember: return "NotMember";
    case MembershipStatus::MemberUpTo: return "MemberUpTo";
    case MembershipStatus::MemberExact: return "MemberExact";
  }
  return "?";
}

// NotMember / MemberUpTo carry the truncation N; MemberExact carries the
// degree s with m^s contained in I.
struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::MemberUpTo;
  int witness_degree = 0;
};

template <class F>
MembershipVerdict membership(const Poly<F>& g, const Ideal<F>& ideal, int truncation) {
  const auto span = truncated_echelon(ideal, truncation);
  if (!span.contains(ideal.field(), ring::truncate(ideal.field(), g, truncation)))
    return {MembershipStatus::NotMember, truncation};
  if (auto s = span.cofinite_witness()) return {MembershipStatus::MemberExact, *s};
  return {MembershipStatus::MemberUpTo, truncation};
}

// Proves g in I by finding an exact polynomial identity g = sum c_k g_k with
// deg c_k <= deg g - min ord(g_k) + extra. Every product is computed without
// truncation, so success is a proof; failure proves nothing.
template <class F>
bool has_polynomial_representation(const Poly<F>& g, const Ideal<F>& ideal, int extra_degree = 0) {
  if (g.is_zero()) return true;
  if (ideal.is_zero()) return false;
  int min_order = g.degree();
  for (const auto& k : ideal.generators()) min_order = std::min(min_order, k.order());
  const int coeff_degree = std::max(0, g.degree() - min_order) + extra_degree;
  const int top = coeff_degree + std::max(ideal.max_degree(), g.degree());
  auto basis = ideal.ring().basis(top);
  linalg::SparseEchelon<F> echelon(ideal.field(), basis->size());
  std::vector<linalg::SparseVector<F>> rows;
  const auto count = basis->degree_offset(coeff_degree + 1);
  for (const auto& k : ideal.generators())
    for (std::size_t m = 0; m < count; ++m)
      rows.push_back(ring::sparse_coordinates(ideal.field(), k, *basis, (*basis)[m], [](std::size_t i) { return i; }));
  insert_rows(echelon, std::move(rows));
  return echelon.contains(ring::sparse_coordinates(ideal.field(), g, *basis));
}

struct HilbertSamuelResult {
  int dim = 0;
  growth::GrowthReport report;
  int truncation = 0;
};

// n -> l(R/(I + m^n)) for n = 1..horizon from one echelon at N = horizon - 1.
// The sequence is eventually polynomial, so the finite-difference degree is
// reported when it exists.
template <class F>
HilbertSamuelResult hs_dimension(const Ideal<F>& ideal, int horizon = kGrowthHorizon,
                                 int window = growth::kDefaultWindow) {
  if (horizon < 2) throw InputError("hs_dimension horizon must be >= 2");
  const auto span = truncated_echelon(ideal, horizon - 1);
  growth::Sequence seq;
  for (int n = 1; n <= horizon; ++n) seq.push_back(static_cast<std::int64_t>(span.colength_below(n)));
  HilbertSamuelResult out;
  out.report = growth::growth_degree(seq, window);
  out.dim = out.report.fd_degree.value_or(out.report.degree);
  out.truncation = horizon - 1;
  return out;
}

struct SpreadResult {
  int spread = 0;
  growth::GrowthReport report;
};

template <class F>
SpreadResult analytic_spread(const Ideal<F>& a, int horizon = kGrowthHorizon, int window = growth::kDefaultWindow) {
  growth::Sequence mu(static_cast<std::size_t>(horizon), 0);
  parallel_for(static_cast<std::size_t>(horizon), [&](std::size_t i) {
    mu[i] = static_cast<std::int64_t>(min_generators(ideal_power(a, static_cast<int>(i) + 1)).mu);
  });
  SpreadResult out;
  out.report = growth::growth_degree(mu, window);
  out.spread = out.report.fd_degree.value_or(out.report.degree) + 1;
  return out;
}

struct EquimultipleResult {
  bool is_equimultiple = false;
  int height = 0;
  int spread = 0;
  HilbertSamuelResult quotient_dim;
  SpreadResult spread_report;
};

template <class F>
EquimultipleResult equimultiple_check(const Ideal<F>& a, int horizon = kGrowthHorizon) {
  EquimultipleResult out;
  out.quotient_dim = hs_dimension(a, horizon);
  out.spread_report = analytic_spread(a, horizon);
  out.height = static_cast<int>(a.ring().nvars()) - out.quotient_dim.dim;
  out.spread = out.spread_report.spread;
  out.is_equimultiple = out.height == out.spread;
  return out;
}

enum class ArtinReesStatus { HoldsUpTo, FailsWithWitness, ExactHolds };

inline const char* to_string(ArtinReesStatus s) {
  switch (s) {
    case ArtinReesStatus::HoldsUpTo: return "HoldsUpTo";
    case ArtinReesStatus::FailsWithWitness: return "FailsWithWitness";
    case ArtinReesStatus::ExactHolds: return "ExactHolds";
  }
  return "?";
}

template <class F>
struct ArtinReesReport {
  int n = 0;
  int truncation = 0;
  ArtinReesStatus status = ArtinReesStatus::HoldsUpTo;
  std::optional<Poly<F>> witness;
  // Set when the truncated spans disagree but no gap vector could be lifted
  // to a certified element of b and a^n.
  bool uncertified_gap = false;
};

inline constexpr std::size_t kArtinReesLiftAttempts = 16;

// Checks b ∩ a^n ⊆ m a^n modulo m^{N+1}.
template <class F>
ArtinReesReport<F> artin_rees_condition(const Ideal<F>& b, const Ideal<F>& a, int n, int truncation) {
  const F& field = a.field();
  const auto an = ideal_power(a, n);
  const auto m_an = ideal_product(Ideal<F>::maximal(a.ring_ptr()), an);
  const auto span_b = truncated_span(b, truncation);
  const auto span_an = truncated_span(an, truncation);
  const auto s1 = linalg::subspace_intersect(field, span_b, span_an);
  const auto s2_echelon = truncated_echelon(m_an, truncation);
  const auto s2 = s2_echelon.to_subspace();

  ArtinReesReport<F> out;
  out.n = n;
  out.truncation = truncation;
  if (s2.contains(field, s1)) {
    const auto s = s2_echelon.cofinite_witness();
    out.status = s && *s <= truncation + 1 ? ArtinReesStatus::ExactHolds : ArtinReesStatus::HoldsUpTo;
    return out;
  }
  std::size_t attempts = 0;
  for (std::size_t i = 0; i < s1.dim() && attempts < kArtinReesLiftAttempts; ++i) {
    const auto v = s1.basis_vector(i);
    if (s2.contains(field, v)) continue;
    ++attempts;
    auto p = ring::from_vector(v, a.ring(), truncation);
    if (has_polynomial_representation(p, b) && has_polynomial_representation(p, an)) {
      out.status = ArtinReesStatus::FailsWithWitness;
      out.witness = std::move(p);
      return out;
    }
  }
  out.status = ArtinReesStatus::HoldsUpTo;
  out.uncertified_gap = true;
  return out;
}

}  // namespace liftsys::ideals

#endif  // LIFTSYS_IDEALS_HPP
