#ifndef LIFTSYS_FITTING_HPP
#define LIFTSYS_FITTING_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftsys/errors.hpp"
#include "liftsys/ideals.hpp"
#include "liftsys/linalg.hpp"
#include "liftsys/parallel.hpp"
#include "liftsys/ring.hpp"
#include "liftsys/sparse_echelon.hpp"

namespace liftsys::fitting {

using ideals::Ideal;
using ideals::Poly;

inline constexpr std::size_t kMinorCountCap = 100000;
inline constexpr int kModuleWitnessCap = 40;

// A rows x cols matrix of polynomials; the module is the cokernel
// R^cols -> R^rows, so columns are relations.
template <class F>
class PresentedModule {
 public:
  PresentedModule() = default;
  PresentedModule(ring::RingPtr<F> ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), entries_(rows * cols, Poly<F>(ring_->nvars())) {}

  static PresentedModule from_rows(ring::RingPtr<F> ring, const std::vector<std::vector<Poly<F>>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    PresentedModule m(std::move(ring), rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("presentation rows have different lengths");
      for (std::size_t j = 0; j < cols; ++j) {
        if (rows[i][j].nvars() != m.ring_->nvars()) throw ArityMismatch("presentation entry");
        m.at(i, j) = rows[i][j];
      }
    }
    return m;
  }

  // R^mu with no relations.
  static PresentedModule free(ring::RingPtr<F> ring, std::size_t mu) { return PresentedModule(std::move(ring), mu, 0); }

  // R/I presented by the generator row of I.
  static PresentedModule cyclic(const Ideal<F>& ideal) {
    PresentedModule m(ideal.ring_ptr(), 1, ideal.size());
    for (std::size_t j = 0; j < ideal.size(); ++j) m.at(0, j) = ideal.generators()[j];
    return m;
  }

  const ring::RingContext<F>& ring() const { return *ring_; }
  const ring::RingPtr<F>& ring_ptr() const { return ring_; }
  const F& field() const { return ring_->field(); }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Poly<F>& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Poly<F>& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::vector<Poly<F>> column(std::size_t j) const {
    std::vector<Poly<F>> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back(at(i, j));
    return c;
  }

  void append_column(const std::vector<Poly<F>>& c) {
    if (c.size() != rows_) throw DimensionMismatch("appended column length");
    std::vector<Poly<F>> next;
    next.reserve(rows_ * (cols_ + 1));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) next.push_back(std::move(at(i, j)));
      next.push_back(c[i]);
    }
    entries_ = std::move(next);
    ++cols_;
  }

  int max_degree() const {
    int d = 0;
    for (const auto& e : entries_) d = std::max(d, e.degree());
    return d;
  }

  bool equals(const PresentedModule& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (std::size_t k = 0; k < entries_.size(); ++k)
      if (!entries_[k].equals(field(), other.entries_[k])) return false;
    return true;
  }

 private:
  ring::RingPtr<F> ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Poly<F>> entries_;
};

// (m | copies of the generator row placed on the diagonal, one per row of m).
template <class F>
PresentedModule<F> with_diagonal_blocks(const PresentedModule<F>& m, const std::vector<Poly<F>>& row) {
  PresentedModule<F> out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& g : row) {
      std::vector<Poly<F>> c(m.rows(), m.ring().zero());
      c[i] = g;
      out.append_column(c);
    }
  return out;
}

// (m | a_1 I | ... | a_k I), the presentation of M / aM.
template <class F>
PresentedModule<F> with_ideal_blocks(const PresentedModule<F>& m, const Ideal<F>& a) {
  PresentedModule<F> out = m;
  for (const auto& g : a.generators())
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::vector<Poly<F>> c(m.rows(), m.ring().zero());
      c[i] = g;
      out.append_column(c);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Truncated submodules of a free module R^mu.

// Column layout of F_N = (R/m^{N+1})^mu: degree first, then component, then
// the monomial order inside the degree. Sorting by degree first keeps the
// pivot-count Hilbert function argument of the ideal case valid.
class ModuleLayout {
 public:
  ModuleLayout(std::shared_ptr<const ring::MonomialBasis> basis, std::size_t mu) : basis_(std::move(basis)), mu_(mu) {}

  const ring::MonomialBasis& basis() const noexcept { return *basis_; }
  std::size_t mu() const noexcept { return mu_; }
  std::size_t size() const noexcept { return basis_->size() * mu_; }
  int truncation() const noexcept { return basis_->max_degree(); }

  std::size_t column(std::size_t component, std::size_t monomial) const {
    const int d = (*basis_)[monomial].degree();
    const auto off = basis_->degree_offset(d);
    return off * mu_ + component * basis_->count_in_degree(d) + (monomial - off);
  }

  // (component, monomial index) of a column.
  std::pair<std::size_t, std::size_t> locate(std::size_t col) const {
    int lo = 0, hi = basis_->max_degree();
    while (lo < hi) {
      const int mid = (lo + hi + 1) / 2;
      if (basis_->degree_offset(mid) * mu_ <= col) lo = mid; else hi = mid - 1;
    }
    const auto off = basis_->degree_offset(lo);
    const auto count = basis_->count_in_degree(lo);
    const auto rel = col - off * mu_;
    return {rel / count, off + rel % count};
  }

  int degree_of(std::size_t col) const { return (*basis_)[locate(col).second].degree(); }

  std::size_t degree_begin(int d) const { return basis_->degree_offset(d) * mu_; }
  std::size_t degree_end(int d) const { return basis_->degree_offset(d + 1) * mu_; }

 private:
  std::shared_ptr<const ring::MonomialBasis> basis_;
  std::size_t mu_;
};

// Coordinates of shift * (v_0, ..., v_{mu-1}) in F_N; terms of degree > N drop.
template <class F>
linalg::SparseVector<F> module_coordinates(const F& field, const std::vector<Poly<F>>& v, const ModuleLayout& layout,
                                           const ring::Monomial& shift) {
  linalg::SparseVector<F> out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto part = ring::sparse_coordinates(field, v[j], layout.basis(), shift,
                                               [&](std::size_t i) { return layout.column(j, i); });
    out.index.insert(out.index.end(), part.index.begin(), part.index.end());
    out.value.insert(out.value.end(), part.value.begin(), part.value.end());
  }
  linalg::canonicalize(field, out);
  return out;
}

template <class F>
std::vector<Poly<F>> module_element(const ring::RingContext<F>& r, const linalg::SparseVector<F>& v,
                                    const ModuleLayout& layout) {
  std::vector<std::vector<typename Poly<F>::Term>> terms(layout.mu());
  for (std::size_t k = 0; k < v.index.size(); ++k) {
    const auto [component, monomial] = layout.locate(v.index[k]);
    terms[component].push_back({layout.basis()[monomial], v.value[k]});
  }
  std::vector<Poly<F>> out;
  for (auto& t : terms) out.push_back(Poly<F>::from_terms(r.field(), r.nvars(), std::move(t)));
  return out;
}

// Image of the relation submodule U in F_N, with the Hilbert function
// hilbert[t] = mu * #(degree-t monomials) - #(pivots of degree t) of the
// leading forms of F/U.
template <class F>
class ModuleSpan {
 public:
  ModuleSpan(ModuleLayout layout, linalg::SparseEchelon<F> echelon)
      : layout_(std::move(layout)), echelon_(std::move(echelon)) {
    const int n = layout_.truncation();
    hilbert_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int t = 0; t <= n; ++t) {
      std::size_t pivots = 0;
      for (auto c = layout_.degree_begin(t); c < layout_.degree_end(t); ++c) pivots += echelon_.is_pivot(c);
      hilbert_[static_cast<std::size_t>(t)] = layout_.degree_end(t) - layout_.degree_begin(t) - pivots;
    }
  }

  const ModuleLayout& layout() const noexcept { return layout_; }
  const linalg::SparseEchelon<F>& echelon() const noexcept { return echelon_; }
  int truncation() const noexcept { return layout_.truncation(); }
  const std::vector<std::size_t>& hilbert() const noexcept { return hilbert_; }

  // Least s <= N with m^s R^mu contained in U.
  std::optional<int> witness() const {
    for (std::size_t t = 0; t < hilbert_.size(); ++t)
      if (hilbert_[t] == 0) return static_cast<int>(t);
    return std::nullopt;
  }

  std::size_t quotient_dim_below(int n) const {
    std::size_t sum = 0;
    for (int t = 0; t < n && t < static_cast<int>(hilbert_.size()); ++t) sum += hilbert_[static_cast<std::size_t>(t)];
    return sum;
  }

 private:
  ModuleLayout layout_;
  linalg::SparseEchelon<F> echelon_;
  std::vector<std::size_t> hilbert_;
};

template <class F>
ModuleSpan<F> module_echelon(const PresentedModule<F>& m, int truncation) {
  ModuleLayout layout(m.ring().basis(truncation), m.rows());
  const auto& basis = layout.basis();
  const F& field = m.field();
  struct Column {
    std::vector<Poly<F>> entries;
    int order = -1;
    std::size_t terms = 0;
  };
  std::vector<Column> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Column c{m.column(j)};
    for (const auto& e : c.entries) {
      if (e.is_zero()) continue;
      c.order = c.order < 0 ? e.order() : std::min(c.order, e.order());
      c.terms += e.terms().size();
    }
    if (c.order >= 0 && c.order <= truncation) cols.push_back(std::move(c));
  }
  std::stable_sort(cols.begin(), cols.end(), [](const Column& a, const Column& b) {
    return a.order != b.order ? a.order < b.order : a.terms < b.terms;
  });
  linalg::SparseEchelon<F> echelon(field, layout.size());
  for (const auto& c : cols)
    ideals::insert_shifts(echelon, basis, basis.degree_offset(truncation - c.order + 1),
                          [&](const ring::Monomial& shift) { return module_coordinates(field, c.entries, layout, shift); });
  return ModuleSpan<F>(std::move(layout), std::move(echelon));
}

// ---------------------------------------------------------------------------
// Fitting ideals

namespace detail {

using Mask = std::uint64_t;

struct MinorKey {
  Mask rows;
  Mask cols;
  bool operator<(const MinorKey& o) const { return rows != o.rows ? rows < o.rows : cols < o.cols; }
};

inline std::vector<Mask> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<Mask> out;
  if (k > n) return out;
  if (k == 0) return {0};
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    Mask m = 0;
    for (auto i : idx) m |= Mask{1} << i;
    out.push_back(m);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

// Monic scaling: leading coefficient one.
template <class F>
Poly<F> monic(const F& field, const Poly<F>& p) {
  if (p.is_zero()) return p;
  return ring::scale(field, p, field.inv(p.terms().front().coeff));
}

}  // namespace detail

// All r x r minors, expanded along the first chosen row with memoization of
// every smaller minor. Each size level is computed in parallel from the
// previous one, so the result does not depend on the thread count.
template <class F>
std::vector<Poly<F>> minors(const PresentedModule<F>& m, std::size_t r, std::size_t cap = kMinorCountCap) {
  using detail::Mask;
  using detail::MinorKey;
  if (r == 0) return {m.ring().one()};
  if (r > m.rows() || r > m.cols()) return {};
  if (m.rows() > 64 || m.cols() > 64) throw CapExceeded("minor_size", "matrices above 64 rows or columns");
  const std::size_t count = ring::binomial(m.rows(), r) * ring::binomial(m.cols(), r);
  if (count > cap)
    throw CapExceeded("minor_count", std::to_string(count) + " minors of size " + std::to_string(r) + " exceed " +
                                         std::to_string(cap));
  const F& field = m.field();
  // Expanding along the lowest row of R leaves the top |R|-1 rows: level k
  // needs row sets that are the k largest-index rows of some r-subset.
  std::map<MinorKey, Poly<F>> memo;
  const auto row_sets_r = detail::subsets_of_size(m.rows(), r);
  for (std::size_t k = 1; k <= r; ++k) {
    std::vector<Mask> row_sets;
    for (auto rs : row_sets_r) {
      Mask suffix = rs;
      for (std::size_t drop = 0; drop < r - k; ++drop) suffix &= suffix - 1;
      row_sets.push_back(suffix);
    }
    std::sort(row_sets.begin(), row_sets.end());
    row_sets.erase(std::unique(row_sets.begin(), row_sets.end()), row_sets.end());
    const auto col_sets = detail::subsets_of_size(m.cols(), k);
    std::vector<MinorKey> keys;
    for (auto rs : row_sets)
      for (auto cs : col_sets) keys.push_back({rs, cs});
    std::vector<Poly<F>> values(keys.size());
    parallel_for(keys.size(), [&](std::size_t idx) {
      const auto [rs, cs] = keys[idx];
      const auto top = static_cast<std::size_t>(std::countr_zero(rs));
      const Mask rest_rows = rs & (rs - 1);
      Poly<F> acc(m.ring().nvars());
      std::size_t pos = 0;
      for (Mask c = cs; c; c &= c - 1, ++pos) {
        const auto col = static_cast<std::size_t>(std::countr_zero(c));
        const auto& entry = m.at(top, col);
        if (entry.is_zero()) continue;
        Poly<F> term = entry;
        if (k > 1) {
          const auto& sub = memo.at(MinorKey{rest_rows, cs & ~(Mask{1} << col)});
          if (sub.is_zero()) continue;
          term = ring::mul(field, entry, sub);
        }
        acc = (pos % 2 == 0) ? ring::add(field, acc, term) : ring::sub(field, acc, term);
      }
      values[idx] = std::move(acc);
    });
    for (std::size_t idx = 0; idx < keys.size(); ++idx) memo.emplace(keys[idx], std::move(values[idx]));
  }
  std::vector<Poly<F>> out;
  for (auto rs : row_sets_r)
    for (auto cs : detail::subsets_of_size(m.cols(), r)) out.push_back(memo.at(MinorKey{rs, cs}));
  return out;
}

// Fitt_i(M) = I_{mu0 - i}(matrix): unit ideal when mu0 - i <= 0, zero ideal
// when mu0 - i exceeds the column count. Generators are made monic and
// deduplicated.
template <class F>
Ideal<F> fitting_ideal(const PresentedModule<F>& m, std::size_t i, std::size_t cap = kMinorCountCap) {
  if (i >= m.rows()) return Ideal<F>::unit(m.ring_ptr());
  const std::size_t r = m.rows() - i;
  std::vector<Poly<F>> gens;
  for (auto& p : minors(m, r, cap))
    if (!p.is_zero()) gens.push_back(detail::monic(m.field(), p));
  return Ideal<F>(m.ring_ptr(), std::move(gens)).deduplicated();
}

// ---------------------------------------------------------------------------
// Minimal presentations

template <class F>
struct MinimalPresentation {
  PresentedModule<F> module;
  std::size_t mu = 0;
};

// Repeatedly pivots on the first entry (column-major) with a nonzero
// constant term u at (i, j): every other column l becomes
// u * col_l - m(i,l) * col_j, after which row i and column j are dropped.
// No inverse of u is needed, so entries stay polynomial. Zero columns are
// removed at the end.
template <class F>
MinimalPresentation<F> minimal_presentation(const PresentedModule<F>& input) {
  const F& field = input.field();
  PresentedModule<F> m = input;
  while (true) {
    std::optional<std::pair<std::size_t, std::size_t>> pivot;
    for (std::size_t j = 0; j < m.cols() && !pivot; ++j)
      for (std::size_t i = 0; i < m.rows() && !pivot; ++i)
        if (!m.at(i, j).is_zero() && m.at(i, j).order() == 0) pivot = {i, j};
    if (!pivot) break;
    const auto [pi, pj] = *pivot;
    const Poly<F> u = m.at(pi, pj);
    PresentedModule<F> next(m.ring_ptr(), m.rows() - 1, m.cols() - 1);
    for (std::size_t i = 0, ni = 0; i < m.rows(); ++i) {
      if (i == pi) continue;
      for (std::size_t l = 0, nl = 0; l < m.cols(); ++l) {
        if (l == pj) continue;
        next.at(ni, nl) = ring::sub(field, ring::mul(field, u, m.at(i, l)), ring::mul(field, m.at(i, pj), m.at(pi, l)));
        ++nl;
      }
      ++ni;
    }
    m = std::move(next);
  }
  PresentedModule<F> trimmed(m.ring_ptr(), m.rows(), 0);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto c = m.column(j);
    if (std::any_of(c.begin(), c.end(), [](const Poly<F>& p) { return !p.is_zero(); })) trimmed.append_column(c);
  }
  return {trimmed, trimmed.rows()};
}

// ---------------------------------------------------------------------------
// Lengths and vector-space realizations

struct LengthResult {
  std::size_t length = 0;
  int witness_degree = 0;
  int truncation = 0;
};

namespace detail {

template <class F>
ModuleSpan<F> witnessed_span(const PresentedModule<F>& m, int cap) {
  if (m.rows() == 0) return module_echelon(m, 1);
  int n = std::min(cap, std::max(2, std::min(m.max_degree(), ideals::kWitnessStartDegree) + 1));
  std::optional<int> bound;
  while (true) {
    auto span = module_echelon(m, n);
    if (span.witness()) return span;
    if (!bound) {
      // Fitt_0 annihilates M, so its colength witness bounds the module's.
      try {
        bound = ideals::colength(fitting_ideal(m, 0), cap).witness_degree;
      } catch (const NotArtinianWithinCap&) {
        throw NotFiniteLength("Fitt_0 of the module is not m-primary within the witness cap " + std::to_string(cap));
      }
    }
    if (n >= *bound) throw AssertionFailure("module witness exceeds the Fitt_0 colength witness");
    n = std::min(*bound, n + std::max(2, n / 2));
  }
}

}  // namespace detail

template <class F>
LengthResult module_length(const PresentedModule<F>& m, int cap = kModuleWitnessCap) {
  if (m.rows() == 0) return {0, 0, 0};
  const auto span = detail::witnessed_span(m, cap);
  const int s = *span.witness();
  return {span.quotient_dim_below(s), s, span.truncation()};
}

// coker(matrix) as a finite-dimensional vector space: the standard basis is
// the set of non-pivot columns of the witnessed span, and the quotient map
// is the echelon normal form.
template <class F>
class ModuleVectorSpace {
 public:
  using Element = typename F::Element;

  explicit ModuleVectorSpace(const PresentedModule<F>& m, int cap = kModuleWitnessCap)
      : ring_(m.ring_ptr()),
        span_(std::make_shared<ModuleSpan<F>>(m.rows() == 0 ? module_echelon(m, 1) : detail::witnessed_span(m, cap))) {
    witness_ = m.rows() == 0 ? 0 : *span_->witness();
    const auto& ech = span_->echelon();
    position_.assign(ech.ambient_dim(), -1);
    if (m.rows() == 0) return;
    for (std::size_t c = 0; c < ech.ambient_dim(); ++c) {
      if (ech.is_pivot(c)) continue;
      position_[c] = static_cast<std::int64_t>(standard_.size());
      standard_.push_back(c);
    }
  }

  const ring::RingContext<F>& ring() const { return *ring_; }
  const ring::RingPtr<F>& ring_ptr() const { return ring_; }
  const F& field() const { return ring_->field(); }
  std::size_t dim() const noexcept { return standard_.size(); }
  std::size_t mu() const noexcept { return span_->layout().mu(); }
  int witness_degree() const noexcept { return witness_; }
  int truncation() const noexcept { return span_->truncation(); }
  const ModuleLayout& layout() const noexcept { return span_->layout(); }

  // Standard basis element k as (component, monomial).
  std::pair<std::size_t, ring::Monomial> standard_element(std::size_t k) const {
    const auto [component, monomial] = layout().locate(standard_[k]);
    return {component, layout().basis()[monomial]};
  }

  // Coordinates of shift * v (v in R^mu) in the standard basis.
  linalg::Vector<F> project(const std::vector<Poly<F>>& v, const ring::Monomial* shift = nullptr) const {
    if (v.size() != mu()) throw DimensionMismatch("module element has wrong number of components");
    const ring::Monomial one(ring_->nvars());
    const auto nf = span_->echelon().normal_form(module_coordinates(field(), v, layout(), shift ? *shift : one));
    linalg::Vector<F> out(dim(), field().zero());
    for (std::size_t k = 0; k < nf.index.size(); ++k) {
      const auto pos = position_[nf.index[k]];
      if (pos < 0) throw AssertionFailure("normal form left a pivot column");
      out[static_cast<std::size_t>(pos)] = nf.value[k];
    }
    return out;
  }

  // The element of R^mu represented by a standard coordinate vector.
  std::vector<Poly<F>> lift(const linalg::Vector<F>& coords) const {
    linalg::SparseVector<F> v;
    for (std::size_t k = 0; k < coords.size(); ++k) {
      if (field().is_zero(coords[k])) continue;
      v.index.push_back(static_cast<std::uint32_t>(standard_[k]));
      v.value.push_back(coords[k]);
    }
    return module_element(*ring_, v, layout());
  }

  // Generator e_j of R^mu.
  std::vector<Poly<F>> generator(std::size_t j) const {
    std::vector<Poly<F>> e(mu(), ring_->zero());
    e[j] = ring_->one();
    return e;
  }

  // Matrix of multiplication by p; column k is p times standard element k.
  linalg::DenseMatrix<F> action(const Poly<F>& p) const {
    linalg::DenseMatrix<F> a(field(), dim(), dim());
    for (std::size_t k = 0; k < dim(); ++k) {
      const auto [component, monomial] = standard_element(k);
      std::vector<Poly<F>> v(mu(), ring_->zero());
      v[component] = p;
      const auto image = project(v, &monomial);
      for (std::size_t r = 0; r < dim(); ++r) a(r, k) = image[r];
    }
    return a;
  }

  linalg::DenseMatrix<F> multiplication(std::size_t variable) const { return action(ring_->variable(variable)); }

  // p kills every generator e_j, hence the whole module.
  bool annihilated_by(const Poly<F>& p) const {
    for (std::size_t j = 0; j < mu(); ++j) {
      auto e = generator(j);
      e[j] = p;
      if (!linalg::is_zero_vector(field(), project(e))) return false;
    }
    return true;
  }

 private:
  ring::RingPtr<F> ring_;
  std::shared_ptr<ModuleSpan<F>> span_;
  int witness_ = 0;
  std::vector<std::size_t> standard_;
  std::vector<std::int64_t> position_;
};

template <class F>
ModuleVectorSpace<F> realize_vector_space(const PresentedModule<F>& m, int cap = kModuleWitnessCap) {
  return ModuleVectorSpace<F>(m, cap);
}

// ann(M) for finite-length M: the kernel of R/m^s -> M^mu, f -> (f e_j)_j,
// plus all monomials of degree s (which annihilate M by the witness).
template <class F>
Ideal<F> annihilator(const ModuleVectorSpace<F>& v) {
  const auto& r = v.ring();
  const int s = v.witness_degree();
  std::vector<Poly<F>> gens;
  if (s == 0) return Ideal<F>::unit(v.ring_ptr());
  const auto basis = r.basis(s);
  const std::size_t low = basis->degree_offset(s);
  linalg::DenseMatrix<F> images(v.field(), 0, v.mu() * v.dim());
  for (std::size_t k = 0; k < low; ++k) {
    linalg::Vector<F> row;
    for (std::size_t j = 0; j < v.mu(); ++j) {
      auto e = v.generator(j);
      const auto img = v.project(e, &(*basis)[k]);
      row.insert(row.end(), img.begin(), img.end());
    }
    images.append_row(row);
  }
  if (v.dim() > 0) {
    const auto kernel = linalg::kernel_basis(v.field(), images.transposed(v.field()));
    for (std::size_t i = 0; i < kernel.dim(); ++i) {
      std::vector<typename Poly<F>::Term> terms;
      const auto vec = kernel.basis_vector(i);
      for (std::size_t k = 0; k < low; ++k)
        if (!v.field().is_zero(vec[k])) terms.push_back({(*basis)[k], vec[k]});
      gens.push_back(Poly<F>::from_terms(v.field(), r.nvars(), std::move(terms)));
    }
  }
  for (std::size_t k = low; k < basis->size(); ++k) gens.push_back(Poly<F>::monomial(v.field(), (*basis)[k], v.field().one()));
  return Ideal<F>(v.ring_ptr(), std::move(gens));
}


// ---------------------------------------------------------------------------
// Base change along R -> R/a

template <class F>
struct BaseChangeFitt {
  Ideal<F> lhs;      // Fitt_0(L) + a^mu0
  Ideal<F> mid;      // Fitt_0 of (matrix | a-blocks), i.e. of L / aL
  Ideal<F> rhs;      // Fitt_0(L) + a
  Ideal<F> formula;  // sum over j <= mu0 of a^j Fitt_j(L)
  int truncation = 0;
  bool formula_matches = false;
  bool lower_contained = false;
  bool upper_contained = false;
  bool identity_check = false;
};

template <class F>
BaseChangeFitt<F> base_change_fitt(const PresentedModule<F>& l, const Ideal<F>& a, int truncation) {
  const std::size_t mu0 = l.rows();
  const auto fitt0 = fitting_ideal(l, 0);
  auto formula = Ideal<F>::zero(l.ring_ptr());
  for (std::size_t j = 0; j <= mu0; ++j)
    formula = ideals::ideal_sum(formula, ideals::ideal_product(ideals::ideal_power(a, static_cast<int>(j)), fitting_ideal(l, j)));
  BaseChangeFitt<F> out{ideals::ideal_sum(fitt0, ideals::ideal_power(a, static_cast<int>(mu0))),
                        fitting_ideal(with_ideal_blocks(l, a), 0),
                        ideals::ideal_sum(fitt0, a),
                        formula.deduplicated(),
                        truncation};
  const auto lhs = ideals::truncated_echelon(out.lhs, truncation);
  const auto mid = ideals::truncated_echelon(out.mid, truncation);
  const auto rhs = ideals::truncated_echelon(out.rhs, truncation);
  out.formula_matches = mid.equals(ideals::truncated_echelon(out.formula, truncation));
  out.lower_contained = mid.contains(lhs);
  out.upper_contained = rhs.contains(mid);
  out.identity_check = out.formula_matches && out.lower_contained && out.upper_contained;
  return out;
}

}  // namespace liftsys::fitting

#endif  // LIFTSYS_FITTING_HPP
