#ifndef LIFTSYS_SPARSE_ECHELON_HPP
#define LIFTSYS_SPARSE_ECHELON_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "liftsys/errors.hpp"
#include "liftsys/linalg.hpp"

namespace liftsys::linalg {

// Sorted-index sparse vector.
template <class F>
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<typename F::Element> value;

  bool empty() const noexcept { return index.empty(); }
  std::size_t size() const noexcept { return index.size(); }

  static SparseVector from_dense(const F& field, const Vector<F>& v) {
    SparseVector s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (field.is_zero(v[i])) continue;
      s.index.push_back(static_cast<std::uint32_t>(i));
      s.value.push_back(v[i]);
    }
    return s;
  }

  Vector<F> to_dense(const F& field, std::size_t n) const {
    Vector<F> v(n, field.zero());
    for (std::size_t i = 0; i < index.size(); ++i) v[index[i]] = value[i];
    return v;
  }
};

// Sorts entries by index and merges duplicates.
template <class F>
void canonicalize(const F& field, SparseVector<F>& v) {
  std::vector<std::size_t> order(v.index.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v.index[a] < v.index[b]; });
  SparseVector<F> out;
  for (auto i : order) {
    if (!out.index.empty() && out.index.back() == v.index[i]) {
      out.value.back() = field.add(out.value.back(), v.value[i]);
    } else {
      out.index.push_back(v.index[i]);
      out.value.push_back(v.value[i]);
    }
  }
  SparseVector<F> cleaned;
  for (std::size_t i = 0; i < out.index.size(); ++i) {
    if (field.is_zero(out.value[i])) continue;
    cleaned.index.push_back(out.index[i]);
    cleaned.value.push_back(out.value[i]);
  }
  v = std::move(cleaned);
}

// Incremental semi-echelon basis over F^n in which every stored row has a
// distinct leading (smallest) column with coefficient one. The set of leading
// columns is an invariant of the spanned subspace, so with columns sorted by
// degree the pivot counts per degree give the Hilbert function of the span.
//
// Reduction uses a dense accumulator plus a min-heap of touched columns; each
// column enters the heap at most once per reduction because pivot rows only
// touch columns at or after their pivot.
template <class F>
class SparseEchelon {
 public:
  using Element = typename F::Element;

  SparseEchelon(const F& field, std::size_t ambient_dim)
      : field_(field), ambient_(ambient_dim), pivot_row_(ambient_dim, -1) {}

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  bool is_pivot(std::size_t col) const { return pivot_row_[col] >= 0; }
  const SparseVector<F>& row_with_pivot(std::size_t col) const { return rows_[pivot_row_[col]]; }
  const std::vector<SparseVector<F>>& rows() const noexcept { return rows_; }

  // Adds v to the span; returns true if the rank grew.
  bool insert(const SparseVector<F>& v) {
    auto rem = reduce(v, /*leading_only=*/true);
    if (rem.empty()) return false;
    const auto inv = field_.inv(rem.value.front());
    if (!field_.is_one(rem.value.front()))
      for (auto& e : rem.value) e = field_.mul(e, inv);
    pivot_row_[rem.index.front()] = static_cast<std::int32_t>(rows_.size());
    rows_.push_back(std::move(rem));
    return true;
  }

  // Unique representative of v modulo the span, supported on non-pivot columns.
  SparseVector<F> normal_form(const SparseVector<F>& v) const { return reduce(v, /*leading_only=*/false); }

  bool contains(const SparseVector<F>& v) const { return reduce(v, true).empty(); }

  // Dense RREF of the span.
  Subspace<F> to_subspace() const {
    if (rows_.empty()) return Subspace<F>(field_, ambient_);
    DenseMatrix<F> m(field_, rows_.size(), ambient_);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (std::size_t i = 0; i < rows_[r].index.size(); ++i) m(r, rows_[r].index[i]) = rows_[r].value[i];
    return Subspace<F>::span(field_, std::move(m));
  }

 private:
  struct Scratch {
    std::vector<Element> acc;
    std::vector<char> queued;
    std::vector<std::uint32_t> heap;
  };

  Scratch& scratch() const {
    thread_local Scratch s;
    if (s.acc.size() < ambient_) {
      s.acc.assign(ambient_, field_.zero());
      s.queued.assign(ambient_, 0);
    }
    return s;
  }

  // With leading_only, stops at the first nonzero non-pivot column and returns
  // the remaining tail unreduced (enough for rank tests). Otherwise eliminates
  // every pivot column.
  SparseVector<F> reduce(const SparseVector<F>& v, bool leading_only) const {
    Scratch& s = scratch();
    auto& acc = s.acc;
    auto& queued = s.queued;
    auto& heap = s.heap;
    heap.clear();
    const std::greater<std::uint32_t> cmp;
    for (std::size_t i = 0; i < v.index.size(); ++i) {
      const auto c = v.index[i];
      if (c >= ambient_) throw DimensionMismatch("sparse vector index beyond ambient dimension");
      acc[c] = field_.add(acc[c], v.value[i]);
      if (!queued[c]) {
        queued[c] = 1;
        heap.push_back(c);
      }
    }
    std::make_heap(heap.begin(), heap.end(), cmp);
    SparseVector<F> out;
    bool found_leading = false;
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), cmp);
      const auto c = heap.back();
      heap.pop_back();
      queued[c] = 0;
      if (field_.is_zero(acc[c])) continue;
      const std::int32_t pr = (found_leading && leading_only) ? -1 : pivot_row_[c];
      if (pr < 0) {
        out.index.push_back(c);
        out.value.push_back(acc[c]);
        acc[c] = field_.zero();
        found_leading = true;
        continue;
      }
      const auto factor = acc[c];
      const auto& row = rows_[pr];
      acc[c] = field_.zero();
      for (std::size_t i = 1; i < row.index.size(); ++i) {
        const auto j = row.index[i];
        acc[j] = field_.sub_mul(acc[j], factor, row.value[i]);
        if (!queued[j]) {
          queued[j] = 1;
          heap.push_back(j);
          std::push_heap(heap.begin(), heap.end(), cmp);
        }
      }
    }
    return out;
  }

  F field_;
  std::size_t ambient_;
  std::vector<std::int32_t> pivot_row_;
  std::vector<SparseVector<F>> rows_;
};

}  // namespace liftsys::linalg

#endif  // LIFTSYS_SPARSE_ECHELON_HPP
