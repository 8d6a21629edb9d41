#ifndef LIFTSYS_LINALG_HPP
#define LIFTSYS_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "liftsys/errors.hpp"
#include "liftsys/field.hpp"

namespace liftsys::linalg {

template <class F>
using Vector = std::vector<typename F::Element>;

// Row-major dense matrix over F.
template <class F>
class DenseMatrix {
 public:
  using Element = typename F::Element;

  DenseMatrix() = default;
  DenseMatrix(const F& field, std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

  static DenseMatrix identity(const F& field, std::size_t n) {
    DenseMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  static DenseMatrix from_rows(const F& field, std::size_t cols, const std::vector<Vector<F>>& rows) {
    DenseMatrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw DimensionMismatch("row length differs from column count");
      std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Element& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Element> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Vector<F> row_vector(std::size_t r) const { return Vector<F>(row(r).begin(), row(r).end()); }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(data_[a * cols_ + c], data_[b * cols_ + c]);
  }

  // Keeps the first `n` rows.
  void truncate_rows(std::size_t n) {
    rows_ = std::min(rows_, n);
    data_.resize(rows_ * cols_);
  }

  void append_row(std::span<const Element> values) {
    if (values.size() != cols_) throw DimensionMismatch("appended row length differs from column count");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  DenseMatrix transposed(const F& field) const {
    DenseMatrix t(field, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool equals(const F& field, const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!field.equal(data_[i], other.data_[i])) return false;
    return true;
  }

  bool is_zero(const F& field) const {
    return std::all_of(data_.begin(), data_.end(), [&](const Element& e) { return field.is_zero(e); });
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

template <class F>
DenseMatrix<F> multiply(const F& field, const DenseMatrix<F>& a, const DenseMatrix<F>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product inner dimensions");
  DenseMatrix<F> out(field, a.rows(), b.cols());
#pragma omp parallel for schedule(static) if (a.rows() * b.cols() > 4096)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows()); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& aik = a(i, k);
      if (field.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = field.add(out(i, j), field.mul(aik, b(k, j)));
    }
  }
  return out;
}

template <class F>
Vector<F> apply(const F& field, const DenseMatrix<F>& a, const Vector<F>& v) {
  if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector product");
  Vector<F> out(a.rows(), field.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto acc = field.zero();
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (!field.is_zero(v[k])) acc = field.add(acc, field.mul(a(i, k), v[k]));
    out[i] = acc;
  }
  return out;
}

template <class F>
bool is_zero_vector(const F& field, const Vector<F>& v) {
  return std::all_of(v.begin(), v.end(), [&](const auto& e) { return field.is_zero(e); });
}

template <class F>
struct RrefResult {
  DenseMatrix<F> reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

namespace detail {

// Gauss-Jordan elimination. Pivot choice is the first nonzero entry of the
// current column at or below the current row, so the output is reproducible.
// The elimination sweep over rows is the data-parallel kernel.
template <class F, bool Parallel>
RrefResult<F> rref_impl(const F& field, DenseMatrix<F> m) {
  RrefResult<F> out;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && field.is_zero(m(p, c))) ++p;
    if (p == rows) continue;
    m.swap_rows(p, r);
    const auto inv = field.inv(m(r, c));
    for (std::size_t j = c; j < cols; ++j) m(r, j) = field.mul(m(r, j), inv);
    const auto pivot_row = m.row(r);
    const std::ptrdiff_t nrows = static_cast<std::ptrdiff_t>(rows);
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static) if ((rows - r) * (cols - c) > 16384)
      for (std::ptrdiff_t i = 0; i < nrows; ++i) {
        if (static_cast<std::size_t>(i) == r) continue;
        auto row = m.row(static_cast<std::size_t>(i));
        if (field.is_zero(row[c])) continue;
        const auto factor = row[c];
        for (std::size_t j = c; j < cols; ++j) row[j] = field.sub_mul(row[j], factor, pivot_row[j]);
      }
    } else {
      for (std::ptrdiff_t i = 0; i < nrows; ++i) {
        if (static_cast<std::size_t>(i) == r) continue;
        auto row = m.row(static_cast<std::size_t>(i));
        if (field.is_zero(row[c])) continue;
        const auto factor = row[c];
        for (std::size_t j = c; j < cols; ++j) row[j] = field.sub_mul(row[j], factor, pivot_row[j]);
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = std::move(m);
  return out;
}

}  // namespace detail

// Reduced row-echelon form, OpenMP-parallel elimination sweep.
template <class F>
RrefResult<F> rref(const F& field, DenseMatrix<F> m) {
  return detail::rref_impl<F, true>(field, std::move(m));
}

// Serial reference for rref(); kept for cross-checking and benchmarking.
template <class F>
RrefResult<F> rref_serial(const F& field, DenseMatrix<F> m) {
  return detail::rref_impl<F, false>(field, std::move(m));
}

template <class F>
std::size_t rank(const F& field, const DenseMatrix<F>& m) {
  return rref(field, m).rank;
}

// A linear subspace of F^n stored as the nonzero rows of its RREF basis.
template <class F>
class Subspace {
 public:
  using Element = typename F::Element;

  Subspace() = default;
  Subspace(const F& field, std::size_t ambient_dim) : basis_(field, 0, ambient_dim), ambient_(ambient_dim) {}

  // Span of the rows of `generators`.
  static Subspace span(const F& field, DenseMatrix<F> generators) {
    auto res = rref(field, std::move(generators));
    Subspace s;
    s.ambient_ = res.reduced.cols();
    res.reduced.truncate_rows(res.rank);
    s.basis_ = std::move(res.reduced);
    s.pivots_ = std::move(res.pivots);
    return s;
  }

  static Subspace span(const F& field, std::size_t ambient_dim, const std::vector<Vector<F>>& vectors) {
    return span(field, DenseMatrix<F>::from_rows(field, ambient_dim, vectors));
  }

  static Subspace full(const F& field, std::size_t ambient_dim) {
    return span(field, DenseMatrix<F>::identity(field, ambient_dim));
  }

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const DenseMatrix<F>& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
  Vector<F> basis_vector(std::size_t i) const { return basis_.row_vector(i); }

  // Remainder of v after subtracting its projection along the pivot columns.
  Vector<F> reduce(const F& field, Vector<F> v) const {
    if (v.size() != ambient_) throw DimensionMismatch("vector length differs from ambient dimension");
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      const auto factor = v[pivots_[i]];
      if (field.is_zero(factor)) continue;
      const auto row = basis_.row(i);
      for (std::size_t j = pivots_[i]; j < ambient_; ++j) v[j] = field.sub_mul(v[j], factor, row[j]);
    }
    return v;
  }

  bool contains(const F& field, const Vector<F>& v) const { return is_zero_vector(field, reduce(field, v)); }

  bool contains(const F& field, const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("subspace ambient dimensions differ");
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!contains(field, other.basis_vector(i))) return false;
    return true;
  }

  bool equals(const F& field, const Subspace& other) const {
    return ambient_ == other.ambient_ && dim() == other.dim() && basis_.equals(field, other.basis_);
  }

 private:
  DenseMatrix<F> basis_;
  std::size_t ambient_ = 0;
  std::vector<std::size_t> pivots_;
};

template <class F>
bool contains(const F& field, const Subspace<F>& a, const Vector<F>& v) {
  return a.contains(field, v);
}

// {v : m v = 0}, as a subspace of F^{cols(m)}.
template <class F>
Subspace<F> kernel_basis(const F& field, const DenseMatrix<F>& m) {
  auto res = rref(field, m);
  const std::size_t n = m.cols();
  std::vector<char> is_pivot(n, 0);
  for (auto p : res.pivots) is_pivot[p] = 1;
  std::vector<Vector<F>> vectors;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vector<F> v(n, field.zero());
    v[free] = field.one();
    for (std::size_t i = 0; i < res.rank; ++i) v[res.pivots[i]] = field.neg(res.reduced(i, free));
    vectors.push_back(std::move(v));
  }
  if (vectors.empty()) return Subspace<F>(field, n);
  return Subspace<F>::span(field, n, vectors);
}

template <class F>
Subspace<F> subspace_sum(const F& field, const Subspace<F>& a, const Subspace<F>& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspace_sum ambient dimensions differ");
  DenseMatrix<F> stacked(field, 0, a.ambient_dim());
  for (std::size_t i = 0; i < a.dim(); ++i) stacked.append_row(a.basis().row(i));
  for (std::size_t i = 0; i < b.dim(); ++i) stacked.append_row(b.basis().row(i));
  if (stacked.rows() == 0) return Subspace<F>(field, a.ambient_dim());
  return Subspace<F>::span(field, std::move(stacked));
}

// A ∩ B via the kernel of [A^T | -B^T]: (α, β) in the kernel gives α·A = β·B.
template <class F>
Subspace<F> subspace_intersect(const F& field, const Subspace<F>& a, const Subspace<F>& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("subspace_intersect ambient dimensions differ");
  const std::size_t n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace<F>(field, n);
  DenseMatrix<F> system(field, n, a.dim() + b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) system(j, i) = a.basis()(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) system(j, a.dim() + i) = field.neg(b.basis()(i, j));
  const auto kernel = kernel_basis(field, system);
  std::vector<Vector<F>> vectors;
  for (std::size_t k = 0; k < kernel.dim(); ++k) {
    Vector<F> v(n, field.zero());
    for (std::size_t i = 0; i < a.dim(); ++i) {
      const auto coeff = kernel.basis()(k, i);
      if (field.is_zero(coeff)) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] = field.add(v[j], field.mul(coeff, a.basis()(i, j)));
    }
    vectors.push_back(std::move(v));
  }
  if (vectors.empty()) return Subspace<F>(field, n);
  return Subspace<F>::span(field, n, vectors);
}

// Solves x·A = target for x (A given by rows). Returns nullopt if target is
// not in the row space.
template <class F>
std::optional<Vector<F>> solve_left(const F& field, const DenseMatrix<F>& a, const Vector<F>& target) {
  if (target.size() != a.cols()) throw DimensionMismatch("solve_left target length");
  // Columns of the augmented system are the rows of A plus the target.
  DenseMatrix<F> system(field, a.cols(), a.rows() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) system(j, i) = a(i, j);
  for (std::size_t j = 0; j < a.cols(); ++j) system(j, a.rows()) = target[j];
  auto res = rref(field, std::move(system));
  if (!res.pivots.empty() && res.pivots.back() == a.rows()) return std::nullopt;
  Vector<F> x(a.rows(), field.zero());
  for (std::size_t i = 0; i < res.rank; ++i) x[res.pivots[i]] = res.reduced(i, a.rows());
  return x;
}

}  // namespace liftsys::linalg

#endif  // LIFTSYS_LINALG_HPP
