#ifndef LIFTSYS_ORACLES_HPP
#define LIFTSYS_ORACLES_HPP

// Independent reference computations used as test oracles. They share only
// the polynomial type and dense RREF with the engine: spans are built from
// untruncated products followed by truncation, ranks by the serial RREF.

#include <cstdint>
#include <utility>
#include <vector>

#include "liftsys/linalg.hpp"
#include "liftsys/ring.hpp"

namespace liftsys::oracle {

// Number of exponent pairs (a, b) not divisible by any (i, j) in gens.
inline std::int64_t staircase_2d(const std::vector<std::pair<int, int>>& gens) {
  int max_a = 0, max_b = 0;
  for (auto [i, j] : gens) {
    max_a = std::max(max_a, i);
    max_b = std::max(max_b, j);
  }
  std::int64_t count = 0;
  for (int a = 0; a <= max_a; ++a)
    for (int b = 0; b <= max_b; ++b) {
      bool divisible = false;
      for (auto [i, j] : gens)
        if (a >= i && b >= j) divisible = true;
      count += !divisible;
    }
  return count;
}

// l(k[[x,y]]/(x^2,y^2)^n) by the staircase of the generators x^{2i} y^{2(n-i)}.
inline std::int64_t staircase_x2y2_power(int n) {
  std::vector<std::pair<int, int>> gens;
  for (int i = 0; i <= n; ++i) gens.emplace_back(2 * i, 2 * (n - i));
  return staircase_2d(gens);
}

// Monomials of degree <= bound in v variables not divisible by any monomial
// generator.
inline std::int64_t staircase(std::size_t nvars, const std::vector<std::vector<int>>& gens, int bound) {
  std::int64_t count = 0;
  std::vector<int> e(nvars, 0);
  auto rec = [&](auto&& self, std::size_t var, int left) -> void {
    if (var == nvars) {
      for (const auto& g : gens) {
        bool div = true;
        for (std::size_t i = 0; i < nvars; ++i) div = div && e[i] >= g[i];
        if (div) return;
      }
      ++count;
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[var] = k;
      self(self, var + 1, left - k);
    }
    e[var] = 0;
  };
  rec(rec, 0, bound);
  return count;
}

// Rows monomial * g (untruncated product, then truncation) for deg(monomial) <= N.
template <class F>
linalg::DenseMatrix<F> dense_ideal_rows(const ring::RingContext<F>& r, const std::vector<ring::Polynomial<F>>& gens,
                                        int n) {
  const auto& f = r.field();
  const auto basis = r.basis(n);
  linalg::DenseMatrix<F> m(f, 0, basis->size());
  for (const auto& g : gens)
    for (std::size_t i = 0; i < basis->size(); ++i) {
      const auto prod = ring::truncate(f, ring::multiply_by_monomial(f, g, (*basis)[i]), n);
      if (prod.is_zero()) continue;
      const auto v = ring::to_vector(prod, r, n);
      m.append_row(v);
    }
  return m;
}

template <class F>
std::size_t dense_span_dim(const ring::RingContext<F>& r, const std::vector<ring::Polynomial<F>>& gens, int n) {
  const auto rows = dense_ideal_rows(r, gens, n);
  if (rows.rows() == 0) return 0;
  return linalg::rref_serial(r.field(), rows).rank;
}

template <class F>
linalg::Subspace<F> dense_span(const ring::RingContext<F>& r, const std::vector<ring::Polynomial<F>>& gens, int n) {
  const auto rows = dense_ideal_rows(r, gens, n);
  if (rows.rows() == 0) return linalg::Subspace<F>(r.field(), r.basis(n)->size());
  return linalg::Subspace<F>::span(r.field(), rows);
}

// dim_k R^mu / (relations + m^{N+1} R^mu) for a matrix of column relations,
// built densely. Equals the module length once N is past the witness.
template <class F>
std::size_t dense_module_quotient_dim(const ring::RingContext<F>& r,
                                      const std::vector<std::vector<ring::Polynomial<F>>>& matrix, std::size_t rows,
                                      int n) {
  const auto& f = r.field();
  const auto basis = r.basis(n);
  const std::size_t dim = basis->size();
  const std::size_t cols = rows == 0 ? 0 : matrix[0].size();
  linalg::DenseMatrix<F> m(f, 0, rows * dim);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t i = 0; i < dim; ++i) {
      linalg::Vector<F> v(rows * dim, f.zero());
      bool nonzero = false;
      for (std::size_t row = 0; row < rows; ++row) {
        const auto prod = ring::truncate(f, ring::multiply_by_monomial(f, matrix[row][c], (*basis)[i]), n);
        if (prod.is_zero()) continue;
        nonzero = true;
        const auto coords = ring::to_vector(prod, r, n);
        for (std::size_t j = 0; j < dim; ++j) v[row * dim + j] = coords[j];
      }
      if (nonzero) m.append_row(v);
    }
  const std::size_t rank = m.rows() == 0 ? 0 : linalg::rref_serial(f, m).rank;
  return rows * dim - rank;
}

}  // namespace liftsys::oracle

#endif  // LIFTSYS_ORACLES_HPP
