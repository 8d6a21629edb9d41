#include <gtest/gtest.h>

#include <random>

#include "liftsys/errors.hpp"
#include "liftsys/field.hpp"
#include "liftsys/linalg.hpp"
#include "liftsys/parallel.hpp"
#include "liftsys/sparse_echelon.hpp"

using namespace liftsys;
using namespace liftsys::linalg;

namespace {

template <class F>
DenseMatrix<F> ints(const F& f, std::vector<std::vector<int>> rows) {
  std::vector<Vector<F>> out;
  for (const auto& r : rows) {
    Vector<F> v;
    for (int x : r) v.push_back(f.from_int(x));
    out.push_back(std::move(v));
  }
  return DenseMatrix<F>::from_rows(f, rows.empty() ? 0 : rows.front().size(), out);
}

template <class F>
DenseMatrix<F> random_matrix(const F& f, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-5, 5);
  DenseMatrix<F> m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = f.from_int(d(rng));
  return m;
}

// Known-rank matrix: L * diag(1..1, 0..0) * U with unit triangular L and U,
// both invertible, so the rank is exactly min(k, rows, cols).
template <class F>
DenseMatrix<F> rank_k_matrix(const F& f, std::size_t rows, std::size_t cols, std::size_t k, std::mt19937_64& rng) {
  auto lower = random_matrix(f, rows, rows, rng);
  auto upper = random_matrix(f, cols, cols, rng);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = i; j < rows; ++j) lower(i, j) = i == j ? f.one() : f.zero();
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j <= i; ++j) upper(i, j) = i == j ? f.one() : f.zero();
  DenseMatrix<F> middle(f, rows, cols);
  for (std::size_t i = 0; i < std::min({k, rows, cols}); ++i) middle(i, i) = f.one();
  return multiply(f, multiply(f, lower, middle), upper);
}

template <class F>
Vector<F> ivec(const F& f, std::vector<int> xs) {
  Vector<F> v;
  for (int x : xs) v.push_back(f.from_int(x));
  return v;
}

}  // namespace

TEST(Field, ConfigValidation) {
  EXPECT_NO_THROW(FieldConfig{32003}.validate());
  EXPECT_NO_THROW(FieldConfig{0}.validate());
  EXPECT_THROW(FieldConfig{32004}.validate(), InputError);
  EXPECT_THROW(FieldConfig{1}.validate(), InputError);
}

TEST(Field, PrimeArithmetic) {
  const PrimeField f(7);
  EXPECT_EQ(f.mul(f.inv(3), 3), 1u);
  EXPECT_EQ(f.from_int(-1), 6u);
  EXPECT_EQ(f.to_string(f.from_int(-2)), "-2");
  const PrimeField big;
  for (std::uint32_t a = 1; a < 2000; a += 37) EXPECT_EQ(big.mul(a, big.inv(a)), 1u);
}

TEST(Rref, Identity) {
  const PrimeField f;
  const auto res = rref(f, DenseMatrix<PrimeField>::identity(f, 3));
  EXPECT_EQ(res.rank, 3u);
  EXPECT_EQ(res.pivots, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Rref, Zero) {
  const PrimeField f;
  const auto res = rref(f, DenseMatrix<PrimeField>(f, 2, 4));
  EXPECT_EQ(res.rank, 0u);
  EXPECT_TRUE(res.pivots.empty());
}

TEST(Rref, DependentRowsOverF7) {
  const PrimeField f(7);
  const auto res = rref(f, ints(f, {{1, 2}, {2, 4}}));
  EXPECT_EQ(res.rank, 1u);
  EXPECT_TRUE(res.reduced.equals(f, ints(f, {{1, 2}, {0, 0}})));
}

TEST(Rref, Rationals) {
  const RationalField q;
  const auto res = rref(q, ints(q, {{2, 4, 1}, {1, 2, 3}}));
  EXPECT_EQ(res.rank, 2u);
  EXPECT_EQ(res.pivots, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(q.to_string(res.reduced(0, 1)), "2");
}

TEST(Rref, IdempotentAndKnownRank) {
  const PrimeField f;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 2 + trial % 6, cols = 3 + trial % 7;
    const std::size_t k = static_cast<std::size_t>(trial) % (std::min(rows, cols) + 1);
    const auto m = rank_k_matrix(f, rows, cols, k, rng);
    const auto once = rref(f, m);
    EXPECT_EQ(once.rank, k);
    EXPECT_TRUE(rref(f, once.reduced).reduced.equals(f, once.reduced));
  }
}

TEST(Rref, SerialAndParallelAgree) {
  const PrimeField f;
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_matrix(f, 30 + trial, 40, rng);
    const auto par = rref(f, m);
    const auto ser = rref_serial(f, m);
    EXPECT_TRUE(par.reduced.equals(f, ser.reduced));
    EXPECT_EQ(par.pivots, ser.pivots);
  }
}

TEST(Kernel, TrivialCases) {
  const PrimeField f;
  EXPECT_EQ(kernel_basis(f, DenseMatrix<PrimeField>::identity(f, 4)).dim(), 0u);
  const auto full = kernel_basis(f, DenseMatrix<PrimeField>(f, 2, 3));
  EXPECT_EQ(full.dim(), 3u);
}

TEST(Kernel, SingleRowOverF5) {
  const PrimeField f(5);
  const auto k = kernel_basis(f, ints(f, {{1, 1, 0}}));
  EXPECT_EQ(k.dim(), 2u);
  EXPECT_TRUE(k.contains(f, ivec(f, {1, 4, 0})));
  EXPECT_TRUE(k.contains(f, ivec(f, {0, 0, 1})));
  EXPECT_FALSE(k.contains(f, ivec(f, {1, 0, 0})));
}

TEST(Kernel, RankNullityAndAnnihilation) {
  const PrimeField f;
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 1 + trial % 5, cols = 2 + trial % 8;
    const auto m = rank_k_matrix(f, rows, cols, static_cast<std::size_t>(trial) % (std::min(rows, cols) + 1), rng);
    const auto k = kernel_basis(f, m);
    EXPECT_EQ(rank(f, m) + k.dim(), cols);
    for (std::size_t i = 0; i < k.dim(); ++i) EXPECT_TRUE(is_zero_vector(f, apply(f, m, k.basis_vector(i))));
  }
}

TEST(Subspaces, CoordinateAxes) {
  const PrimeField f;
  const auto a = Subspace<PrimeField>::span(f, 2, {ivec(f, {1, 0})});
  const auto b = Subspace<PrimeField>::span(f, 2, {ivec(f, {0, 1})});
  EXPECT_EQ(subspace_sum(f, a, b).dim(), 2u);
  EXPECT_EQ(subspace_intersect(f, a, b).dim(), 0u);
}

TEST(Subspaces, Idempotence) {
  const PrimeField f;
  const auto a = Subspace<PrimeField>::span(f, 3, {ivec(f, {1, 2, 0}), ivec(f, {0, 1, 1})});
  EXPECT_TRUE(subspace_sum(f, a, a).equals(f, a));
  EXPECT_TRUE(subspace_intersect(f, a, a).equals(f, a));
}

TEST(Subspaces, DiagonalsOverF7) {
  const PrimeField f(7);
  const auto a = Subspace<PrimeField>::span(f, 3, {ivec(f, {1, 1, 0})});
  const auto b = Subspace<PrimeField>::span(f, 3, {ivec(f, {1, -1, 0})});
  EXPECT_EQ(subspace_intersect(f, a, b).dim(), 0u);
  EXPECT_EQ(subspace_sum(f, a, b).dim(), 2u);
}

TEST(Subspaces, AmbientMismatch) {
  const PrimeField f;
  const Subspace<PrimeField> a(f, 2), b(f, 3);
  EXPECT_THROW(subspace_sum(f, a, b), DimensionMismatch);
  EXPECT_THROW(subspace_intersect(f, a, b), DimensionMismatch);
}

TEST(Subspaces, GrassmannIdentity) {
  const PrimeField f;
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const auto a = Subspace<PrimeField>::span(f, rank_k_matrix(f, 1 + trial % 4, n, 1 + trial % 3, rng));
    const auto b = Subspace<PrimeField>::span(f, rank_k_matrix(f, 1 + trial % 5, n, trial % 4, rng));
    const auto sum = subspace_sum(f, a, b);
    const auto meet = subspace_intersect(f, a, b);
    EXPECT_EQ(sum.dim() + meet.dim(), a.dim() + b.dim());
    EXPECT_TRUE(a.contains(f, meet));
    EXPECT_TRUE(b.contains(f, meet));
    EXPECT_TRUE(sum.contains(f, a));
    EXPECT_TRUE(sum.contains(f, b));
  }
}

TEST(Subspaces, SolveLeft) {
  const PrimeField f;
  const auto a = ints(f, {{1, 0, 2}, {0, 1, 3}});
  const auto x = solve_left(f, a, ivec(f, {2, 5, 19}));
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, ivec(f, {2, 5}));
  EXPECT_FALSE(solve_left(f, a, ivec(f, {0, 0, 1})).has_value());
}

TEST(SparseEchelon, AgreesWithDense) {
  const PrimeField f;
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 3 + trial % 7, cols = 4 + trial % 9;
    const auto m = rank_k_matrix(f, rows, cols, static_cast<std::size_t>(trial) % (std::min(rows, cols) + 1), rng);
    SparseEchelon<PrimeField> echelon(f, cols);
    for (std::size_t i = 0; i < rows; ++i) echelon.insert(SparseVector<PrimeField>::from_dense(f, m.row_vector(i)));
    EXPECT_EQ(echelon.rank(), rank(f, m));
    EXPECT_TRUE(echelon.to_subspace().equals(f, Subspace<PrimeField>::span(f, m)));
  }
}
