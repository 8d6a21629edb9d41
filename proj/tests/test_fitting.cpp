#include <gtest/gtest.h>

#include <random>

#include "liftsys/fitting.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace liftsys;
using namespace liftsys::fitting;
using ideals::Ideal;
using ideals::truncated_echelon;
using Field = PrimeField;
using Pol = ring::Polynomial<Field>;
using Module = PresentedModule<Field>;

namespace {

ring::RingPtr<Field> xyz() { return ring::make_ring(Field(), {"x", "y", "z"}, 12); }

Ideal<Field> ideal(const ring::RingPtr<Field>& r, std::initializer_list<const char*> gens) {
  std::vector<Pol> g;
  for (auto s : gens) g.push_back(test::P(*r, s));
  return Ideal<Field>(r, g);
}

Module matrix(const ring::RingPtr<Field>& r, std::initializer_list<std::initializer_list<const char*>> rows) {
  std::vector<std::vector<Pol>> m;
  for (auto row : rows) {
    m.emplace_back();
    for (auto s : row) m.back().push_back(test::P(*r, s));
  }
  return Module::from_rows(r, m);
}

std::vector<std::vector<Pol>> entries(const Module& m) {
  std::vector<std::vector<Pol>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i].push_back(m.at(i, j));
  return out;
}

bool same_span(const Ideal<Field>& a, const Ideal<Field>& b, int n) {
  return truncated_echelon(a, n).equals(truncated_echelon(b, n));
}

// [[z, y], [y, z]] with the (x^2, y^2) blocks: M itself as an R-module.
Module example_m1(const ring::RingPtr<Field>& r) {
  return with_ideal_blocks(matrix(r, {{"z", "y"}, {"y", "z"}}), ideal(r, {"x^2", "y^2"}));
}

Module random_matrix(const ring::RingPtr<Field>& r, std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                     int degree, int min_degree = 0) {
  Module m(r, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = test::random_poly(*r, rng, degree, 3, min_degree);
  return m;
}

}  // namespace

TEST(FittingIdeal, CyclicModuleGivesTheIdeal) {
  auto r = xyz();
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Pol> gens;
    for (int k = 0; k < 3; ++k) gens.push_back(test::random_poly(*r, rng, 3, 3, 1));
    const Ideal<Field> i(r, gens);
    ASSERT_TRUE(same_span(fitting_ideal(Module::cyclic(i), 0), i, 5));
  }
}

TEST(FittingIdeal, TopIndexIsUnitAndShortMatrixGivesZero) {
  auto r = xyz();
  const auto m = matrix(r, {{"x"}, {"y"}});
  EXPECT_TRUE(fitting_ideal(m, 2).is_unit());
  EXPECT_TRUE(fitting_ideal(m, 5).is_unit());
  EXPECT_TRUE(fitting_ideal(m, 0).is_zero());
  EXPECT_TRUE(same_span(fitting_ideal(m, 1), ideal(r, {"x", "y"}), 4));
}

TEST(FittingIdeal, AugmentedPresentationHasExpectedMinors) {
  auto r = xyz();
  const auto a = ideal(r, {"x^2", "y^2"});
  const Pol s = test::P(*r, "y + x^2"), t = test::P(*r, "y + x^4");
  for (int n = 1; n <= 3; ++n) {
    const auto an = ideals::ideal_power(a, n);
    Module phi(r, 2, 2);
    phi.at(0, 0) = test::P(*r, "z");
    phi.at(0, 1) = s;
    phi.at(1, 0) = t;
    phi.at(1, 1) = test::P(*r, "z");
    const auto fitt = fitting_ideal(with_ideal_blocks(phi, an), 0);
    const auto& f = r->field();
    const Ideal<Field> det(r, {ring::sub(f, test::P(*r, "z^2"), ring::mul(f, s, t))});
    const Ideal<Field> extra(r, {s, t, test::P(*r, "z")});
    const auto expected = ideals::ideal_sum(det, ideals::ideal_product(an, ideals::ideal_sum(extra, an)));
    EXPECT_TRUE(same_span(fitt, expected, 4 * n + 2)) << "n=" << n;
  }
}

TEST(FittingIdeal, ChainIsIncreasing) {
  auto r = xyz();
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_matrix(r, rng, 3, 4, 2, 1);
    for (std::size_t i = 0; i < 3; ++i)
      ASSERT_TRUE(truncated_echelon(fitting_ideal(m, i + 1), 5).contains(truncated_echelon(fitting_ideal(m, i), 5)));
    ASSERT_TRUE(fitting_ideal(m, 3).is_unit());
  }
}

TEST(FittingIdeal, InvariantUnderPresentationChanges) {
  auto r = xyz();
  const auto& f = r->field();
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const auto m = random_matrix(r, rng, 2, 3, 2, 1);
    const auto c = test::random_poly(*r, rng, 2, 2);
    Module rowop = m, colop = m;
    for (std::size_t j = 0; j < m.cols(); ++j)
      rowop.at(1, j) = ring::add(f, m.at(1, j), ring::mul(f, c, m.at(0, j)));
    for (std::size_t i = 0; i < m.rows(); ++i)
      colop.at(i, 2) = ring::add(f, m.at(i, 2), ring::mul(f, c, m.at(i, 0)));
    Module summand(r, 3, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) summand.at(i, j) = m.at(i, j);
    summand.at(2, 3) = r->one();
    for (std::size_t i = 0; i < 2; ++i) {
      const auto base = fitting_ideal(m, i);
      ASSERT_TRUE(same_span(base, fitting_ideal(rowop, i), 5));
      ASSERT_TRUE(same_span(base, fitting_ideal(colop, i), 5));
      ASSERT_TRUE(same_span(base, fitting_ideal(summand, i), 5));
    }
  }
}

TEST(FittingIdeal, MinorCapRefusesBlowup) {
  auto r = xyz();
  std::mt19937_64 rng(1);
  const auto m = random_matrix(r, rng, 3, 30, 1, 1);
  EXPECT_THROW(fitting_ideal(m, 0, 1000), CapExceeded);
}

TEST(FittingIdeal, SerialAndParallelMinorsAgree) {
  auto r = xyz();
  std::mt19937_64 rng(12);
  const auto m = random_matrix(r, rng, 3, 6, 2, 1);
  const auto par = minors(m, 3);
  std::vector<Pol> ser;
  {
    SerialScope serial;
    ser = minors(m, 3);
  }
  ASSERT_EQ(par.size(), ser.size());
  for (std::size_t k = 0; k < par.size(); ++k) EXPECT_TRUE(par[k].equals(r->field(), ser[k]));
}

TEST(MinimalPresentation, UnitMatrixIsTheZeroModule) {
  auto r = xyz();
  const auto out = minimal_presentation(matrix(r, {{"1"}}));
  EXPECT_EQ(out.mu, 0u);
  EXPECT_EQ(module_length(out.module).length, 0u);
}

TEST(MinimalPresentation, ExampleMatrixIsAlreadyMinimal) {
  auto r = xyz();
  const auto phi = matrix(r, {{"z", "y"}, {"y", "z"}});
  const auto out = minimal_presentation(phi);
  EXPECT_EQ(out.mu, 2u);
  EXPECT_TRUE(out.module.equals(phi));
}

TEST(MinimalPresentation, PivotsOnUnitEntry) {
  auto r = xyz();
  const auto phi = matrix(r, {{"x", "1"}, {"y", "z"}});
  const auto out = minimal_presentation(phi);
  EXPECT_EQ(out.mu, 1u);
  ASSERT_EQ(out.module.rows(), 1u);
  ASSERT_EQ(out.module.cols(), 1u);
  EXPECT_EQ(ring::to_string(out.module.at(0, 0), *r), "-x*z + y");
  EXPECT_TRUE(same_span(fitting_ideal(out.module, 0), fitting_ideal(phi, 0), 5));
}

TEST(MinimalPresentation, PreservesLengthAndFittingIdeals) {
  auto r = xyz();
  std::mt19937_64 rng(17);
  const auto m2 = ideal(r, {"x^2", "y^2", "z^2"});
  for (int trial = 0; trial < 10; ++trial) {
    auto m = random_matrix(r, rng, 3, 3, 2);
    m = with_ideal_blocks(m, m2);
    const auto out = minimal_presentation(m);
    ASSERT_EQ(module_length(out.module).length, module_length(m).length);
    // Fitting ideals depend only on the module.
    for (std::size_t i = 0; i <= 3; ++i)
      ASSERT_TRUE(same_span(fitting_ideal(m, i), fitting_ideal(out.module, i), 6)) << "i=" << i;
  }
}

TEST(ModuleLength, ResidueFieldHasLengthOne) {
  auto r = xyz();
  const auto out = module_length(Module::cyclic(ideal(r, {"x", "y", "z"})));
  EXPECT_EQ(out.length, 1u);
  EXPECT_EQ(out.witness_degree, 1);
}

TEST(ModuleLength, SymmetricMatrixIsNotFiniteLength) {
  auto r = ring::make_ring(Field(), {"x", "y"}, 10);
  const auto m = matrix(r, {{"x", "y"}, {"y", "x"}});
  EXPECT_THROW(module_length(m), NotFiniteLength);
  // The truncated quotients still agree with the dense computation.
  const auto span = module_echelon(m, 4);
  EXPECT_EQ(span.quotient_dim_below(5), oracle::dense_module_quotient_dim(*r, entries(m), 2, 4));
}

TEST(ModuleLength, ExampleBaseModuleAgreesWithDenseQuotient) {
  auto r = xyz();
  const auto m1 = example_m1(r);
  const auto out = module_length(m1);
  EXPECT_GT(out.length, 0u);
  for (int n : {out.witness_degree, out.witness_degree + 2})
    EXPECT_EQ(out.length, oracle::dense_module_quotient_dim(*r, entries(m1), 2, n)) << "N=" << n;
}

TEST(ModuleLength, RandomModulesAgreeWithDenseQuotient) {
  auto r = xyz();
  std::mt19937_64 rng(31);
  const auto box = ideal(r, {"x^2", "y^2", "z^2"});
  for (int trial = 0; trial < 8; ++trial) {
    const auto m = with_ideal_blocks(random_matrix(r, rng, 2, 2, 2, 1), box);
    const auto out = module_length(m);
    ASSERT_EQ(out.length, oracle::dense_module_quotient_dim(*r, entries(m), 2, out.witness_degree + 1));
    ASSERT_EQ(module_echelon(m, out.witness_degree + 3).quotient_dim_below(out.witness_degree), out.length);
  }
}

TEST(ModuleLength, CyclicLengthMatchesColength) {
  auto r = xyz();
  const auto i = ideal(r, {"x^2 + y*z", "y^3", "z^2 - x*y", "x*z"});
  EXPECT_EQ(module_length(Module::cyclic(i)).length, ideals::colength(i).length);
}

TEST(VectorSpace, ResidueField) {
  auto r = xyz();
  const auto v = realize_vector_space(Module::cyclic(ideal(r, {"x", "y", "z"})));
  ASSERT_EQ(v.dim(), 1u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(v.multiplication(i).is_zero(r->field()));
}

TEST(VectorSpace, SquareOfMaximalIdealInTwoVariables) {
  auto r = ring::make_ring(Field(), {"x", "y"}, 6);
  const auto v = realize_vector_space(Module::cyclic(ideal(r, {"x^2", "x*y", "y^2"})));
  ASSERT_EQ(v.dim(), 3u);
  const auto x = v.multiplication(0);
  EXPECT_FALSE(x.is_zero(r->field()));
  EXPECT_TRUE(linalg::multiply(r->field(), x, x).is_zero(r->field()));
}

TEST(VectorSpace, FirstModuleOfDimensionTwoFamilyCommutes) {
  auto r = ring::make_ring(Field(), {"x1", "x2", "y1", "y2"}, 10);
  const auto phi = matrix(r, {{"0", "0", "x1", "x2"}, {"y1", "y2", "x2", "x1"}});
  const auto m1 = with_ideal_blocks(phi, ideal(r, {"x1^2 + y1^2", "x2^2 + y2^2"}));
  const auto v = realize_vector_space(m1);
  EXPECT_EQ(v.dim(), module_length(m1).length);
  const auto& f = r->field();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      const auto a = v.multiplication(i), b = v.multiplication(j);
      ASSERT_TRUE(linalg::multiply(f, a, b).equals(f, linalg::multiply(f, b, a)));
    }
}

TEST(VectorSpace, ProjectAndLiftRoundTrip) {
  auto r = xyz();
  const auto v = realize_vector_space(example_m1(r));
  for (std::size_t k = 0; k < v.dim(); ++k) {
    linalg::Vector<Field> e(v.dim(), 0);
    e[k] = 1;
    ASSERT_EQ(v.project(v.lift(e)), e);
  }
}

TEST(Annihilator, FittZeroAnnihilates) {
  auto r = xyz();
  std::mt19937_64 rng(9);
  const auto box = ideal(r, {"x^2", "y^2", "z^3"});
  for (int trial = 0; trial < 6; ++trial) {
    const auto m = with_ideal_blocks(random_matrix(r, rng, 2, 2, 2, 1), box);
    const auto v = realize_vector_space(m);
    const auto fitt = fitting_ideal(m, 0);
    for (const auto& g : fitt.generators()) ASSERT_TRUE(v.annihilated_by(g));
    const auto ann = truncated_echelon(annihilator(v), v.witness_degree() + 1);
    ASSERT_TRUE(ann.contains(truncated_echelon(fitting_ideal(m, 0), v.witness_degree() + 1)));
  }
}

TEST(Annihilator, CyclicModuleGivesTheIdeal) {
  auto r = xyz();
  const auto i = ideal(r, {"x^2 + y*z", "y^3", "z^2 - x*y", "x*z"});
  const auto v = realize_vector_space(Module::cyclic(i));
  const int n = v.witness_degree() + 1;
  EXPECT_TRUE(same_span(annihilator(v), i, n));
}

TEST(BaseChange, FreeModuleGivesTheIdeal) {
  auto r = xyz();
  const auto a = ideal(r, {"x^2", "y*z"});
  const auto out = base_change_fitt(Module::free(r, 1), a, 5);
  EXPECT_TRUE(same_span(out.mid, a, 5));
  EXPECT_TRUE(out.identity_check);
}

TEST(BaseChange, CyclicModule) {
  auto r = xyz();
  const auto out = base_change_fitt(matrix(r, {{"x*y - z^2"}}), ideal(r, {"x^3 + y"}), 5);
  EXPECT_TRUE(same_span(out.mid, ideal(r, {"x*y - z^2", "x^3 + y"}), 5));
  EXPECT_TRUE(out.identity_check);
}

TEST(BaseChange, RandomTwoByThreeMatrices) {
  auto r = xyz();
  const auto a = ideal(r, {"x^2", "y^2"});
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto l = random_matrix(r, rng, 2, 3, 2);
    const auto out = base_change_fitt(l, a, 6);
    ASSERT_TRUE(out.identity_check) << "trial " << trial;
  }
}
