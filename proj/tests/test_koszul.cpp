#include <gtest/gtest.h>

#include <random>

#include "liftsys/koszul.hpp"
#include "systems.hpp"

using namespace liftsys;
using namespace liftsys::koszul;
using ideals::Ideal;
using test::Field;
using test::P;
using Module = fitting::PresentedModule<Field>;
using Pol = ring::Polynomial<Field>;

namespace {

std::vector<Pol> polys(const ring::RingContext<Field>& r, std::initializer_list<const char*> s) {
  std::vector<Pol> out;
  for (auto p : s) out.push_back(P(r, p));
  return out;
}

}  // namespace

TEST(Regularity, Certificates) {
  auto r2 = ring::make_ring(Field(), {"x", "y"}, 8);
  EXPECT_EQ(regular_sequence_certificate(r2, polys(*r2, {"x", "y"})).stamp, RegularityStamp::Regular);
  EXPECT_EQ(regular_sequence_certificate(r2, polys(*r2, {"x", "x*y"})).stamp, RegularityStamp::Uncertified);
  auto r4 = test::family_ring();
  const auto family = lifting::obstruction_family_ideal(r4, 2);
  EXPECT_EQ(regular_sequence_certificate(r4, family.generators()).stamp, RegularityStamp::Regular);
  EXPECT_THROW(regular_sequence_certificate(r2, polys(*r2, {"1 + x"})), InputError);
}

TEST(Complex, DifferentialsComposeToZeroOnRandomModules) {
  auto r = test::xyz_ring();
  std::mt19937_64 rng(5);
  const Ideal<Field> box(r, polys(*r, {"x^2", "y^2", "z^2"}));
  for (int trial = 0; trial < 5; ++trial) {
    Module m(r, 2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m.at(i, j) = test::random_poly(*r, rng, 2, 3, 1);
    auto v = std::make_shared<const fitting::ModuleVectorSpace<Field>>(fitting::with_ideal_blocks(m, box));
    std::vector<Pol> g;
    for (int k = 0; k < 3; ++k) g.push_back(test::random_poly(*r, rng, 2, 3, 1));
    const KoszulComplex<Field> k(v, g);  // the constructor asserts d o d = 0
    for (std::size_t i = 1; i < 3; ++i)
      EXPECT_TRUE(linalg::multiply(r->field(), k.differential(i), k.differential(i + 1)).is_zero(r->field()));
    std::int64_t euler = 0;
    for (std::size_t i = 0; i <= 3; ++i) euler += (i % 2 ? -1 : 1) * static_cast<std::int64_t>(homology(k, i).dim);
    EXPECT_EQ(euler, 0);
  }
}

TEST(Homology, ResidueFieldGivesBinomials) {
  auto r = test::xyz_ring();
  const auto k = Module::cyclic(Ideal<Field>(r, polys(*r, {"x", "y", "z"})));
  const auto g = polys(*r, {"x^2", "y^2 + x*z", "z^3"});
  const std::size_t expected[] = {1, 3, 3, 1};
  for (std::size_t i = 0; i <= 3; ++i) EXPECT_EQ(koszul_homology(g, k, i).dim, expected[i]);
}

TEST(Homology, DegreeZeroIsTheQuotient) {
  auto r = test::xyz_ring();
  std::mt19937_64 rng(3);
  const Ideal<Field> box(r, polys(*r, {"x^3", "y^2", "z^2"}));
  const auto g = polys(*r, {"x + y", "z^2 - x*y"});
  for (int trial = 0; trial < 4; ++trial) {
    Module m(r, 2, 1);
    m.at(0, 0) = test::random_poly(*r, rng, 2, 3, 1);
    m.at(1, 0) = test::random_poly(*r, rng, 2, 3, 1);
    m = fitting::with_ideal_blocks(m, box);
    const auto quotient = fitting::with_ideal_blocks(m, Ideal<Field>(r, g));
    EXPECT_EQ(koszul_homology(g, m, 0).dim, fitting::module_length(quotient).length);
  }
}

TEST(Homology, FirstModuleOfFamilyHasTor1) {
  const auto sys = test::family_system(1);
  const auto h = koszul_homology(sys.ideal().generators(), build_phi_n(sys, 1), 1);
  EXPECT_GT(h.dim, 0u);
  EXPECT_TRUE(h.is_tor);
  EXPECT_STREQ(h.label(), "Tor");
}

TEST(TorSystem, DegreeZeroIsConstant) {
  const auto sys = test::example_system(5);
  const auto rep = tor_inverse_system(sys, 0, 5);
  EXPECT_TRUE(rep.tor0_constant);
  const auto length = rep.levels.front().module_dim;
  for (const auto& level : rep.levels) {
    EXPECT_EQ(level.dim, length);
    EXPECT_EQ(level.stable_image, length);
  }
  EXPECT_TRUE(rep.stabilized);
}

TEST(TorSystem, ExampleFirstTorDiesInTheLimit) {
  const auto rep = tor_inverse_system(test::example_system(5), 1, 5);
  EXPECT_TRUE(rep.regular);
  EXPECT_TRUE(rep.stabilized);
  for (const auto& level : rep.levels)
    if (level.n < 5) EXPECT_EQ(level.stable_image, 0u) << "n=" << level.n;
}

TEST(TorSystem, FamilyFirstTorSurvives) {
  const auto rep = tor_inverse_system(test::family_system(5), 1, 5);
  for (const auto& level : rep.levels) EXPECT_GE(level.stable_image, 1u) << "n=" << level.n;
}

TEST(TorSystem, InducedMapRankMatchesOneStepImage) {
  const auto sys = test::example_system(5);
  for (std::size_t i = 0; i <= 2; ++i) {
    const auto rep = tor_inverse_system(sys, i, 4);
    for (const auto& level : rep.levels) {
      if (!level.induced) continue;
      const auto rank = level.induced->rows() == 0 || level.induced->cols() == 0
                            ? 0
                            : linalg::rank(sys.field(), *level.induced);
      EXPECT_EQ(rank, level.image_dims[1]) << "i=" << i << " n=" << level.n;
    }
  }
}

TEST(TorSystem, SerialAndParallelAgree) {
  const auto sys = test::family_system(4);
  const auto par = tor_inverse_system(sys, 1, 4);
  TorReport<Field> ser;
  {
    SerialScope serial;
    ser = tor_inverse_system(test::family_system(4), 1, 4);
  }
  ASSERT_EQ(par.levels.size(), ser.levels.size());
  for (std::size_t k = 0; k < par.levels.size(); ++k) {
    EXPECT_EQ(par.levels[k].dim, ser.levels[k].dim);
    EXPECT_EQ(par.levels[k].image_dims, ser.levels[k].image_dims);
  }
}

TEST(Witness, ZeroScheduleBaseCycle) {
  const auto w = eta_witness(test::family_system(1), 1);
  EXPECT_TRUE(w.base_cycle);
  ASSERT_EQ(w.levels.size(), 1u);
  const auto& m = w.levels.front().m;
  ASSERT_EQ(m.size(), 2u);
  EXPECT_TRUE(m[0][0].is_zero());
  EXPECT_EQ(ring::to_string(m[0][1], *test::family_ring()), "-1");
  EXPECT_TRUE(m[1][0].is_zero());
  EXPECT_EQ(ring::to_string(m[1][1], *test::family_ring()), "1");
}

TEST(Witness, ZeroScheduleClassesAreCompatible) {
  const auto w = eta_witness(test::family_system(4), 4);
  ASSERT_EQ(w.levels.size(), 4u);
  for (const auto& level : w.levels) {
    EXPECT_TRUE(level.identity_holds);
    EXPECT_TRUE(level.is_cycle);
    EXPECT_TRUE(level.class_nonzero);
    EXPECT_TRUE(level.maps_to_previous);
  }
}

TEST(Witness, RandomCertifiedSchedule) {
  auto r = test::family_ring();
  const auto a = lifting::obstruction_family_ideal(r, 2);
  std::mt19937_64 rng(99);
  const auto schedule = lifting::random_certified_schedule(a, 2, 4, 3, rng, 0.3);
  const auto sys = lifting::obstruction_family_system(r, 2, schedule);
  ASSERT_TRUE(lifting::validate_schedule(sys).valid);
  const auto w = eta_witness(sys, 3);
  EXPECT_EQ(w.levels.size(), 3u);
}

TEST(Witness, TemplateMismatchIsReported) {
  EXPECT_THROW(eta_witness(test::example_system(2), 2), TemplateMismatch);
}

TEST(Depth, ExampleIsStabilizedZero) {
  const auto cert = depth_certificate_auslander(test::example_system(5), 5);
  EXPECT_EQ(cert.q, 0);
  EXPECT_EQ(cert.depth_bound, 2);
  EXPECT_EQ(cert.stamp, DepthStamp::StabilizedZero);
}

TEST(Depth, FamilyIsWitnessedUnliftable) {
  const auto cert = depth_certificate_auslander(test::family_system(5), 5);
  EXPECT_GE(cert.q, 1);
  EXPECT_LE(cert.depth_bound, 1);
  EXPECT_EQ(cert.stamp, DepthStamp::UnliftableWitnessed);
}

TEST(Depth, ResidueFieldOfLine) {
  auto r = ring::make_ring(Field(), {"x"}, 8);
  const Ideal<Field> a(r, polys(*r, {"x"}));
  const auto sys = lifting::system_from_module(Module::cyclic(a), a, 5);
  const auto cert = depth_certificate_auslander(sys, 5);
  EXPECT_EQ(cert.q, 1);
  EXPECT_EQ(cert.depth_bound, 0);
}

TEST(Depth, DeterminantOfExampleLift) {
  const auto sys = test::example_system(4);
  const auto lift = lifting::associated_lift(sys, 4);
  const auto cert = depth_certificate_determinant(lift.matrix, 4, 2);
  EXPECT_EQ(cert.stamp, DeterminantStamp::Exact);
  EXPECT_EQ(cert.depth, 2);
  EXPECT_EQ(cert.limit_certified, true);
  const auto& f = sys.field();
  const auto s = lift.matrix.at(0, 1), t = lift.matrix.at(1, 0);
  EXPECT_TRUE(cert.determinant.equals(f, ring::sub(f, P(sys.ring(), "z^2"), ring::mul(f, s, t))));
}

TEST(Depth, DeterminantSmallCases) {
  auto r = ring::make_ring(Field(), {"x", "y"}, 8);
  const auto one = Module::from_rows(r, {{P(*r, "x")}});
  EXPECT_EQ(depth_certificate_determinant(one).depth, 1);
  const auto sym = Module::from_rows(r, {{P(*r, "x"), P(*r, "y")}, {P(*r, "y"), P(*r, "x")}});
  const auto cert = depth_certificate_determinant(sym);
  EXPECT_EQ(cert.depth, 1);
  EXPECT_EQ(ring::to_string(cert.determinant, *r), "x^2 - y^2");
  const auto degenerate = Module::from_rows(r, {{P(*r, "x"), P(*r, "y")}, {P(*r, "x"), P(*r, "y")}});
  EXPECT_EQ(depth_certificate_determinant(degenerate).stamp, DeterminantStamp::Inconclusive);
  EXPECT_EQ(depth_certificate_determinant(Module::from_rows(r, {{P(*r, "1 + x")}})).stamp, DeterminantStamp::ZeroModule);
}
