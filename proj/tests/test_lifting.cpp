#include <gtest/gtest.h>

#include <random>
#include <set>

#include "liftsys/lifting.hpp"
#include "oracles.hpp"
#include "systems.hpp"

using namespace liftsys;
using namespace liftsys::lifting;
using ideals::Ideal;
using ideals::truncated_echelon;
using test::Field;
using test::P;
using Module = fitting::PresentedModule<Field>;

namespace {

bool same_span(const Ideal<Field>& a, const Ideal<Field>& b, int n) {
  return truncated_echelon(a, n).equals(truncated_echelon(b, n));
}

bool contained(const Ideal<Field>& small, const Ideal<Field>& big, int n) {
  return truncated_echelon(big, n).contains(truncated_echelon(small, n));
}

std::string entry(const Module& m, std::size_t i, std::size_t j) { return ring::to_string(m.at(i, j), m.ring()); }

}  // namespace

TEST(BuildPhi, FirstLevelOfZeroScheduleAppendsGeneratorBlocks) {
  auto r = test::xyz_ring();
  const auto a = test::box_ideal(r);
  const auto phi = Module::from_rows(r, {{P(*r, "z"), P(*r, "y")}, {P(*r, "y"), P(*r, "z")}});
  const LiftingSystem<Field> sys(a, phi, PerturbationSchedule<Field>::zero(r, 2, 2, 2));
  EXPECT_TRUE(build_phi_n(sys, 1).equals(fitting::with_diagonal_blocks(phi, a.generators())));
  EXPECT_EQ(build_phi_n(sys, 1).cols(), 6u);
}

TEST(BuildPhi, ExampleLevelFour) {
  const auto sys = test::example_system(4);
  const auto phi4 = build_phi_n(sys, 4);
  ASSERT_EQ(phi4.rows(), 2u);
  ASSERT_EQ(phi4.cols(), 2u * 4 + 4);
  EXPECT_EQ(entry(phi4, 0, 0), "z");
  EXPECT_EQ(entry(phi4, 0, 1), "x^6 + x^2 + y");
  EXPECT_EQ(entry(phi4, 1, 0), "x^4 + y");
  EXPECT_EQ(entry(phi4, 1, 1), "z");
  const auto& f = sys.field();
  const auto x = P(sys.ring(), "x"), y = P(sys.ring(), "y");
  std::set<std::string> expected, row0, row1;
  for (int i = 0; i <= 4; ++i)
    expected.insert(ring::to_string(ring::mul(f, ring::pow(f, x, 2 * i), ring::pow(f, y, 2 * (4 - i))), sys.ring()));
  for (std::size_t j = 2; j < 7; ++j) {
    row0.insert(entry(phi4, 0, j));
    EXPECT_TRUE(phi4.at(1, j).is_zero());
  }
  for (std::size_t j = 7; j < 12; ++j) {
    row1.insert(entry(phi4, 1, j));
    EXPECT_TRUE(phi4.at(0, j).is_zero());
  }
  EXPECT_EQ(row0, expected);
  EXPECT_EQ(row1, expected);
}

TEST(BuildPhi, DimensionTwoFamilyLevelTwo) {
  const auto sys = test::family_system(2);
  const auto phi2 = build_phi_n(sys, 2);
  ASSERT_EQ(phi2.cols(), 4u + 2 * 3);
  const char* top[] = {"0", "0", "x1", "x2"};
  const char* bottom[] = {"y1", "y2", "x2", "x1"};
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(entry(phi2, 0, j), top[j]);
    EXPECT_EQ(entry(phi2, 1, j), bottom[j]);
  }
  const auto a2 = ideals::ideal_power(sys.ideal(), 2);
  for (std::size_t j = 4; j < 7; ++j) EXPECT_TRUE(ideals::has_polynomial_representation(phi2.at(0, j), a2));
}

TEST(BuildPhi, BeyondHorizonIsAnError) {
  const auto sys = test::example_system(2);
  EXPECT_NO_THROW(build_phi_n(sys, 3));
  EXPECT_THROW(build_phi_n(sys, 4), HorizonExceeded);
  EXPECT_THROW(build_phi_n(sys, 0), HorizonExceeded);
}

TEST(ValidateSchedule, ZeroScheduleIsValid) {
  const auto report = validate_schedule(test::family_system(3));
  EXPECT_TRUE(report.valid);
  EXPECT_TRUE(report.entries.empty());
}

TEST(ValidateSchedule, ExampleScheduleIsValid) {
  const auto report = validate_schedule(test::example_system(5));
  EXPECT_TRUE(report.valid);
  ASSERT_EQ(report.entries.size(), 5u);
  for (const auto& e : report.entries) {
    EXPECT_TRUE(e.in_power);
    EXPECT_TRUE(e.excluded_from_next);
  }
}

TEST(ValidateSchedule, EntryInNextPowerIsFlagged) {
  auto r = test::xyz_ring();
  const auto a = test::box_ideal(r);
  Module sigma(r, 2, 2);
  sigma.at(0, 1) = P(*r, "x^4");
  PerturbationSchedule<Field> s;
  s.totals.push_back(sigma);
  s.parts.emplace_back(std::nullopt);
  const LiftingSystem<Field> sys(a, Module::from_rows(r, {{P(*r, "z"), P(*r, "y")}, {P(*r, "y"), P(*r, "z")}}), s);
  const auto report = validate_schedule(sys);
  EXPECT_FALSE(report.valid);
  ASSERT_EQ(report.entries.size(), 1u);
  EXPECT_TRUE(report.entries[0].in_power);
  EXPECT_FALSE(report.entries[0].excluded_from_next);
  EXPECT_TRUE(report.entries[0].in_next_power);
}

TEST(ValidateSchedule, PartOutsidePreviousPowerIsFlagged) {
  auto r = test::xyz_ring();
  const auto a = test::box_ideal(r);
  Module first(r, 2, 2), second(r, 2, 2), zero(r, 2, 2);
  second.at(0, 0) = P(*r, "y");  // sigma_{2,1} must lie in a
  const auto s = PerturbationSchedule<Field>::from_parts(a, {{first, zero}, {second, zero}});
  const LiftingSystem<Field> sys(a, Module::from_rows(r, {{P(*r, "z"), P(*r, "y")}, {P(*r, "y"), P(*r, "z")}}), s);
  EXPECT_FALSE(validate_schedule(sys).valid);
}

TEST(FittingSequence, ResidueFieldSystemIsConstant) {
  auto r = ring::make_ring(Field(), {"x", "y"}, 10);
  const auto l = Module::cyclic(Ideal<Field>(r, {P(*r, "x"), P(*r, "y")}));
  const auto sys = system_from_module(l, Ideal<Field>(r, {P(*r, "x")}), 8);
  const auto seq = fitting_sequence(sys, 8);
  for (const auto& level : seq) EXPECT_EQ(level.length, 1u);
  const auto cert = liftable_dim_certificate(sys, 8);
  EXPECT_EQ(cert.degree, 0);
}

TEST(FittingSequence, ExampleLengthsDominateStaircase) {
  const auto sys = test::example_system(7);
  const auto seq = fitting_sequence(sys, 6);
  ASSERT_EQ(seq.size(), 6u);
  for (const auto& level : seq)
    EXPECT_GE(static_cast<std::int64_t>(level.length), 2 * oracle::staircase_x2y2_power(level.n)) << "n=" << level.n;
}

TEST(FittingSequence, ExampleMeetsTheDimensionCriterion) {
  const auto sys = test::example_system(7);
  const auto cert = liftable_dim_certificate(sys, 8);
  EXPECT_EQ(cert.expected, 2);
  EXPECT_EQ(cert.degree, 2);
  EXPECT_TRUE(cert.growth.agreement);
  EXPECT_EQ(cert.stamp, DimensionStamp::CriterionMet);
}

TEST(FittingSequence, FamilyIdealsLieOverTheLinearSpace) {
  const auto sys = test::family_system(4);
  const auto& r = sys.ring_ptr();
  const Ideal<Field> xs(r, {P(*r, "x1"), P(*r, "x2")});
  for (const auto& level : fitting_sequence(sys, 4)) {
    const auto bound = ideals::ideal_sum(xs, ideals::ideal_power(sys.ideal(), level.n));
    EXPECT_TRUE(contained(level.ideal, bound, level.witness_degree)) << "n=" << level.n;
  }
}

TEST(FittingSequence, FamilyMeetsTheDimensionCriterion) {
  const auto sys = test::family_system(6);
  const auto cert = liftable_dim_certificate(sys, 7);
  EXPECT_EQ(cert.expected, 2);
  EXPECT_EQ(cert.degree, 2);
  EXPECT_EQ(cert.stamp, DimensionStamp::CriterionMet);
}

TEST(AssociatedLift, ZeroScheduleGivesBase) {
  const auto sys = test::family_system(3);
  EXPECT_TRUE(associated_lift(sys, 3).matrix.equals(sys.base()));
}

TEST(AssociatedLift, ExampleTruncation) {
  const auto sys = test::example_system(5);
  const auto lift = associated_lift(sys, 3);
  EXPECT_EQ(lift.horizon, 3);
  EXPECT_EQ(entry(lift.matrix, 0, 0), "z");
  EXPECT_EQ(entry(lift.matrix, 0, 1), "x^6 + x^2 + y");
  EXPECT_EQ(entry(lift.matrix, 1, 0), "x^4 + y");
  EXPECT_EQ(entry(lift.matrix, 1, 1), "z");
  EXPECT_THROW(associated_lift(sys, 6), HorizonExceeded);
}

TEST(AssociatedLift, TruncationsAgreeModuloPowers) {
  const auto sys = test::example_system(6);
  for (int j = 1; j <= 5; ++j) {
    const auto low = associated_lift(sys, j).matrix;
    const auto high = associated_lift(sys, 6).matrix;
    const auto power = ideals::ideal_power(sys.ideal(), j + 1);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c)
        EXPECT_TRUE(ideals::has_polynomial_representation(ring::sub(sys.field(), high.at(r, c), low.at(r, c)), power));
  }
}

TEST(SystemFromModule, FreeModuleAlongMaximalIdeal) {
  auto r = test::xyz_ring();
  const Ideal<Field> m(r, {P(*r, "x"), P(*r, "y"), P(*r, "z")});
  const auto sys = system_from_module(Module::free(r, 1), m, 5);
  const auto seq = fitting_sequence(sys, 5);
  for (const auto& level : seq)
    EXPECT_EQ(level.length, ring::binomial(static_cast<std::size_t>(level.n) + 2, 3)) << "n=" << level.n;
}

TEST(SystemFromModule, CyclicModuleGivesSumWithPowers) {
  auto r = ring::make_ring(Field(), {"x", "y", "z", "w"}, 12);
  const Ideal<Field> b(r, {P(*r, "z^2 - x*w"), P(*r, "w^2 - y*z")});
  const Ideal<Field> a(r, {P(*r, "x"), P(*r, "y")});
  const auto sys = system_from_module(Module::cyclic(b), a, 4);
  for (const auto& level : fitting_sequence(sys, 4))
    EXPECT_TRUE(same_span(level.ideal, ideals::ideal_sum(b, ideals::ideal_power(a, level.n)), level.witness_degree + 1));
}

TEST(SystemFromModule, NonFiniteBaseChangeIsRejected) {
  auto r = test::xyz_ring();
  const Ideal<Field> a(r, {P(*r, "x")});
  EXPECT_THROW(system_from_module(Module::free(r, 1), a, 3), NotFiniteLength);
}

TEST(Invariants, ExampleSystemPasses) {
  const auto report = verify_system_invariants(test::example_system(5), 4);
  EXPECT_TRUE(report.passed());
  for (const auto& level : report.levels) EXPECT_EQ(level.mu, 2u);
}

TEST(Invariants, FamilyZeroSchedulePasses) {
  const auto report = verify_system_invariants(test::family_system(4), 4);
  EXPECT_TRUE(report.passed());
  for (const auto& f : report.failures) ADD_FAILURE() << f;
}

TEST(Invariants, CorruptedScheduleFailsQuotientCheck) {
  auto r = test::xyz_ring();
  const auto a = test::box_ideal(r);
  auto good = test::example_system(3, r);
  auto schedule = good.schedule();
  schedule.totals[0].at(0, 0) = P(*r, "x");  // not in a
  schedule.parts[0] = std::nullopt;
  const LiftingSystem<Field> bad(a, good.base(), schedule);
  const auto report = verify_system_invariants(bad, 2);
  EXPECT_FALSE(report.quotients_consistent);
  ASSERT_FALSE(report.failures.empty());
  EXPECT_NE(report.failures.front().find("(ii)"), std::string::npos);
}

TEST(Invariants, RandomCertifiedSchedulesPass) {
  auto r = test::xyz_ring();
  const auto a = test::box_ideal(r);
  const auto phi = Module::from_rows(r, {{P(*r, "z"), P(*r, "y")}, {P(*r, "y"), P(*r, "z")}});
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 3; ++trial) {
    const LiftingSystem<Field> sys(a, phi, random_certified_schedule(a, 2, 2, 3, rng, 0.4));
    const auto report = verify_system_invariants(sys, 3);
    EXPECT_TRUE(report.passed()) << (report.failures.empty() ? "" : report.failures.front());
  }
}

TEST(Properties, FittingSequenceStableModuloPowers) {
  const auto sys = test::example_system(5);
  const auto seq = fitting_sequence(sys, 5);
  for (std::size_t n = 0; n < seq.size(); ++n)
    for (std::size_t m = n + 1; m < seq.size(); ++m) {
      const auto an = ideals::ideal_power(sys.ideal(), static_cast<int>(n) + 1);
      EXPECT_TRUE(same_span(ideals::ideal_sum(seq[m].ideal, an), ideals::ideal_sum(seq[n].ideal, an),
                            seq[n].witness_degree + 1));
    }
}

TEST(Properties, FittingSequenceBetweenLiftBounds) {
  const auto sys = test::example_system(6);
  const auto lift = associated_lift(sys, 6);
  const auto fitt = fitting::fitting_ideal(lift.matrix, 0);
  const std::size_t mu = 2;
  for (const auto& level : fitting_sequence(sys, 5)) {
    const int n = level.witness_degree + 1;
    const auto lower = ideals::ideal_sum(fitt, ideals::ideal_power(sys.ideal(), level.n * static_cast<int>(mu)));
    const auto upper = ideals::ideal_sum(fitt, ideals::ideal_power(sys.ideal(), level.n));
    EXPECT_TRUE(contained(lower, level.ideal, n)) << "n=" << level.n;
    EXPECT_TRUE(contained(level.ideal, upper, n)) << "n=" << level.n;
  }
}

TEST(Properties, SystemFromModuleRoundTrip) {
  auto r = test::xyz_ring();
  const auto l = Module::from_rows(r, {{P(*r, "z"), P(*r, "y + x^2")}, {P(*r, "y"), P(*r, "z")}});
  const auto sys = system_from_module(l, test::box_ideal(r), 3);
  const auto back = associated_lift(sys, 2).matrix;
  for (std::size_t i = 0; i <= 2; ++i)
    EXPECT_TRUE(same_span(fitting::fitting_ideal(back, i), fitting::fitting_ideal(l, i), 8));
}
