#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "imprint/anticipatory_dynamics.hpp"
#include "imprint/errors.hpp"

namespace imprint::dynamics {
namespace {

TEST(RecursiveStep, Examples) {
  EXPECT_EQ(recursive_step(2.0, 0.5), 0.5);
  EXPECT_EQ(recursive_step(4.0, 0.5), 1.0);
  EXPECT_NEAR(recursive_step(3.7, 0.2), 0.592, 1e-15);
}

TEST(IncursiveStep, Examples) {
  EXPECT_NEAR(incursive_step(4.0, 0.75), 0.75, 1e-15);
  EXPECT_EQ(incursive_step(2.0, 0.0), 0.0);
  EXPECT_NEAR(incursive_step(2.0, 0.5), 0.5, 1e-15);
  EXPECT_THROW(incursive_step(0.0, 0.5), DomainError);
}

TEST(HyperIncursiveStep, Examples) {
  EXPECT_EQ(hyper_incursive_step(4.0, 0.0, true), 1.0);
  EXPECT_EQ(hyper_incursive_step(4.0, 0.0, false), 0.0);
  EXPECT_EQ(hyper_incursive_step(4.0, 1.0, true), 0.5);
  EXPECT_EQ(hyper_incursive_step(4.0, 1.0, false), 0.5);
  EXPECT_NEAR(hyper_incursive_step(4.0, 0.75, true), 0.75, 1e-15);
  EXPECT_NEAR(hyper_incursive_step(4.0, 0.75, false), 0.25, 1e-15);
}

TEST(HyperIncursiveStep, ComplexRootNamesItsInputs) {
  try {
    hyper_incursive_step(3.0, 0.9, true);
    FAIL() << "expected ComplexRootError";
  } catch (const ComplexRootError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("a=3"), std::string::npos) << what;
    EXPECT_NE(what.find("x=0.9"), std::string::npos) << what;
    EXPECT_NE(what.find("discriminant"), std::string::npos) << what;
  }
}

TEST(SteadyState, Examples) {
  EXPECT_EQ(steady_state_incursive(4.0), 0.75);
  EXPECT_EQ(steady_state_incursive(1.0), 0.0);
  EXPECT_EQ(steady_state_incursive(2.0), 0.5);
}

TEST(Simulate, IncursiveReachesSteadyState) {
  const auto tr = simulate({5.0, 0.3, 200}, Variant::incursive);
  ASSERT_EQ(tr.values.size(), 201u);
  EXPECT_EQ(tr.values.front(), 0.3);
  EXPECT_NEAR(tr.values.back(), 0.8, 1e-9);
  EXPECT_FALSE(tr.decisions.has_value());

  // Oracle: solve the implicit form y = a x (1 - y) by bisection each step,
  // never using the solved expression.
  double x = 0.3;
  for (int t = 0; t < 200; ++t) {
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (mid - 5.0 * x * (1.0 - mid) > 0.0 ? hi : lo) = mid;
    }
    x = 0.5 * (lo + hi);
  }
  EXPECT_NEAR(tr.values.back(), x, 1e-9);
}

TEST(Simulate, HyperIncursiveConstantOnAllPlusDecisions) {
  const auto tr = simulate({4.0, 0.75, 10}, Variant::hyper_incursive, std::vector<bool>(10, true));
  ASSERT_EQ(tr.values.size(), 11u);
  for (double v : tr.values) EXPECT_NEAR(v, 0.75, 1e-12);
  ASSERT_TRUE(tr.decisions.has_value());
  EXPECT_EQ(tr.decisions->size(), 10u);
  EXPECT_FALSE(tr.truncated);
}

TEST(Simulate, RecursiveFixedPoint) {
  for (std::size_t steps : {1u, 7u, 100u}) {
    const auto tr = simulate({2.0, 0.5, steps}, Variant::recursive);
    ASSERT_EQ(tr.values.size(), steps + 1);
    for (double v : tr.values) EXPECT_EQ(v, 0.5);
  }
}

TEST(Simulate, ExplicitDecisionsTakePrecedenceAndAreChecked) {
  const std::vector<bool> bits{true, false, true, true, false};
  const auto tr = simulate({4.0, 0.3, 5}, Variant::hyper_incursive, bits);
  EXPECT_EQ(*tr.decisions, bits);
  EXPECT_THROW(simulate({4.0, 0.3, 6}, Variant::hyper_incursive, bits), DomainError);
}

TEST(Simulate, SeededDecisionsAreReproducible) {
  const auto a = simulate({4.5, 0.2, 50}, Variant::hyper_incursive, std::uint64_t{99});
  const auto b = simulate({4.5, 0.2, 50}, Variant::hyper_incursive, std::uint64_t{99});
  const auto c = simulate({4.5, 0.2, 50}, Variant::hyper_incursive, std::uint64_t{100});
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(*a.decisions, *b.decisions);
  EXPECT_NE(*a.decisions, *c.decisions);
}

TEST(Simulate, ComplexRootTruncatesInsteadOfThrowing) {
  const auto tr = simulate({3.0, 0.9, 10}, Variant::hyper_incursive, std::uint64_t{1});
  EXPECT_TRUE(tr.truncated);
  EXPECT_EQ(tr.values.size(), 1u);
  EXPECT_TRUE(tr.decisions->empty());
  EXPECT_NE(tr.truncation_reason.find("complex"), std::string::npos);

  // a < 4 survives a few steps from a small state before x outgrows a/4.
  const auto later = simulate({3.0, 0.1, 50}, Variant::hyper_incursive, std::vector<bool>(50, true));
  EXPECT_TRUE(later.truncated);
  EXPECT_GT(later.values.size(), 1u);
  EXPECT_EQ(later.decisions->size(), later.values.size() - 1);
}

TEST(Simulate, RejectsBadParams) {
  EXPECT_THROW(simulate({2.0, 1.5, 3}, Variant::recursive), DomainError);
  EXPECT_THROW(simulate({2.0, -0.1, 3}, Variant::recursive), DomainError);
  EXPECT_THROW(simulate({2.0, 0.5, 0}, Variant::recursive), DomainError);
  EXPECT_THROW(simulate({0.0, 0.5, 3}, Variant::incursive), DomainError);
}

TEST(Simulate, RecursiveEscapeIsFlagged) {
  const auto tr = simulate({4.5, 0.5, 5}, Variant::recursive);
  EXPECT_TRUE(tr.out_of_range);
  EXPECT_FALSE(simulate({4.0, 0.3, 100}, Variant::recursive).out_of_range);
}

TEST(Variant, Names) {
  EXPECT_EQ(parse_variant("hyper_incursive"), Variant::hyper_incursive);
  EXPECT_EQ(parse_variant("hyper-incursive"), Variant::hyper_incursive);
  EXPECT_EQ(to_string(parse_variant("incursive")), "incursive");
  EXPECT_THROW(parse_variant("chaotic"), DomainError);
}

TEST(DynamicsProperties, HyperIncursiveInvertsTheLogisticMap) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> ua(4.0, 20.0), u01(0.0, 1.0);
  for (int rep = 0; rep < 10000; ++rep) {
    const double a = ua(rng);
    const double x = u01(rng) * a / 4.0;
    for (bool d : {false, true}) {
      const double y = hyper_incursive_step(a, x, d);
      EXPECT_NEAR(a * y * (1.0 - y), x, 1e-9) << "a=" << a << " x=" << x << " d=" << d;
    }
  }
}

TEST(DynamicsProperties, RootOrdering) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> ua(0.5, 20.0), u01(0.0, 1.0);
  for (int rep = 0; rep < 5000; ++rep) {
    const double a = ua(rng);
    const double x = u01(rng) * std::min(1.0, a / 4.0);
    EXPECT_GE(hyper_incursive_step(a, x, true), hyper_incursive_step(a, x, false));
  }
  // Zero discriminant gives the double root.
  EXPECT_EQ(hyper_incursive_step(8.0, 2.0, true), hyper_incursive_step(8.0, 2.0, false));
}

TEST(DynamicsProperties, IncursiveFixedPoint) {
  for (double a : {1.5, 2.0, 3.0, 4.0, 5.0, 10.0}) {
    const double s = steady_state_incursive(a);
    EXPECT_LE(std::abs(incursive_step(a, s) - s), 1e-12) << "a=" << a;
  }
}

TEST(DynamicsProperties, IncursiveConvergesFromAnyStart) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ua(1.1, 10.0), u01(0.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    const double a = ua(rng);
    const double x0 = 1.0 - u01(rng);  // (0, 1]
    const auto tr = simulate({a, x0, 10000}, Variant::incursive);
    EXPECT_NEAR(tr.values.back(), (a - 1.0) / a, 1e-9) << "a=" << a << " x0=" << x0;
  }
}

TEST(DynamicsProperties, RecursiveStaysInUnitInterval) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> ua(0.0, 4.0), u01(0.0, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    const auto tr = simulate({ua(rng), u01(rng), 200}, Variant::recursive);
    EXPECT_FALSE(tr.out_of_range);
    for (double v : tr.values) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(TrajectoryCsv, Format) {
  const auto tr = simulate({4.0, 0.75, 2}, Variant::hyper_incursive, std::vector<bool>{true, false});
  EXPECT_EQ(to_csv(tr), "t,x,decision\n0,0.75,1\n1,0.75,0\n2,0.25,\n");
  const auto rec = simulate({2.0, 0.5, 1}, Variant::recursive);
  EXPECT_EQ(to_csv(rec, true), "a,t,x,decision\n2,0,0.5,\n2,1,0.5,\n");
  EXPECT_EQ(to_csv(rec, false, false), "0,0.5,\n1,0.5,\n");
}

}  // namespace
}  // namespace imprint::dynamics
