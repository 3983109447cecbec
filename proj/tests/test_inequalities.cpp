#include <gtest/gtest.h>

#include <random>

#include "concentra/concentra.hpp"
#include "oracles.hpp"

using namespace concentra;

TEST(Elementary, MatchesDirectFormula) {
  for (double p : {1.5, 2.5, 3.0, 4.0, 6.0})
    for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 7.5}) {
      EXPECT_NEAR(elementary_f(p, t, Branch::Plus), oracle::f_plus(p, t), 1e-12 * (1 + std::pow(1 + t, p)));
      if (t <= 1.0) {
        EXPECT_NEAR(elementary_f(p, t, Branch::Minus), oracle::f_minus(p, t), 1e-12);
      }
    }
}

TEST(Elementary, EqualityAtOneForCubes) {
  EXPECT_NEAR(elementary_f(3.0, 1.0, Branch::Plus), 0.0, 1e-15);
  EXPECT_EQ(elementary_f(3.0, 0.0, Branch::Plus), 0.0);
}

TEST(Elementary, DomainErrors) {
  EXPECT_THROW(elementary_f(1.0, 0.5, Branch::Plus), std::domain_error);
  EXPECT_THROW(elementary_f(3.0, -0.5, Branch::Plus), std::domain_error);
  EXPECT_THROW(elementary_f(3.0, 1.5, Branch::Minus), std::domain_error);
  EXPECT_THROW(elementary_scan(3.0, Branch::Plus, 1.0, 0.0), std::invalid_argument);
}

TEST(Elementary, ScanNonnegativeForPAtLeastThree) {
  for (double p : {3.0, 3.5, 4.0, 6.0}) {
    const auto plus = elementary_scan(p, Branch::Plus, 10.0, 1e-3);
    EXPECT_EQ(plus.points, 10001u);
    EXPECT_GE(plus.min_value, -1e-9) << "p=" << p;
    EXPECT_GE(elementary_scan(p, Branch::Minus, 1.0, 1e-3).min_value, -1e-9) << "p=" << p;
  }
}

TEST(Elementary, ScanFindsAWitnessBelowThree) {
  const auto r = elementary_scan(2.5, Branch::Plus, 10.0, 1e-3);
  EXPECT_LT(r.min_value, -0.1);
  EXPECT_NEAR(r.min_value, oracle::f_plus(2.5, r.argmin), 1e-12);
}

TEST(Property, ElementaryInequalityOnRandomPoints) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pd(3.0, 8.0), td(0.0, 20.0);
  for (int i = 0; i < 2000; ++i) {
    const double p = pd(rng), t = td(rng);
    EXPECT_GE(elementary_f(p, t, Branch::Plus), -1e-9 * std::pow(1 + t, p)) << p << " " << t;
  }
}

// ---------------------------------------------------------------------------

TEST(BrezisLieb, StrictMarginMatchesDirectSum) {
  const auto g = generate("bl-strict-03");
  const Element one = Element::indicator(g.seq.space(), g.seq.space().window(), 1.0);
  const auto r = bl_lower_bound(g.seq, one);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.margin, oracle::bl_margin(64, 4.0), 1e-9);
  EXPECT_NEAR(r.margin, 12.0, 1e-2);
  const Element last = g.seq[g.seq.size() - 1] - one;
  double cross = 0.0;
  for (double c : last.coeffs()) cross += c * c * last.cell_width();
  EXPECT_NEAR(cross, oracle::bl_cross(64), 1e-12);
}

TEST(BrezisLieb, HypothesesAreCheckedWithADictionary) {
  const auto g = generate("bl-strict-03");
  const Element one = Element::indicator(g.seq.space(), g.seq.space().window(), 1.0);
  EXPECT_FALSE(bl_lower_bound(g.seq, one).warnings.empty());  // no dictionary
  InequalityOptions opt;
  opt.dict = TestDictionary::dyadic(g.seq.space(), 3);
  EXPECT_TRUE(bl_lower_bound(g.seq, one, opt).warnings.empty());
  const Element zero(g.seq.space());
  EXPECT_FALSE(bl_lower_bound(g.seq, zero, opt).warnings.empty());
}

TEST(BrezisLieb, WarnsBelowCubes) {
  const auto g = generate("bl-strict-03", {{"p", 2.5}});
  const Element one = Element::indicator(g.seq.space(), g.seq.space().window(), 1.0);
  const auto r = bl_lower_bound(g.seq, one);
  EXPECT_NE(std::find_if(r.warnings.begin(), r.warnings.end(),
                         [](const std::string& w) { return w.find("p < 3") != std::string::npos; }),
            r.warnings.end());
}

TEST(HilbertIdentity, NonadditiveExampleAtPTwo) {
  const auto g = generate("nonadditive-09", {{"p", 2.0}});
  const auto dict = TestDictionary::dyadic(g.seq.space(), 3);
  const Element u = weak_limit_estimate(g.seq, dict).limit;
  InequalityOptions opt;
  opt.dict = dict;
  const auto r = hilbert_identity(g.seq, u, opt);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.margin, 0.0, 1e-12);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_THROW(hilbert_identity(generate("nonadditive-09").seq, u), std::invalid_argument);
}

TEST(EnergyBounds, ConstantSequence) {
  const Space s = Space::sequence(3.0, 0, 3);
  const Element u(s, 0, {0.5, -0.3, 0.2, 0.1});
  const Seq seq(std::vector<Element>(6, u), 2);
  const double d = modulus_of_convexity(3.0, norm(u));
  const auto a = delta_energy_bound(seq, u);
  EXPECT_TRUE(a.holds);
  EXPECT_NEAR(a.margin, norm(u) - d, 1e-15);
  const auto b = weak_lsc_bound(seq, u);
  EXPECT_TRUE(b.holds);
  EXPECT_NEAR(b.margin, 0.0, 1e-15);
}

TEST(EnergyBounds, RejectUnnormalizedInput) {
  const Space s = Space::sequence(3.0, 0, 1);
  const Element x(s, 0, {1.0, 1.0});
  const Seq seq(std::vector<Element>(4, x), 0);
  EXPECT_THROW(delta_energy_bound(seq, Element(s)), std::invalid_argument);
  EXPECT_THROW(weak_lsc_bound(seq, Element(s)), std::invalid_argument);
  EXPECT_THROW(delta_energy_bound(Seq(std::vector<Element>(4, Element(s)), 0), 2.0 * x),
               std::invalid_argument);
}

TEST(EnergyBounds, SpaceMismatch) {
  const Space s = Space::sequence(3.0, 0, 1);
  const Seq seq(std::vector<Element>(4, Element(s)), 0);
  EXPECT_THROW(bl_lower_bound(seq, Element(Space::sequence(3.0, 0, 2))), std::invalid_argument);
}

TEST(NonAdditivity, CubesVanishButTheirSumDoesNot) {
  const auto r = nonadditivity_demo();
  EXPECT_DOUBLE_EQ(r.limit_constant, -3.0);
  EXPECT_TRUE(r.x3_null);
  EXPECT_TRUE(r.y3_null);
  EXPECT_TRUE(r.sum_nonzero);
  for (double m : r.mean_x3) EXPECT_NEAR(m, 0.0, 1e-12);
  for (double m : r.mean_y3) EXPECT_NEAR(m, 0.0, 1e-12);
  EXPECT_NEAR(r.mean_sum3.back(), -3.0, 1e-12);
  EXPECT_THROW(nonadditivity_demo({}), std::invalid_argument);
}

TEST(NonAdditivity, SignedPower) {
  const Space s = Space::sequence(2.0, 0, 2);
  const Element x(s, 0, {-2.0, 0.0, 3.0});
  const Element y = signed_power(x, 3.0);
  EXPECT_EQ(y.coeffs()[0], -8.0);
  EXPECT_EQ(y.coeffs()[1], 0.0);
  EXPECT_EQ(y.coeffs()[2], 27.0);
}
