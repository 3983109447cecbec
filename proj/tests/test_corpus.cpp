#include <gtest/gtest.h>

#include <set>

#include "concentra/corpus.hpp"
#include "oracles.hpp"

using namespace concentra;

namespace {

double expected(const GeneratedExample& g, const std::string& quantity) {
  for (const auto& e : g.expected)
    if (e.quantity == quantity) return e.value;
  ADD_FAILURE() << g.name << " declares no '" << quantity << "'";
  return NAN;
}

double pth_power(const Element& x) { return std::pow(norm(x), x.space().p()); }

}  // namespace

TEST(Corpus, EveryExampleIsDeterministic) {
  for (const auto& name : example_names()) {
    const auto a = generate(name);
    const auto b = generate(name);
    EXPECT_EQ(a.name, name);
    ASSERT_EQ(a.seq.size(), b.seq.size()) << name;
    EXPECT_GE(a.seq.size(), 4u) << name;
    EXPECT_LT(a.seq.tail_start(), a.seq.size()) << name;
    EXPECT_EQ(a.scales.size(), a.seq.size()) << name;
    for (std::size_t k = 0; k < a.seq.size(); ++k) {
      ASSERT_EQ(a.seq[k].size(), b.seq[k].size());
      for (std::size_t i = 0; i < a.seq[k].size(); ++i) EXPECT_EQ(a.seq[k].coeffs()[i], b.seq[k].coeffs()[i]);
    }
    EXPECT_FALSE(a.expected.empty()) << name;
    EXPECT_FALSE(a.window_note.empty()) << name;
  }
}

TEST(Corpus, UnknownNameListsTheAvailableOnes) {
  try {
    generate("no-such-example");
    FAIL();
  } catch (const std::invalid_argument& e) {
    for (const auto& name : example_names()) EXPECT_NE(std::string(e.what()).find(name), std::string::npos);
  }
}

TEST(Corpus, EffectiveParametersAreReported) {
  const auto g = generate("bl-strict-03", {{"p", 6}});
  EXPECT_EQ(g.params.at("p"), 6.0);
  EXPECT_EQ(g.params.at("k"), 64.0);
  EXPECT_EQ(g.seq.space().p(), 6.0);
}

TEST(Corpus, ParameterErrors) {
  EXPECT_THROW(generate("bl-strict-03", {{"k", 48}}), std::invalid_argument);
  EXPECT_THROW(generate("linf-dyadic", {{"d", 9}}), std::invalid_argument);
  EXPECT_THROW(generate("Linfty-mass", {{"k", 0}}), std::invalid_argument);
  EXPECT_THROW(generate("bubbles", {{"k", 3}}), std::invalid_argument);
  EXPECT_THROW(generate("spreading-lp", {{"k", 0}}), std::invalid_argument);
}

TEST(Corpus, StrictBrezisLiebCrossTerm) {
  const auto g = generate("bl-strict-03");
  const Element one = Element::indicator(g.seq.space(), g.seq.space().window(), 1.0);
  for (std::size_t j = 0; j < g.seq.size(); ++j) {
    const Element d = g.seq[j] - one;
    double cross = 0.0;
    for (double c : d.coeffs()) cross += c * c * d.cell_width();
    EXPECT_NEAR(cross, oracle::bl_cross(g.scales[j]), 1e-12);
    EXPECT_NEAR(cross, expected(g, "int (u_k - 1)^2"), 1e-12);
    EXPECT_NEAR(pth_power(g.seq[j]) - pth_power(one) - pth_power(d), oracle::bl_margin(g.scales[j], 4.0), 1e-9);
  }
}

TEST(Corpus, NonadditiveNorms) {
  const auto g = generate("nonadditive-09");
  const Element c = Element::indicator(g.seq.space(), g.seq.space().window(), 2.0 / 3.0);
  ASSERT_EQ(g.companion.size(), g.seq.size());
  for (std::size_t j = 0; j < g.seq.size(); ++j) {
    EXPECT_NEAR(pth_power(g.seq[j]), expected(g, "||x_n||^4"), 1e-10);
    EXPECT_NEAR(pth_power(g.seq[j] + c), expected(g, "||x_n + 2/3||^4"), 1e-10);
    EXPECT_NEAR(g.seq[j].integral({0, 9}) / 9.0, expected(g, "weak limit"), 1e-14);
    EXPECT_NEAR(g.companion[j].integral({0, 9}), 0.0, 1e-14);
  }
}

TEST(Corpus, NonLowerSemicontinuityDrop) {
  const auto g = generate("nonlsc-L4");
  const Element& u = g.companion.at(0);
  EXPECT_NEAR(norm(u), std::pow(9.0, 0.25), 1e-14);
  for (std::size_t j = 0; j < g.seq.size(); ++j)
    EXPECT_NEAR(pth_power(u) - pth_power(g.seq[j]), expected(g, "||u||^4 - ||u_k||^4"), 1e-10);
  EXPECT_GT(expected(g, "||u||^4 - ||u_k||^4"), 0.0);
}

TEST(Corpus, SpreadingHasUnitNormAndShrinkingPeaks) {
  for (double p : {1.5, 2.0, 4.0}) {
    const auto g = generate("spreading-lp", {{"p", p}});
    for (std::size_t j = 0; j < g.seq.size(); ++j) {
      EXPECT_NEAR(norm(g.seq[j]), 1.0, 1e-12);
      EXPECT_NEAR(sup_norm(g.seq[j]), std::pow(g.scales[j], -1.0 / p), 1e-15);
    }
  }
}

TEST(Corpus, DyadicIntervalsAreSeparatedAndDistinct) {
  const auto g = generate("linf-dyadic");
  const int d = 5;
  ASSERT_EQ(g.anchors.size(), static_cast<std::size_t>(d));
  for (int k = 1; k <= d; ++k) {
    const auto& an = g.anchors[static_cast<std::size_t>(k - 1)];
    ASSERT_EQ(an.size(), std::size_t{1} << k);
    std::set<double> lengths;
    for (std::size_t j = 0; j < an.size(); ++j) {
      EXPECT_EQ(an[j], std::floor(an[j]));  // integer shifts
      const double len = static_cast<double>(j + 1) / std::ldexp(1.0, k);
      lengths.insert(len);
      if (j + 1 < an.size()) {
        EXPECT_GE(an[j + 1] - (an[j] + len), k);  // far apart
      }
      EXPECT_DOUBLE_EQ(g.seq[k - 1].integral({an[j], an[j] + len}), len);
    }
    EXPECT_EQ(lengths.size(), an.size());
  }
  EXPECT_EQ(expected(g, "distinct shift profiles at k = d"), 32.0);
  for (std::size_t j = 0; j < g.seq.size(); ++j) EXPECT_EQ(sup_norm(g.seq[j]), 1.0);
}

TEST(Corpus, LinftyMassHasConstantDensity) {
  const auto g = generate("Linfty-mass");
  for (std::size_t j = 0; j < g.seq.size(); ++j) {
    const double k = g.scales[j];
    const double h = std::ldexp(1.0, -static_cast<int>(k));
    EXPECT_DOUBLE_EQ(g.seq[j].integral({k, k + h}) / h, expected(g, "recentered unit-window average"));
    EXPECT_DOUBLE_EQ(g.seq[j].integral(g.seq.space().window()), 0.75 * h);
    EXPECT_EQ(sup_norm(g.seq[j]), 1.0);
  }
}

TEST(Corpus, BubblesAreDisjointWithoutNoise) {
  const auto g = generate("bubbles", {{"noise", 0}});
  ASSERT_EQ(g.paths.size(), 3u);
  ASSERT_EQ(g.profiles.size(), 3u);
  double sum = 0.0;
  for (int b = 0; b < 3; ++b) {
    EXPECT_NEAR(norm(g.profiles[b]), expected(g, "profile norm " + std::to_string(b + 1)), 1e-14);
    sum += pth_power(g.profiles[b]);
  }
  for (std::size_t j = 0; j < g.seq.size(); ++j) {
    EXPECT_NEAR(pth_power(g.seq[j]), sum, 1e-14);
    Element planted(g.seq.space());
    for (int b = 0; b < 3; ++b) planted += apply(g.paths[b][j], g.profiles[b]);
    EXPECT_LT(distance(planted, g.seq[j]), 1e-14);
  }
}

TEST(Corpus, BubbleNoiseHasTheDeclaredNorm) {
  const auto g = generate("bubbles");
  const auto quiet = generate("bubbles", {{"noise", 0}});
  for (std::size_t j = 0; j < g.seq.size(); ++j)
    EXPECT_NEAR(distance(g.seq[j], quiet.seq[j]), expected(g, "remainder norm"), 1e-14);
}
