#include <gtest/gtest.h>

#include <map>
#include <set>

#include "gradua/gradua.hpp"
#include "support.hpp"

using namespace gradua;
using gradua::testing::Rng;

namespace {

ChartPtr xy(unsigned wx, unsigned wy) { return Chart::make("V", {{"x", wx}, {"y", wy}}); }

Polynomial var(const ChartPtr& c, const char* name) { return Polynomial::variable(c, name); }

// Oracle: every monomial's weighted degree computed by hand from the exponents.
bool homogeneous_oracle(const Polynomial& f, unsigned r) {
  for (const auto& [m, c] : f.terms()) {
    unsigned d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * f.context()->weight(i);
    if (d != r) return false;
  }
  return true;
}

}  // namespace

TEST(Rational, LowestTermsAndParsing) {
  EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(to_string(Rational(6, -4)), "-3/2");
  EXPECT_THROW(parse_rational("1/0"), DomainError);
  EXPECT_EQ(factorial(5), 120);
}

TEST(Arith, WorkedExamples) {
  auto c = xy(1, 1);
  const auto x = var(c, "x"), y = var(c, "y");
  EXPECT_EQ((x + y) + (x - y), Rational(2) * x);
  EXPECT_EQ((x + y) * (x - y), x * x - y * y);
  EXPECT_TRUE((Rational(0) * (x * x)).is_zero());
  EXPECT_EQ((Rational(0) * (x * x)).size(), 0u);
}

TEST(Arith, ContextMismatchIsDomainError) {
  auto a = xy(1, 1);
  auto b = Chart::make("W", {{"u", 1}});
  EXPECT_THROW(var(a, "x") + var(b, "u"), DomainError);
  EXPECT_THROW(var(a, "x") * var(b, "u"), DomainError);
}

TEST(WeightedDegree, WorkedExamples) {
  auto c = Chart::make("V", {{"x", 1}});
  EXPECT_EQ(weighted_degree(Monomial{2}, *c), 2u);
  EXPECT_EQ(weighted_degree(Monomial{0}, *c), 0u);
  EXPECT_EQ(weighted_degree(Monomial{1, 1}, *xy(1, 2)), 3u);
  const std::vector<unsigned> w{1};
  EXPECT_THROW(weighted_degree(Monomial{1, 1}, std::span<const unsigned>(w)), DomainError);
}

TEST(HomogeneousComponents, WorkedExamples) {
  auto c = xy(1, 2);
  const auto x = var(c, "x"), y = var(c, "y");
  const auto comps = homogeneous_components(y + x * x + x);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps.at(1), x);
  EXPECT_EQ(comps.at(2), y + x * x);
  EXPECT_TRUE(homogeneous_components(Polynomial(c)).empty());

  auto w = Chart::make("W", {{"x1", 1}, {"x2", 1}, {"y", 2}});
  const auto f = var(w, "y") + var(w, "x1").pow(2);
  const auto cf = homogeneous_components(f);
  ASSERT_EQ(cf.size(), 1u);
  EXPECT_EQ(cf.at(2), f);
}

TEST(IsHomogeneous, WorkedExamples) {
  auto w = Chart::make("W", {{"x1", 1}, {"x2", 1}, {"y", 2}});
  EXPECT_TRUE(is_homogeneous(var(w, "y") + var(w, "x1").pow(2), 2));
  auto c = xy(1, 2);
  for (unsigned r = 0; r < 5; ++r) {
    EXPECT_FALSE(is_homogeneous(var(c, "x") + var(c, "y"), r));
    EXPECT_TRUE(is_homogeneous(Polynomial(c), r));
  }
}

TEST(EulerApply, WorkedExamples) {
  auto c = xy(1, 1);
  EXPECT_EQ(euler_apply(var(c, "x") * var(c, "y")), Rational(2) * var(c, "x") * var(c, "y"));
  auto d = xy(1, 2);
  const auto f = var(d, "x").pow(2) + var(d, "y");
  EXPECT_EQ(euler_apply(f), Rational(2) * f);
  EXPECT_TRUE(euler_apply(Polynomial::constant(d, 7)).is_zero());
}

TEST(Substitute, WorkedExamples) {
  auto w = Chart::make("W", {{"x1", 1}, {"x2", 1}, {"y", 2}});
  auto w2 = Chart::make("W'", {{"x1'", 1}, {"x2'", 1}, {"y'", 2}});
  const auto a = var(w2, "x1'"), b = var(w2, "x2'"), yp = var(w2, "y'");
  const auto f = var(w, "y") + var(w, "x1").pow(2);
  const auto g = substitute(f, std::map<std::string, Polynomial>{{"x1", a + b}, {"x2", a - b}, {"y", yp}});
  EXPECT_EQ(g, yp + a * a + b * b + Rational(2) * a * b);
  EXPECT_EQ(g.str(), "x1'^2 + 2*x1'*x2' + x2'^2 + y'");

  auto c = Chart::make("V", {{"x", 1}});
  const auto x = var(c, "x");
  EXPECT_EQ(substitute(x * x, std::map<std::string, Polynomial>{{"x", x + Polynomial::constant(c, 1)}}),
            x * x + Rational(2) * x + Polynomial::constant(c, 1));
  EXPECT_EQ(substitute(f, std::vector<Polynomial>{var(w, "x1"), var(w, "x2"), var(w, "y")}, w), f);
  EXPECT_THROW(substitute(f, std::map<std::string, Polynomial>{{"x1", a}}), DomainError);
}

TEST(Differentiate, WorkedExamples) {
  auto c = xy(1, 2);
  const auto x = var(c, "x"), y = var(c, "y");
  EXPECT_EQ(differentiate(x.pow(3), "x"), Rational(3) * x * x);
  const auto d = differentiate(y + x * x, "x");
  EXPECT_EQ(d, Rational(2) * x);
  EXPECT_TRUE(homogeneous_oracle(d, 1));
  EXPECT_TRUE(is_homogeneous(d, 1));
  EXPECT_TRUE(differentiate(x.pow(2) * y, "x", 4).is_zero());
  EXPECT_EQ(differentiate(x.pow(3), "x", 2), Rational(6) * x);
}

TEST(MonomialBasis, WorkedExamples) {
  auto c = xy(1, 2);
  const auto b = monomial_basis(*c, 2);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], (Monomial{2, 0}));
  EXPECT_EQ(b[1], (Monomial{0, 1}));
  const auto b0 = monomial_basis(*c, 0);
  ASSERT_EQ(b0.size(), 1u);
  EXPECT_EQ(b0[0], (Monomial{0, 0}));
  EXPECT_TRUE(monomial_basis(*Chart::make("V", {{"x", 2}}), 3).empty());
  EXPECT_THROW(monomial_basis(*Chart::make("V", {{"q", 0}, {"x", 1}}), 1), DomainError);
}

TEST(Printing, CanonicalOrder) {
  auto c = xy(1, 2);
  const auto x = var(c, "x"), y = var(c, "y");
  EXPECT_EQ((y + x * x + x + Polynomial::constant(c, 1)).str(), "x^2 + y + x + 1");
  EXPECT_EQ((Rational(1, 2) * x).str(), "1/2*x");
  EXPECT_EQ((Rational(-1) * x * y).str(), "-x*y");
  EXPECT_EQ(Polynomial(c).str(), "0");
}

// ---- properties -------------------------------------------------------------

TEST(WpolyProperty, ScalingAndEulerRoutesAgree) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto c = gradua::testing::chart_with_weights(
        {static_cast<unsigned>(rng.integer(0, 3)), static_cast<unsigned>(rng.integer(1, 3)),
         static_cast<unsigned>(rng.integer(1, 3))});
    Polynomial f = rng.coin() ? gradua::testing::random_homogeneous(rng, gradua::testing::chart_with_weights({1, 2, 3}), 4)
                              : gradua::testing::random_polynomial(rng, c, 4, 3, 5);
    for (unsigned r = 0; r <= 6; ++r) {
      // is_homogeneous throws EngineDefectError on disagreement.
      const bool v = is_homogeneous(f, r);
      EXPECT_EQ(v, homogeneous_oracle(f, r));
      EXPECT_EQ(detail::homogeneous_by_scaling(f, r), euler_apply(f) == Rational(r) * f);
    }
  }
}

TEST(WpolyProperty, EulerIsADerivation) {
  Rng rng(12);
  auto c = gradua::testing::chart_with_weights({0, 1, 2});
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = gradua::testing::random_polynomial(rng, c, 4, 3, 4);
    const auto g = gradua::testing::random_polynomial(rng, c, 4, 3, 4);
    EXPECT_EQ(euler_apply(f * g), euler_apply(f) * g + f * euler_apply(g));
  }
}

TEST(WpolyProperty, WeightedDegreeIsAdditive) {
  Rng rng(13);
  const std::vector<unsigned> w{0, 1, 2, 5};
  for (int trial = 0; trial < 200; ++trial) {
    Monomial a(4), b(4), s(4);
    for (std::size_t i = 0; i < 4; ++i) {
      a[i] = static_cast<unsigned>(rng.integer(0, 6));
      b[i] = static_cast<unsigned>(rng.integer(0, 6));
      s[i] = a[i] + b[i];
    }
    EXPECT_EQ(weighted_degree(s, std::span<const unsigned>(w)),
              weighted_degree(a, std::span<const unsigned>(w)) + weighted_degree(b, std::span<const unsigned>(w)));
  }
}

TEST(WpolyProperty, ComponentsReassemble) {
  Rng rng(14);
  auto c = gradua::testing::chart_with_weights({0, 1, 2});
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = gradua::testing::random_polynomial(rng, c, 6, 3, 5);
    Polynomial sum(c);
    Polynomial weighted(c);
    for (const auto& [r, comp] : homogeneous_components(f)) {
      EXPECT_FALSE(comp.is_zero());
      EXPECT_TRUE(is_homogeneous(comp, r));
      sum += comp;
      weighted += Rational(r) * comp;
    }
    EXPECT_EQ(sum, f);
    EXPECT_EQ(weighted, euler_apply(f));
  }
}

TEST(WpolyProperty, DerivativeLowersDegreeByWeight) {
  Rng rng(15);
  auto c = gradua::testing::chart_with_weights({1, 2, 3});
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned k = static_cast<unsigned>(rng.integer(0, 6));
    const auto f = gradua::testing::random_homogeneous(rng, c, k);
    for (std::size_t v = 0; v < 3; ++v) {
      const unsigned w = c->weight(v);
      const auto d = differentiate(f, v);
      if (k >= w) {
        EXPECT_TRUE(is_homogeneous(d, k - w));
      } else {
        EXPECT_TRUE(d.is_zero());
      }
    }
  }
}

TEST(WpolyProperty, MonomialBasisMatchesBruteForce) {
  for (const auto& weights : std::vector<std::vector<unsigned>>{{1, 2}, {1, 1, 2}, {2, 3}, {1, 2, 3}, {3}}) {
    for (unsigned k = 0; k <= 6; ++k) {
      std::set<Monomial> brute;
      Monomial m(weights.size(), 0);
      // Odometer over exponents bounded component-wise by k.
      for (;;) {
        unsigned d = 0;
        for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * weights[i];
        if (d == k) brute.insert(m);
        std::size_t i = 0;
        while (i < m.size() && m[i] == k) m[i++] = 0;
        if (i == m.size()) break;
        ++m[i];
      }
      const auto basis = monomial_basis(std::span<const unsigned>(weights), k);
      EXPECT_EQ(std::set<Monomial>(basis.begin(), basis.end()), brute);
      EXPECT_EQ(basis.size(), brute.size());
      for (std::size_t i = 1; i < basis.size(); ++i) {
        EXPECT_TRUE(canonical_before(basis[i - 1], basis[i], std::span<const unsigned>(weights)));
      }
    }
  }
}

TEST(WpolyProperty, RingLaws) {
  Rng rng(16);
  auto c = gradua::testing::chart_with_weights({1, 1, 2});
  for (int trial = 0; trial < 60; ++trial) {
    const auto f = gradua::testing::random_polynomial(rng, c, 4, 2, 3);
    const auto g = gradua::testing::random_polynomial(rng, c, 4, 2, 3);
    const auto h = gradua::testing::random_polynomial(rng, c, 4, 2, 3);
    EXPECT_EQ(f * (g + h), f * g + f * h);
    EXPECT_EQ((f * g) * h, f * (g * h));
    EXPECT_EQ(f * g, g * f);
    EXPECT_TRUE((f - f).is_zero());
    // Substitution is a ring homomorphism.
    std::vector<Polynomial> images;
    for (int i = 0; i < 3; ++i) images.push_back(gradua::testing::random_polynomial(rng, c, 3, 2, 2));
    EXPECT_EQ(substitute(f * g, images, c), substitute(f, images, c) * substitute(g, images, c));
    EXPECT_EQ(substitute(f + g, images, c), substitute(f, images, c) + substitute(g, images, c));
  }
}
