#include <gtest/gtest.h>

#include "gradua/gradua.hpp"
#include "support.hpp"

using namespace gradua;
using gradua::testing::Rng;

namespace {

ChartPtr line() { return Chart::make("M", {{"x", 0}}); }

// Oracle: the order-k pullback of a univariate map is D^k(phi(x)), with D the
// total derivative D(x'j) = x'(j+1) applied by the chain rule.
std::vector<Polynomial> chain_rule_oracle(const Polynomial& phi, unsigned r) {
  const ChartPtr jets = tangent_chart(phi.context(), r);
  std::vector<Polynomial> out{embed(phi, jets)};
  for (unsigned k = 1; k <= r; ++k) {
    Polynomial d(jets);
    const Polynomial& prev = out.back();
    for (unsigned j = 0; j < r; ++j) {
      d += differentiate(prev, j) * Polynomial::variable(jets, j + 1);
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace

TEST(TangentChart, NamesWeightsAndOrder) {
  const auto base = Chart::make("M", {{"x", 0}, {"y", 0}});
  const auto t2 = tangent_chart(base, 2);
  std::vector<std::string> names;
  for (const auto& v : t2->variables()) names.push_back(v.name);
  EXPECT_EQ(names, (std::vector<std::string>{"x", "y", "x'1", "y'1", "x'2", "y'2"}));
  EXPECT_EQ(t2->weights(), (std::vector<unsigned>{0, 0, 1, 1, 2, 2}));
  const auto graded = tangent_chart(Chart::make("V", {{"x", 1}}), 1);
  EXPECT_EQ(graded->weights(), (std::vector<unsigned>{1, 2}));
}

TEST(Prolong, WorkedExamples) {
  const auto m = line();
  const auto x = Polynomial::variable(m, 0);
  EXPECT_TRUE(prolong(PolyMap::identity(m), 3).is_identity());

  const auto p = prolong(PolyMap(m, m, {x * x}), 2);
  const auto& s = p.source();
  const auto X = Polynomial::variable(s, "x"), X1 = Polynomial::variable(s, "x'1"), X2 = Polynomial::variable(s, "x'2");
  EXPECT_EQ(p.pullback("x"), X * X);
  EXPECT_EQ(p.pullback("x'1"), Rational(2) * X * X1);
  EXPECT_EQ(p.pullback("x'2"), Rational(2) * X1 * X1 + Rational(2) * X * X2);
}

TEST(Prolong, FirstOrderRowIsTheJacobian) {
  Rng rng(41);
  const auto m = Chart::make("M", {{"a", 0}, {"b", 0}});
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = gradua::testing::random_map(rng, m, m, 4, 3);
    const auto p = prolong(phi, 2);
    const auto& s = p.source();
    for (std::size_t j = 0; j < 2; ++j) {
      Polynomial expected(s);
      for (std::size_t b = 0; b < 2; ++b) {
        expected += embed(differentiate(phi.pullback(j), b), s) * Polynomial::variable(s, 2 + b);
      }
      EXPECT_EQ(p.pullback(2 + j), expected);
    }
  }
}

TEST(Prolong, HessianTermsCarryNoHalf) {
  // x'2 of phi = x^2 is 2 x'1^2 + 2 x x'2: the Taylor definition, not 1/2 of the Hessian sum.
  const auto m = line();
  const auto x = Polynomial::variable(m, 0);
  const auto p = prolong(PolyMap(m, m, {x * x}), 2);
  const auto X1 = Polynomial::variable(p.source(), "x'1");
  Monomial sq(p.source()->size(), 0);
  sq[1] = 2;
  EXPECT_EQ(p.pullback("x'2").coefficient(sq), 2);
  (void)X1;
}

TEST(JetAction, WorkedExamples) {
  const auto m = line();
  const auto h1 = jet_action(tangent_chart(m, 1));
  EXPECT_EQ(h1.entry(1).str(), "x'1*t");
  const auto h2 = jet_action(tangent_chart(m, 2));
  EXPECT_EQ(h2.entry(0).str(), "x");
  EXPECT_EQ(h2.entry(1).str(), "x'1*t");
  EXPECT_EQ(h2.entry(2).str(), "x'2*t^2");
  EXPECT_EQ(h2, standard_action(tangent_chart(m, 2)));
  const auto h0 = h2.at(0);
  EXPECT_EQ(compose(h0, jet_projection(0, tangent_chart(m, 2))).pullbacks().size(), 1u);
  EXPECT_TRUE(h0.pullback(1).is_zero() && h0.pullback(2).is_zero());
  EXPECT_THROW(jet_action(m), DomainError);
}

TEST(Iota, WorkedExamples) {
  const auto m = line();
  EXPECT_TRUE(iota(1, m).is_identity());
  const auto i2 = iota(2, m);
  const auto& s = i2.source();
  EXPECT_EQ(i2.pullback("x"), Polynomial::variable(s, "x"));
  EXPECT_TRUE(i2.pullback("x'1").is_zero());
  EXPECT_EQ(i2.pullback("x'2"), Polynomial::variable(s, "x'1"));
  EXPECT_THROW(iota(0, m), DomainError);
}

TEST(Iota, IntertwinesScalingWithJetAction) {
  // iota_k(t^k v) = t . iota_k(v): iota o (t^k on TM) == (jet action) o iota.
  const auto m = Chart::make("M", {{"x", 0}, {"y", 0}});
  for (unsigned k = 1; k <= 4; ++k) {
    const auto i = iota(k, m);
    const auto tm = tangent_chart(m, 1);
    const auto ctx = tm->with_parameters({"t"});
    std::vector<Polynomial> entries;
    for (std::size_t a = 0; a < tm->size(); ++a) {
      entries.push_back(Polynomial::variable(ctx, a) *
                        (a < m->size() ? Polynomial::constant(ctx, 1) : Polynomial::variable(ctx, "t").pow(k)));
    }
    const ActionFamily scale(tm, "t", entries);
    EXPECT_TRUE(intertwines(i, scale, jet_action(tangent_chart(m, k))));
  }
}

TEST(JetProjection, WorkedExamples) {
  const auto m = line();
  const auto q = jet_projection(1, tangent_chart(m, 2));
  EXPECT_EQ(q.target()->size(), 2u);
  EXPECT_EQ(q.pullback("x'1"), Polynomial::variable(q.source(), "x'1"));
  EXPECT_TRUE(compatible(q.target(), tangent_chart(m, 1)));
  EXPECT_TRUE(jet_projection(2, tangent_chart(m, 2)).is_identity());
  EXPECT_THROW(jet_projection(3, tangent_chart(m, 2)), DomainError);
}

TEST(ProlongAction, WorkedExamples) {
  const auto v = Chart::make("V", {{"x", 1}});
  const auto th = prolong_action(standard_action(v), 1);
  EXPECT_EQ(th.entry(0).str(), "x*t");
  EXPECT_EQ(th.entry(1).str(), "x'1*t");
  EXPECT_TRUE(check_commuting(th, jet_action(th.space(), "u")).commute);

  const auto p = Chart::make("P", {{"x", 0}, {"y", 0}});
  const auto ctx = p->with_parameters({"t"});
  const auto x = Polynomial::variable(ctx, "x"), y = Polynomial::variable(ctx, "y"), t = Polynomial::variable(ctx, "t");
  const ActionFamily mixed(p, "t", {t * x, t * t * y + (t - t * t) * x});
  const auto tm = prolong_action(mixed, 1);
  EXPECT_TRUE(verify_laws(tm).monoid);
  EXPECT_TRUE(check_commuting(tm, jet_action(tm.space())).commute);
  // t = 0 slice equals the prolongation of h_0.
  EXPECT_EQ(tm.at(0), prolong(mixed.at(0), 1));
}

// ---- properties -------------------------------------------------------------

TEST(JetsProperty, FunctorialityDegreeAndEquivariance) {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
    const auto m = gradua::testing::chart_with_weights(std::vector<unsigned>(n, 0), "M", "x");
    const auto phi = gradua::testing::random_map(rng, m, m, 3, 3);
    const auto psi = gradua::testing::random_map(rng, m, m, 3, 3);
    const unsigned r = static_cast<unsigned>(rng.integer(1, 3));
    const auto lhs = prolong(compose(phi, psi), r);
    EXPECT_EQ(lhs, compose(prolong(phi, r), prolong(psi, r)));
    EXPECT_TRUE(is_graded_morphism(lhs));
    const auto j = jet_action(lhs.source());
    EXPECT_TRUE(intertwines(lhs, j, jet_action(lhs.target())));
  }
}

TEST(JetsProperty, ChainRuleOracleUnivariate) {
  Rng rng(43);
  const auto m = line();
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = gradua::testing::random_polynomial(rng, m, 4, 4, 4);
    for (unsigned r = 1; r <= 4; ++r) {
      const auto p = prolong(PolyMap(m, m, {phi}), r);
      const auto oracle = chain_rule_oracle(phi, r);
      for (unsigned k = 0; k <= r; ++k) EXPECT_EQ(p.pullback(k), oracle[k]);
    }
  }
}

TEST(JetsProperty, ProjectionNaturality) {
  Rng rng(44);
  const auto m = Chart::make("M", {{"a", 0}, {"b", 0}});
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = gradua::testing::random_map(rng, m, m, 3, 3);
    const unsigned n = 3;
    for (unsigned r = 0; r <= n; ++r) {
      const auto qs = jet_projection(r, tangent_chart(m, n));
      EXPECT_EQ(compose(prolong(phi, n), jet_projection(r, tangent_chart(m, n))), compose(qs, prolong(phi, r)));
    }
  }
}
