#pragma once

// Hand-rolled random generators for property tests. Every generator takes
// the Rng explicitly, so a failing case is reproducible from its seed.

#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gradua/gradua.hpp"

namespace gradua::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(integer(0, static_cast<long>(n) - 1)); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }

  // Small rationals with numerator in [-bound, bound] and denominator in [1, den].
  Rational rational(long bound = 5, long den = 3) {
    Rational q(integer(-bound, bound), integer(1, den));
    q.canonicalize();
    return q;
  }

  Rational nonzero_rational(long bound = 5, long den = 3) {
    for (;;) {
      Rational q = rational(bound, den);
      if (q != 0) return q;
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Chart with the given weights and names x0, x1, ...
inline ChartPtr chart_with_weights(const std::vector<unsigned>& weights, const std::string& name = "R",
                                   const std::string& prefix = "x") {
  std::vector<std::pair<std::string, unsigned>> vars;
  for (std::size_t i = 0; i < weights.size(); ++i) vars.emplace_back(prefix + std::to_string(i), weights[i]);
  return Chart::make(name, vars);
}

// Chart of rank d = (d_1, ..., d_n), coordinates ordered by weight.
inline ChartPtr chart_of_rank(const std::vector<std::size_t>& rank, const std::string& name = "R") {
  std::vector<unsigned> w;
  for (std::size_t r = 0; r < rank.size(); ++r) {
    for (std::size_t k = 0; k < rank[r]; ++k) w.push_back(static_cast<unsigned>(r + 1));
  }
  return chart_with_weights(w, name, "y");
}

// Random polynomial with up to `terms` terms, each exponent <= max_exp and
// total degree <= max_degree.
inline Polynomial random_polynomial(Rng& rng, const ChartPtr& chart, std::size_t terms, unsigned max_exp,
                                    unsigned max_degree) {
  Polynomial p(chart);
  const std::size_t count = static_cast<std::size_t>(rng.integer(0, static_cast<long>(terms)));
  for (std::size_t k = 0; k < count; ++k) {
    Monomial m(chart->size(), 0);
    unsigned left = max_degree;
    for (std::size_t i = 0; i < m.size() && left > 0; ++i) {
      const unsigned e = static_cast<unsigned>(rng.integer(0, std::min(max_exp, left)));
      m[i] = e;
      left -= e;
    }
    p.add_term(m, rng.rational());
  }
  return p;
}

// Random homogeneous polynomial of weighted degree r (weights >= 1 only).
inline Polynomial random_homogeneous(Rng& rng, const ChartPtr& chart, unsigned r, double density = 0.6) {
  Polynomial p(chart);
  for (const auto& m : monomial_basis(*chart, r)) {
    if (rng.coin(density)) p.add_term(m, rng.rational());
  }
  return p;
}

// Random invertible matrix: a product of random unit triangular factors and a
// diagonal with nonzero entries.
inline Matrix random_invertible(Rng& rng, std::size_t n) {
  Matrix lower = Matrix::identity(n);
  Matrix upper = Matrix::identity(n);
  Matrix diag = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag(i, i) = rng.nonzero_rational(3, 2);
    for (std::size_t j = 0; j < i; ++j) {
      lower(i, j) = rng.rational(2, 2);
      upper(j, i) = rng.rational(2, 2);
    }
  }
  Matrix m = lower * diag * upper;
  // Random row permutation.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.index(i);
    if (j == i - 1) continue;
    Matrix p = Matrix::identity(n);
    p(i - 1, i - 1) = 0;
    p(j, j) = 0;
    p(i - 1, j) = 1;
    p(j, i - 1) = 1;
    m = p * m;
  }
  return m;
}

// Random graded automorphism of a chart with positive weights: on each weight
// block an invertible linear map plus, if `corrections`, a random polynomial
// in lower-weight coordinates of the right degree.
inline PolyMap random_graded_automorphism(Rng& rng, const ChartPtr& chart, bool linear_blocks = true,
                                         bool corrections = true) {
  const std::size_t n = chart->size();
  std::vector<Polynomial> pullbacks(n, Polynomial(chart));
  for (unsigned r = 1; r <= chart->degree(); ++r) {
    std::vector<std::size_t> block;
    for (std::size_t i = 0; i < n; ++i) {
      if (chart->weight(i) == r) block.push_back(i);
    }
    if (block.empty()) continue;
    const Matrix a = linear_blocks ? random_invertible(rng, block.size()) : Matrix::identity(block.size());
    // Coordinates of weight < r, as a chart of their own for the corrections.
    std::vector<std::size_t> lower;
    std::vector<unsigned> lower_weights;
    for (std::size_t i = 0; i < n; ++i) {
      if (chart->weight(i) < r && chart->weight(i) > 0) {
        lower.push_back(i);
        lower_weights.push_back(chart->weight(i));
      }
    }
    for (std::size_t p = 0; p < block.size(); ++p) {
      Polynomial image(chart);
      for (std::size_t q = 0; q < block.size(); ++q) {
        if (a(p, q) != 0) image += a(p, q) * Polynomial::variable(chart, block[q]);
      }
      if (corrections && !lower.empty()) {
        for (const auto& k : monomial_basis(std::span<const unsigned>(lower_weights), r)) {
          if (!rng.coin(0.5)) continue;
          Monomial m(n, 0);
          for (std::size_t j = 0; j < lower.size(); ++j) m[lower[j]] = k[j];
          image.add_term(m, rng.rational());
        }
      }
      pullbacks[block[p]] = std::move(image);
    }
  }
  return PolyMap(chart, chart, std::move(pullbacks));
}

// A standard action conjugated by C = psi o L (apply L, then psi):
// h_t = C^{-1} o std_t o C on a weightless copy of the chart.
struct ConjugatedAction {
  ChartPtr standard;     // chart with the true weights
  ChartPtr space;        // chart the action lives on (all weights 0)
  PolyMap conjugator;    // space -> standard
  PolyMap conjugator_inverse;
  ActionFamily action;
};

inline ConjugatedAction random_conjugated_action(Rng& rng, const std::vector<std::size_t>& rank) {
  ConjugatedAction out;
  out.standard = chart_of_rank(rank, "Y");
  const std::size_t n = out.standard->size();
  out.space = chart_with_weights(std::vector<unsigned>(n, 0), "X", "x");
  const Matrix l = random_invertible(rng, n);
  const PolyMap lin = linear_map(out.space, out.standard, l);
  const PolyMap lin_inv = linear_map(out.standard, out.space, l.inverse());
  const PolyMap psi = random_graded_automorphism(rng, out.standard, false, true);
  const PolyMap psi_inv = invert_automorphism(psi);
  out.conjugator = compose(lin, psi);
  out.conjugator_inverse = compose(psi_inv, lin_inv);
  out.action = conjugate(standard_action(out.standard), out.conjugator, out.conjugator_inverse);
  return out;
}

// Random polynomial map between charts of the given sizes.
inline PolyMap random_map(Rng& rng, const ChartPtr& source, const ChartPtr& target, std::size_t terms,
                          unsigned max_degree) {
  std::vector<Polynomial> pullbacks;
  for (std::size_t j = 0; j < target->size(); ++j) {
    pullbacks.push_back(random_polynomial(rng, source, terms, max_degree, max_degree));
  }
  return PolyMap(source, target, std::move(pullbacks));
}

// Weight multiset of a chart, sorted.
inline std::vector<unsigned> sorted_weights(const Chart& chart) {
  auto w = chart.weights();
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace gradua::testing
