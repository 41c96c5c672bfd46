#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gradua/chart.hpp"
#include "gradua/errors.hpp"
#include "gradua/rational.hpp"

namespace gradua {

// Dense exponent vector over the coordinates of a chart; index i is the
// exponent of coordinate i. A zero exponent means the coordinate is absent.
using Monomial = std::vector<unsigned>;

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (unsigned e : m) {
      h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

// <w|k> = sum_j w_j k_j.
inline unsigned weighted_degree(const Monomial& k, std::span<const unsigned> weights) {
  unsigned d = 0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] == 0) continue;
    if (j >= weights.size()) throw DomainError("weighted_degree: exponent on a coordinate without a weight");
    d += weights[j] * k[j];
  }
  return d;
}

inline unsigned weighted_degree(const Monomial& k, const Chart& chart) {
  const auto w = chart.weights();
  return weighted_degree(k, w);
}

// Canonical monomial order: higher weighted degree first, then lexicographic
// (a larger exponent on an earlier coordinate comes first).
inline bool canonical_before(const Monomial& a, const Monomial& b, std::span<const unsigned> weights) {
  const unsigned da = weighted_degree(a, weights);
  const unsigned db = weighted_degree(b, weights);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  // Zero polynomial without a context; only useful as a placeholder.
  Polynomial() = default;
  explicit Polynomial(ChartPtr context) : context_(std::move(context)) {
    if (!context_) throw DomainError("polynomial needs a chart context");
  }

  static Polynomial constant(ChartPtr context, const Rational& c) {
    Polynomial p(std::move(context));
    if (c != 0) p.terms_.emplace(Monomial(p.context_->size(), 0), c);
    return p;
  }

  static Polynomial variable(ChartPtr context, std::size_t index) {
    Polynomial p(std::move(context));
    if (index >= p.context_->size()) throw DomainError("variable index out of range");
    Monomial m(p.context_->size(), 0);
    m[index] = 1;
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
  }

  static Polynomial variable(ChartPtr context, std::string_view name) {
    const auto i = context->require_index(name);
    return variable(std::move(context), i);
  }

  static Polynomial monomial(ChartPtr context, Monomial m, const Rational& c) {
    Polynomial p(std::move(context));
    if (m.size() != p.context_->size()) throw DomainError("monomial length does not match the chart");
    if (c != 0) p.terms_.emplace(std::move(m), c);
    return p;
  }

  // Builds from raw terms, merging duplicates and dropping zeros.
  static Polynomial from_terms(ChartPtr context, const std::vector<std::pair<Monomial, Rational>>& terms) {
    Polynomial p(std::move(context));
    for (const auto& [m, c] : terms) p.add_term(m, c);
    return p;
  }

  const ChartPtr& context() const { return context_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && gradua::total_degree(terms_.begin()->first) == 0);
  }

  Rational constant_term() const { return coefficient(Monomial(context_ ? context_->size() : 0, 0)); }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    if (m.size() != context_->size()) throw DomainError("monomial length does not match the chart");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, gradua::total_degree(m));
    return d;
  }

  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.at(var));
    return d;
  }

  bool uses(std::size_t var) const {
    for (const auto& [m, c] : terms_) {
      if (m.at(var) != 0) return true;
    }
    return false;
  }

  Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != context_->size()) throw DomainError("evaluation point has the wrong dimension");
    Rational sum(0);
    for (const auto& [m, c] : terms_) {
      Rational term = c;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] != 0) term *= power(point[i], m[i]);
      }
      sum += term;
    }
    return sum;
  }

  // Terms sorted in the canonical monomial order of the context's weights.
  std::vector<std::pair<Monomial, Rational>> canonical_terms() const {
    std::vector<std::pair<Monomial, Rational>> out(terms_.begin(), terms_.end());
    const auto w = context_ ? context_->weights() : std::vector<unsigned>{};
    std::sort(out.begin(), out.end(),
              [&](const auto& a, const auto& b) { return canonical_before(a.first, b.first, w); });
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : canonical_terms()) {
      const bool negative = c < 0;
      const Rational magnitude = abs(c);
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      std::string factors;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!factors.empty()) factors += "*";
        factors += context_->var(i).name;
        if (m[i] > 1) factors += "^" + std::to_string(m[i]);
      }
      if (factors.empty()) {
        out += magnitude.get_str();
      } else if (magnitude == 1) {
        out += factors;
      } else {
        out += magnitude.get_str() + "*" + factors;
      }
    }
    return out;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& other) {
    require_compatible(context_, other.context_, "polynomial addition");
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& other) {
    require_compatible(context_, other.context_, "polynomial subtraction");
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
  }

  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= s;
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial& operator*=(const Polynomial& other) { return *this = *this * other; }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(context_, 1);
    Polynomial base = *this;
    while (e > 0) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e > 0) base = base * base;
    }
    return result;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.empty() && b.terms_.empty()) return true;
    return compatible(a.context_, b.context_) && a.terms_ == b.terms_;
  }

 private:
  ChartPtr context_;
  TermMap terms_;
};

// Hash-based accumulation of many terms before building a normalized polynomial.
class TermAccumulator {
 public:
  explicit TermAccumulator(ChartPtr context) : context_(std::move(context)) {}

  void add(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) it->second += c;
  }

  void add(const Polynomial& p, const Rational& scale = Rational(1)) {
    require_compatible(context_, p.context(), "term accumulation");
    for (const auto& [m, c] : p.terms()) add(m, c * scale);
  }

  void add_product(const Polynomial& a, const Polynomial& b, const Rational& scale = Rational(1)) {
    require_compatible(context_, a.context(), "polynomial product");
    require_compatible(context_, b.context(), "polynomial product");
    Monomial m(context_->size(), 0);
    Rational c;
    for (const auto& [ma, ca] : a.terms()) {
      for (const auto& [mb, cb] : b.terms()) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        c = ca * cb;
        if (scale != 1) c *= scale;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) it->second += c;
      }
    }
  }

  Polynomial finish() && {
    Polynomial p(context_);
    for (auto& [m, c] : terms_) {
      if (c != 0) p.add_term(m, c);
    }
    return p;
  }

 private:
  ChartPtr context_;
  std::unordered_map<Monomial, Rational, MonomialHash> terms_;
};

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_compatible(a.context(), b.context(), "polynomial multiplication");
  if (a.is_zero() || b.is_zero()) return Polynomial(a.context());
  TermAccumulator acc(a.context());
  acc.add_product(a, b);
  return std::move(acc).finish();
}

// A coordinate name not used by `chart`, derived from `base`.
inline std::string fresh_name(const Chart& chart, std::string base) {
  while (chart.index_of(base)) base = "_" + base;
  return base;
}

// Moves a polynomial into another chart, matching coordinates by name. Every
// coordinate that occurs in `f` must exist in `target`.
inline Polynomial embed(const Polynomial& f, const ChartPtr& target) {
  if (compatible(f.context(), target)) {
    Polynomial g(target);
    for (const auto& [m, c] : f.terms()) g.add_term(m, c);
    return g;
  }
  const Chart& source = *f.context();
  std::vector<std::ptrdiff_t> where(source.size(), -1);
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (auto j = target->index_of(source.var(i).name)) where[i] = static_cast<std::ptrdiff_t>(*j);
  }
  Polynomial g(target);
  Monomial m(target->size(), 0);
  for (const auto& [k, c] : f.terms()) {
    std::fill(m.begin(), m.end(), 0U);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      if (where[i] < 0) {
        throw DomainError("coordinate '" + source.var(i).name + "' does not exist in chart '" + target->name() + "'");
      }
      m[static_cast<std::size_t>(where[i])] += k[i];
    }
    g.add_term(m, c);
  }
  return g;
}

// Composition f(images): coordinate i of f's chart is replaced by images[i];
// all images live in `target`.
inline Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images, const ChartPtr& target) {
  const std::size_t n = f.context()->size();
  if (images.size() != n) throw DomainError("substitute: one image per coordinate is required");
  std::vector<char> needed(n, 0);
  for (const auto& [m, c] : f.terms()) {
    for (std::size_t i = 0; i < n; ++i) needed[i] |= (m[i] != 0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (needed[i]) require_compatible(images[i].context(), target, "substitute");
  }
  std::vector<std::vector<Polynomial>> powers(n);
  auto power_of = [&](std::size_t v, unsigned e) -> const Polynomial& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, 1));
    while (cache.size() <= e) cache.push_back(cache.back() * images[v]);
    return cache[e];
  };

  // Terms arrive in lexicographic order, so consecutive terms share exponent
  // prefixes; prefix[j] is the product over coordinates < j.
  TermAccumulator acc(target);
  std::vector<Polynomial> prefix(n + 1, Polynomial::constant(target, 1));
  Monomial previous;
  for (const auto& [m, c] : f.terms()) {
    std::size_t start = 0;
    if (!previous.empty()) {
      while (start < n && previous[start] == m[start]) ++start;
    }
    for (std::size_t j = start; j < n; ++j) {
      prefix[j + 1] = m[j] == 0 ? prefix[j] : prefix[j] * power_of(j, m[j]);
    }
    acc.add(prefix[n], c);
    previous = m;
  }
  return std::move(acc).finish();
}

// Name-keyed substitution; every coordinate occurring in f needs an assignment.
inline Polynomial substitute(const Polynomial& f, const std::map<std::string, Polynomial>& assignment) {
  const Chart& chart = *f.context();
  ChartPtr target;
  std::vector<Polynomial> images(chart.size());
  for (std::size_t i = 0; i < chart.size(); ++i) {
    auto it = assignment.find(chart.var(i).name);
    if (it == assignment.end()) {
      if (f.uses(i)) throw DomainError("substitute: no assignment for coordinate '" + chart.var(i).name + "'");
      continue;
    }
    if (!target) target = it->second.context();
    require_compatible(it->second.context(), target, "substitute");
    images[i] = it->second;
  }
  if (!target) {
    if (assignment.empty()) return f;
    target = assignment.begin()->second.context();
  }
  for (auto& img : images) {
    if (!img.context()) img = Polynomial(target);
  }
  return substitute(f, images, target);
}

inline Polynomial differentiate(const Polynomial& f, std::size_t var, unsigned order = 1) {
  if (var >= f.context()->size()) throw DomainError("differentiate: coordinate index out of range");
  Polynomial g(f.context());
  for (const auto& [m, c] : f.terms()) {
    if (m[var] < order) continue;
    Monomial k = m;
    Rational factor(1);
    for (unsigned j = 0; j < order; ++j) factor *= (m[var] - j);
    k[var] -= order;
    g.add_term(k, c * factor);
  }
  return g;
}

inline Polynomial differentiate(const Polynomial& f, std::string_view var, unsigned order = 1) {
  return differentiate(f, f.context()->require_index(var), order);
}

// Graded pieces of f keyed by weighted degree; no zero pieces are stored.
inline std::map<unsigned, Polynomial> homogeneous_components(const Polynomial& f) {
  std::map<unsigned, Polynomial> parts;
  const auto w = f.context()->weights();
  for (const auto& [m, c] : f.terms()) {
    auto [it, inserted] = parts.try_emplace(weighted_degree(m, w), f.context());
    it->second.add_term(m, c);
  }
  return parts;
}

// Euler (weight) vector field sum_i w_i y_i d/dy_i applied to f.
inline Polynomial euler_apply(const Polynomial& f) {
  const ChartPtr& ctx = f.context();
  Polynomial out(ctx);
  for (std::size_t i = 0; i < ctx->size(); ++i) {
    if (ctx->weight(i) == 0 || !f.uses(i)) continue;
    out += Rational(ctx->weight(i)) * (Polynomial::variable(ctx, i) * differentiate(f, i));
  }
  return out;
}

namespace detail {

// f(t^{w_1} y_1, ..., t^{w_N} y_N) == t^r f(y), checked in the chart extended by t.
inline bool homogeneous_by_scaling(const Polynomial& f, unsigned r) {
  const ChartPtr& ctx = f.context();
  const std::string t_name = fresh_name(*ctx, "t");
  const ChartPtr ext = ctx->with_parameters({t_name});
  const std::size_t t = ctx->size();
  std::vector<Polynomial> images;
  images.reserve(ctx->size());
  for (std::size_t i = 0; i < ctx->size(); ++i) {
    Monomial m(ext->size(), 0);
    m[i] = 1;
    m[t] = ctx->weight(i);
    images.push_back(Polynomial::monomial(ext, m, 1));
  }
  const Polynomial scaled = substitute(f, images, ext);
  Monomial tr(ext->size(), 0);
  tr[t] = r;
  return scaled == Polynomial::monomial(ext, tr, 1) * embed(f, ext);
}

}  // namespace detail

// f is homogeneous of degree r: f o h_t = t^r f. The scaling identity and the
// Euler identity Delta(f) = r f are both evaluated and must agree.
inline bool is_homogeneous(const Polynomial& f, unsigned r) {
  const bool by_scaling = detail::homogeneous_by_scaling(f, r);
  const bool by_euler = euler_apply(f) == Rational(r) * f;
  if (by_scaling != by_euler) {
    throw EngineDefectError("is_homogeneous: scaling and Euler identities disagree for " + f.str());
  }
  return by_scaling;
}

// All monomials of weighted degree k, in canonical order. Requires positive weights.
inline std::vector<Monomial> monomial_basis(std::span<const unsigned> weights, unsigned k) {
  for (unsigned w : weights) {
    if (w == 0) throw DomainError("monomial_basis: weight-0 coordinate makes the basis infinite");
  }
  std::vector<Monomial> out;
  Monomial m(weights.size(), 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned remaining) {
    if (i == weights.size()) {
      if (remaining == 0) out.push_back(m);
      return;
    }
    for (unsigned e = remaining / weights[i] + 1; e-- > 0;) {
      m[i] = e;
      rec(i + 1, remaining - e * weights[i]);
    }
    m[i] = 0;
  };
  rec(0, k);
  return out;
}

inline std::vector<Monomial> monomial_basis(const Chart& chart, unsigned k) {
  const auto w = chart.weights();
  return monomial_basis(w, k);
}

// Coefficients of f as a polynomial in coordinate `var`: result[k] is the
// coefficient of var^k, still expressed in f's chart (with var absent).
inline std::vector<Polynomial> coefficients_in(const Polynomial& f, std::size_t var) {
  std::vector<Polynomial> out(f.degree_in(var) + 1, Polynomial(f.context()));
  for (const auto& [m, c] : f.terms()) {
    Monomial k = m;
    k[var] = 0;
    out[m[var]].add_term(k, c);
  }
  while (out.size() > 1 && out.back().is_zero()) out.pop_back();
  return out;
}

// f with coordinate `var` set to `value`.
inline Polynomial evaluate_at(const Polynomial& f, std::size_t var, const Rational& value) {
  Polynomial g(f.context());
  for (const auto& [m, c] : f.terms()) {
    Monomial k = m;
    k[var] = 0;
    g.add_term(k, c * power(value, m[var]));
  }
  return g;
}

// f with several coordinates fixed at rational values (by index).
inline Polynomial evaluate_at(const Polynomial& f, const std::vector<std::pair<std::size_t, Rational>>& values) {
  Polynomial g(f.context());
  for (const auto& [m, c] : f.terms()) {
    Monomial k = m;
    Rational coef = c;
    for (const auto& [var, value] : values) {
      coef *= power(value, m[var]);
      k[var] = 0;
    }
    g.add_term(k, coef);
  }
  return g;
}

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

}  // namespace gradua
