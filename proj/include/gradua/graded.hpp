#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gradua/chart.hpp"
#include "gradua/family.hpp"
#include "gradua/map.hpp"
#include "gradua/matrix.hpp"
#include "gradua/polynomial.hpp"

namespace gradua {

// h_t(y) = (t^{w_1} y_1, ..., t^{w_N} y_N); weight-0 coordinates stay fixed.
inline ActionFamily standard_action(const ChartPtr& chart, const std::string& parameter = "t") {
  const ChartPtr ctx = chart->with_parameters({parameter});
  std::vector<Polynomial> entries;
  entries.reserve(chart->size());
  for (std::size_t i = 0; i < chart->size(); ++i) {
    Monomial m(ctx->size(), 0);
    m[i] = 1;
    m[chart->size()] = chart->weight(i);
    entries.push_back(Polynomial::monomial(ctx, m, 1));
  }
  return ActionFamily(chart, parameter, std::move(entries));
}

namespace detail {

// psi o h^1_t == h^2_t o psi, compared as pullbacks in the source chart extended by t.
inline bool intertwines_standard_actions(const PolyMap& psi) {
  const ChartPtr& src = psi.source();
  const ActionFamily h1 = standard_action(src, fresh_name(*src, "t"));
  const ChartPtr& ext = h1.context();
  const std::size_t t = src->size();
  for (std::size_t j = 0; j < psi.target()->size(); ++j) {
    const Polynomial lhs = h1.pull(psi.pullback(j));
    Monomial tw(ext->size(), 0);
    tw[t] = psi.target()->weight(j);
    const Polynomial rhs = Polynomial::monomial(ext, tw, 1) * embed(psi.pullback(j), ext);
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace detail

// A map is a graded morphism iff each target coordinate of weight r pulls back
// to a homogeneous polynomial of degree r. The intertwining identity with the
// standard actions is evaluated as well and must agree.
inline bool is_graded_morphism(const PolyMap& psi) {
  bool degree_preserving = true;
  for (std::size_t j = 0; j < psi.target()->size(); ++j) {
    if (!is_homogeneous(psi.pullback(j), psi.target()->weight(j))) {
      degree_preserving = false;
      break;
    }
  }
  const bool intertwining = detail::intertwines_standard_actions(psi);
  if (degree_preserving != intertwining) {
    throw EngineDefectError("is_graded_morphism: degree test and intertwining test disagree for " + psi.str());
  }
  return degree_preserving;
}

// Inverse of a graded automorphism by back-substitution along the weight
// filtration. The pullback of a weight-r coordinate is A_r (weight-r coordinates)
// plus a polynomial in coordinates of smaller weight; each A_r must be a
// constant invertible matrix.
inline PolyMap invert_automorphism(const PolyMap& psi) {
  const ChartPtr& chart = psi.source();
  if (!compatible(chart, psi.target())) throw DomainError("invert_automorphism: map is not an endomorphism");
  if (!is_graded_morphism(psi)) throw DomainError("invert_automorphism: map is not a graded morphism");

  const std::size_t n = chart->size();
  std::vector<Polynomial> inverse(n, Polynomial(chart));
  std::vector<char> done(n, 0);
  for (unsigned r = 0; r <= chart->degree(); ++r) {
    std::vector<std::size_t> layer;
    for (std::size_t i = 0; i < n; ++i) {
      if (chart->weight(i) == r) layer.push_back(i);
    }
    if (layer.empty()) continue;
    const std::size_t d = layer.size();
    Matrix a(d, d);
    std::vector<Polynomial> rest;
    for (std::size_t p = 0; p < d; ++p) {
      Polynomial remainder = psi.pullback(layer[p]);
      for (std::size_t q = 0; q < d; ++q) {
        Monomial e(n, 0);
        e[layer[q]] = 1;
        a(p, q) = remainder.coefficient(e);
        remainder.add_term(e, -a(p, q));
      }
      for (const auto& [m, c] : remainder.terms()) {
        for (std::size_t i = 0; i < n; ++i) {
          if (m[i] != 0 && chart->weight(i) >= r) {
            throw NotInvertibleError("invert_automorphism: pullback of '" + chart->var(layer[p]).name +
                                     "' is not triangular in the weight filtration");
          }
        }
      }
      // Lower-weight coordinates are already inverted.
      std::vector<Polynomial> images(n, Polynomial(chart));
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) images[i] = inverse[i];
      }
      rest.push_back(substitute(remainder, images, chart));
    }
    Matrix a_inv;
    try {
      a_inv = a.inverse();
    } catch (const NotInvertibleError&) {
      throw NotInvertibleError("invert_automorphism: linear block of weight " + std::to_string(r) + " is singular");
    }
    for (std::size_t q = 0; q < d; ++q) {
      Polynomial value(chart);
      for (std::size_t p = 0; p < d; ++p) {
        if (a_inv(q, p) == 0) continue;
        value += a_inv(q, p) * (Polynomial::variable(chart, layer[p]) - rest[p]);
      }
      inverse[layer[q]] = std::move(value);
    }
    for (std::size_t i : layer) done[i] = 1;
  }
  PolyMap result(chart, chart, std::move(inverse));
  if (!compose(psi, result).is_identity() || !compose(result, psi).is_identity()) {
    throw EngineDefectError("invert_automorphism: back-substitution did not produce an inverse");
  }
  return result;
}

// Matrix of psi^* on span{x_i, y_w, x_i x_j (i <= j)} for a chart of degree <= 2
// without base coordinates. Column j holds the coordinates of psi^*(basis_j).
inline Matrix matrix_representation(const PolyMap& psi) {
  const ChartPtr& chart = psi.source();
  if (!compatible(chart, psi.target())) throw DomainError("matrix_representation: map is not an endomorphism");
  if (chart->degree() > 2) throw UnsupportedError("matrix_representation: only charts of degree <= 2 are supported");
  if (chart->base_dimension() > 0) throw UnsupportedError("matrix_representation: chart has base coordinates");
  if (!is_graded_morphism(psi)) throw DomainError("matrix_representation: map is not a graded morphism");

  const std::size_t n = chart->size();
  std::vector<std::size_t> xs;
  std::vector<std::size_t> ys;
  for (std::size_t i = 0; i < n; ++i) (chart->weight(i) == 1 ? xs : ys).push_back(i);

  std::vector<Monomial> basis;
  std::vector<Polynomial> images;
  for (std::size_t i : xs) {
    Monomial m(n, 0);
    m[i] = 1;
    basis.push_back(m);
    images.push_back(psi.pullback(i));
  }
  for (std::size_t i : ys) {
    Monomial m(n, 0);
    m[i] = 1;
    basis.push_back(m);
    images.push_back(psi.pullback(i));
  }
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = a; b < xs.size(); ++b) {
      Monomial m(n, 0);
      m[xs[a]] += 1;
      m[xs[b]] += 1;
      basis.push_back(m);
      images.push_back(psi.pullback(xs[a]) * psi.pullback(xs[b]));
    }
  }

  const std::size_t dim = basis.size();
  Matrix rep(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::size_t matched = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      rep(i, j) = images[j].coefficient(basis[i]);
      if (rep(i, j) != 0) ++matched;
    }
    if (matched != images[j].size()) {
      throw EngineDefectError("matrix_representation: image leaves the invariant subspace");
    }
  }
  return rep;
}

// Level k of the tower M_n -> ... -> M_1 -> M_0: the chart of coordinates with
// weight <= k and the projection onto it.
inline std::pair<ChartPtr, PolyMap> truncate(const ChartPtr& chart, unsigned k) {
  if (k > chart->degree()) {
    throw DomainError("truncate: level " + std::to_string(k) + " exceeds the degree of '" + chart->name() + "'");
  }
  std::vector<Variable> kept;
  std::vector<Polynomial> pullbacks;
  for (std::size_t i = 0; i < chart->size(); ++i) {
    if (chart->weight(i) <= k) {
      kept.push_back(chart->var(i));
      pullbacks.push_back(Polynomial::variable(chart, i));
    }
  }
  const std::string name = k == chart->degree() ? chart->name() : chart->name() + "|" + std::to_string(k);
  ChartPtr level = Chart::make(name, std::move(kept));
  return {level, PolyMap(chart, level, std::move(pullbacks))};
}

// A graded morphism descends to level k of both towers.
inline PolyMap truncate(const PolyMap& psi, unsigned k) {
  const auto [src, src_projection] = truncate(psi.source(), k);
  const auto [dst, dst_projection] = truncate(psi.target(), k);
  std::vector<Polynomial> pullbacks;
  for (std::size_t j = 0; j < dst->size(); ++j) {
    const Polynomial& p = psi.pullback(dst->var(j).name);
    try {
      pullbacks.push_back(embed(p, src));
    } catch (const DomainError&) {
      throw DomainError("truncate: pullback of '" + dst->var(j).name + "' involves coordinates above level " +
                        std::to_string(k) + "; the map does not preserve weights");
    }
  }
  return PolyMap(src, dst, std::move(pullbacks));
}

// F o h_t == g_t o F for an action h on F's source and g on its target,
// compared as pullbacks over the source chart extended by h's parameter.
inline bool intertwines(const PolyMap& f, const ActionFamily& h, const ActionFamily& g) {
  require_compatible(h.space(), f.source(), "intertwines");
  require_compatible(g.space(), f.target(), "intertwines");
  const ChartPtr& ctx = h.context();
  const ActionFamily gt = g.with_parameter(h.parameter());
  std::vector<Polynomial> images;
  for (const auto& p : f.pullbacks()) images.push_back(embed(p, ctx));
  images.push_back(Polynomial::variable(ctx, f.source()->size()));
  for (std::size_t j = 0; j < f.target()->size(); ++j) {
    if (h.pull(f.pullback(j)) != substitute(gt.entry(j), images, ctx)) return false;
  }
  return true;
}

using VectorField = std::vector<std::pair<std::string, Polynomial>>;

// Weight vector field sum_j w_j y_j d/dy_j as (coordinate, coefficient) pairs.
inline VectorField weight_field(const ChartPtr& chart) {
  VectorField field;
  for (std::size_t i = 0; i < chart->size(); ++i) {
    field.emplace_back(chart->var(i).name, Rational(chart->weight(i)) * Polynomial::variable(chart, i));
  }
  return field;
}

// Applies a vector field, given by coefficients on named coordinates, as a derivation.
inline Polynomial apply_field(const VectorField& field, const Polynomial& f) {
  Polynomial out(f.context());
  for (const auto& [name, coefficient] : field) {
    const auto i = f.context()->require_index(name);
    if (!f.uses(i) || coefficient.is_zero()) continue;
    out += embed(coefficient, f.context()) * differentiate(f, i);
  }
  return out;
}

}  // namespace gradua
