#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gradua/chart.hpp"
#include "gradua/errors.hpp"
#include "gradua/family.hpp"
#include "gradua/graded.hpp"
#include "gradua/map.hpp"
#include "gradua/matrix.hpp"
#include "gradua/polynomial.hpp"

namespace gradua {

// A failed law: `expected` and `actual` are the two sides for one coordinate,
// `difference` is expected - actual (nonzero).
struct LawWitness {
  std::string law;
  std::string variable;
  Polynomial expected;
  Polynomial actual;
  Polynomial difference;
};

struct LawVerdict {
  bool semigroup = false;
  bool monoid = false;
  std::vector<LawWitness> witnesses;
};

using Grade = std::vector<unsigned>;

namespace detail {

// x_i o h1_{t1} o h2_{t2} o ... o hr_{tr} over the chart extended by the given
// parameter names, one per family.
inline std::vector<Polynomial> compose_families(const std::vector<ActionFamily>& families,
                                                const std::vector<std::string>& parameters) {
  if (families.empty() || families.size() != parameters.size()) {
    throw DomainError("compose_families: one parameter name per family is required");
  }
  const ChartPtr& space = families.front().space();
  for (const auto& h : families) require_compatible(h.space(), space, "compose_families");
  const ChartPtr ctx = space->with_parameters(parameters);
  const std::size_t n = space->size();

  std::vector<Polynomial> current;
  for (std::size_t i = 0; i < n; ++i) current.push_back(Polynomial::variable(ctx, i));
  for (std::size_t k = 0; k < families.size(); ++k) {
    const ActionFamily renamed = families[k].with_parameter(parameters[k]);
    std::vector<Polynomial> images;
    images.reserve(ctx->size());
    for (std::size_t j = 0; j < n; ++j) images.push_back(embed(renamed.entry(j), ctx));
    for (std::size_t p = n; p < ctx->size(); ++p) images.push_back(Polynomial::variable(ctx, p));
    for (auto& c : current) c = substitute(c, images, ctx);
  }
  return current;
}

// Splits f (over chart + r parameters, parameters last) into its coefficients
// of t1^g1 ... tr^gr, each expressed on the chart.
inline std::map<Grade, Polynomial> split_by_parameters(const Polynomial& f, const ChartPtr& space) {
  const std::size_t n = space->size();
  const std::size_t r = f.context()->size() - n;
  std::map<Grade, Polynomial> parts;
  for (const auto& [m, c] : f.terms()) {
    Grade g(m.begin() + static_cast<std::ptrdiff_t>(n), m.end());
    Monomial k(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(n));
    auto [it, inserted] = parts.try_emplace(g, space);
    it->second.add_term(k, c);
  }
  (void)r;
  return parts;
}

inline std::vector<LawWitness> unit_witnesses(const ActionFamily& h) {
  std::vector<LawWitness> out;
  const PolyMap h1 = h.at(1);
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    const Polynomial expected = Polynomial::variable(h.space(), i);
    const Polynomial& actual = h1.pullback(i);
    if (actual != expected) {
      out.push_back({"identity", h.space()->var(i).name, expected, actual, expected - actual});
    }
  }
  return out;
}

}  // namespace detail

// Infinitesimal generator d/dt|_{t=1} h_t as coefficients on the chart coordinates.
// For a standard action this is the weight vector field.
inline VectorField generator(const ActionFamily& h) {
  VectorField field;
  const auto coeffs = h.coefficients();
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    Polynomial d(h.space());
    for (std::size_t k = 1; k < coeffs[i].size(); ++k) d += Rational(k) * coeffs[i][k];
    field.emplace_back(h.space()->var(i).name, std::move(d));
  }
  return field;
}

// h_t o h_s == h_{ts}, expanded as a polynomial identity in (t, s, chart).
inline std::vector<LawWitness> semigroup_by_expansion(const ActionFamily& h) {
  const std::string t = fresh_name(*h.space(), "t");
  const std::string s = fresh_name(*h.space()->with_parameters({t}), "s");
  const auto lhs = detail::compose_families({h, h}, {t, s});
  const ChartPtr ctx = lhs.front().context();
  const std::size_t n = h.dimension();
  std::vector<Polynomial> images;
  for (std::size_t j = 0; j < n; ++j) images.push_back(Polynomial::variable(ctx, j));
  images.push_back(Polynomial::variable(ctx, n) * Polynomial::variable(ctx, n + 1));
  std::vector<LawWitness> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial rhs = substitute(h.entry(i), images, ctx);
    if (lhs[i] != rhs) out.push_back({"semigroup", h.space()->var(i).name, rhs, lhs[i], rhs - lhs[i]});
  }
  return out;
}

// With h_1 = id, the semigroup law is equivalent to: every t^k coefficient P_k
// of every entry satisfies Delta(P_k) = k P_k, Delta being the generator.
// (Then s d/ds (g o h_s) = Delta(g o h_s) for any eigenfunction g, and
// eigenvectors of distinct eigenvalues are independent, so g o h_s = s^k g.)
// Returns the coordinates where the identity fails.
inline std::vector<std::string> semigroup_by_generator(const ActionFamily& h) {
  const VectorField delta = generator(h);
  const auto coeffs = h.coefficients();
  std::vector<std::string> failing;
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    for (std::size_t k = 0; k < coeffs[i].size(); ++k) {
      if (apply_field(delta, coeffs[i][k]) != Rational(k) * coeffs[i][k]) {
        failing.push_back(h.space()->var(i).name);
        break;
      }
    }
  }
  return failing;
}

// Semigroup law h_t o h_s = h_{ts} and unit law h_1 = id. When the unit law
// holds the semigroup law is decided through the generator; otherwise, and
// whenever a witness is needed, by full expansion in (t, s).
inline LawVerdict verify_laws(const ActionFamily& h) {
  LawVerdict verdict;
  auto unit = detail::unit_witnesses(h);
  if (unit.empty()) {
    const auto failing = semigroup_by_generator(h);
    verdict.semigroup = failing.empty();
    if (!verdict.semigroup) {
      auto witnesses = semigroup_by_expansion(h);
      if (witnesses.empty()) {
        throw EngineDefectError("verify_laws: generator test and expansion disagree on the semigroup law");
      }
      verdict.witnesses = std::move(witnesses);
    }
  } else {
    auto witnesses = semigroup_by_expansion(h);
    verdict.semigroup = witnesses.empty();
    verdict.witnesses = std::move(witnesses);
  }
  verdict.monoid = verdict.semigroup && unit.empty();
  for (auto& w : unit) verdict.witnesses.push_back(std::move(w));
  return verdict;
}

// h_0, the projection onto the base; must be idempotent.
inline PolyMap base_projection(const ActionFamily& h) {
  PolyMap h0 = h.at(0);
  if (compose(h0, h0) != h0) throw InconsistentActionError("base_projection: h_0 o h_0 != h_0");
  return h0;
}

// The origin, provided h_0 fixes it.
inline std::vector<Rational> default_base_point(const ActionFamily& h) {
  std::vector<Rational> origin(h.dimension(), Rational(0));
  const PolyMap h0 = h.at(0);
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    if (h0.pullback(i).evaluate(origin) != 0) {
      throw DomainError("the origin is not fixed by h_0; supply a base point");
    }
  }
  return origin;
}

namespace detail {

inline void require_fixed_point(const ActionFamily& h, const std::vector<Rational>& theta) {
  if (theta.size() != h.dimension()) throw DomainError("base point has the wrong dimension");
  const PolyMap h0 = h.at(0);
  for (std::size_t i = 0; i < h.dimension(); ++i) {
    if (h0.pullback(i).evaluate(theta) != theta[i]) {
      throw DomainError("base point is not fixed by h_0 (coordinate '" + h.space()->var(i).name + "')");
    }
  }
}

inline bool is_projection_family(const std::vector<Matrix>& q, std::size_t n) {
  Matrix sum(n, n);
  for (std::size_t r = 0; r < q.size(); ++r) {
    sum = sum + q[r];
    for (std::size_t s = 0; s < q.size(); ++s) {
      const Matrix expected = r == s ? q[r] : Matrix(n, n);
      if (q[r] * q[s] != expected) return false;
    }
  }
  return sum == Matrix::identity(n);
}

}  // namespace detail

// Q_0..Q_n with H_t = sum_r t^r Q_r the Jacobian of h_t at the fixed point theta.
// Q_r Q_s = delta_rs Q_r and sum Q_r = I are enforced.
inline std::vector<Matrix> taylor_projections(const ActionFamily& h, const std::vector<Rational>& theta) {
  detail::require_fixed_point(h, theta);
  const std::size_t n = h.dimension();
  const std::size_t t = h.parameter_index();
  std::vector<std::pair<std::size_t, Rational>> at_theta;
  for (std::size_t i = 0; i < n; ++i) at_theta.emplace_back(i, theta[i]);

  std::vector<Matrix> q(h.parameter_degree() + 1, Matrix(n, n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Polynomial d = evaluate_at(differentiate(h.entry(i), j), at_theta);
      for (const auto& [m, c] : d.terms()) q[m[t]](i, j) = c;
    }
  }
  while (q.size() > 1 && q.back().is_zero()) q.pop_back();
  if (!detail::is_projection_family(q, n)) {
    throw NotGradedActionError(
        "taylor_projections: Taylor coefficients of the Jacobian are not complementary projections");
  }
  return q;
}

inline std::vector<Matrix> taylor_projections(const ActionFamily& h) {
  return taylor_projections(h, default_base_point(h));
}

// Result of reconstructing homogeneous coordinates for one or several commuting actions.
struct Homogenization {
  ChartPtr chart;          // new coordinates; weight = total grade
  PolyMap homogenizer;     // original chart -> chart
  PolyMap inverse;         // chart -> original chart
  std::vector<Grade> grades;                   // per new coordinate, one entry per action
  std::vector<std::vector<Matrix>> projections;  // per action, Q_0..Q_n at the base point
  std::vector<Rational> base_point;
};

namespace detail {

// Polynomials X_i on `target` with X_i(coords) = sum of parts[i], each graded
// piece matched separately. Coordinates of grade zero act as parameters, with
// their degree bounded by the largest degree among the parts.
inline std::vector<Polynomial> express_in_coordinates(
    const std::vector<Polynomial>& coords, const std::vector<Grade>& grades, const ChartPtr& target,
    const std::vector<std::map<Grade, Polynomial>>& parts) {
  const ChartPtr source = coords.front().context();
  const std::size_t m = coords.size();
  auto is_base = [&](std::size_t j) {
    return std::all_of(grades[j].begin(), grades[j].end(), [](unsigned g) { return g == 0; });
  };
  unsigned base_bound = 0;
  for (const auto& p : parts) {
    for (const auto& [g, poly] : p) base_bound = std::max(base_bound, poly.total_degree());
  }
  bool any_base = false;
  for (std::size_t j = 0; j < m; ++j) any_base |= is_base(j);
  if (!any_base) base_bound = 0;

  std::unordered_map<Monomial, Polynomial, MonomialHash> images;
  std::function<const Polynomial&(const Monomial&)> image_of = [&](const Monomial& k) -> const Polynomial& {
    auto it = images.find(k);
    if (it != images.end()) return it->second;
    std::size_t last = m;
    for (std::size_t j = m; j-- > 0;) {
      if (k[j] != 0) {
        last = j;
        break;
      }
    }
    Polynomial value = Polynomial::constant(source, 1);
    if (last != m) {
      Monomial smaller = k;
      --smaller[last];
      value = image_of(smaller) * coords[last];
    }
    return images.emplace(k, std::move(value)).first->second;
  };

  // Candidate monomials of a given grade.
  auto candidates = [&](const Grade& g) {
    std::vector<Monomial> out;
    unsigned total = 0;
    for (unsigned x : g) total += x;
    Monomial k(m, 0);
    std::function<void(std::size_t, Grade&, unsigned)> rec = [&](std::size_t j, Grade& left, unsigned base_left) {
      if (j == m) {
        if (std::all_of(left.begin(), left.end(), [](unsigned x) { return x == 0; })) out.push_back(k);
        return;
      }
      if (is_base(j)) {
        for (unsigned e = 0; e <= base_left; ++e) {
          k[j] = e;
          rec(j + 1, left, base_left - e);
        }
        k[j] = 0;
        return;
      }
      for (unsigned e = 0;; ++e) {
        bool fits = true;
        for (std::size_t a = 0; a < g.size(); ++a) fits &= grades[j][a] * e <= left[a];
        if (!fits) break;
        for (std::size_t a = 0; a < g.size(); ++a) left[a] -= grades[j][a] * e;
        k[j] = e;
        rec(j + 1, left, base_left);
        for (std::size_t a = 0; a < g.size(); ++a) left[a] += grades[j][a] * e;
      }
      k[j] = 0;
    };
    Grade left = g;
    rec(0, left, base_bound);
    (void)total;
    return out;
  };

  std::vector<Polynomial> result(parts.size(), Polynomial(target));
  std::map<Grade, std::vector<std::size_t>> by_grade;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const auto& [g, poly] : parts[i]) {
      if (!poly.is_zero()) by_grade[g].push_back(i);
    }
  }
  for (const auto& [g, outputs] : by_grade) {
    const auto monos = candidates(g);
    std::map<Monomial, std::size_t> rows;
    auto row_of = [&](const Monomial& k) {
      return rows.try_emplace(k, rows.size()).first->second;
    };
    for (const auto& k : monos) {
      for (const auto& [sm, c] : image_of(k).terms()) row_of(sm);
    }
    for (std::size_t i : outputs) {
      for (const auto& [sm, c] : parts[i].at(g).terms()) row_of(sm);
    }
    Matrix a(rows.size(), monos.size());
    Matrix b(rows.size(), outputs.size());
    for (std::size_t col = 0; col < monos.size(); ++col) {
      for (const auto& [sm, c] : image_of(monos[col]).terms()) a(rows.at(sm), col) = c;
    }
    for (std::size_t col = 0; col < outputs.size(); ++col) {
      for (const auto& [sm, c] : parts[outputs[col]].at(g).terms()) b(rows.at(sm), col) = c;
    }
    const auto x = solve(a, b);
    if (!x) {
      throw NotGradedActionError("the coordinate change has no polynomial inverse (graded piece of degree " +
                                 std::to_string(std::accumulate(g.begin(), g.end(), 0U)) + ")");
    }
    for (std::size_t col = 0; col < outputs.size(); ++col) {
      for (std::size_t r = 0; r < monos.size(); ++r) {
        if ((*x)(r, col) != 0) result[outputs[col]].add_term(monos[r], (*x)(r, col));
      }
    }
  }
  return result;
}

// Joint homogenization of pairwise commuting monoid actions at a common fixed point.
inline Homogenization homogenize_joint(const std::vector<ActionFamily>& actions, const std::vector<Rational>& theta,
                                       bool multi) {
  const ChartPtr& space = actions.front().space();
  const std::size_t n = space->size();
  const std::size_t r = actions.size();
  for (const auto& h : actions) {
    require_compatible(h.space(), space, "homogenize");
    if (!unit_witnesses(h).empty() || !semigroup_by_generator(h).empty()) {
      throw NotGradedActionError("homogenize: the action is not a monoid action");
    }
  }

  Homogenization out;
  out.base_point = theta;
  for (const auto& h : actions) out.projections.push_back(taylor_projections(h, theta));

  // Joint projections P_g = Q^1_{g_1} ... Q^r_{g_r}.
  std::vector<std::pair<Grade, Matrix>> joint;
  {
    Grade g(r, 0);
    std::function<void(std::size_t, const Matrix&)> rec = [&](std::size_t k, const Matrix& acc) {
      if (k == r) {
        if (!acc.is_zero()) joint.emplace_back(g, acc);
        return;
      }
      for (std::size_t s = 0; s < out.projections[k].size(); ++s) {
        g[k] = static_cast<unsigned>(s);
        rec(k + 1, acc * out.projections[k][s]);
      }
    };
    rec(0, Matrix::identity(n));
  }
  if (multi) {
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = a + 1; b < r; ++b) {
        for (const auto& qa : out.projections[a]) {
          for (const auto& qb : out.projections[b]) {
            if (qa * qb != qb * qa) {
              throw NotDoubleStructureError("homogenize: Taylor projections of the actions do not commute");
            }
          }
        }
      }
    }
    std::vector<Matrix> family;
    for (const auto& [g, p] : joint) family.push_back(p);
    if (!is_projection_family(family, n)) {
      throw NotDoubleStructureError("homogenize: joint projections do not resolve the identity");
    }
  }
  std::stable_sort(joint.begin(), joint.end(), [](const auto& a, const auto& b) {
    const unsigned wa = std::accumulate(a.first.begin(), a.first.end(), 0U);
    const unsigned wb = std::accumulate(b.first.begin(), b.first.end(), 0U);
    if (wa != wb) return wa < wb;
    return a.first < b.first;
  });

  // Adapted linear coordinates: dual basis to bases of the images of P_g.
  Matrix basis(n, n);
  std::vector<Grade> grades;
  std::vector<std::size_t> pivots;
  std::size_t col = 0;
  for (const auto& [g, p] : joint) {
    for (const auto& v : column_space_basis(p)) {
      if (col == n) throw NotGradedActionError("homogenize: projection images overlap");
      std::size_t pivot = 0;
      while (v[pivot] == 0) ++pivot;
      for (std::size_t i = 0; i < n; ++i) basis(i, col) = v[i];
      grades.push_back(g);
      pivots.push_back(pivot);
      ++col;
    }
  }
  if (col != n) throw NotGradedActionError("homogenize: projection images do not span the tangent space");
  const Matrix dual = basis.inverse();

  // Graded pieces of the composite action x_i o h1_{t1} o ... o hr_{tr}.
  std::vector<std::string> params;
  {
    ChartPtr probe = space;
    for (std::size_t k = 0; k < r; ++k) {
      params.push_back(fresh_name(*probe, r == 1 ? "t" : "t" + std::to_string(k + 1)));
      probe = probe->with_parameters({params.back()});
    }
  }
  const auto composite = compose_families(actions, params);
  std::vector<std::map<Grade, Polynomial>> pieces;
  for (const auto& e : composite) pieces.push_back(split_by_parameters(e, space));

  // New coordinate of grade g: the g-coefficient of the adapted linear
  // coordinate pulled through the composite action.
  std::vector<Polynomial> coords;
  for (std::size_t a = 0; a < n; ++a) {
    Polynomial f(space);
    Rational shift(0);
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& l = dual(a, j);
      if (l == 0) continue;
      auto it = pieces[j].find(grades[a]);
      if (it != pieces[j].end()) f += l * it->second;
      shift += l * theta[j];
    }
    const bool base = std::all_of(grades[a].begin(), grades[a].end(), [](unsigned x) { return x == 0; });
    if (base) f -= Polynomial::constant(space, shift);
    if (f.is_zero()) {
      throw DegenerateActionError("homogenize: coordinate along '" + space->var(pivots[a]).name +
                                  "' has vanishing Taylor coefficients");
    }
    coords.push_back(std::move(f));
  }

  // Homogeneity of the new coordinates, per action, via the generators.
  for (std::size_t k = 0; k < r; ++k) {
    const VectorField delta = generator(actions[k]);
    for (std::size_t a = 0; a < n; ++a) {
      if (apply_field(delta, coords[a]) != Rational(grades[a][k]) * coords[a]) {
        throw NotGradedActionError("homogenize: reconstructed coordinate " + std::to_string(a) +
                                   " is not homogeneous for action " + std::to_string(k + 1));
      }
    }
  }

  // Chart of the new coordinates, ordered by total grade.
  std::vector<Variable> vars;
  for (std::size_t a = 0; a < n; ++a) {
    std::string name = space->var(pivots[a]).name + "'";
    auto taken = [&](const std::string& candidate) {
      if (space->index_of(candidate)) return false;  // may shadow: names live in different charts
      return std::any_of(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == candidate; });
    };
    while (taken(name)) name += "'";
    const unsigned w = std::accumulate(grades[a].begin(), grades[a].end(), 0U);
    vars.push_back(Variable{name, w, name, {}});
  }
  out.chart = Chart::make(space->name() + "_hom", std::move(vars));
  out.grades = grades;
  out.homogenizer = PolyMap(space, out.chart, coords);
  out.inverse = PolyMap(out.chart, space, express_in_coordinates(coords, grades, out.chart, pieces));

  if (!compose(out.inverse, out.homogenizer).is_identity() || !compose(out.homogenizer, out.inverse).is_identity()) {
    throw NotGradedActionError("homogenize: the reconstructed coordinate change is not invertible");
  }
  return out;
}

}  // namespace detail

// Homogeneous coordinates for a monoid action at the fixed point theta. The
// returned chart carries the detected weights; in it the action is standard.
inline Homogenization homogenize(const ActionFamily& h, const std::vector<Rational>& theta) {
  return detail::homogenize_joint({h}, theta, false);
}

inline Homogenization homogenize(const ActionFamily& h) { return homogenize(h, default_base_point(h)); }

inline unsigned detect_degree(const ActionFamily& h) { return homogenize(h).chart->degree(); }

// x o C^{-1} o h_t o C: the action transported along C (source of C -> space of h).
inline ActionFamily conjugate(const ActionFamily& h, const PolyMap& c, const PolyMap& c_inverse) {
  require_compatible(c.target(), h.space(), "conjugate");
  require_compatible(c_inverse.source(), h.space(), "conjugate");
  require_compatible(c_inverse.target(), c.source(), "conjugate");
  const ChartPtr& src = c.source();
  const ChartPtr ctx = src->with_parameters({h.parameter()});
  std::vector<Polynomial> images;
  for (const auto& p : c.pullbacks()) images.push_back(embed(p, ctx));
  images.push_back(Polynomial::variable(ctx, src->size()));
  std::vector<Polynomial> entries;
  for (const auto& p : c_inverse.pullbacks()) entries.push_back(substitute(h.pull(p), images, ctx));
  return ActionFamily(src, h.parameter(), std::move(entries));
}

// The family written through a homogenization, X(t^w F(x)), valid for every real t.
inline ActionFamily extend_negative(const ActionFamily& h, const Homogenization& hz) {
  const ActionFamily standard = standard_action(hz.chart, h.parameter());
  ActionFamily extended = conjugate(standard, hz.homogenizer, hz.inverse);
  if (extended != h) throw EngineDefectError("extend_negative: conjugated standard action differs from h");
  return extended;
}

inline ActionFamily extend_negative(const ActionFamily& h) { return extend_negative(h, homogenize(h)); }

// The t = -1 member of the extended family; an involution.
inline PolyMap reflection(const ActionFamily& h, const Homogenization& hz) {
  return extend_negative(h, hz).at(-1);
}

struct AnalysisReport {
  LawVerdict laws;
  std::optional<PolyMap> base_projection;
  std::optional<unsigned> degree;
  std::optional<Homogenization> homogenization;
  std::optional<PolyMap> reflection;
  std::string error_kind;  // set when the analysis stopped early
  std::string error_message;

  bool ok() const { return laws.monoid && homogenization.has_value() && error_kind.empty(); }
};

// Full pipeline: laws, h_0, projections, homogeneous coordinates, degree, t = -1 map.
inline AnalysisReport analyze(const ActionFamily& h, std::optional<std::vector<Rational>> theta = std::nullopt) {
  AnalysisReport report;
  report.laws = verify_laws(h);
  if (!report.laws.monoid) return report;
  try {
    report.base_projection = base_projection(h);
    const auto point = theta ? *theta : default_base_point(h);
    report.homogenization = homogenize(h, point);
    report.degree = report.homogenization->chart->degree();
    report.reflection = reflection(h, *report.homogenization);
  } catch (const Error& e) {
    report.error_kind = e.kind();
    report.error_message = e.what();
  }
  return report;
}

}  // namespace gradua
