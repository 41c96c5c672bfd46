#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gradua/action.hpp"
#include "gradua/chart.hpp"
#include "gradua/errors.hpp"
#include "gradua/family.hpp"
#include "gradua/jets.hpp"
#include "gradua/map.hpp"
#include "gradua/polynomial.hpp"

namespace gradua {

struct CommutingVerdict {
  bool commute = false;
  std::vector<LawWitness> witnesses;
};

// h1_t o h2_u == h2_u o h1_t as a polynomial identity in (t, u, chart).
inline CommutingVerdict check_commuting(const ActionFamily& h1, const ActionFamily& h2) {
  require_compatible(h1.space(), h2.space(), "check_commuting");
  const std::string t = fresh_name(*h1.space(), "t");
  const std::string u = fresh_name(*h1.space()->with_parameters({t}), "u");
  const auto lhs = detail::compose_families({h1, h2}, {t, u});
  const auto rhs = detail::compose_families({h2, h1}, {u, t});
  CommutingVerdict verdict;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const Polynomial other = embed(rhs[i], lhs[i].context());
    if (lhs[i] != other) {
      verdict.witnesses.push_back({"commute", h1.space()->var(i).name, other, lhs[i], other - lhs[i]});
    }
  }
  verdict.commute = verdict.witnesses.empty();
  return verdict;
}

// Joint homogeneous coordinates for pairwise commuting monoid actions; the
// grades of the result are the multidegrees, the chart weights their sums.
inline Homogenization multihomogenize(const std::vector<ActionFamily>& actions, const std::vector<Rational>& theta) {
  if (actions.empty()) throw DomainError("multihomogenize: no actions");
  for (std::size_t a = 0; a < actions.size(); ++a) {
    for (std::size_t b = a + 1; b < actions.size(); ++b) {
      if (!check_commuting(actions[a], actions[b]).commute) {
        throw NotDoubleStructureError("multihomogenize: actions " + std::to_string(a + 1) + " and " +
                                      std::to_string(b + 1) + " do not commute");
      }
    }
  }
  return detail::homogenize_joint(actions, theta, true);
}

inline Homogenization multihomogenize(const std::vector<ActionFamily>& actions) {
  if (actions.empty()) throw DomainError("multihomogenize: no actions");
  std::vector<Rational> theta = default_base_point(actions.front());
  for (const auto& h : actions) detail::require_fixed_point(h, theta);
  return multihomogenize(actions, theta);
}

inline Homogenization bihomogenize(const ActionFamily& h1, const ActionFamily& h2, const std::vector<Rational>& theta) {
  return multihomogenize({h1, h2}, theta);
}

inline Homogenization bihomogenize(const ActionFamily& h1, const ActionFamily& h2) { return multihomogenize({h1, h2}); }

// The diagonal action h_t = h1_t o h2_t.
inline ActionFamily total_action(const ActionFamily& h1, const ActionFamily& h2, const std::string& parameter = "t") {
  if (!check_commuting(h1, h2).commute) throw NotDoubleStructureError("total_action: actions do not commute");
  const ChartPtr& space = h1.space();
  const std::string other = fresh_name(*space->with_parameters({parameter}), "u");
  const auto joint = detail::compose_families({h1, h2}, {parameter, other});
  const ChartPtr ctx = space->with_parameters({parameter});
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i <= space->size(); ++i) images.push_back(Polynomial::variable(ctx, i));
  images.push_back(Polynomial::variable(ctx, space->size()));
  std::vector<Polynomial> entries;
  for (const auto& e : joint) entries.push_back(substitute(e, images, ctx));
  return ActionFamily(space, parameter, std::move(entries));
}

// Canonical isomorphism T^n T^m -> T^m T^n on the adapted charts: the
// coordinate with orders (a, b) at the two outer levels is read as (b, a).
inline PolyMap flip(unsigned m, unsigned n, const ChartPtr& base) {
  if (m == 0 || n == 0) throw DomainError("flip: orders must be at least 1");
  const ChartPtr src = tangent_chart(tangent_chart(base, m), n);
  const ChartPtr dst = tangent_chart(tangent_chart(base, n), m);
  std::map<std::pair<std::string, std::vector<unsigned>>, std::size_t> index;
  for (std::size_t i = 0; i < src->size(); ++i) index[{src->var(i).root, src->var(i).jet}] = i;
  std::vector<Polynomial> pullbacks;
  for (const auto& v : dst->variables()) {
    auto jet = v.jet;
    std::swap(jet[jet.size() - 1], jet[jet.size() - 2]);
    pullbacks.push_back(Polynomial::variable(src, index.at({v.root, jet})));
  }
  return PolyMap(src, dst, std::move(pullbacks));
}

}  // namespace gradua
