#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gradua/chart.hpp"
#include "gradua/errors.hpp"
#include "gradua/family.hpp"
#include "gradua/map.hpp"
#include "gradua/polynomial.hpp"
#include "gradua/rational.hpp"

namespace gradua {

// Adapted chart of T^r over `base`: coordinate x'k (x at k = 0) for every
// base coordinate x and order k <= r, ordered by k, then by base order.
// The order-k coordinate has weight w(x) + k and one more jet level.
inline ChartPtr tangent_chart(const ChartPtr& base, unsigned r) {
  std::vector<Variable> vars;
  vars.reserve(base->size() * (r + 1));
  for (unsigned k = 0; k <= r; ++k) {
    for (const auto& v : base->variables()) {
      Variable j;
      j.root = v.root;
      j.jet = v.jet;
      j.jet.push_back(k);
      j.name = k == 0 ? v.name : jet_name(v.root, j.jet);
      j.weight = v.weight + k;
      vars.push_back(std::move(j));
    }
  }
  return Chart::make("T" + std::to_string(r) + "(" + base->name() + ")", std::move(vars));
}

// Number of prolongation levels of an adapted chart (0 for a plain chart).
inline std::size_t jet_levels(const Chart& chart) {
  return chart.size() == 0 ? 0 : chart.var(0).jet.size();
}

// Highest order at the outermost level.
inline unsigned jet_order(const Chart& chart) {
  unsigned r = 0;
  for (const auto& v : chart.variables()) {
    if (!v.jet.empty()) r = std::max(r, v.jet.back());
  }
  return r;
}

namespace detail {

// Drops every term whose exponent in `var` exceeds `limit`.
inline Polynomial truncate_in(const Polynomial& f, std::size_t var, unsigned limit) {
  Polynomial g(f.context());
  for (const auto& [m, c] : f.terms()) {
    if (m[var] <= limit) g.add_term(m, c);
  }
  return g;
}

// Pulls polynomials on `base` + parameters (parameters last, carried inertly)
// back along curves x(tau) = sum_k tau^k/k! x'k, modulo tau^{r+1}. Returns the
// pullbacks of the order-k coordinates of T^r over the codomain, one block per
// k, each over tangent_chart(base, r) + the same parameters.
inline std::vector<std::vector<Polynomial>> taylor_pullbacks(const std::vector<Polynomial>& components,
                                                             const ChartPtr& base, unsigned r) {
  const ChartPtr& ctx = components.front().context();
  const std::size_t n = base->size();
  std::vector<std::string> params;
  for (std::size_t p = n; p < ctx->size(); ++p) params.push_back(ctx->var(p).name);

  const ChartPtr jets = tangent_chart(base, r);
  const ChartPtr out_ctx = params.empty() ? jets : jets->with_parameters(params);
  std::vector<std::string> with_tau = params;
  with_tau.push_back(fresh_name(*out_ctx, "tau"));
  const ChartPtr work = jets->with_parameters(with_tau);
  const std::size_t tau = work->size() - 1;

  // Curve images and their truncated powers.
  std::vector<Polynomial> curve;
  for (std::size_t a = 0; a < n; ++a) {
    Polynomial c(work);
    for (unsigned k = 0; k <= r; ++k) {
      Monomial m(work->size(), 0);
      m[k * n + a] = 1;
      m[tau] = k;
      c.add_term(m, Rational(1) / Rational(factorial(k)));
    }
    curve.push_back(std::move(c));
  }
  std::vector<std::vector<Polynomial>> powers(ctx->size());
  auto power_of = [&](std::size_t v, unsigned e) -> const Polynomial& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Polynomial::constant(work, 1));
    while (cache.size() <= e) {
      Polynomial base_image = v < n ? curve[v] : Polynomial::variable(work, jets->size() + (v - n));
      cache.push_back(truncate_in(cache.back() * base_image, tau, r));
    }
    return cache[e];
  };

  std::vector<std::vector<Polynomial>> out(r + 1);
  for (const auto& f : components) {
    require_compatible(f.context(), ctx, "prolong");
    Polynomial expanded(work);
    for (const auto& [m, c] : f.terms()) {
      Polynomial term = Polynomial::constant(work, c);
      for (std::size_t v = 0; v < m.size(); ++v) {
        if (m[v] != 0) term = truncate_in(term * power_of(v, m[v]), tau, r);
      }
      expanded += term;
    }
    const auto coeffs = coefficients_in(expanded, tau);
    for (unsigned k = 0; k <= r; ++k) {
      Polynomial p = k < coeffs.size() ? embed(coeffs[k], out_ctx) : Polynomial(out_ctx);
      out[k].push_back(Rational(factorial(k)) * p);
    }
  }
  return out;
}

}  // namespace detail

// T^r of a polynomial map, between the adapted charts of T^r.
inline PolyMap prolong(const PolyMap& phi, unsigned r) {
  const ChartPtr src = tangent_chart(phi.source(), r);
  const ChartPtr dst = tangent_chart(phi.target(), r);
  if (phi.target()->size() == 0) return PolyMap(src, dst, {});
  const auto blocks = detail::taylor_pullbacks(phi.pullbacks(), phi.source(), r);
  std::vector<Polynomial> pullbacks;
  for (const auto& block : blocks) {
    for (const auto& p : block) pullbacks.push_back(p);
  }
  return PolyMap(src, dst, std::move(pullbacks));
}

// T^k h_t with t inert: an action on the adapted chart of T^k.
inline ActionFamily prolong_action(const ActionFamily& h, unsigned k) {
  const ChartPtr space = tangent_chart(h.space(), k);
  const auto blocks = detail::taylor_pullbacks(h.entries(), h.space(), k);
  std::vector<Polynomial> entries;
  for (const auto& block : blocks) {
    for (const auto& p : block) entries.push_back(p);
  }
  return ActionFamily(space, h.parameter(), std::move(entries));
}

// Homotheties of one prolongation level: a coordinate of order k at that
// level is scaled by t^k. The default level is the outermost one.
inline ActionFamily jet_action(const ChartPtr& chart, const std::string& parameter = "t", int level = -1) {
  const std::size_t levels = jet_levels(*chart);
  if (levels == 0) throw DomainError("jet_action: chart '" + chart->name() + "' has no jet coordinates");
  const std::size_t l = level < 0 ? levels - 1 : static_cast<std::size_t>(level);
  if (l >= levels) throw DomainError("jet_action: level out of range");
  const ChartPtr ctx = chart->with_parameters({parameter});
  std::vector<Polynomial> entries;
  for (std::size_t i = 0; i < chart->size(); ++i) {
    Monomial m(ctx->size(), 0);
    m[i] = 1;
    m[chart->size()] = chart->var(i).jet.at(l);
    entries.push_back(Polynomial::monomial(ctx, m, 1));
  }
  return ActionFamily(chart, parameter, std::move(entries));
}

// iota_k : TM -> T^kM, a tangent vector placed in the top jet slot.
inline PolyMap iota(unsigned k, const ChartPtr& base) {
  if (k == 0) throw DomainError("iota: order must be at least 1");
  const ChartPtr src = tangent_chart(base, 1);
  const ChartPtr dst = tangent_chart(base, k);
  const std::size_t n = base->size();
  std::vector<Polynomial> pullbacks;
  for (unsigned r = 0; r <= k; ++r) {
    for (std::size_t a = 0; a < n; ++a) {
      if (r == 0) {
        pullbacks.push_back(Polynomial::variable(src, a));
      } else if (r == k) {
        pullbacks.push_back(Polynomial::variable(src, n + a));
      } else {
        pullbacks.push_back(Polynomial(src));
      }
    }
  }
  return PolyMap(src, dst, std::move(pullbacks));
}

// q : T^n -> T^r, forgetting outermost orders above r.
inline PolyMap jet_projection(unsigned r, const ChartPtr& chart) {
  if (jet_levels(*chart) == 0) throw DomainError("jet_projection: chart '" + chart->name() + "' has no jet coordinates");
  const unsigned n = jet_order(*chart);
  if (r > n) {
    throw DomainError("jet_projection: order " + std::to_string(r) + " exceeds the chart order " + std::to_string(n));
  }
  std::vector<Variable> kept;
  std::vector<Polynomial> pullbacks;
  for (std::size_t i = 0; i < chart->size(); ++i) {
    if (chart->var(i).jet.back() <= r) {
      kept.push_back(chart->var(i));
      pullbacks.push_back(Polynomial::variable(chart, i));
    }
  }
  std::string name = chart->name();
  if (r != n) {
    const auto open = name.find('(');
    name = open != std::string::npos && name.front() == 'T' ? "T" + std::to_string(r) + name.substr(open)
                                                            : name + "|" + std::to_string(r);
  }
  ChartPtr target = Chart::make(name, std::move(kept));
  return PolyMap(chart, target, std::move(pullbacks));
}

}  // namespace gradua
