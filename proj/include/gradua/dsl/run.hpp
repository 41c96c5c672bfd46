#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gradua/action.hpp"
#include "gradua/dsl/ast.hpp"
#include "gradua/dsl/parser.hpp"
#include "gradua/graded.hpp"
#include "gradua/jets.hpp"
#include "gradua/multigrade.hpp"

namespace gradua::dsl {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

// ---- JSON encoders -----------------------------------------------------------

inline Json to_json(const Rational& q) { return q.get_str(); }

inline Json to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

// Row-major array of rational strings.
inline Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

inline Json to_json(const Chart& chart) {
  Json out = Json::array();
  for (const auto& v : chart.variables()) out.push_back(Json{{"name", v.name}, {"weight", v.weight}});
  return out;
}

inline Json to_json(const PolyMap& f) {
  Json out = Json::object();
  for (std::size_t j = 0; j < f.target()->size(); ++j) out[f.target()->var(j).name] = f.pullback(j).str();
  return out;
}

inline Json to_json(const ActionFamily& h) {
  Json out = Json::object();
  for (std::size_t i = 0; i < h.dimension(); ++i) out[h.space()->var(i).name] = h.entry(i).str();
  return out;
}

inline Json to_json(const std::vector<LawWitness>& ws) {
  Json out = Json::array();
  for (const auto& w : ws) {
    out.push_back(Json{{"law", w.law},
                       {"variable", w.variable},
                       {"expected", w.expected.str()},
                       {"actual", w.actual.str()},
                       {"difference", w.difference.str()}});
  }
  return out;
}

inline Json error_json(const Error& e) { return Json{{"kind", e.kind()}, {"message", e.what()}}; }

// ---- evaluation -----------------------------------------------------------------

inline Polynomial evaluate(const Expr& e, const ChartPtr& ctx) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return Polynomial::constant(ctx, Rational(e.number));
    case Expr::Kind::Variable:
      return Polynomial::variable(ctx, e.name);
    case Expr::Kind::Neg:
      return Rational(-1) * evaluate(*e.lhs, ctx);
    case Expr::Kind::Pow:
      return evaluate(*e.lhs, ctx).pow(e.exponent);
    case Expr::Kind::Add:
      return evaluate(*e.lhs, ctx) + evaluate(*e.rhs, ctx);
    case Expr::Kind::Sub:
      return evaluate(*e.lhs, ctx) - evaluate(*e.rhs, ctx);
    case Expr::Kind::Mul:
      return evaluate(*e.lhs, ctx) * evaluate(*e.rhs, ctx);
    case Expr::Kind::Div: {
      const Polynomial d = evaluate(*e.rhs, ctx);
      if (!d.is_constant() || d.is_zero()) throw DomainError("division by a non-constant or zero expression");
      return (Rational(1) / d.constant_term()) * evaluate(*e.lhs, ctx);
    }
  }
  throw EngineDefectError("unknown expression node");
}

struct RunOptions {
  bool timing = false;
};

struct RunResult {
  Json report;
  bool all_passed = true;
  std::optional<std::string> format;  // last `report` directive, if any
};

// Executes the commands of a resolved program in order.
class Runner {
 public:
  explicit Runner(RunOptions options = {}) : options_(options) {}

  RunResult run(const Program& program) {
    RunResult result;
    result.report = Json{{"version", kSchemaVersion}, {"results", Json::array()}};
    for (const auto& s : program.statements) {
      if (const auto* c = std::get_if<ChartDecl>(&s)) {
        charts_[c->name] = Chart::make(c->name, c->variables);
      } else if (const auto* m = std::get_if<MapDecl>(&s)) {
        maps_[m->name] = build(*m);
      } else if (const auto* a = std::get_if<ActionDecl>(&s)) {
        actions_[a->name] = build(*a);
      } else if (const auto* d = std::get_if<DoubleDecl>(&s)) {
        doubles_[d->name] = d->actions;
      } else {
        const auto& cmd = std::get<Command>(s);
        if (cmd.kind == Command::Kind::Report) {
          result.format = cmd.format;
          continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Json entry = execute(cmd);
        if (options_.timing) {
          const auto elapsed = std::chrono::steady_clock::now() - start;
          entry["elapsed_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
        }
        if (entry["status"] != "pass") result.all_passed = false;
        result.report["results"].push_back(std::move(entry));
      }
    }
    return result;
  }

 private:
  PolyMap build(const MapDecl& m) const {
    const ChartPtr& src = charts_.at(m.source);
    const ChartPtr& dst = charts_.at(m.target);
    std::vector<Polynomial> pullbacks(dst->size(), Polynomial(src));
    for (const auto& a : m.pullbacks) pullbacks[dst->require_index(a.variable)] = evaluate(*a.value, src);
    return PolyMap(src, dst, std::move(pullbacks));
  }

  ActionFamily build(const ActionDecl& a) const {
    const ChartPtr& chart = charts_.at(a.chart);
    const ChartPtr ctx = chart->with_parameters({"t"});
    std::vector<Polynomial> entries(chart->size(), Polynomial(ctx));
    for (const auto& e : a.entries) entries[chart->require_index(e.variable)] = evaluate(*e.value, ctx);
    return ActionFamily(chart, "t", std::move(entries));
  }

  Json execute(const Command& cmd) const {
    Json out{{"command", print(Statement{cmd})}, {"status", "error"}};
    try {
      switch (cmd.kind) {
        case Command::Kind::CheckMorphism:
          check_morphism(cmd, out);
          break;
        case Command::Kind::AnalyzeAction:
          analyze_action(cmd, out);
          break;
        case Command::Kind::Prolong:
          prolong_map(cmd, out);
          break;
        case Command::Kind::CheckDouble:
          check_double(cmd, out);
          break;
        case Command::Kind::Flip:
          flip_chart(cmd, out);
          break;
        case Command::Kind::Report:
          break;
      }
    } catch (const Error& e) {
      out["status"] = "error";
      out["error"] = error_json(e);
    }
    return out;
  }

  static void set_status(Json& out, bool ok) { out["status"] = ok ? "pass" : "fail"; }

  void check_morphism(const Command& cmd, Json& out) const {
    const PolyMap& f = maps_.at(cmd.target);
    out["map"] = cmd.target;
    out["source"] = f.source()->name();
    out["target"] = f.target()->name();
    out["pullbacks"] = to_json(f);
    const bool graded = is_graded_morphism(f);
    out["graded"] = graded;
    if (graded && compatible(f.source(), f.target())) {
      try {
        const PolyMap inv = invert_automorphism(f);
        out["automorphism"] = true;
        out["inverse"] = to_json(inv);
        if (f.source()->degree() <= 2 && f.source()->base_dimension() == 0) {
          out["matrix"] = to_json(matrix_representation(f));
        }
      } catch (const NotInvertibleError& e) {
        out["automorphism"] = false;
        out["reason"] = e.what();
      }
    }
    set_status(out, graded);
  }

  void analyze_action(const Command& cmd, Json& out) const {
    const ActionFamily& h = actions_.at(cmd.target);
    out["action"] = cmd.target;
    out["entries"] = to_json(h);
    const AnalysisReport r = analyze(h, cmd.point);
    out["semigroup"] = r.laws.semigroup;
    out["monoid"] = r.laws.monoid;
    out["witnesses"] = to_json(r.laws.witnesses);
    if (r.base_projection) out["base_projection"] = to_json(*r.base_projection);
    if (r.homogenization) {
      const Homogenization& hz = *r.homogenization;
      out["base_point"] = to_json(hz.base_point);
      out["degree"] = *r.degree;
      Json qs = Json::array();
      for (std::size_t k = 0; k < hz.projections.front().size(); ++k) {
        qs.push_back(Json{{"weight", k}, {"matrix", to_json(hz.projections.front()[k])}});
      }
      out["projections"] = std::move(qs);
      out["chart"] = to_json(*hz.chart);
      out["homogenizer"] = to_json(hz.homogenizer);
      out["inverse"] = to_json(hz.inverse);
      if (r.reflection) out["reflection"] = to_json(*r.reflection);
    }
    if (!r.error_kind.empty()) {
      out["status"] = "error";
      out["error"] = Json{{"kind", r.error_kind}, {"message", r.error_message}};
      return;
    }
    set_status(out, r.ok());
  }

  void prolong_map(const Command& cmd, Json& out) const {
    const PolyMap& f = maps_.at(cmd.target);
    const PolyMap p = prolong(f, cmd.order);
    out["map"] = cmd.target;
    out["order"] = cmd.order;
    out["source"] = to_json(*p.source());
    out["target"] = to_json(*p.target());
    out["pullbacks"] = to_json(p);
    const bool graded = is_graded_morphism(p);
    out["graded"] = graded;
    set_status(out, graded);
  }

  void check_double(const Command& cmd, Json& out) const {
    const auto& names = doubles_.at(cmd.target);
    std::vector<ActionFamily> hs;
    for (const auto& n : names) hs.push_back(actions_.at(n));
    out["double"] = cmd.target;
    out["actions"] = names;
    bool commute = true;
    Json witnesses = Json::array();
    for (std::size_t a = 0; a < hs.size(); ++a) {
      for (std::size_t b = a + 1; b < hs.size(); ++b) {
        const auto v = check_commuting(hs[a], hs[b]);
        commute = commute && v.commute;
        for (auto& w : to_json(v.witnesses)) {
          w["pair"] = Json::array({names[a], names[b]});
          witnesses.push_back(w);
        }
      }
    }
    out["commute"] = commute;
    out["witnesses"] = std::move(witnesses);
    if (!commute) {
      set_status(out, false);
      return;
    }
    const Homogenization hz = multihomogenize(hs);
    Json table = Json::array();
    for (std::size_t i = 0; i < hz.chart->size(); ++i) {
      table.push_back(Json{{"name", hz.chart->var(i).name}, {"multidegree", hz.grades[i]}});
    }
    out["multidegrees"] = std::move(table);
    out["homogenizer"] = to_json(hz.homogenizer);
    out["inverse"] = to_json(hz.inverse);
    ActionFamily total = hs.front();
    for (std::size_t k = 1; k < hs.size(); ++k) total = total_action(total, hs[k]);
    out["total_degree"] = detect_degree(total);
    set_status(out, true);
  }

  void flip_chart(const Command& cmd, Json& out) const {
    const ChartPtr& base = charts_.at(cmd.target);
    const PolyMap f = flip(cmd.m, cmd.n, base);
    out["m"] = cmd.m;
    out["n"] = cmd.n;
    out["chart"] = cmd.target;
    out["source"] = to_json(*f.source());
    out["target"] = to_json(*f.target());
    out["pullbacks"] = to_json(f);
    const bool inner = intertwines(f, jet_action(f.source(), "t", 0), jet_action(f.target(), "t", 1));
    const bool outer = intertwines(f, jet_action(f.source(), "t", 1), jet_action(f.target(), "t", 0));
    out["intertwines"] = inner && outer;
    bool ok = inner && outer;
    if (cmd.m == cmd.n) {
      const bool involution = compose(f, f).is_identity();
      out["involution"] = involution;
      ok = ok && involution;
    }
    set_status(out, ok);
  }

  RunOptions options_;
  std::map<std::string, ChartPtr> charts_;
  std::map<std::string, PolyMap> maps_;
  std::map<std::string, ActionFamily> actions_;
  std::map<std::string, std::vector<std::string>> doubles_;
};

// ---- emitters ---------------------------------------------------------------------

inline std::string emit_json(const Json& report) { return report.dump(2) + "\n"; }

namespace detail {

inline void emit_text_value(std::string& out, const Json& v, const std::string& indent) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (x.is_structured() && !x.empty()) {
        out += indent + k + ":\n";
        emit_text_value(out, x, indent + "  ");
      } else {
        out += indent + k + ": " + (x.is_string() ? x.get<std::string>() : x.dump()) + "\n";
      }
    }
  } else if (v.is_array()) {
    const bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
    if (flat) {
      out += indent + v.dump() + "\n";
      return;
    }
    for (const auto& x : v) {
      const bool row = x.is_array() &&
                       std::all_of(x.begin(), x.end(), [](const Json& y) { return y.is_primitive(); });
      if (row || x.is_primitive()) {
        out += indent + x.dump() + "\n";
      } else {
        out += indent + "-\n";
        emit_text_value(out, x, indent + "  ");
      }
    }
  } else {
    out += indent + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  }
}

}  // namespace detail

// Human-readable rendering of the same report.
inline std::string emit_text(const Json& report) {
  std::string out = "gradua report (schema " + report["version"].get<std::string>() + ")\n";
  for (const auto& r : report["results"]) {
    out += "\n[" + r["status"].get<std::string>() + "] " + r["command"].get<std::string>() + "\n";
    Json rest = Json::object();
    for (const auto& [k, v] : r.items()) {
      if (k != "status" && k != "command") rest[k] = v;
    }
    detail::emit_text_value(out, rest, "  ");
  }
  return out;
}

}  // namespace gradua::dsl
