#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "gradua/rational.hpp"

namespace gradua::dsl {

// 1-based source position of the first character of a construct, plus its length.
struct Span {
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t length = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind = Kind::Number;
  Integer number;        // Number
  std::string name;      // Variable
  unsigned exponent = 0; // Pow
  ExprPtr lhs;           // operand of Neg, Pow; left operand otherwise
  ExprPtr rhs;
  Span span;
};

// Structural equality; spans are ignored.
inline bool same(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Number:
      return a->number == b->number;
    case Expr::Kind::Variable:
      return a->name == b->name;
    case Expr::Kind::Neg:
      return same(a->lhs, b->lhs);
    case Expr::Kind::Pow:
      return a->exponent == b->exponent && same(a->lhs, b->lhs);
    default:
      return same(a->lhs, b->lhs) && same(a->rhs, b->rhs);
  }
}

struct Assignment {
  std::string variable;
  ExprPtr value;
  Span span;
};

struct ChartDecl {
  std::string name;
  std::vector<std::pair<std::string, unsigned>> variables;
  Span span;
};

struct MapDecl {
  std::string name;
  std::string source;
  std::string target;
  std::vector<Assignment> pullbacks;
  Span span;
};

// Entries are polynomials in the chart coordinates and the parameter `t`.
struct ActionDecl {
  std::string name;
  std::string chart;
  std::vector<Assignment> entries;
  Span span;
};

struct DoubleDecl {
  std::string name;
  std::vector<std::string> actions;
  Span span;
};

struct Command {
  enum class Kind { CheckMorphism, AnalyzeAction, Prolong, CheckDouble, Flip, Report };
  Kind kind = Kind::Report;
  std::string target;                        // map, action, double or chart name
  std::optional<std::vector<Rational>> point; // analyze-action ... at (...)
  unsigned order = 0;                        // prolong
  unsigned m = 0;                            // flip
  unsigned n = 0;
  std::string format;                        // report
  Span span;
};

using Statement = std::variant<ChartDecl, MapDecl, ActionDecl, DoubleDecl, Command>;

struct Program {
  std::vector<Statement> statements;
};

inline const char* command_keyword(Command::Kind k) {
  switch (k) {
    case Command::Kind::CheckMorphism:
      return "check-morphism";
    case Command::Kind::AnalyzeAction:
      return "analyze-action";
    case Command::Kind::Prolong:
      return "prolong";
    case Command::Kind::CheckDouble:
      return "check-double";
    case Command::Kind::Flip:
      return "flip";
    case Command::Kind::Report:
      return "report";
  }
  return "?";
}

// Structural equality of programs (spans ignored).
inline bool same(const Program& a, const Program& b) {
  if (a.statements.size() != b.statements.size()) return false;
  auto same_assignments = [](const std::vector<Assignment>& x, const std::vector<Assignment>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].variable != y[i].variable || !same(x[i].value, y[i].value)) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    const auto& s = a.statements[i];
    const auto& t = b.statements[i];
    if (s.index() != t.index()) return false;
    bool eq = std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          const auto& y = std::get<T>(t);
          if constexpr (std::is_same_v<T, ChartDecl>) {
            return x.name == y.name && x.variables == y.variables;
          } else if constexpr (std::is_same_v<T, MapDecl>) {
            return x.name == y.name && x.source == y.source && x.target == y.target &&
                   same_assignments(x.pullbacks, y.pullbacks);
          } else if constexpr (std::is_same_v<T, ActionDecl>) {
            return x.name == y.name && x.chart == y.chart && same_assignments(x.entries, y.entries);
          } else if constexpr (std::is_same_v<T, DoubleDecl>) {
            return x.name == y.name && x.actions == y.actions;
          } else {
            return x.kind == y.kind && x.target == y.target && x.point == y.point && x.order == y.order &&
                   x.m == y.m && x.n == y.n && x.format == y.format;
          }
        },
        s);
    if (!eq) return false;
  }
  return true;
}

// ---- printing ------------------------------------------------------------

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

}  // namespace detail

// Minimal parenthesization; parsing the output gives back the same tree.
inline std::string print(const Expr& e) {
  auto wrap = [](const Expr& child, bool parens) { return parens ? "(" + print(child) + ")" : print(child); };
  const int p = detail::precedence(e);
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number.get_str();
    case Expr::Kind::Variable:
      return e.name;
    case Expr::Kind::Neg:
      return "-" + wrap(*e.lhs, detail::precedence(*e.lhs) < p);
    case Expr::Kind::Pow:
      return wrap(*e.lhs, detail::precedence(*e.lhs) <= p) + "^" + std::to_string(e.exponent);
    default: {
      static const char* ops[] = {"", "", "", " + ", " - ", "*", "/"};
      const std::string op = ops[static_cast<int>(e.kind)];
      return wrap(*e.lhs, detail::precedence(*e.lhs) < p) + op + wrap(*e.rhs, detail::precedence(*e.rhs) <= p);
    }
  }
}

inline std::string print(const ExprPtr& e) { return print(*e); }

inline std::string print(const Statement& s) {
  auto block = [](const std::vector<Assignment>& items, const char* arrow) {
    std::string out = " {";
    for (const auto& a : items) out += "\n  " + a.variable + arrow + print(a.value) + ";";
    return out + (items.empty() ? " }" : "\n}");
  };
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ChartDecl>) {
          std::string out = "chart " + x.name + " (";
          for (std::size_t i = 0; i < x.variables.size(); ++i) {
            if (i > 0) out += ", ";
            out += x.variables[i].first + ":" + std::to_string(x.variables[i].second);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, MapDecl>) {
          return "map " + x.name + " : " + x.source + " -> " + x.target + block(x.pullbacks, " = ");
        } else if constexpr (std::is_same_v<T, ActionDecl>) {
          return "action " + x.name + " on " + x.chart + block(x.entries, " -> ");
        } else if constexpr (std::is_same_v<T, DoubleDecl>) {
          std::string out = "double " + x.name + " { ";
          for (std::size_t i = 0; i < x.actions.size(); ++i) out += (i > 0 ? ", " : "") + x.actions[i];
          return out + " }";
        } else {
          std::string out = command_keyword(x.kind);
          switch (x.kind) {
            case Command::Kind::Prolong:
              return out + " " + x.target + " order " + std::to_string(x.order);
            case Command::Kind::Flip:
              return out + " " + std::to_string(x.m) + " " + std::to_string(x.n) + " " + x.target;
            case Command::Kind::Report:
              return out + " " + x.format;
            case Command::Kind::AnalyzeAction:
              out += " " + x.target;
              if (x.point) {
                out += " at (";
                for (std::size_t i = 0; i < x.point->size(); ++i) out += (i > 0 ? ", " : "") + (*x.point)[i].get_str();
                out += ")";
              }
              return out;
            default:
              return out + " " + x.target;
          }
        }
      },
      s);
}

inline std::string print(const Program& program) {
  std::string out;
  for (const auto& s : program.statements) out += print(s) + "\n";
  return out;
}

}  // namespace gradua::dsl
