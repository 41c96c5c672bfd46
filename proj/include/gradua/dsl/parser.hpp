#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gradua/dsl/ast.hpp"
#include "gradua/errors.hpp"
#include "gradua/rational.hpp"

namespace gradua::dsl {

// Bounds that keep every command finite and small.
inline constexpr unsigned kMaxExponent = 64;
inline constexpr unsigned kMaxOrder = 12;
inline constexpr unsigned kMaxWeight = 64;

struct Token {
  enum class Kind { Identifier, Command, Integer, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  Span span;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::End:
      return "end of input";
    case Token::Kind::Integer:
      return "number " + t.text;
    default:
      return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.span = {line_, column_, 0};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      const std::size_t start = pos_;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::Identifier;
        t.text = word();
        if (peek() == '-' && (t.text == "check" || t.text == "analyze")) {
          // Hyphenated command keywords.
          const std::size_t save = pos_, save_col = column_;
          advance();
          const std::string rest = std::isalpha(static_cast<unsigned char>(peek())) ? word() : "";
          const std::string joined = t.text + "-" + rest;
          if (joined == "check-morphism" || joined == "analyze-action" || joined == "check-double") {
            t.kind = Token::Kind::Command;
            t.text = joined;
          } else {
            pos_ = save;
            column_ = save_col;
          }
        }
        if (t.kind == Token::Kind::Identifier) {
          while (peek() == '\'') {
            t.text += '\'';
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
          }
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Token::Kind::Integer;
        while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.kind = Token::Kind::Symbol;
        t.text = "->";
        advance();
        advance();
      } else if (std::string_view("(){},;:=+-*/^").find(c) != std::string_view::npos) {
        t.kind = Token::Kind::Symbol;
        t.text = std::string(1, advance());
      } else {
        throw ParseError(line_, column_, std::string("unexpected character '") + c + "'");
      }
      t.span.length = pos_ - start;
      out.push_back(std::move(t));
    }
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  std::string word() {
    std::string w;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') w += advance();
    return w;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

namespace detail {

inline std::optional<Rational> constant_value(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return Rational(e.number);
    case Expr::Kind::Variable:
      return std::nullopt;
    case Expr::Kind::Neg: {
      auto v = constant_value(*e.lhs);
      if (v) *v = -*v;
      return v;
    }
    case Expr::Kind::Pow: {
      auto v = constant_value(*e.lhs);
      if (v) *v = power(*v, e.exponent);
      return v;
    }
    default: {
      auto a = constant_value(*e.lhs);
      auto b = constant_value(*e.rhs);
      if (!a || !b) return std::nullopt;
      switch (e.kind) {
        case Expr::Kind::Add:
          return Rational(*a + *b);
        case Expr::Kind::Sub:
          return Rational(*a - *b);
        case Expr::Kind::Mul:
          return Rational(*a * *b);
        default:
          if (*b == 0) return std::nullopt;
          return Rational(*a / *b);
      }
    }
  }
}

}  // namespace detail

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(Lexer(src).tokenize()) {}

  Program parse() {
    Program program;
    while (!at_end()) program.statements.push_back(statement());
    return program;
  }

 private:
  // ---- token helpers

  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(at.span.line, at.span.column, message);
  }

  [[noreturn]] void expected(const std::string& what) const { fail(peek(), "expected " + what + ", found " + describe(peek())); }

  bool is_symbol(std::string_view s) const { return peek().kind == Token::Kind::Symbol && peek().text == s; }
  bool is_word(std::string_view s) const { return peek().kind == Token::Kind::Identifier && peek().text == s; }

  Token take() { return tokens_[pos_++]; }

  void symbol(std::string_view s) {
    if (!is_symbol(s)) expected("'" + std::string(s) + "'");
    take();
  }

  void keyword(std::string_view s) {
    if (!is_word(s)) expected("'" + std::string(s) + "'");
    take();
  }

  Token identifier(const std::string& what) {
    if (peek().kind != Token::Kind::Identifier) expected(what);
    return take();
  }

  unsigned integer(const std::string& what, unsigned limit) {
    if (peek().kind != Token::Kind::Integer) expected(what);
    const Token t = take();
    if (t.text.size() > 9 || std::stoul(t.text) > limit) fail(t, what + " exceeds the limit " + std::to_string(limit));
    return static_cast<unsigned>(std::stoul(t.text));
  }

  Rational rational() {
    bool negative = false;
    if (is_symbol("-")) {
      take();
      negative = true;
    }
    if (peek().kind != Token::Kind::Integer) expected("a rational number");
    Rational value(Integer(take().text));
    if (is_symbol("/")) {
      take();
      if (peek().kind != Token::Kind::Integer) expected("a denominator");
      const Token d = take();
      const Integer den(d.text);
      if (den == 0) fail(d, "zero denominator");
      value /= Rational(den);
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
  }

  // ---- statements

  Statement statement() {
    const Token head = peek();
    if (head.kind == Token::Kind::Command) return command();
    if (head.kind != Token::Kind::Identifier) expected("a declaration or command");
    if (head.text == "chart") return chart();
    if (head.text == "map") return map();
    if (head.text == "action") return action();
    if (head.text == "double") return double_decl();
    if (head.text == "prolong" || head.text == "flip" || head.text == "report") return command();
    fail(head, "expected a declaration or command, found " + describe(head));
  }

  ChartDecl chart() {
    ChartDecl d;
    d.span = take().span;
    d.name = identifier("a chart name").text;
    symbol("(");
    if (!is_symbol(")")) {
      for (;;) {
        const std::string v = identifier("a coordinate name").text;
        symbol(":");
        d.variables.emplace_back(v, integer("a weight", kMaxWeight));
        if (!is_symbol(",")) break;
        take();
      }
    }
    symbol(")");
    return d;
  }

  std::vector<Assignment> assignments(std::string_view arrow) {
    std::vector<Assignment> out;
    symbol("{");
    while (!is_symbol("}")) {
      Assignment a;
      const Token v = identifier("a coordinate name");
      a.variable = v.text;
      a.span = v.span;
      symbol(arrow);
      a.value = expression();
      out.push_back(std::move(a));
      if (is_symbol(";")) {
        take();
      } else if (!is_symbol("}")) {
        expected("';' or '}'");
      }
    }
    take();
    return out;
  }

  MapDecl map() {
    MapDecl d;
    d.span = take().span;
    d.name = identifier("a map name").text;
    symbol(":");
    d.source = identifier("a source chart").text;
    symbol("->");
    d.target = identifier("a target chart").text;
    d.pullbacks = assignments("=");
    return d;
  }

  ActionDecl action() {
    ActionDecl d;
    d.span = take().span;
    d.name = identifier("an action name").text;
    keyword("on");
    d.chart = identifier("a chart name").text;
    d.entries = assignments("->");
    return d;
  }

  DoubleDecl double_decl() {
    DoubleDecl d;
    d.span = take().span;
    d.name = identifier("a name").text;
    symbol("{");
    if (is_word("action")) {
      // Long form: { action A; action B }
      while (is_word("action")) {
        take();
        d.actions.push_back(identifier("an action name").text);
        if (is_symbol(";")) take();
      }
    } else {
      for (;;) {
        d.actions.push_back(identifier("an action name").text);
        if (!is_symbol(",")) break;
        take();
      }
    }
    symbol("}");
    return d;
  }

  Command command() {
    const Token head = take();
    Command c;
    c.span = head.span;
    if (head.text == "check-morphism") {
      c.kind = Command::Kind::CheckMorphism;
      c.target = identifier("a map name").text;
    } else if (head.text == "analyze-action") {
      c.kind = Command::Kind::AnalyzeAction;
      c.target = identifier("an action name").text;
      if (is_word("at")) {
        take();
        symbol("(");
        std::vector<Rational> point;
        if (!is_symbol(")")) {
          for (;;) {
            point.push_back(rational());
            if (!is_symbol(",")) break;
            take();
          }
        }
        symbol(")");
        c.point = std::move(point);
      }
    } else if (head.text == "check-double") {
      c.kind = Command::Kind::CheckDouble;
      c.target = identifier("a double structure name").text;
    } else if (head.text == "prolong") {
      c.kind = Command::Kind::Prolong;
      c.target = identifier("a map name").text;
      keyword("order");
      c.order = integer("an order", kMaxOrder);
    } else if (head.text == "flip") {
      c.kind = Command::Kind::Flip;
      c.m = integer("an order", kMaxOrder);
      c.n = integer("an order", kMaxOrder);
      c.target = identifier("a chart name").text;
    } else {
      c.kind = Command::Kind::Report;
      if (!is_word("json") && !is_word("text")) expected("'json' or 'text'");
      c.format = take().text;
    }
    return c;
  }

  // ---- expressions

  static ExprPtr node(Expr::Kind k, ExprPtr lhs, ExprPtr rhs, Span span) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->span = span;
    return e;
  }

  bool starts_operand() const {
    return peek().kind == Token::Kind::Identifier || peek().kind == Token::Kind::Integer || is_symbol("(") ||
           is_symbol("-");
  }

  ExprPtr operand_after(const Token& op, ExprPtr (Parser::*next)()) {
    if (!starts_operand()) fail(op, "expected an operand after '" + op.text + "', found " + describe(peek()));
    return (this->*next)();
  }

  ExprPtr expression() {
    if (!starts_operand()) expected("an expression");
    ExprPtr lhs = term();
    while (is_symbol("+") || is_symbol("-")) {
      const Token op = take();
      ExprPtr rhs = operand_after(op, &Parser::term);
      lhs = node(op.text == "+" ? Expr::Kind::Add : Expr::Kind::Sub, lhs, rhs, op.span);
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (is_symbol("*") || is_symbol("/")) {
      const Token op = take();
      ExprPtr rhs = operand_after(op, &Parser::unary);
      lhs = node(op.text == "*" ? Expr::Kind::Mul : Expr::Kind::Div, lhs, rhs, op.span);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (is_symbol("-")) {
      const Token op = take();
      return node(Expr::Kind::Neg, operand_after(op, &Parser::unary), nullptr, op.span);
    }
    return power_expr();
  }

  ExprPtr power_expr() {
    ExprPtr base = primary();
    while (is_symbol("^")) {
      const Token op = take();
      if (peek().kind != Token::Kind::Integer) fail(op, "expected a nonnegative integer exponent after '^'");
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Pow;
      e->lhs = base;
      e->exponent = integer("an exponent", kMaxExponent);
      e->span = op.span;
      base = e;
    }
    return base;
  }

  ExprPtr primary() {
    const Token t = peek();
    if (t.kind == Token::Kind::Integer) {
      take();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Number;
      e->number = Integer(t.text);
      e->span = t.span;
      return e;
    }
    if (t.kind == Token::Kind::Identifier) {
      take();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Variable;
      e->name = t.text;
      e->span = t.span;
      return e;
    }
    if (is_symbol("(")) {
      take();
      ExprPtr inner = expression();
      symbol(")");
      return inner;
    }
    expected("an expression");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

namespace detail {

inline void check_expression(const Expr& e, const std::set<std::string>& allowed, const std::string& where) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return;
    case Expr::Kind::Variable:
      if (!allowed.count(e.name)) {
        throw ParseError(e.span.line, e.span.column, "'" + e.name + "' is not a coordinate of " + where);
      }
      return;
    case Expr::Kind::Neg:
    case Expr::Kind::Pow:
      check_expression(*e.lhs, allowed, where);
      return;
    case Expr::Kind::Div: {
      check_expression(*e.lhs, allowed, where);
      check_expression(*e.rhs, allowed, where);
      const auto d = constant_value(*e.rhs);
      if (!d) throw ParseError(e.span.line, e.span.column, "division by a non-constant expression");
      if (*d == 0) throw ParseError(e.span.line, e.span.column, "division by zero");
      return;
    }
    default:
      check_expression(*e.lhs, allowed, where);
      check_expression(*e.rhs, allowed, where);
  }
}

inline void check_assignments(const std::vector<Assignment>& items, const ChartDecl& lhs_chart,
                              const std::set<std::string>& rhs_names, const std::string& rhs_where,
                              const Span& decl) {
  std::set<std::string> seen;
  std::set<std::string> coords;
  for (const auto& [v, w] : lhs_chart.variables) coords.insert(v);
  for (const auto& a : items) {
    if (!coords.count(a.variable)) {
      throw ParseError(a.span.line, a.span.column,
                       "'" + a.variable + "' is not a coordinate of chart '" + lhs_chart.name + "'");
    }
    if (!seen.insert(a.variable).second) {
      throw ParseError(a.span.line, a.span.column, "coordinate '" + a.variable + "' is assigned twice");
    }
    check_expression(*a.value, rhs_names, rhs_where);
  }
  for (const auto& [v, w] : lhs_chart.variables) {
    if (!seen.count(v)) throw ParseError(decl.line, decl.column, "no entry for coordinate '" + v + "'");
  }
}

// Names unique per kind, references resolved, expressions confined to their charts.
inline void resolve(const Program& program) {
  std::map<std::string, const ChartDecl*> charts;
  std::map<std::string, const MapDecl*> maps;
  std::map<std::string, const ActionDecl*> actions;
  std::map<std::string, const DoubleDecl*> doubles;
  auto lookup = [](const auto& table, const std::string& name, const Span& at, const char* what) {
    auto it = table.find(name);
    if (it == table.end()) throw ParseError(at.line, at.column, std::string("unknown ") + what + " '" + name + "'");
    return it->second;
  };
  auto declare = [](auto& table, const auto& decl, const char* what) {
    if (!table.emplace(decl.name, &decl).second) {
      throw ParseError(decl.span.line, decl.span.column, std::string("duplicate ") + what + " '" + decl.name + "'");
    }
  };

  for (const auto& s : program.statements) {
    if (const auto* c = std::get_if<ChartDecl>(&s)) {
      std::set<std::string> names;
      for (const auto& [v, w] : c->variables) {
        if (!names.insert(v).second) {
          throw ParseError(c->span.line, c->span.column, "duplicate coordinate '" + v + "' in chart '" + c->name + "'");
        }
      }
      declare(charts, *c, "chart");
    } else if (const auto* m = std::get_if<MapDecl>(&s)) {
      const ChartDecl* src = lookup(charts, m->source, m->span, "chart");
      const ChartDecl* dst = lookup(charts, m->target, m->span, "chart");
      std::set<std::string> names;
      for (const auto& [v, w] : src->variables) names.insert(v);
      check_assignments(m->pullbacks, *dst, names, "chart '" + src->name + "'", m->span);
      declare(maps, *m, "map");
    } else if (const auto* a = std::get_if<ActionDecl>(&s)) {
      const ChartDecl* chart = lookup(charts, a->chart, a->span, "chart");
      std::set<std::string> names{"t"};
      for (const auto& [v, w] : chart->variables) {
        if (v == "t") {
          throw ParseError(a->span.line, a->span.column,
                           "chart '" + chart->name + "' uses 't', which is the action parameter");
        }
        names.insert(v);
      }
      check_assignments(a->entries, *chart, names, "chart '" + chart->name + "' or the parameter 't'", a->span);
      declare(actions, *a, "action");
    } else if (const auto* d = std::get_if<DoubleDecl>(&s)) {
      if (d->actions.size() < 2) {
        throw ParseError(d->span.line, d->span.column, "a multiple structure needs at least two actions");
      }
      const ActionDecl* first = lookup(actions, d->actions.front(), d->span, "action");
      for (const auto& name : d->actions) {
        const ActionDecl* other = lookup(actions, name, d->span, "action");
        if (other->chart != first->chart) {
          throw ParseError(d->span.line, d->span.column, "actions of '" + d->name + "' live on different charts");
        }
      }
      declare(doubles, *d, "double structure");
    } else {
      const auto& c = std::get<Command>(s);
      switch (c.kind) {
        case Command::Kind::CheckMorphism:
        case Command::Kind::Prolong:
          lookup(maps, c.target, c.span, "map");
          break;
        case Command::Kind::AnalyzeAction: {
          const ActionDecl* a = lookup(actions, c.target, c.span, "action");
          if (c.point && c.point->size() != lookup(charts, a->chart, c.span, "chart")->variables.size()) {
            throw ParseError(c.span.line, c.span.column, "base point has the wrong number of coordinates");
          }
          break;
        }
        case Command::Kind::CheckDouble:
          lookup(doubles, c.target, c.span, "double structure");
          break;
        case Command::Kind::Flip:
          lookup(charts, c.target, c.span, "chart");
          if (c.m == 0 || c.n == 0) throw ParseError(c.span.line, c.span.column, "flip orders must be at least 1");
          break;
        case Command::Kind::Report:
          break;
      }
    }
  }
}

}  // namespace detail

// Parses and resolves a program; throws ParseError with the offending position.
inline Program parse(std::string_view source) {
  Program program = Parser(source).parse();
  detail::resolve(program);
  return program;
}

}  // namespace gradua::dsl
