#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gcon/error.hpp"
#include "gcon/expr.hpp"
#include "gcon/lexer.hpp"
#include "gcon/symbols.hpp"

namespace gcon {

enum class Modality { always, never, initially };

inline const char* to_string(Modality m) {
  switch (m) {
    case Modality::always: return "always";
    case Modality::never: return "never";
    case Modality::initially: return "initially";
  }
  return "?";
}

// A named, quantified state predicate. `always e`: e holds in every reachable
// state; `never e`: e holds in no reachable state; `initially e`: e holds in
// every admissible initial state.
struct Property {
  std::string name;
  Modality modality = Modality::always;
  Expr body;
  SourcePos pos;
};

inline bool structurally_equal(const Property& a, const Property& b) {
  return a.name == b.name && a.modality == b.modality && structurally_equal(a.body, b.body);
}

inline bool is_reserved_word(std::string_view w) {
  static const std::set<std::string_view> kWords = {
      "and", "or", "not", "imply", "in", "always", "never", "initially", "Property"};
  return kWords.count(w) > 0;
}

// Recursive-descent parser for the expression grammar shared by properties,
// guards, assignments and invariants.
//
//   imply   := or ['imply' imply]
//   or      := and (('or' | '||') and)*
//   and     := not (('and' | '&&') not)*
//   not     := 'not' not | compare
//   compare := sum [cmp-op sum | 'in' '{' literal (',' literal)* '}']
//   sum     := unary (('+' | '-') unary)*
//   unary   := '-' unary | primary
//   primary := INT | IDENT ['.' IDENT] | '(' imply ')'
class ExprParser {
 public:
  explicit ExprParser(TokenStream& ts) : ts_(ts) {}

  Expr parse() { return parse_imply(); }

 private:
  Expr at(Expr e, SourcePos pos) {
    auto n = *e;
    n.pos = pos;
    return ex::make(std::move(n));
  }

  Expr parse_imply() {
    auto pos = ts_.peek().pos;
    auto lhs = parse_or();
    if (ts_.peek().is("imply")) {
      ts_.next();
      return at(ex::imply(lhs, parse_imply()), pos);
    }
    return lhs;
  }

  Expr parse_or() {
    auto pos = ts_.peek().pos;
    auto lhs = parse_and();
    while (ts_.peek().is("or") || ts_.peek().is_punct("||")) {
      ts_.next();
      lhs = at(ex::or_(lhs, parse_and()), pos);
    }
    return lhs;
  }

  Expr parse_and() {
    auto pos = ts_.peek().pos;
    auto lhs = parse_not();
    while (ts_.peek().is("and") || ts_.peek().is_punct("&&")) {
      ts_.next();
      lhs = at(ex::and_(lhs, parse_not()), pos);
    }
    return lhs;
  }

  Expr parse_not() {
    auto pos = ts_.peek().pos;
    if (ts_.peek().is("not")) {
      ts_.next();
      return at(ex::not_(parse_not()), pos);
    }
    return parse_compare();
  }

  static std::optional<CmpOp> cmp_op(const Token& t) {
    if (t.kind != TokenKind::punct) return std::nullopt;
    if (t.text == "==") return CmpOp::eq;
    if (t.text == "!=") return CmpOp::ne;
    if (t.text == "<") return CmpOp::lt;
    if (t.text == "<=") return CmpOp::le;
    if (t.text == ">") return CmpOp::gt;
    if (t.text == ">=") return CmpOp::ge;
    return std::nullopt;
  }

  Expr parse_compare() {
    auto pos = ts_.peek().pos;
    auto lhs = parse_sum();
    if (auto op = cmp_op(ts_.peek())) {
      ts_.next();
      return at(ex::cmp(*op, lhs, parse_sum()), pos);
    }
    if (ts_.peek().is("in")) {
      ts_.next();
      ts_.expect("{");
      if (ts_.peek().is_punct("}")) ts_.fail("empty set in membership test");
      std::vector<Expr> set;
      do {
        set.push_back(parse_literal());
      } while (ts_.accept(","));
      ts_.expect("}");
      return at(ex::member(lhs, std::move(set)), pos);
    }
    return lhs;
  }

  Expr parse_literal() {
    auto pos = ts_.peek().pos;
    if (ts_.peek().is_punct("-") || ts_.peek().kind == TokenKind::integer)
      return at(ex::int_lit(ts_.expect_integer()), pos);
    const auto& t = ts_.expect_identifier("set element");
    if (is_reserved_word(t.text)) ts_.fail_at(t, "unexpected keyword '" + t.text + "'");
    return at(ex::name(t.text), pos);
  }

  Expr parse_sum() {
    auto pos = ts_.peek().pos;
    auto lhs = parse_unary();
    while (ts_.peek().is_punct("+") || ts_.peek().is_punct("-")) {
      auto k = ts_.next().text == "+" ? ExprKind::add : ExprKind::sub;
      lhs = at(ex::binary(k, lhs, parse_unary()), pos);
    }
    return lhs;
  }

  Expr parse_unary() {
    auto pos = ts_.peek().pos;
    if (ts_.peek().is_punct("-")) {
      ts_.next();
      auto operand = parse_unary();
      if (operand->kind == ExprKind::int_lit) return at(ex::int_lit(-operand->value), pos);
      return at(ex::unary(ExprKind::neg, operand), pos);
    }
    return parse_primary();
  }

  Expr parse_primary() {
    const auto& t = ts_.peek();
    auto pos = t.pos;
    if (t.kind == TokenKind::integer) {
      return at(ex::int_lit(ts_.expect_integer()), pos);
    }
    if (t.is_punct("(")) {
      ts_.next();
      auto e = parse_imply();
      ts_.expect(")");
      return e;
    }
    if (t.kind == TokenKind::identifier) {
      if (is_reserved_word(t.text)) ts_.fail("unexpected keyword '" + t.text + "'");
      std::string first = ts_.next().text;
      if (ts_.peek().is_punct(".")) {
        ts_.next();
        const auto& m = ts_.expect_identifier("member name");
        return at(ex::qualified(first, m.text), pos);
      }
      return at(ex::name(first), pos);
    }
    ts_.fail("expected expression but found " + TokenStream::describe(t));
  }

  TokenStream& ts_;
};

namespace detail {

// Name resolution and type checking. Every problem is recorded; resolution
// continues past errors so that all offenders are reported together.
class Resolver {
 public:
  Resolver(const SymbolTable& st, std::vector<std::string>& errors, std::string source, bool allow_locations)
      : st_(st), errors_(errors), source_(std::move(source)), allow_locations_(allow_locations) {}

  // Returns the resolved tree, or nullptr if any error was found under e.
  Expr resolve(const Expr& e) {
    switch (e->kind) {
      case ExprKind::int_lit:
      case ExprKind::enum_lit:
      case ExprKind::var:
      case ExprKind::location: return e;
      case ExprKind::name: return resolve_name(e);
      case ExprKind::qualified: return resolve_qualified(e);
      default: break;
    }
    std::vector<Expr> args;
    bool ok = true;
    for (const auto& a : e->args) {
      auto r = resolve(a);
      if (!r) ok = false;
      args.push_back(r);
    }
    if (!ok) return nullptr;
    auto n = *e;
    n.args = args;
    switch (e->kind) {
      case ExprKind::neg:
      case ExprKind::add:
      case ExprKind::sub:
        for (const auto& a : args)
          if (a->type.base != BaseType::integer)
            return error(e, "arithmetic on non-integer operand '" + render(a) + "'");
        n.type = Type::integer();
        break;
      case ExprKind::cmp: {
        const auto &l = args[0]->type, &r = args[1]->type;
        if (!(l == r))
          return error(e, "type mismatch: cannot compare " + l.str() + " with " + r.str());
        if (l.base == BaseType::boolean && e->op != CmpOp::eq && e->op != CmpOp::ne)
          return error(e, "ordering comparison on booleans");
        n.type = Type::boolean();
        break;
      }
      case ExprKind::member:
        for (std::size_t i = 1; i < args.size(); ++i) {
          if (args[i]->kind != ExprKind::int_lit && args[i]->kind != ExprKind::enum_lit)
            return error(args[i], "set elements must be constants");
          if (!(args[i]->type == args[0]->type))
            return error(args[i], "type mismatch: set element " + render(args[i]) + " is not of type " +
                                      args[0]->type.str());
        }
        n.type = Type::boolean();
        break;
      case ExprKind::not_:
      case ExprKind::and_:
      case ExprKind::or_:
      case ExprKind::imply:
        for (const auto& a : args)
          if (a->type.base != BaseType::boolean)
            return error(a, "expected a boolean operand but '" + render(a) + "' is " + a->type.str());
        n.type = Type::boolean();
        break;
      default: break;
    }
    return ex::make(std::move(n));
  }

 private:
  Expr error(const Expr& at, const std::string& msg) {
    std::string where = source_.empty() ? "" : source_ + ":";
    errors_.push_back(where + std::to_string(at->pos.line) + ":" + std::to_string(at->pos.column) + ": " + msg);
    return nullptr;
  }

  Expr var_node(const Expr& e, const VarInfo& v) {
    auto n = *e;
    n.kind = ExprKind::var;
    n.key = v.key;
    n.domain = v.domain;
    n.type = v.domain.type;
    n.timer = v.timer;
    return ex::make(std::move(n));
  }

  Expr resolve_name(const Expr& e) {
    if (auto v = st_.lookup_var(e->text)) return var_node(e, *v);
    if (auto c = st_.lookup_constant(e->text)) {
      auto n = *e;
      n.kind = ExprKind::enum_lit;
      n.type = c->type;
      n.value = c->value;
      return ex::make(std::move(n));
    }
    return error(e, "unknown identifier '" + e->text + "'");
  }

  Expr resolve_qualified(const Expr& e) {
    if (!st_.has_component(e->qualifier))
      return error(e, "unknown component '" + e->qualifier + "' in '" + render(e) + "'");
    auto v = st_.lookup_local(e->qualifier, e->text);
    bool loc = st_.has_location(e->qualifier, e->text);
    if (v && loc) return error(e, "ambiguous reference '" + render(e) + "' (variable and location)");
    if (v) return var_node(e, *v);
    if (loc) {
      if (!allow_locations_) return error(e, "location predicate '" + render(e) + "' not allowed here");
      auto n = *e;
      n.kind = ExprKind::location;
      n.type = Type::boolean();
      return ex::make(std::move(n));
    }
    return error(e, "unknown identifier '" + render(e) + "'");
  }

  const SymbolTable& st_;
  std::vector<std::string>& errors_;
  std::string source_;
  bool allow_locations_;
};

inline std::string parse_property_name(TokenStream& ts) {
  const auto& first = ts.expect_identifier("property name");
  std::string name = first.text;
  std::size_t end = first.end;
  // names such as CcV-H or Req.1 are glued from adjacent tokens
  while ((ts.peek().is_punct("-") || ts.peek().is_punct(".")) && ts.peek().begin == end &&
         (ts.peek(1).kind == TokenKind::identifier || ts.peek(1).kind == TokenKind::integer) &&
         ts.peek(1).begin == ts.peek().end) {
    name += ts.next().text;
    const auto& part = ts.next();
    name += part.text;
    end = part.end;
  }
  return name;
}

inline Modality parse_modality(TokenStream& ts) {
  const auto& t = ts.peek();
  if (t.is("always")) {
    ts.next();
    return Modality::always;
  }
  if (t.is("never")) {
    ts.next();
    return Modality::never;
  }
  if (t.is("initially")) {
    ts.next();
    return Modality::initially;
  }
  // UPPAAL-style A[ ] is a synonym for always
  if (t.is("A") && ts.peek(1).is_punct("[") && ts.peek(2).is_punct("]")) {
    ts.next();
    ts.next();
    ts.next();
    return Modality::always;
  }
  ts.fail("expected 'always', 'never', 'initially' or 'A[ ]' but found " + TokenStream::describe(t));
}

}  // namespace detail

// Parses `Property <name>: <modality> <expr>;` from the stream without
// resolving identifiers.
inline Property parse_property_statement(TokenStream& ts) {
  Property p;
  p.pos = ts.peek().pos;
  ts.expect("Property");
  p.name = detail::parse_property_name(ts);
  ts.expect(":");
  p.modality = detail::parse_modality(ts);
  p.body = ExprParser(ts).parse();
  ts.expect(";");
  return p;
}

// Syntax-only parse of a single property. Accepts the full statement form or
// a bare `<modality> <expr>` (which yields an unnamed property).
inline Property parse_property_syntax(std::string_view text, const std::string& source = {}) {
  TokenStream ts(tokenize(text, source), source);
  if (ts.at_end()) ts.fail("empty property text");
  Property p;
  if (ts.peek().is("Property")) {
    p = parse_property_statement(ts);
  } else {
    p.pos = ts.peek().pos;
    p.modality = detail::parse_modality(ts);
    p.body = ExprParser(ts).parse();
    ts.accept(";");
  }
  if (!ts.at_end()) ts.fail("unexpected " + TokenStream::describe(ts.peek()) + " after property");
  return p;
}

inline Expr resolve_expr(const Expr& e, const SymbolTable& st, std::vector<std::string>& errors,
                         const std::string& source = {}, bool allow_locations = true) {
  detail::Resolver r(st, errors, source, allow_locations);
  return r.resolve(e);
}

// Resolves every identifier of p against st and type-checks the body,
// appending each problem to `errors`. Returns nullopt if anything failed.
inline std::optional<Property> resolve_property(const Property& p, const SymbolTable& st,
                                                std::vector<std::string>& errors, const std::string& source = {}) {
  auto before = errors.size();
  auto body = resolve_expr(p.body, st, errors, source, p.modality != Modality::initially);
  if (body && body->type.base != BaseType::boolean) {
    errors.push_back((source.empty() ? "" : source + ":") + std::to_string(p.pos.line) + ":" +
                     std::to_string(p.pos.column) + ": property '" + p.name + "' body is not boolean");
  }
  if (errors.size() != before) return std::nullopt;
  Property out = p;
  out.body = body;
  return out;
}

inline Property parse_property(std::string_view text, const SymbolTable& st, const std::string& source = {}) {
  auto p = parse_property_syntax(text, source);
  std::vector<std::string> errors;
  auto r = resolve_property(p, st, errors, source);
  if (!r) throw ResolveError(errors);
  return *r;
}

// "always (Heater in {1, 2, 3})"
inline std::string render_formula(const Property& p) {
  return std::string(to_string(p.modality)) + " (" + render(p.body) + ")";
}

// "Property HV: always (Heater in {1, 2, 3});"
inline std::string render_canonical(const Property& p) {
  if (p.name.empty()) return render_formula(p) + ";";
  return "Property " + p.name + ": " + render_formula(p) + ";";
}

}  // namespace gcon
