#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gcon/error.hpp"
#include "gcon/types.hpp"

namespace gcon {

enum class ExprKind {
  int_lit,
  enum_lit,   // enum constant or true/false
  name,       // unresolved bare identifier
  qualified,  // unresolved Component.member
  var,        // resolved variable (or timer) reference
  location,   // resolved Component.location predicate
  neg,
  add,
  sub,
  cmp,
  member,     // args[0] in {args[1..]}
  not_,
  and_,
  or_,
  imply,
};

enum class CmpOp { eq, ne, lt, le, gt, ge };

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::eq: return "==";
    case CmpOp::ne: return "!=";
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
  }
  return "?";
}

inline bool compare(CmpOp op, std::int32_t a, std::int32_t b) {
  switch (op) {
    case CmpOp::eq: return a == b;
    case CmpOp::ne: return a != b;
    case CmpOp::lt: return a < b;
    case CmpOp::le: return a <= b;
    case CmpOp::gt: return a > b;
    case CmpOp::ge: return a >= b;
  }
  return false;
}

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind = ExprKind::int_lit;
  std::int32_t value = 0;   // literal value (enum index, 0/1 for bool)
  std::string text;         // spelling: literal, identifier or member name
  std::string qualifier;    // component name for qualified references
  std::string key;          // resolved variable key ("x" or "Comp.x")
  Type type;                // resolved type
  Domain domain;            // declared domain of a resolved variable
  bool timer = false;
  CmpOp op = CmpOp::eq;
  std::vector<Expr> args;
  SourcePos pos;
};

namespace ex {

inline Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

inline Expr int_lit(std::int32_t v) {
  ExprNode n;
  n.kind = ExprKind::int_lit;
  n.value = v;
  n.type = Type::integer();
  return make(std::move(n));
}
inline Expr bool_lit(bool v) {
  ExprNode n;
  n.kind = ExprKind::enum_lit;
  n.value = v ? 1 : 0;
  n.text = v ? "true" : "false";
  n.type = Type::boolean();
  return make(std::move(n));
}
inline Expr enum_lit(const EnumType& e, const std::string& c) {
  ExprNode n;
  n.kind = ExprKind::enum_lit;
  n.value = e.index_of(c);
  n.text = c;
  n.type = Type::enumeration(e.name);
  return make(std::move(n));
}
inline Expr name(std::string id) {
  ExprNode n;
  n.kind = ExprKind::name;
  n.text = std::move(id);
  return make(std::move(n));
}
inline Expr qualified(std::string comp, std::string member) {
  ExprNode n;
  n.kind = ExprKind::qualified;
  n.qualifier = std::move(comp);
  n.text = std::move(member);
  return make(std::move(n));
}
inline Expr unary(ExprKind k, Expr a) {
  ExprNode n;
  n.kind = k;
  n.args = {std::move(a)};
  return make(std::move(n));
}
inline Expr binary(ExprKind k, Expr a, Expr b) {
  ExprNode n;
  n.kind = k;
  n.args = {std::move(a), std::move(b)};
  return make(std::move(n));
}
inline Expr cmp(CmpOp op, Expr a, Expr b) {
  ExprNode n;
  n.kind = ExprKind::cmp;
  n.op = op;
  n.args = {std::move(a), std::move(b)};
  return make(std::move(n));
}
inline Expr member(Expr lhs, std::vector<Expr> set) {
  ExprNode n;
  n.kind = ExprKind::member;
  n.args.push_back(std::move(lhs));
  for (auto& e : set) n.args.push_back(std::move(e));
  return make(std::move(n));
}
inline Expr not_(Expr a) { return unary(ExprKind::not_, std::move(a)); }
inline Expr and_(Expr a, Expr b) { return binary(ExprKind::and_, std::move(a), std::move(b)); }
inline Expr or_(Expr a, Expr b) { return binary(ExprKind::or_, std::move(a), std::move(b)); }
inline Expr imply(Expr a, Expr b) { return binary(ExprKind::imply, std::move(a), std::move(b)); }

}  // namespace ex

// Structural equality: same shape, operators, literal values and resolved
// references. Source positions and spelling of resolved names are ignored.
inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
    case ExprKind::int_lit:
    case ExprKind::enum_lit:
      if (a->value != b->value || !(a->type == b->type)) return false;
      break;
    case ExprKind::name:
    case ExprKind::qualified:
      if (a->text != b->text || a->qualifier != b->qualifier) return false;
      break;
    case ExprKind::var:
      if (a->key != b->key) return false;
      break;
    case ExprKind::location:
      if (a->qualifier != b->qualifier || a->text != b->text) return false;
      break;
    case ExprKind::cmp:
      if (a->op != b->op) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  return true;
}

// Binding strength used by both the parser and the renderer.
inline int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::imply: return 1;
    case ExprKind::or_: return 2;
    case ExprKind::and_: return 3;
    case ExprKind::not_: return 4;
    case ExprKind::cmp:
    case ExprKind::member: return 5;
    case ExprKind::add:
    case ExprKind::sub: return 6;
    case ExprKind::neg: return 7;
    default: return 8;
  }
}

namespace detail {

inline void render_expr(std::string& out, const Expr& e, int min_prec);

inline void render_child(std::string& out, const Expr& e, int min_prec) {
  // negative literals bind like a unary minus
  int p = precedence(e->kind);
  if (e->kind == ExprKind::int_lit && e->value < 0) p = precedence(ExprKind::neg);
  if (p < min_prec) {
    out += '(';
    render_expr(out, e, 0);
    out += ')';
  } else {
    render_expr(out, e, min_prec);
  }
}

inline void render_expr(std::string& out, const Expr& e, int /*min_prec*/) {
  const int p = precedence(e->kind);
  switch (e->kind) {
    case ExprKind::int_lit: out += std::to_string(e->value); return;
    case ExprKind::enum_lit:
    case ExprKind::name: out += e->text; return;
    case ExprKind::qualified:
    case ExprKind::location: out += e->qualifier + "." + e->text; return;
    case ExprKind::var:
      if (!e->qualifier.empty()) out += e->qualifier + ".";
      out += e->text;
      return;
    case ExprKind::neg:
      out += '-';
      render_child(out, e->args[0], p);
      return;
    case ExprKind::not_:
      out += "not ";
      render_child(out, e->args[0], p);
      return;
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::and_:
    case ExprKind::or_: {
      const char* op = e->kind == ExprKind::add   ? " + "
                       : e->kind == ExprKind::sub ? " - "
                       : e->kind == ExprKind::and_ ? " and "
                                                   : " or ";
      render_child(out, e->args[0], p);
      out += op;
      render_child(out, e->args[1], p + 1);
      return;
    }
    case ExprKind::imply:
      render_child(out, e->args[0], p + 1);
      out += " imply ";
      render_child(out, e->args[1], p);
      return;
    case ExprKind::cmp:
      render_child(out, e->args[0], p + 1);
      out += ' ';
      out += to_string(e->op);
      out += ' ';
      render_child(out, e->args[1], p + 1);
      return;
    case ExprKind::member:
      render_child(out, e->args[0], p + 1);
      out += " in {";
      for (std::size_t i = 1; i < e->args.size(); ++i) {
        if (i > 1) out += ", ";
        render_expr(out, e->args[i], 0);
      }
      out += '}';
      return;
  }
}

}  // namespace detail

// Minimal-parenthesis rendering; parses back to the same tree.
inline std::string render(const Expr& e) {
  std::string out;
  detail::render_expr(out, e, 0);
  return out;
}

// Name-keyed evaluation context. Variable values are keyed by resolved key
// ("x" for globals, "Comp.x" for locals); locations by component name.
struct Valuation {
  std::map<std::string, std::int32_t> values;
  std::map<std::string, std::string> locations;
};

namespace detail {

inline std::int32_t eval_value(const Expr& e, const Valuation& v) {
  switch (e->kind) {
    case ExprKind::int_lit:
    case ExprKind::enum_lit: return e->value;
    case ExprKind::name:
    case ExprKind::qualified:
      throw EvalError("unresolved identifier '" + render(e) + "'");
    case ExprKind::var: {
      auto it = v.values.find(e->key);
      if (it == v.values.end()) throw EvalError("unbound variable '" + e->key + "'");
      if (e->domain.hi >= e->domain.lo && !e->domain.contains(it->second))
        throw EvalError("value " + std::to_string(it->second) + " of '" + e->key + "' outside its domain");
      return it->second;
    }
    case ExprKind::location: {
      auto it = v.locations.find(e->qualifier);
      if (it == v.locations.end()) throw EvalError("no location bound for component '" + e->qualifier + "'");
      return it->second == e->text ? 1 : 0;
    }
    case ExprKind::neg: return -eval_value(e->args[0], v);
    case ExprKind::add: return eval_value(e->args[0], v) + eval_value(e->args[1], v);
    case ExprKind::sub: return eval_value(e->args[0], v) - eval_value(e->args[1], v);
    case ExprKind::cmp:
      return compare(e->op, eval_value(e->args[0], v), eval_value(e->args[1], v)) ? 1 : 0;
    case ExprKind::member: {
      auto x = eval_value(e->args[0], v);
      for (std::size_t i = 1; i < e->args.size(); ++i)
        if (eval_value(e->args[i], v) == x) return 1;
      return 0;
    }
    case ExprKind::not_: return eval_value(e->args[0], v) ? 0 : 1;
    case ExprKind::and_: {
      auto a = eval_value(e->args[0], v);
      auto b = eval_value(e->args[1], v);
      return (a && b) ? 1 : 0;
    }
    case ExprKind::or_: {
      auto a = eval_value(e->args[0], v);
      auto b = eval_value(e->args[1], v);
      return (a || b) ? 1 : 0;
    }
    case ExprKind::imply: {
      auto a = eval_value(e->args[0], v);
      auto b = eval_value(e->args[1], v);
      return (!a || b) ? 1 : 0;
    }
  }
  return 0;
}

}  // namespace detail

// Truth value of a resolved boolean expression. `imply` is material
// implication. Both operands are always evaluated so unbound symbols are
// reported regardless of short-circuiting.
inline bool eval_expr(const Expr& e, const Valuation& v) { return detail::eval_value(e, v) != 0; }

inline std::int32_t eval_int(const Expr& e, const Valuation& v) { return detail::eval_value(e, v); }

// Visits every node, children first.
template <typename F>
void visit(const Expr& e, F&& f) {
  for (const auto& a : e->args) visit(a, f);
  f(e);
}

}  // namespace gcon
