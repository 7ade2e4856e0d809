#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gcon/component.hpp"
#include "gcon/error.hpp"
#include "gcon/lexer.hpp"
#include "gcon/prop_lang.hpp"

namespace gcon {

inline constexpr std::int32_t kDefaultTimerCap = 100;

using IncludeResolver = std::function<std::string(const std::string& path)>;

struct ComponentParseOptions {
  std::string source_name;
  IncludeResolver include;  // required only if the text uses #include
  std::int32_t default_timer_cap = kDefaultTimerCap;
};

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open '" + p.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace detail {

struct RawStmt {
  enum Kind { send, receive, assign, go, skip } kind = skip;
  std::string name;
  Expr value;
  SourcePos pos;
};

struct RawOption {
  Expr guard;
  std::vector<RawStmt> stmts;
  SourcePos pos;
};

struct RawBlock {
  std::string label;
  SourcePos pos;
  Expr invariant;
  std::vector<RawOption> options;
};

struct RawInit {
  enum Kind { none, value, choice, any } kind = none;
  std::vector<Expr> values;
};

struct RawDecl {
  VarDecl decl;
  std::string enum_name;  // for enum-typed declarations
  RawInit init;
};

// Parser for the process language:
//
//   file      := item*
//   item      := '#include' STRING | mtype | decl | ['active'] 'proctype' IDENT '(' ')' body
//   mtype     := 'mtype' IDENT '=' '{' IDENT ['=' INT] (',' ...)* '}' ';'
//   decl      := type declarator (',' declarator)* ';'
//   type      := 'bool' | 'int' '[' INT '..' INT ']' | 'TIMER_X' | enum-name
//   declarator:= IDENT [':' INT] ['=' (const | '{' const (',' const)* '}' | '*')]
//   body      := '{' decl* block+ '}'
//   block     := IDENT ':' ['invariant' expr ';'] ['do' option+ 'od' [';']]
//   option    := '::' [expr '->'] stmt ((';' | '->') stmt)* [';']
//   stmt      := IDENT '!' | IDENT '?' | IDENT '=' expr | 'goto' IDENT | 'skip'
class ComponentParser {
 public:
  explicit ComponentParser(const ComponentParseOptions& opts) : opts_(opts) {}

  Component parse(std::string_view text) {
    parse_file(text, opts_.source_name, /*allow_proctype=*/true);
    if (!have_proctype_) throw ParseError("no proctype declared", {1, 1}, opts_.source_name);
    return build();
  }

 private:
  void parse_file(std::string_view text, const std::string& source, bool allow_proctype) {
    TokenStream ts(tokenize(text, source), source);
    while (!ts.at_end()) {
      const auto& t = ts.peek();
      if (t.is_punct("#")) {
        ts.next();
        const auto& d = ts.expect_identifier("directive");
        if (d.text != "include") ts.fail_at(d, "unknown directive '#" + d.text + "'");
        auto path = ts.expect_string();
        include(path, ts, d);
      } else if (t.is("mtype")) {
        parse_mtype(ts);
      } else if (t.is("active") || t.is("Active") || t.is("proctype")) {
        if (!allow_proctype) ts.fail("proctype not allowed in an included file");
        if (have_proctype_) ts.fail("only one proctype per component file");
        parse_proctype(ts);
      } else if (starts_decl(ts)) {
        parse_decl(ts, globals_);
      } else {
        ts.fail("expected declaration or proctype but found " + TokenStream::describe(t));
      }
    }
  }

  void include(const std::string& path, TokenStream& ts, const Token& at) {
    if (!opts_.include) ts.fail_at(at, "#include \"" + path + "\" but no include resolver is configured");
    if (!included_.insert(path).second) return;
    std::string text;
    try {
      text = opts_.include(path);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      ts.fail_at(at, "cannot include \"" + path + "\": " + e.what());
    }
    parse_file(text, path, /*allow_proctype=*/false);
  }

  bool starts_decl(const TokenStream& ts) const {
    const auto& t = ts.peek();
    if (t.kind != TokenKind::identifier) return false;
    if (t.text == "bool" || t.text == "int" || t.text == "TIMER_X") return true;
    return find_enum(t.text) != nullptr && ts.peek(1).kind == TokenKind::identifier;
  }

  const EnumType* find_enum(const std::string& n) const {
    for (const auto& e : enums_)
      if (e.name == n) return &e;
    return nullptr;
  }

  void parse_mtype(TokenStream& ts) {
    ts.expect("mtype");
    EnumType e;
    e.name = ts.expect_identifier("enumeration name").text;
    if (find_enum(e.name)) ts.fail("duplicate enumeration '" + e.name + "'");
    ts.expect("=");
    ts.expect("{");
    std::int32_t next_alias = 0;
    do {
      const auto& c = ts.expect_identifier("enumeration constant");
      std::int32_t alias = next_alias;
      if (ts.accept("=")) alias = ts.expect_integer();
      if (e.index_of(c.text) >= 0) ts.fail_at(c, "duplicate constant '" + c.text + "'");
      e.constants.push_back(c.text);
      e.aliases.push_back(alias);
      next_alias = alias + 1;
    } while (ts.accept(","));
    ts.expect("}");
    ts.accept(";");
    enums_.push_back(std::move(e));
  }

  void parse_decl(TokenStream& ts, std::vector<RawDecl>& into) {
    const auto& type_tok = ts.next();
    Domain dom;
    bool timer = false;
    std::string enum_name;
    if (type_tok.text == "bool") {
      dom = {Type::boolean(), 0, 1};
    } else if (type_tok.text == "int") {
      ts.expect("[");
      auto lo = ts.expect_integer();
      ts.expect("..");
      auto hi = ts.expect_integer();
      ts.expect("]");
      if (lo > hi) ts.fail_at(type_tok, "empty integer range [" + std::to_string(lo) + ".." + std::to_string(hi) + "]");
      dom = {Type::integer(), lo, hi};
    } else if (type_tok.text == "TIMER_X") {
      timer = true;
      dom = {Type::integer(), 0, opts_.default_timer_cap};
    } else {
      const auto* e = find_enum(type_tok.text);
      enum_name = e->name;
      dom = {Type::enumeration(e->name), 0, static_cast<std::int32_t>(e->constants.size()) - 1};
    }
    do {
      RawDecl d;
      d.enum_name = enum_name;
      const auto& n = ts.expect_identifier("variable name");
      if (is_reserved_word(n.text) || n.text == "true" || n.text == "false")
        ts.fail_at(n, "reserved word '" + n.text + "' used as a variable name");
      d.decl.name = n.text;
      d.decl.pos = n.pos;
      d.decl.domain = dom;
      d.decl.timer = timer;
      if (timer && ts.accept(":")) {
        auto cap = ts.expect_integer();
        if (cap < 1) ts.fail("timer cap must be positive");
        d.decl.domain.hi = cap;
      }
      if (ts.accept("=")) {
        if (timer) ts.fail("timers always start at 0");
        if (ts.accept("*")) {
          d.init.kind = RawInit::any;
        } else if (ts.accept("{")) {
          d.init.kind = RawInit::choice;
          do {
            d.init.values.push_back(parse_constant(ts));
          } while (ts.accept(","));
          ts.expect("}");
        } else {
          d.init.kind = RawInit::value;
          d.init.values.push_back(parse_constant(ts));
        }
      }
      into.push_back(std::move(d));
    } while (ts.accept(","));
    ts.expect(";");
  }

  Expr parse_constant(TokenStream& ts) {
    auto pos = ts.peek().pos;
    if (ts.peek().kind == TokenKind::integer || ts.peek().is_punct("-")) {
      auto n = *ex::int_lit(ts.expect_integer());
      n.pos = pos;
      return ex::make(std::move(n));
    }
    auto n = *ex::name(ts.expect_identifier("constant").text);
    n.pos = pos;
    return ex::make(std::move(n));
  }

  void parse_proctype(TokenStream& ts) {
    if (ts.peek().is("active") || ts.peek().is("Active")) ts.next();
    ts.expect("proctype");
    const auto& n = ts.expect_identifier("process name");
    name_ = n.text;
    name_pos_ = n.pos;
    ts.expect("(");
    ts.expect(")");
    ts.expect("{");
    while (starts_decl(ts)) parse_decl(ts, locals_);
    while (!ts.peek().is_punct("}")) {
      if (ts.at_end()) ts.fail("unterminated proctype body");
      parse_block(ts);
    }
    ts.expect("}");
    have_proctype_ = true;
  }

  void parse_block(TokenStream& ts) {
    RawBlock b;
    const auto& l = ts.peek();
    if (l.kind != TokenKind::identifier || !ts.peek(1).is_punct(":"))
      ts.fail("expected a label but found " + TokenStream::describe(l));
    b.label = ts.next().text;
    b.pos = l.pos;
    ts.expect(":");
    if (ts.accept("invariant")) {
      b.invariant = ExprParser(ts).parse();
      ts.expect(";");
    }
    if (ts.peek().is("do")) {
      auto do_tok = ts.next();
      while (ts.peek().is_punct("::")) b.options.push_back(parse_option(ts));
      if (b.options.empty()) ts.fail_at(do_tok, "do-loop without options");
      ts.expect("od");
      ts.accept(";");
    }
    blocks_.push_back(std::move(b));
  }

  static bool starts_stmt(const TokenStream& ts) {
    const auto& t = ts.peek();
    if (t.is("goto") || t.is("skip")) return true;
    if (t.kind != TokenKind::identifier) return false;
    const auto& n = ts.peek(1);
    return n.is_punct("!") || n.is_punct("?") || n.is_punct("=");
  }

  RawOption parse_option(TokenStream& ts) {
    RawOption o;
    o.pos = ts.expect("::").pos;
    if (!starts_stmt(ts)) {
      o.guard = ExprParser(ts).parse();
      if (!ts.accept("->")) ts.expect(";");
    }
    while (!ts.peek().is_punct("::") && !ts.peek().is("od")) {
      if (ts.at_end()) ts.fail("unterminated do-loop");
      o.stmts.push_back(parse_stmt(ts));
      if (!ts.accept(";")) ts.accept("->");
    }
    return o;
  }

  RawStmt parse_stmt(TokenStream& ts) {
    RawStmt s;
    s.pos = ts.peek().pos;
    if (ts.accept("goto")) {
      s.kind = RawStmt::go;
      s.name = ts.expect_identifier("label").text;
      return s;
    }
    if (ts.accept("skip")) {
      s.kind = RawStmt::skip;
      return s;
    }
    if (!starts_stmt(ts)) ts.fail("expected statement but found " + TokenStream::describe(ts.peek()));
    s.name = ts.next().text;
    const auto& op = ts.next();
    if (op.text == "!") {
      s.kind = RawStmt::send;
    } else if (op.text == "?") {
      s.kind = RawStmt::receive;
    } else {
      s.kind = RawStmt::assign;
      s.value = ExprParser(ts).parse();
    }
    return s;
  }

  // --- semantic phase -------------------------------------------------

  std::string where(SourcePos p) const {
    return (opts_.source_name.empty() ? "" : opts_.source_name + ":") + std::to_string(p.line) + ":" +
           std::to_string(p.column) + ": ";
  }

  std::vector<std::int32_t> initial_values(const RawDecl& d, const SymbolTable& st) {
    const auto& dom = d.decl.domain;
    std::vector<std::int32_t> out;
    switch (d.init.kind) {
      case RawInit::none:
        out.push_back(dom.lo);
        break;
      case RawInit::any:
        for (auto v = dom.lo; v <= dom.hi; ++v) out.push_back(v);
        break;
      default:
        for (const auto& c : d.init.values) {
          std::int32_t v = 0;
          if (c->kind == ExprKind::int_lit) {
            if (dom.type.base != BaseType::integer) {
              errors_.push_back(where(c->pos) + "type mismatch: integer initializer for " + dom.type.str() +
                                " variable '" + d.decl.name + "'");
              continue;
            }
            v = c->value;
          } else {
            auto k = st.lookup_constant(c->text);
            if (!k || !(k->type == dom.type)) {
              errors_.push_back(where(c->pos) + "initializer '" + c->text + "' is not a " + dom.type.str() +
                                " constant");
              continue;
            }
            v = k->value;
          }
          if (!dom.contains(v)) {
            errors_.push_back(where(c->pos) + "initial value " + std::to_string(v) + " of '" + d.decl.name +
                              "' outside its domain [" + std::to_string(dom.lo) + ".." + std::to_string(dom.hi) + "]");
            continue;
          }
          out.push_back(v);
        }
        break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void check_timer_bounds(const Expr& guard) {
    visit(guard, [&](const Expr& e) {
      if (e->kind != ExprKind::cmp) return;
      const Expr* timer = nullptr;
      const Expr* lit = nullptr;
      bool swapped = false;
      if (e->args[0]->kind == ExprKind::var && e->args[0]->timer && e->args[1]->kind == ExprKind::int_lit) {
        timer = &e->args[0];
        lit = &e->args[1];
      } else if (e->args[1]->kind == ExprKind::var && e->args[1]->timer && e->args[0]->kind == ExprKind::int_lit) {
        timer = &e->args[1];
        lit = &e->args[0];
        swapped = true;
      }
      if (!timer) return;
      const auto cap = (*timer)->domain.hi;
      const auto k = (*lit)->value;
      auto holds = [&](std::int32_t t) { return swapped ? compare(e->op, k, t) : compare(e->op, t, k); };
      bool in_range = false;
      for (std::int32_t t = 0; t <= cap && !in_range; ++t) in_range = holds(t);
      if (!in_range && k > cap)
        errors_.push_back(where(e->pos) + "guard '" + render(e) + "' requires timer '" + (*timer)->text +
                          "' above its cap " + std::to_string(cap));
    });
  }

  Component build() {
    Component c;
    c.name = name_;
    c.source = opts_.source_name;
    c.globals.enums = enums_;

    // symbols first, so that declarations can refer to enum constants
    SymbolTable st;
    try {
      for (const auto& e : enums_) st.add_enum(e);
      for (const auto& d : globals_) st.add_global(d.decl.name, d.decl.domain, d.decl.timer);
      st.add_component(name_);
      for (const auto& d : locals_) st.add_local(name_, d.decl.name, d.decl.domain, d.decl.timer);
    } catch (const ResolveError& e) {
      for (const auto& p : e.problems()) errors_.push_back(where(name_pos_) + p);
      throw ResolveError(errors_);
    }
    for (const auto& d : globals_) {
      if (st.lookup_constant(d.decl.name))
        errors_.push_back(where(d.decl.pos) + "variable '" + d.decl.name + "' shadows a constant");
      auto v = d.decl;
      v.initial = initial_values(d, st);
      c.globals.vars.push_back(std::move(v));
    }
    for (const auto& d : locals_) {
      if (st.lookup_constant(d.decl.name))
        errors_.push_back(where(d.decl.pos) + "variable '" + d.decl.name + "' shadows a constant");
      auto v = d.decl;
      v.initial = initial_values(d, st);
      c.locals.push_back(std::move(v));
    }

    if (blocks_.empty()) errors_.push_back(where(name_pos_) + "proctype '" + name_ + "' has no initial label");
    for (const auto& b : blocks_) {
      if (c.find_location(b.label)) {
        errors_.push_back(where(b.pos) + "duplicate label '" + b.label + "'");
        continue;
      }
      c.locations.push_back({b.label, nullptr, b.pos});
    }
    for (const auto& l : c.locations) st.add_location(name_, l.name);
    st.set_scope(name_);

    for (std::size_t bi = 0, li = 0; bi < blocks_.size(); ++bi) {
      const auto& b = blocks_[bi];
      auto loc = c.find_location(b.label);
      if (!loc || c.locations[*loc].pos.line != b.pos.line || c.locations[*loc].pos.column != b.pos.column)
        continue;  // duplicate, already reported
      li = *loc;
      if (b.invariant) {
        auto inv = resolve_expr(b.invariant, st, errors_, opts_.source_name);
        if (inv && inv->type.base != BaseType::boolean)
          errors_.push_back(where(b.invariant->pos) + "invariant is not boolean");
        else if (inv)
          c.locations[li].invariant = inv;
      }
      for (const auto& o : b.options) build_edge(c, st, li, o);
    }
    if (!errors_.empty()) throw ResolveError(errors_);
    return c;
  }

  void build_edge(Component& c, const SymbolTable& st, std::size_t source, const RawOption& o) {
    Edge e;
    e.source = e.target = source;
    e.pos = o.pos;
    e.explicit_guard = o.guard != nullptr;
    if (o.guard) {
      e.guard = resolve_expr(o.guard, st, errors_, opts_.source_name);
      if (e.guard && e.guard->type.base != BaseType::boolean) {
        errors_.push_back(where(o.guard->pos) + "guard '" + render(e.guard) + "' is not boolean");
        e.guard = nullptr;
      }
      if (e.guard) check_timer_bounds(e.guard);
    } else {
      e.guard = ex::bool_lit(true);
    }
    bool saw_goto = false;
    for (const auto& s : o.stmts) {
      if (saw_goto) {
        errors_.push_back(where(s.pos) + "statement after goto is unreachable");
        break;
      }
      switch (s.kind) {
        case RawStmt::skip: break;
        case RawStmt::go: {
          saw_goto = true;
          auto t = c.find_location(s.name);
          if (!t) {
            std::string hint;
            for (const auto& l : c.locations)
              if (close_spelling(l.name, s.name)) hint = " (did you mean '" + l.name + "'?)";
            errors_.push_back(where(s.pos) + "goto unknown label '" + s.name + "'" + hint);
          } else {
            e.target = *t;
          }
          break;
        }
        case RawStmt::send:
        case RawStmt::receive:
          if (e.sync) {
            errors_.push_back(where(s.pos) + "more than one synchronization in one option");
            break;
          }
          e.sync = Sync{s.name, s.kind == RawStmt::send ? SyncDir::send : SyncDir::receive};
          break;
        case RawStmt::assign: build_assignment(e, st, s); break;
      }
    }
    if (e.guard) c.edges.push_back(std::move(e));
  }

  void build_assignment(Edge& e, const SymbolTable& st, const RawStmt& s) {
    auto v = st.lookup_var(s.name);
    if (!v) {
      errors_.push_back(where(s.pos) + "assignment to unknown variable '" + s.name + "'");
      return;
    }
    if (v->timer) {
      if (s.value->kind != ExprKind::int_lit || s.value->value != 0) {
        errors_.push_back(where(s.pos) + "timer '" + s.name + "' can only be reset to 0");
        return;
      }
      if (std::find(e.timer_resets.begin(), e.timer_resets.end(), v->key) == e.timer_resets.end())
        e.timer_resets.push_back(v->key);
      return;
    }
    auto rhs = resolve_expr(s.value, st, errors_, opts_.source_name, /*allow_locations=*/false);
    if (!rhs) return;
    if (!(rhs->type == v->domain.type)) {
      errors_.push_back(where(s.pos) + "type mismatch: assigning " + rhs->type.str() + " to " +
                        v->domain.type.str() + " variable '" + s.name + "'");
      return;
    }
    if ((rhs->kind == ExprKind::int_lit || rhs->kind == ExprKind::enum_lit) && !v->domain.contains(rhs->value)) {
      errors_.push_back(where(s.pos) + "assigned value " + render(rhs) + " outside the domain of '" + s.name + "'");
      return;
    }
    e.assignments.push_back({v->key, s.name, rhs});
  }

  static bool close_spelling(const std::string& a, const std::string& b) {
    // one edit apart (substitution, insertion or deletion)
    if (a == b) return false;
    const auto& s = a.size() <= b.size() ? a : b;
    const auto& l = a.size() <= b.size() ? b : a;
    if (l.size() - s.size() > 1) return false;
    std::size_t i = 0, j = 0, edits = 0;
    while (i < s.size() && j < l.size()) {
      if (s[i] == l[j]) {
        ++i;
        ++j;
        continue;
      }
      if (++edits > 1) return false;
      if (s.size() == l.size()) ++i;
      ++j;
    }
    return edits + (l.size() - j) + (s.size() - i) <= 1;
  }

  const ComponentParseOptions& opts_;
  std::vector<EnumType> enums_;
  std::vector<RawDecl> globals_;
  std::vector<RawDecl> locals_;
  std::vector<RawBlock> blocks_;
  std::set<std::string> included_;
  std::string name_;
  SourcePos name_pos_;
  bool have_proctype_ = false;
  std::vector<std::string> errors_;
};

}  // namespace detail

// Parses one component file. Syntax errors raise ParseError; semantic
// problems (unknown symbols, duplicate labels, type errors) are collected
// and raised together as ResolveError.
inline Component parse_component(std::string_view text, const ComponentParseOptions& opts = {}) {
  detail::ComponentParser p(opts);
  return p.parse(text);
}

inline IncludeResolver directory_resolver(const std::filesystem::path& dir) {
  return [dir](const std::string& path) { return read_text_file(dir / path); };
}

inline Component parse_component_file(const std::filesystem::path& path,
                                      std::int32_t default_timer_cap = kDefaultTimerCap) {
  ComponentParseOptions opts;
  opts.source_name = path.filename().string();
  opts.include = directory_resolver(path.parent_path());
  opts.default_timer_cap = default_timer_cap;
  return parse_component(read_text_file(path), opts);
}

}  // namespace gcon
