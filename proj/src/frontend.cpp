#include "mlp/frontend.hpp"
#include "mlp/terms.hpp"

#include "lexer.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>

namespace mlp::frontend {

using detail::Tok;
using detail::Token;

// ---------------------------------------------------------------------------
// TypeExpr / SrcTerm helpers

const char *base_type_name(BaseType b) {
  switch (b) {
  case BaseType::Int: return "int";
  case BaseType::Real: return "real";
  case BaseType::String: return "string";
  case BaseType::O: return "o";
  }
  return "?";
}

TypeExpr TypeExpr::make_base(BaseType b) {
  TypeExpr t;
  t.kind = Kind::Base;
  t.base = b;
  return t;
}

TypeExpr TypeExpr::make_user(std::string name, std::vector<TypeExpr> args) {
  TypeExpr t;
  t.kind = Kind::User;
  t.name = std::move(name);
  t.args = std::move(args);
  return t;
}

TypeExpr TypeExpr::make_arrow(TypeExpr domain, TypeExpr codomain) {
  TypeExpr t;
  t.kind = Kind::Arrow;
  t.args.push_back(std::move(domain));
  t.args.push_back(std::move(codomain));
  return t;
}

std::vector<TypeExpr> TypeExpr::domains() const {
  std::vector<TypeExpr> out;
  const TypeExpr *cur = this;
  while (cur->kind == Kind::Arrow) {
    out.push_back(cur->domain());
    cur = &cur->codomain();
  }
  return out;
}

const TypeExpr &TypeExpr::result() const {
  const TypeExpr *cur = this;
  while (cur->kind == Kind::Arrow)
    cur = &cur->codomain();
  return *cur;
}

static void format_type_into(std::string &out, const TypeExpr &t) {
  switch (t.kind) {
  case TypeExpr::Kind::Base:
    out += base_type_name(t.base);
    break;
  case TypeExpr::Kind::User:
    out += t.name;
    for (const auto &a : t.args) {
      out += ' ';
      bool paren = a.kind == TypeExpr::Kind::Arrow || (a.kind == TypeExpr::Kind::User && !a.args.empty());
      if (paren)
        out += '(';
      format_type_into(out, a);
      if (paren)
        out += ')';
    }
    break;
  case TypeExpr::Kind::Arrow: {
    bool paren = t.domain().kind == TypeExpr::Kind::Arrow;
    if (paren)
      out += '(';
    format_type_into(out, t.domain());
    if (paren)
      out += ')';
    out += " -> ";
    format_type_into(out, t.codomain());
    break;
  }
  }
}

std::string format_type(const TypeExpr &t) {
  std::string out;
  format_type_into(out, t);
  return out;
}

SrcTerm SrcTerm::var(std::string name, SourcePos pos) {
  SrcTerm t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  t.pos = pos;
  return t;
}

SrcTerm SrcTerm::atom(std::string name, SourcePos pos) {
  SrcTerm t;
  t.kind = Kind::Atom;
  t.name = std::move(name);
  t.pos = pos;
  return t;
}

SrcTerm SrcTerm::integer(std::int64_t v, SourcePos pos) {
  SrcTerm t;
  t.kind = Kind::Int;
  t.int_value = v;
  t.pos = pos;
  return t;
}

SrcTerm SrcTerm::real(double v, SourcePos pos) {
  SrcTerm t;
  t.kind = Kind::Real;
  t.real_value = v;
  t.pos = pos;
  return t;
}

SrcTerm SrcTerm::str(std::string s, SourcePos pos) {
  SrcTerm t;
  t.kind = Kind::Str;
  t.name = std::move(s);
  t.pos = pos;
  return t;
}

SrcTerm SrcTerm::cmp(std::string functor, std::vector<SrcTerm> args, SourcePos pos) {
  if (args.empty())
    return atom(std::move(functor), pos);
  SrcTerm t;
  t.kind = Kind::Cmp;
  t.name = std::move(functor);
  t.args = std::move(args);
  t.pos = pos;
  return t;
}

bool SrcTerm::same_as(const SrcTerm &o) const {
  if (kind != o.kind)
    return false;
  switch (kind) {
  case Kind::Int: return int_value == o.int_value;
  case Kind::Real: return real_value == o.real_value;
  case Kind::Var:
  case Kind::Str:
  case Kind::Atom: return name == o.name;
  case Kind::Cmp:
    if (name != o.name || args.size() != o.args.size())
      return false;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (!args[i].same_as(o.args[i]))
        return false;
    return true;
  }
  return false;
}

static void format_term_into(std::string &out, const SrcTerm &t) {
  switch (t.kind) {
  case SrcTerm::Kind::Var: out += t.name; break;
  case SrcTerm::Kind::Int: out += std::to_string(t.int_value); break;
  case SrcTerm::Kind::Real: out += terms::format_real(t.real_value); break;
  case SrcTerm::Kind::Str: out += terms::quote_string(t.name); break;
  case SrcTerm::Kind::Atom: out += terms::quote_atom(t.name); break;
  case SrcTerm::Kind::Cmp:
    out += terms::quote_atom(t.name);
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i)
        out += ", ";
      format_term_into(out, t.args[i]);
    }
    out += ')';
    break;
  }
}

std::string format_term(const SrcTerm &t) {
  std::string out;
  format_term_into(out, t);
  return out;
}

const ExternDecl *SignatureAst::find(std::string_view lp_name) const {
  for (const auto &e : externs)
    if (e.lp_name == lp_name)
      return &e;
  return nullptr;
}

bool SignatureAst::same_as(const SignatureAst &o) const {
  if (sig_name != o.sig_name || lib_name != o.lib_name || regcl != o.regcl ||
      externs.size() != o.externs.size())
    return false;
  for (std::size_t i = 0; i < externs.size(); ++i) {
    const auto &a = externs[i];
    const auto &b = o.externs[i];
    if (a.lp_name != b.lp_name || a.c_name != b.c_name || !(a.type == b.type))
      return false;
  }
  return true;
}

bool ModuleAst::same_as(const ModuleAst &o) const {
  if (module_name != o.module_name || accumulates != o.accumulates || accum_externs != o.accum_externs ||
      local_sig.size() != o.local_sig.size() || clauses.size() != o.clauses.size())
    return false;
  for (std::size_t i = 0; i < local_sig.size(); ++i)
    if (local_sig[i].name != o.local_sig[i].name || !(local_sig[i].type == o.local_sig[i].type))
      return false;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto &a = clauses[i];
    const auto &b = o.clauses[i];
    if (!a.head.same_as(b.head) || a.body.size() != b.body.size())
      return false;
    for (std::size_t g = 0; g < a.body.size(); ++g)
      if (!a.body[g].same_as(b.body[g]))
        return false;
  }
  return true;
}

const NativeMap *SpecAst::find_map(std::string_view kind) const {
  for (const auto &m : native_maps)
    if (m.lp_type.name == kind)
      return &m;
  return nullptr;
}

const CtorDecl *SpecAst::constructor_of(std::string_view kind) const {
  for (const auto &c : constructors)
    if (c.type.result().kind == TypeExpr::Kind::User && c.type.result().name == kind)
      return &c;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

constexpr int kMaxDepth = 200;

bool is_plain_lib_name(std::string_view s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z'))
    return false;
  std::size_t colon = s.find(':');
  auto ident = [](std::string_view part) {
    if (part.empty() || !(part[0] >= 'a' && part[0] <= 'z'))
      return false;
    return std::all_of(part.begin(), part.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  };
  if (colon == std::string_view::npos)
    return ident(s);
  return ident(s.substr(0, colon)) && ident(s.substr(colon + 1));
}

class Parser {
public:
  Parser(std::string_view src, std::string_view file)
      : file_(file), toks_(detail::tokenize(src, file_)) {}

  // -- token plumbing -------------------------------------------------------

  const Token &peek(std::size_t k = 0) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  const Token &next() {
    const Token &t = toks_[i_];
    if (i_ + 1 < toks_.size())
      ++i_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_name(std::string_view text) const {
    return peek().kind == Tok::Name && !peek().quoted && peek().text == text;
  }
  bool at_sym(std::string_view text) const { return peek().kind == Tok::Sym && peek().text == text; }
  bool adjacent(const Token &a, const Token &b) const { return a.end == b.begin; }

  [[noreturn]] void fail(SourcePos pos, const std::string &msg) const {
    throw ParseError(error_at(file_, pos, msg));
  }
  [[noreturn]] void unexpected(const std::string &what) const {
    const Token &t = peek();
    std::string found = t.kind == Tok::Eof ? "end of input" : std::string(detail::tok_name(t.kind)) + " '" + t.text + "'";
    fail(t.pos, "expected " + what + ", found " + found);
  }

  const Token &expect(Tok k, const std::string &what) {
    if (!at(k))
      unexpected(what);
    return next();
  }
  void expect_end() { expect(Tok::End, "'.'"); }
  std::string expect_name(const std::string &what) {
    if (!at(Tok::Name))
      unexpected(what);
    return next().text;
  }

  struct DepthGuard {
    Parser &p;
    explicit DepthGuard(Parser &parser, SourcePos pos) : p(parser) {
      if (++p.depth_ > kMaxDepth)
        p.fail(pos, "nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  // -- types ----------------------------------------------------------------

  static bool starts_type_arg(const Token &t) { return t.kind == Tok::Name || t.kind == Tok::LParen; }

  TypeExpr parse_type_expr() {
    DepthGuard guard(*this, peek().pos);
    TypeExpr lhs = parse_type_app();
    if (at_sym("->")) {
      next();
      return TypeExpr::make_arrow(std::move(lhs), parse_type_expr());
    }
    return lhs;
  }

  TypeExpr named_type(const std::string &name, std::vector<TypeExpr> args, SourcePos pos) {
    static const std::map<std::string, BaseType, std::less<>> bases = {
        {"int", BaseType::Int}, {"real", BaseType::Real}, {"string", BaseType::String}, {"o", BaseType::O}};
    auto it = bases.find(name);
    if (it != bases.end()) {
      if (!args.empty())
        fail(pos, "base type '" + name + "' takes no arguments");
      return TypeExpr::make_base(it->second);
    }
    return TypeExpr::make_user(name, std::move(args));
  }

  TypeExpr parse_type_app() {
    if (at(Tok::LParen))
      return parse_type_atom();
    SourcePos pos = peek().pos;
    std::string name = expect_name("a type");
    std::vector<TypeExpr> args;
    while (starts_type_arg(peek()))
      args.push_back(parse_type_atom());
    return named_type(name, std::move(args), pos);
  }

  TypeExpr parse_type_atom() {
    DepthGuard guard(*this, peek().pos);
    if (at(Tok::LParen)) {
      next();
      TypeExpr t = parse_type_expr();
      expect(Tok::RParen, "')'");
      return t;
    }
    SourcePos pos = peek().pos;
    std::string name = expect_name("a type");
    return named_type(name, {}, pos);
  }

  // -- terms ----------------------------------------------------------------

  bool is_reserved_sym(const Token &t) const {
    return t.kind == Tok::Sym && (t.text == ":-" || t.text == "->" || t.text == "=");
  }

  bool negative_number_here() const {
    return at_sym("-") && (peek(1).kind == Tok::Int || peek(1).kind == Tok::Real) && adjacent(peek(), peek(1));
  }

  SrcTerm number(bool negative) {
    const Token &t = next();
    if (t.kind == Tok::Real)
      return SrcTerm::real(negative ? -t.real : t.real, t.pos);
    std::uint64_t mag = 0;
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), mag);
    constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (res.ec != std::errc() || mag > kMax + (negative ? 1 : 0))
      fail(t.pos, "integer literal out of range");
    std::int64_t v = negative ? static_cast<std::int64_t>(0 - mag) : static_cast<std::int64_t>(mag);
    return SrcTerm::integer(v, t.pos);
  }

  bool starts_arg() const {
    switch (peek().kind) {
    case Tok::Var:
    case Tok::Int:
    case Tok::Real:
    case Tok::Str:
    case Tok::Name:
    case Tok::LParen:
      return true;
    case Tok::Sym:
      return negative_number_here() ||
             (!is_reserved_sym(peek()) && peek(1).kind == Tok::LParen && adjacent(peek(), peek(1)));
    default:
      return false;
    }
  }

  std::vector<SrcTerm> parse_paren_args() {
    expect(Tok::LParen, "'('");
    std::vector<SrcTerm> args;
    args.push_back(parse_app());
    while (at(Tok::Comma)) {
      next();
      args.push_back(parse_app());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  /// One argument in curried position.
  SrcTerm parse_primary() {
    DepthGuard guard(*this, peek().pos);
    const Token &t = peek();
    switch (t.kind) {
    case Tok::Var:
      next();
      return SrcTerm::var(t.text, t.pos);
    case Tok::Int:
    case Tok::Real:
      return number(false);
    case Tok::Str:
      next();
      return SrcTerm::str(t.text, t.pos);
    case Tok::LParen: {
      next();
      SrcTerm inner = parse_app();
      expect(Tok::RParen, "')'");
      return inner;
    }
    case Tok::Name:
    case Tok::Sym: {
      if (negative_number_here()) {
        next();
        return number(true);
      }
      if (t.kind == Tok::Sym && is_reserved_sym(t))
        unexpected("a term");
      const Token &name = next();
      if (at(Tok::LParen) && adjacent(name, peek()))
        return SrcTerm::cmp(name.text, parse_paren_args(), name.pos);
      if (name.kind == Tok::Sym)
        fail(name.pos, "symbolic atom '" + name.text + "' must be applied with parentheses here");
      return SrcTerm::atom(name.text, name.pos);
    }
    default:
      unexpected("a term");
    }
  }

  /// Curried application `f a b`, `f(a, b)`, or a single primary.
  SrcTerm parse_app() {
    DepthGuard guard(*this, peek().pos);
    const Token &t = peek();
    if (negative_number_here()) {
      next();
      return number(true);
    }
    if ((t.kind == Tok::Name || (t.kind == Tok::Sym && !is_reserved_sym(t)))) {
      const Token &name = next();
      if (at(Tok::LParen) && adjacent(name, peek()))
        return SrcTerm::cmp(name.text, parse_paren_args(), name.pos);
      std::vector<SrcTerm> args;
      while (starts_arg())
        args.push_back(parse_primary());
      return SrcTerm::cmp(name.text, std::move(args), name.pos);
    }
    return parse_primary();
  }

  SrcTerm parse_goal() {
    SourcePos pos = peek().pos;
    SrcTerm g = parse_app();
    if (!g.is_callable())
      fail(pos, "goal must be an atom or compound term, found " + format_term(g));
    return g;
  }

  std::vector<SrcTerm> parse_goals() {
    std::vector<SrcTerm> goals;
    goals.push_back(parse_goal());
    while (at(Tok::Comma)) {
      next();
      goals.push_back(parse_goal());
    }
    return goals;
  }

  Clause parse_clause() {
    Clause c;
    c.pos = peek().pos;
    c.head = parse_goal();
    if (at_sym(":-")) {
      next();
      c.body = parse_goals();
    }
    expect_end();
    return c;
  }

  // -- shared directive helpers ---------------------------------------------

  std::string parse_lib_name() {
    if (at(Tok::Str))
      return next().text;
    const Token &first = expect(Tok::Name, "a library name");
    std::string name = first.text;
    if (at_sym(":") && peek(1).kind == Tok::Name) {
      next();
      name += ':' + next().text;
    }
    return name;
  }

  /// Comma-separated names. Directive forms without a period stop at the end
  /// of the directive's line.
  std::vector<std::pair<std::string, SourcePos>> parse_name_list(bool directive, std::uint32_t line) {
    std::vector<std::pair<std::string, SourcePos>> names;
    auto take = [&] {
      SourcePos pos = peek().pos;
      names.emplace_back(expect_name("a name"), pos);
    };
    take();
    for (;;) {
      if (at(Tok::Comma)) {
        next();
        take();
      } else if (directive && at(Tok::Name) && peek().pos.line == line) {
        take();
      } else if (!directive && at(Tok::Name)) {
        take();
      } else {
        break;
      }
    }
    return names;
  }

  void end_of_directive(bool directive) {
    if (directive) {
      if (at(Tok::End))
        next();
    } else {
      expect_end();
    }
  }

  bool at_keyword(std::string_view kw, bool &directive) {
    if (at(Tok::Directive) && peek().text == kw) {
      directive = true;
      return true;
    }
    if (at_name(kw)) {
      directive = false;
      return true;
    }
    return false;
  }

  // -- top-level grammars ---------------------------------------------------

  SignatureAst signature() {
    SignatureAst sig;
    bool directive = false;
    SourcePos start = peek().pos;
    if (!at_keyword("sig", directive))
      unexpected("'sig <name>.'");
    next();
    sig.sig_name = expect_name("a signature name");
    end_of_directive(directive);

    bool have_lib = false;
    std::vector<std::pair<std::string, SourcePos>> regcl;
    while (!at(Tok::Eof)) {
      const Token &t = peek();
      if (at_keyword("lib", directive)) {
        next();
        if (have_lib)
          fail(t.pos, "duplicate lib declaration");
        sig.lib_name = parse_lib_name();
        have_lib = true;
        end_of_directive(directive);
      } else if (at_keyword("regcl", directive)) {
        next();
        auto names = parse_name_list(directive, t.pos.line);
        regcl.insert(regcl.end(), names.begin(), names.end());
        end_of_directive(directive);
      } else if (at_name("extern")) {
        next();
        if (!at_name("type"))
          unexpected("'type' after 'extern'");
        next();
        ExternDecl d;
        d.pos = peek().pos;
        d.lp_name = expect_name("a predicate name");
        d.c_name = expect_name("an entry symbol");
        SourcePos type_pos = peek().pos;
        d.type = parse_type_expr();
        expect_end();
        if (!d.type.is_predicate())
          fail(type_pos, "non-predicate type '" + format_type(d.type) + "' for extern '" + d.lp_name + "'");
        if (sig.find(d.lp_name))
          fail(d.pos, "duplicate extern predicate '" + d.lp_name + "'");
        sig.externs.push_back(std::move(d));
      } else {
        unexpected("'extern type', 'regcl' or 'lib'");
      }
    }
    if (!have_lib)
      fail(start, "signature '" + sig.sig_name + "' has no lib declaration");
    for (const auto &[name, pos] : regcl) {
      if (!sig.find(name))
        fail(pos, "regcl names undeclared predicate '" + name + "'");
      sig.regcl.insert(name);
    }
    return sig;
  }

  ModuleAst module() {
    ModuleAst m;
    if (!at_name("module"))
      unexpected("'module <name>.'");
    next();
    m.module_name = expect_name("a module name");
    expect_end();
    while (!at(Tok::Eof)) {
      const Token &t = peek();
      bool is_decl_keyword = t.kind == Tok::Name && !t.quoted && peek(1).kind == Tok::Name;
      if (is_decl_keyword && t.text == "accumulate") {
        next();
        for (auto &[name, pos] : parse_name_list(false, 0)) {
          m.accumulates.push_back(name);
          m.accumulate_positions.push_back(pos);
        }
        expect_end();
      } else if (is_decl_keyword && t.text == "accum_extern") {
        next();
        for (auto &[name, pos] : parse_name_list(false, 0)) {
          m.accum_externs.push_back(name);
          m.accum_extern_positions.push_back(pos);
        }
        expect_end();
      } else if (is_decl_keyword && t.text == "type") {
        next();
        TypeDecl d;
        d.pos = peek().pos;
        d.name = expect_name("a predicate name");
        d.type = parse_type_expr();
        expect_end();
        m.local_sig.push_back(std::move(d));
      } else {
        m.clauses.push_back(parse_clause());
      }
    }
    return m;
  }

  SpecAst spec() {
    SpecAst s;
    if (!at_name("spec"))
      unexpected("'spec <name>.'");
    SourcePos start = next().pos;
    s.spec_name = expect_name("a spec name");
    expect_end();
    bool have_lib = false;
    std::vector<std::pair<std::string, SourcePos>> regcl;
    while (!at(Tok::Eof)) {
      const Token &t = peek();
      if (!at(Tok::Name))
        unexpected("a spec declaration");
      std::string kw = t.text;
      SourcePos pos = t.pos;
      next();
      if (kw == "lib") {
        if (have_lib)
          fail(pos, "duplicate lib declaration");
        s.lib_name = parse_lib_name();
        have_lib = true;
        expect_end();
      } else if (kw == "kind") {
        KindDecl k;
        k.pos = peek().pos;
        k.name = expect_name("a kind name");
        // type -> type -> ... -> type
        if (!at_name("type"))
          unexpected("'type'");
        next();
        while (at_sym("->")) {
          next();
          if (!at_name("type"))
            unexpected("'type'");
          next();
          ++k.arity;
        }
        expect_end();
        s.kinds.push_back(std::move(k));
      } else if (kw == "type") {
        CtorDecl c;
        c.pos = peek().pos;
        c.name = expect_name("a constructor name");
        c.type = parse_type_expr();
        expect_end();
        s.constructors.push_back(std::move(c));
      } else if (kw == "map") {
        NativeMap m;
        m.pos = pos;
        m.lp_type = parse_type_expr();
        if (!at_sym("="))
          unexpected("'='");
        next();
        if (!at_name("struct"))
          unexpected("'struct'");
        next();
        m.record_name = expect_name("a record name");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
          std::vector<std::string> words;
          while (!at(Tok::Semi)) {
            if (at(Tok::Name))
              words.push_back(next().text);
            else if (at_sym("*"))
              words.push_back(next().text);
            else
              unexpected("a field declaration");
          }
          next();
          if (words.size() < 2)
            fail(peek().pos, "field needs a type and a name");
          NativeField f;
          f.name = words.back();
          words.pop_back();
          for (std::size_t i = 0; i < words.size(); ++i) {
            if (i && words[i] != "*")
              f.c_type += ' ';
            f.c_type += words[i];
          }
          m.fields.push_back(std::move(f));
        }
        next();
        expect_end();
        s.native_maps.push_back(std::move(m));
      } else if (kw == "pred") {
        SpecPred p;
        p.pos = peek().pos;
        p.lp_name = expect_name("a predicate name");
        p.entry_base = expect_name("an entry symbol base");
        p.type = parse_type_expr();
        expect_end();
        s.preds.push_back(std::move(p));
      } else if (kw == "regcl") {
        auto names = parse_name_list(false, 0);
        regcl.insert(regcl.end(), names.begin(), names.end());
        expect_end();
      } else {
        fail(pos, "unknown spec declaration '" + kw + "'");
      }
    }
    if (!have_lib)
      fail(start, "spec '" + s.spec_name + "' has no lib declaration");
    for (const auto &[name, pos] : regcl) {
      auto it = std::find_if(s.preds.begin(), s.preds.end(), [&](const SpecPred &p) { return p.lp_name == name; });
      if (it == s.preds.end())
        fail(pos, "regcl names undeclared predicate '" + name + "'");
      it->regcl = true;
    }
    validate_spec(s);
    return s;
  }

  void validate_spec(const SpecAst &s) {
    std::map<std::string, const KindDecl *> kinds;
    for (const auto &k : s.kinds) {
      if (!kinds.emplace(k.name, &k).second)
        fail(k.pos, "duplicate kind '" + k.name + "'");
    }
    // Every user kind must be declared and applied at its arity.
    auto check_kinds = [&](const TypeExpr &t, SourcePos pos, auto &self) -> void {
      if (t.kind == TypeExpr::Kind::User) {
        auto it = kinds.find(t.name);
        if (it == kinds.end())
          fail(pos, "undeclared kind '" + t.name + "'");
        if (it->second->arity != t.args.size())
          fail(pos, "kind '" + t.name + "' expects " + std::to_string(it->second->arity) + " type arguments");
      }
      for (const auto &a : t.args)
        self(a, pos, self);
    };
    std::map<std::string, int> ctor_count;
    std::set<std::string> names;
    for (const auto &c : s.constructors) {
      check_kinds(c.type, c.pos, check_kinds);
      if (!names.insert(c.name).second)
        fail(c.pos, "duplicate constructor '" + c.name + "'");
      if (c.type.result().kind != TypeExpr::Kind::User)
        fail(c.pos, "constructor '" + c.name + "' must build a declared kind");
      ++ctor_count[c.type.result().name];
    }
    std::set<std::string> mapped;
    for (const auto &m : s.native_maps) {
      if (m.lp_type.kind != TypeExpr::Kind::User)
        fail(m.pos, "only declared kinds can be mapped");
      check_kinds(m.lp_type, m.pos, check_kinds);
      if (!mapped.insert(m.lp_type.name).second)
        fail(m.pos, "kind '" + m.lp_type.name + "' mapped twice");
      int n = ctor_count[m.lp_type.name];
      if (n != 1)
        fail(m.pos, "mapped kind '" + m.lp_type.name + "' must have exactly one constructor, found " +
                        std::to_string(n));
      const CtorDecl *ctor = s.constructor_of(m.lp_type.name);
      if (ctor->type.domains().size() != m.fields.size())
        fail(m.pos, "record '" + m.record_name + "' has " + std::to_string(m.fields.size()) +
                        " fields but constructor '" + ctor->name + "' has " +
                        std::to_string(ctor->type.domains().size()) + " arguments");
    }
    std::set<std::string> pred_names;
    for (const auto &p : s.preds) {
      if (!pred_names.insert(p.lp_name).second)
        fail(p.pos, "duplicate predicate '" + p.lp_name + "'");
      if (!p.type.is_predicate())
        fail(p.pos, "non-predicate type '" + format_type(p.type) + "' for '" + p.lp_name + "'");
      check_kinds(p.type, p.pos, check_kinds);
      auto check_mapped = [&](const TypeExpr &t, auto &self) -> void {
        if (t.kind == TypeExpr::Kind::User && !mapped.count(t.name))
          fail(p.pos, "kind '" + t.name + "' used by '" + p.lp_name + "' has no native map");
        for (const auto &a : t.args)
          self(a, self);
      };
      check_mapped(p.type, check_mapped);
    }
  }

  std::vector<SrcTerm> query() {
    auto goals = parse_goals();
    if (at(Tok::End))
      next();
    if (!at(Tok::Eof))
      unexpected("end of query");
    return goals;
  }

  TypeExpr whole_type() {
    TypeExpr t = parse_type_expr();
    if (!at(Tok::Eof))
      unexpected("end of type");
    return t;
  }

private:
  std::string file_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  int depth_ = 0;
};

} // namespace

SignatureAst parse_signature(std::string_view source, std::string_view file) {
  return Parser(source, file).signature();
}

ModuleAst parse_module(std::string_view source, std::string_view file) {
  return Parser(source, file).module();
}

SpecAst parse_spec(std::string_view source, std::string_view file) { return Parser(source, file).spec(); }

TypeExpr parse_type(std::string_view source, std::string_view file) {
  return Parser(source, file).whole_type();
}

std::vector<SrcTerm> parse_query(std::string_view source, std::string_view file) {
  return Parser(source, file).query();
}

// ---------------------------------------------------------------------------
// Formatters

std::string format_signature(const SignatureAst &sig) {
  std::string out = "sig " + sig.sig_name + ".\n";
  out += "lib " + (is_plain_lib_name(sig.lib_name) ? sig.lib_name : terms::quote_string(sig.lib_name)) + ".\n";
  if (!sig.externs.empty())
    out += '\n';
  for (const auto &e : sig.externs)
    out += "extern type " + e.lp_name + ' ' + e.c_name + ' ' + format_type(e.type) + ".\n";
  if (!sig.regcl.empty()) {
    out += "\nregcl ";
    bool first = true;
    // Declaration order rather than set order.
    for (const auto &e : sig.externs) {
      if (!sig.regcl.count(e.lp_name))
        continue;
      if (!first)
        out += ", ";
      out += e.lp_name;
      first = false;
    }
    out += ".\n";
  }
  return out;
}

std::string format_module(const ModuleAst &m) {
  std::string out = "module " + m.module_name + ".\n";
  for (const auto &a : m.accumulates)
    out += "accumulate " + a + ".\n";
  for (const auto &a : m.accum_externs)
    out += "accum_extern " + a + ".\n";
  for (const auto &d : m.local_sig)
    out += "type " + d.name + ' ' + format_type(d.type) + ".\n";
  for (const auto &c : m.clauses) {
    out += format_term(c.head);
    for (std::size_t i = 0; i < c.body.size(); ++i)
      out += (i ? ", " : " :- ") + format_term(c.body[i]);
    out += ".\n";
  }
  return out;
}

} // namespace mlp::frontend
