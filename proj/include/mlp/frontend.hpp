#pragma once

// Source dialects: module files (.mod), extern signature files (.sig) and
// stub generator spec files (.spec), plus the type-expression language.

#include "mlp/diagnostics.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mlp::frontend {

enum class BaseType : std::uint8_t { Int, Real, String, O };

const char *base_type_name(BaseType b);

struct TypeExpr {
  enum class Kind : std::uint8_t { Base, User, Arrow };

  Kind kind = Kind::Base;
  BaseType base = BaseType::O;
  std::string name;            // User
  std::vector<TypeExpr> args;  // User: type args; Arrow: {domain, codomain}

  static TypeExpr make_base(BaseType b);
  static TypeExpr make_user(std::string name, std::vector<TypeExpr> args = {});
  static TypeExpr make_arrow(TypeExpr domain, TypeExpr codomain);

  const TypeExpr &domain() const { return args.at(0); }
  const TypeExpr &codomain() const { return args.at(1); }

  bool is_base(BaseType b) const { return kind == Kind::Base && base == b; }
  /// Arrow domains from left to right: real -> int -> o gives {real, int}.
  std::vector<TypeExpr> domains() const;
  const TypeExpr &result() const;
  bool is_predicate() const { return result().is_base(BaseType::O); }

  friend bool operator==(const TypeExpr &, const TypeExpr &) = default;
};

std::string format_type(const TypeExpr &t);

/// Source-level term. Curried application `f a b` and `f(a, b)` produce the
/// same tree.
struct SrcTerm {
  enum class Kind : std::uint8_t { Var, Int, Real, Str, Atom, Cmp };

  Kind kind = Kind::Atom;
  std::string name;  // Var name, Atom name, Cmp functor, Str contents
  std::int64_t int_value = 0;
  double real_value = 0.0;
  std::vector<SrcTerm> args;
  SourcePos pos;

  static SrcTerm var(std::string name, SourcePos pos = {});
  static SrcTerm atom(std::string name, SourcePos pos = {});
  static SrcTerm integer(std::int64_t v, SourcePos pos = {});
  static SrcTerm real(double v, SourcePos pos = {});
  static SrcTerm str(std::string s, SourcePos pos = {});
  static SrcTerm cmp(std::string functor, std::vector<SrcTerm> args, SourcePos pos = {});

  bool is_callable() const { return kind == Kind::Atom || kind == Kind::Cmp; }
  std::size_t arity() const { return kind == Kind::Cmp ? args.size() : 0; }
  bool is_anonymous_var() const { return kind == Kind::Var && name == "_"; }

  /// Structural equality ignoring positions.
  bool same_as(const SrcTerm &o) const;
};

std::string format_term(const SrcTerm &t);

struct ExternDecl {
  std::string lp_name;
  std::string c_name;
  TypeExpr type;
  SourcePos pos;
};

struct SignatureAst {
  std::string sig_name;
  std::string lib_name;
  std::vector<ExternDecl> externs;
  std::set<std::string> regcl;

  const ExternDecl *find(std::string_view lp_name) const;
  /// Equality ignoring source positions.
  bool same_as(const SignatureAst &o) const;
};

struct TypeDecl {
  std::string name;
  TypeExpr type;
  SourcePos pos;
};

struct Clause {
  SrcTerm head;
  std::vector<SrcTerm> body;
  SourcePos pos;
};

struct ModuleAst {
  std::string module_name;
  std::vector<std::string> accumulates;
  std::vector<std::string> accum_externs;
  std::vector<TypeDecl> local_sig;
  std::vector<Clause> clauses;
  // Parallel to accumulates / accum_externs, for diagnostics.
  std::vector<SourcePos> accumulate_positions;
  std::vector<SourcePos> accum_extern_positions;

  bool same_as(const ModuleAst &o) const;
};

struct KindDecl {
  std::string name;
  std::size_t arity = 0;
  SourcePos pos;
};

struct CtorDecl {
  std::string name;
  TypeExpr type;
  SourcePos pos;
};

struct NativeField {
  std::string c_type;
  std::string name;
};

struct NativeMap {
  TypeExpr lp_type;  // a UserKind instance, e.g. pair int int
  std::string record_name;
  std::vector<NativeField> fields;
  SourcePos pos;
};

struct SpecPred {
  std::string lp_name;
  std::string entry_base;
  TypeExpr type;
  bool regcl = false;
  SourcePos pos;
};

struct SpecAst {
  std::string spec_name;
  std::string lib_name;
  std::vector<KindDecl> kinds;
  std::vector<CtorDecl> constructors;
  std::vector<NativeMap> native_maps;
  std::vector<SpecPred> preds;

  const NativeMap *find_map(std::string_view kind) const;
  const CtorDecl *constructor_of(std::string_view kind) const;
};

/// All parsers throw ParseError on malformed input and never anything else.
SignatureAst parse_signature(std::string_view source, std::string_view file = "<sig>");
ModuleAst parse_module(std::string_view source, std::string_view file = "<mod>");
SpecAst parse_spec(std::string_view source, std::string_view file = "<spec>");
TypeExpr parse_type(std::string_view source, std::string_view file = "<type>");
/// A conjunction of goals, optionally terminated by a period.
std::vector<SrcTerm> parse_query(std::string_view source, std::string_view file = "<query>");

std::string format_signature(const SignatureAst &sig);
std::string format_module(const ModuleAst &m);

} // namespace mlp::frontend
