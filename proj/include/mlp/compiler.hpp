#pragma once

// Clause compilation to template-based machine code, with the extern
// metadata segment and the register-clobbering aware allocation rule.

#include "mlp/bytecode.hpp"
#include "mlp/frontend.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mlp::compiler {

using bytecode::IntrinsicId;
using frontend::Clause;
using frontend::ModuleAst;
using frontend::SignatureAst;
using frontend::SrcTerm;
using frontend::TypeExpr;

struct IntrinsicInfo {
  IntrinsicId id;
  std::uint16_t arity;
};

/// Looks up an intrinsic by source name, including the symbolic aliases
/// `<`, `>`, `=<`, `>=` and `=:=`.
std::optional<IntrinsicInfo> find_intrinsic(std::string_view name);

enum class SymbolKind : std::uint8_t { Local, Accumulated, Extern, Intrinsic };

struct SymbolTableEntry {
  std::string name;
  std::uint16_t arity = 0;
  std::optional<TypeExpr> type;
  SymbolKind kind = SymbolKind::Local;
  std::uint32_t extern_index = 0;              // Extern
  IntrinsicId intrinsic = IntrinsicId::Solve;  // Intrinsic
  bool regcl = false;                          // Extern only
};

class SymbolTable {
public:
  /// Registers every intrinsic under its primary name and aliases.
  static SymbolTable with_intrinsics();

  const SymbolTableEntry *find(std::string_view name) const;
  void add(SymbolTableEntry e) { entries_.insert_or_assign(e.name, std::move(e)); }
  const std::map<std::string, SymbolTableEntry, std::less<>> &entries() const { return entries_; }

private:
  std::map<std::string, SymbolTableEntry, std::less<>> entries_;
};

struct CompileOptions {
  /// Treat every extern as register clobbering.
  bool conservative_regs = false;
  std::string file = "<mod>";
};

/// Per-clause variable typing used by check_call.
using VarTypes = std::map<std::string, TypeExpr>;

/// Checks a call site against its declared predicate type. Throws CompileError.
void check_call(const SrcTerm &site, const SymbolTableEntry &entry, VarTypes &vars,
                const std::string &file = "<mod>");

struct VarHome {
  enum class Kind : std::uint8_t { Void, Reg, Env };
  Kind kind = Kind::Void;
  std::uint16_t index = 0;  // register number (1-based) or env slot
  friend bool operator==(const VarHome &, const VarHome &) = default;
};

struct RegisterAssignment {
  std::map<std::string, VarHome> homes;
  std::uint16_t env_slots = 0;
  bool needs_env = false;
};

/// Places each clause variable. Values live across a call to a non-regcl
/// extern stay in registers above every argument position the clause uses;
/// values live across a user call, an intrinsic or a regcl extern go to the
/// environment. With `all_permanent` every variable gets an environment slot.
RegisterAssignment allocate_registers(const Clause &clause, const SymbolTable &symbols, bool conservative,
                                      bool all_permanent = false, const std::string &file = "<mod>");

/// compile_module with the caller's accumulated modules. `accumulated` must
/// hold the AST of every module named in `accumulate`.
bytecode::BytecodeImage compile_module(const ModuleAst &m, const std::map<std::string, SignatureAst> &sigs,
                                       const CompileOptions &options = {},
                                       const std::map<std::string, ModuleAst> &accumulated = {});

/// Symbol table a module sees: intrinsics, extern signatures, accumulated
/// modules and its own predicates. Throws CompileError on collisions.
SymbolTable build_symbol_table(const ModuleAst &m, const std::map<std::string, SignatureAst> &sigs,
                               const std::map<std::string, ModuleAst> &accumulated,
                               std::vector<bytecode::ExternEntry> *extern_table, const std::string &file);

/// Standalone code for a query: every variable lives in the environment and
/// the code ends in `halt`. Extern operands are indices into the extern
/// table the symbol table was built from. Pools are fragment-local.
struct QueryCode {
  bytecode::BytecodeImage fragment;
  std::vector<std::string> var_names;  // named query variables, first-appearance order
  std::vector<std::uint16_t> var_slots;
  /// Goals naming predicates the program does not define. Such a query
  /// compiles to a single `fail`.
  std::vector<std::string> unknown_predicates;
};

/// Symbol table for queries against a compiled image: its predicates (no
/// types survive compilation), its extern table and the intrinsics.
SymbolTable symbols_from_image(const bytecode::BytecodeImage &img);

QueryCode compile_query(std::span<const SrcTerm> goals, const SymbolTable &symbols);

} // namespace mlp::compiler
