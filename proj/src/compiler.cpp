#include "mlp/compiler.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace mlp::compiler {

using bytecode::BytecodeImage;
using bytecode::Constant;
using bytecode::ExternEntry;
using bytecode::Instruction;
using bytecode::Opcode;
using bytecode::Template;
using bytecode::TemplateNode;
using frontend::BaseType;

namespace {

struct IntrinsicName {
  std::string_view name;
  IntrinsicInfo info;
};

constexpr IntrinsicName kIntrinsics[] = {
    {"solve", {IntrinsicId::Solve, 1}}, {"not", {IntrinsicId::Not, 1}},  {"eval", {IntrinsicId::Eval, 2}},
    {"lt", {IntrinsicId::Lt, 2}},       {"gt", {IntrinsicId::Gt, 2}},    {"le", {IntrinsicId::Le, 2}},
    {"ge", {IntrinsicId::Ge, 2}},       {"eq_num", {IntrinsicId::EqNum, 2}}, {"<", {IntrinsicId::Lt, 2}},
    {">", {IntrinsicId::Gt, 2}},        {"=<", {IntrinsicId::Le, 2}},    {">=", {IntrinsicId::Ge, 2}},
    {"=:=", {IntrinsicId::EqNum, 2}},
};

[[noreturn]] void compile_fail(const std::string &file, SourcePos pos, std::string msg) {
  throw CompileError(error_at(file, pos, std::move(msg)));
}

std::string describe(SymbolKind k) {
  switch (k) {
  case SymbolKind::Local: return "local";
  case SymbolKind::Accumulated: return "accumulated";
  case SymbolKind::Extern: return "extern";
  case SymbolKind::Intrinsic: return "intrinsic";
  }
  return "?";
}

} // namespace

std::optional<IntrinsicInfo> find_intrinsic(std::string_view name) {
  for (const auto &i : kIntrinsics)
    if (i.name == name)
      return i.info;
  return std::nullopt;
}

SymbolTable SymbolTable::with_intrinsics() {
  SymbolTable t;
  for (const auto &i : kIntrinsics) {
    SymbolTableEntry e;
    e.name = std::string(i.name);
    e.arity = i.info.arity;
    e.kind = SymbolKind::Intrinsic;
    e.intrinsic = i.info.id;
    t.add(std::move(e));
  }
  return t;
}

const SymbolTableEntry *SymbolTable::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Type checking

static std::optional<TypeExpr> literal_type(const SrcTerm &t) {
  switch (t.kind) {
  case SrcTerm::Kind::Int: return TypeExpr::make_base(BaseType::Int);
  case SrcTerm::Kind::Real: return TypeExpr::make_base(BaseType::Real);
  case SrcTerm::Kind::Str: return TypeExpr::make_base(BaseType::String);
  default: return std::nullopt;
  }
}

static bool is_primitive(const TypeExpr &t) {
  return t.is_base(BaseType::Int) || t.is_base(BaseType::Real) || t.is_base(BaseType::String);
}

void check_call(const SrcTerm &site, const SymbolTableEntry &entry, VarTypes &vars, const std::string &file) {
  if (site.arity() != entry.arity)
    compile_fail(file, site.pos,
                 "'" + entry.name + "' expects " + std::to_string(entry.arity) + " argument(s), given " +
                     std::to_string(site.arity()));
  if (!entry.type)
    return;
  auto domains = entry.type->domains();
  for (std::size_t i = 0; i < site.args.size(); ++i) {
    const SrcTerm &arg = site.args[i];
    const TypeExpr &want = domains[i];
    std::string where = "argument " + std::to_string(i + 1) + " of '" + entry.name + "'";
    if (auto lit = literal_type(arg)) {
      if (!(*lit == want))
        compile_fail(file, arg.pos,
                     "type mismatch: " + where + " expects " + frontend::format_type(want) + ", given " +
                         frontend::format_type(*lit) + " literal " + frontend::format_term(arg));
    } else if (arg.kind == SrcTerm::Kind::Var) {
      if (arg.is_anonymous_var())
        continue;
      auto it = vars.find(arg.name);
      if (it == vars.end())
        vars.emplace(arg.name, want);
      else if (!(it->second == want))
        compile_fail(file, arg.pos,
                     "type mismatch: " + where + " expects " + frontend::format_type(want) + ", but " + arg.name +
                         " has type " + frontend::format_type(it->second));
    } else if (is_primitive(want)) {
      compile_fail(file, arg.pos,
                   "type mismatch: " + where + " expects " + frontend::format_type(want) + ", given " +
                       frontend::format_term(arg));
    }
  }
}

// ---------------------------------------------------------------------------
// Register allocation

namespace {

bool clobbers(const SymbolTableEntry &e, bool conservative) {
  return e.kind != SymbolKind::Extern || e.regcl || conservative;
}

const SymbolTableEntry &lookup_goal(const SymbolTable &symbols, const SrcTerm &goal, const std::string &file) {
  const SymbolTableEntry *e = symbols.find(goal.name);
  if (!e)
    compile_fail(file, goal.pos, "undeclared predicate '" + goal.name + "'");
  if (goal.arity() != e->arity)
    compile_fail(file, goal.pos,
                 "'" + goal.name + "' expects " + std::to_string(e->arity) + " argument(s), given " +
                     std::to_string(goal.arity()));
  return *e;
}

void visit_vars(const SrcTerm &t, const auto &fn) {
  if (t.kind == SrcTerm::Kind::Var) {
    if (!t.is_anonymous_var())
      fn(t.name);
    return;
  }
  for (const auto &a : t.args)
    visit_vars(a, fn);
}

} // namespace

RegisterAssignment allocate_registers(const Clause &clause, const SymbolTable &symbols, bool conservative,
                                      bool all_permanent, const std::string &file) {
  struct Span {
    int count = 0;
    int first_chunk = 0;
    int last_chunk = 0;
    std::size_t order = 0;
  };
  std::map<std::string, Span> spans;
  std::size_t order = 0;
  auto note = [&](int chunk) {
    return [&, chunk](const std::string &name) {
      auto [it, inserted] = spans.try_emplace(name);
      if (inserted) {
        it->second.first_chunk = chunk;
        it->second.order = order++;
      }
      ++it->second.count;
      it->second.last_chunk = chunk;
    };
  };

  std::size_t max_arity = clause.head.arity();
  for (const auto &a : clause.head.args)
    visit_vars(a, note(0));
  int chunk = 0;
  bool changes_continuation = false;
  for (std::size_t j = 0; j < clause.body.size(); ++j) {
    const SrcTerm &g = clause.body[j];
    const SymbolTableEntry &e = lookup_goal(symbols, g, file);
    max_arity = std::max(max_arity, g.arity());
    for (const auto &a : g.args)
      visit_vars(a, note(chunk));
    bool last = j + 1 == clause.body.size();
    if ((e.kind == SymbolKind::Local || e.kind == SymbolKind::Accumulated) && !last)
      changes_continuation = true;
    if (e.kind == SymbolKind::Intrinsic && e.intrinsic == IntrinsicId::Solve)
      changes_continuation = true;
    if (clobbers(e, conservative))
      ++chunk;
  }

  std::vector<std::pair<std::size_t, std::string>> by_order;
  for (const auto &[name, s] : spans)
    by_order.emplace_back(s.order, name);
  std::sort(by_order.begin(), by_order.end());

  RegisterAssignment ra;
  auto next_reg = static_cast<std::uint32_t>(max_arity + 1);
  for (const auto &[_, name] : by_order) {
    const Span &s = spans[name];
    VarHome home;
    if (all_permanent || s.first_chunk != s.last_chunk) {
      home.kind = VarHome::Kind::Env;
      home.index = ra.env_slots++;
    } else if (s.count == 1) {
      home.kind = VarHome::Kind::Void;
    } else {
      if (next_reg > bytecode::kMaxRegisters)
        compile_fail(file, clause.pos,
                     "clause needs more than " + std::to_string(bytecode::kMaxRegisters) + " registers");
      home.kind = VarHome::Kind::Reg;
      home.index = static_cast<std::uint16_t>(next_reg++);
    }
    ra.homes.emplace(name, home);
  }
  ra.needs_env = all_permanent || ra.env_slots > 0 || changes_continuation;
  return ra;
}

// ---------------------------------------------------------------------------
// Code generation

namespace {

class ImageBuilder {
public:
  std::uint32_t constant(const Constant &c) {
    std::string key = std::to_string(static_cast<int>(c.kind)) + ":";
    switch (c.kind) {
    case Constant::Kind::Atom:
    case Constant::Kind::Str: key += c.text; break;
    case Constant::Kind::Int: key += std::to_string(c.int_value); break;
    case Constant::Kind::Real: key += std::to_string(std::bit_cast<std::uint64_t>(c.real_value)); break;
    case Constant::Kind::Functor: key += std::to_string(c.arity) + ":" + c.text; break;
    }
    auto [it, inserted] = const_index_.try_emplace(key, static_cast<std::uint32_t>(img.const_pool.size()));
    if (inserted)
      img.const_pool.push_back(c);
    return it->second;
  }

  std::uint32_t add_template(Template t) {
    img.template_pool.push_back(std::move(t));
    return static_cast<std::uint32_t>(img.template_pool.size() - 1);
  }

  std::uint32_t emit(Opcode op, std::uint32_t a = 0, std::uint32_t b = 0) {
    img.code.push_back(Instruction{op, a, b});
    return static_cast<std::uint32_t>(img.code.size() - 1);
  }

  std::uint32_t here() const { return static_cast<std::uint32_t>(img.code.size()); }

  BytecodeImage img;

private:
  std::map<std::string, std::uint32_t> const_index_;
};

class ClauseEmitter {
public:
  ClauseEmitter(ImageBuilder &b, const RegisterAssignment &ra, const SymbolTable &symbols, const std::string &file)
      : b_(b), ra_(ra), symbols_(symbols), file_(file) {}

  void emit_clause(const Clause &c, bool query) {
    if (ra_.needs_env)
      b_.emit(Opcode::Allocate, ra_.env_slots);
    for (std::size_t i = 0; i < c.head.args.size(); ++i)
      emit_get(c.head.args[i], static_cast<std::uint32_t>(i + 1));
    if (c.body.empty()) {
      if (query)
        b_.emit(Opcode::Halt);
      else
        b_.emit(Opcode::Proceed);
      return;
    }
    for (std::size_t j = 0; j < c.body.size(); ++j) {
      const SrcTerm &g = c.body[j];
      const SymbolTableEntry &e = *symbols_.find(g.name);
      for (std::size_t k = 0; k < g.args.size(); ++k)
        emit_put(g.args[k], static_cast<std::uint32_t>(k + 1));
      bool tail = !query && j + 1 == c.body.size();
      emit_goal(g, e, tail);
    }
    if (query)
      b_.emit(Opcode::Halt);
  }

private:
  void emit_goal(const SrcTerm &g, const SymbolTableEntry &e, bool tail) {
    switch (e.kind) {
    case SymbolKind::Local:
    case SymbolKind::Accumulated: {
      auto f = b_.constant(Constant::functor(g.name, static_cast<std::uint16_t>(g.arity())));
      if (tail) {
        if (ra_.needs_env)
          b_.emit(Opcode::Deallocate);
        b_.emit(Opcode::Execute, f);
      } else {
        b_.emit(Opcode::Call, f);
      }
      break;
    }
    case SymbolKind::Extern:
      if (tail) {
        if (ra_.needs_env)
          b_.emit(Opcode::Deallocate);
        b_.emit(Opcode::ExecuteExtern, e.extern_index);
      } else {
        b_.emit(Opcode::CallExtern, e.extern_index);
      }
      break;
    case SymbolKind::Intrinsic:
      b_.emit(Opcode::Intrinsic, static_cast<std::uint32_t>(e.intrinsic));
      if (tail) {
        if (ra_.needs_env)
          b_.emit(Opcode::Deallocate);
        b_.emit(Opcode::Proceed);
      }
      break;
    }
  }

  const VarHome &home(const std::string &name) const { return ra_.homes.at(name); }

  bool is_named_var(const SrcTerm &t) const { return t.kind == SrcTerm::Kind::Var && !t.is_anonymous_var(); }

  void emit_get(const SrcTerm &arg, std::uint32_t reg) {
    if (arg.kind == SrcTerm::Kind::Var) {
      if (arg.is_anonymous_var() || home(arg.name).kind == VarHome::Kind::Void)
        return;
      const VarHome &h = home(arg.name);
      if (!seen_.count(arg.name)) {
        seen_.insert(arg.name);
        if (h.kind == VarHome::Kind::Reg)
          b_.emit(Opcode::MoveReg, reg, h.index);
        else
          b_.emit(Opcode::StoreEnv, reg, h.index);
        return;
      }
    }
    b_.emit(Opcode::GetTemplate, build_template(arg), reg);
  }

  void emit_put(const SrcTerm &arg, std::uint32_t reg) {
    if (is_named_var(arg) && seen_.count(arg.name)) {
      const VarHome &h = home(arg.name);
      if (h.kind == VarHome::Kind::Reg)
        b_.emit(Opcode::MoveReg, h.index, reg);
      else
        b_.emit(Opcode::LoadEnv, h.index, reg);
      return;
    }
    b_.emit(Opcode::PutTemplate, build_template(arg), reg);
  }

  std::uint32_t build_template(const SrcTerm &t) {
    Template tmpl;
    add_nodes(tmpl, t);
    return b_.add_template(std::move(tmpl));
  }

  void add_nodes(Template &tmpl, const SrcTerm &t) {
    TemplateNode n;
    switch (t.kind) {
    case SrcTerm::Kind::Var: {
      if (t.is_anonymous_var()) {
        n.kind = TemplateNode::Kind::Void;
        break;
      }
      const VarHome &h = home(t.name);
      if (h.kind == VarHome::Kind::Void) {
        n.kind = TemplateNode::Kind::Void;
        break;
      }
      n.kind = h.kind == VarHome::Kind::Reg ? TemplateNode::Kind::Reg : TemplateNode::Kind::Env;
      n.index = h.index;
      n.first = seen_.insert(t.name).second;
      break;
    }
    case SrcTerm::Kind::Int:
      n.kind = TemplateNode::Kind::Const;
      n.index = b_.constant(Constant::integer(t.int_value));
      break;
    case SrcTerm::Kind::Real:
      n.kind = TemplateNode::Kind::Const;
      n.index = b_.constant(Constant::real(t.real_value));
      break;
    case SrcTerm::Kind::Str:
      n.kind = TemplateNode::Kind::Const;
      n.index = b_.constant(Constant::str(t.name));
      break;
    case SrcTerm::Kind::Atom:
      n.kind = TemplateNode::Kind::Const;
      n.index = b_.constant(Constant::atom(t.name));
      break;
    case SrcTerm::Kind::Cmp:
      if (t.args.size() > 0xFFFF)
        compile_fail(file_, t.pos, "compound term has too many arguments");
      n.kind = TemplateNode::Kind::Struct;
      n.index = b_.constant(Constant::functor(t.name, static_cast<std::uint16_t>(t.args.size())));
      tmpl.nodes.push_back(n);
      for (const auto &a : t.args)
        add_nodes(tmpl, a);
      return;
    }
    tmpl.nodes.push_back(n);
  }

  ImageBuilder &b_;
  const RegisterAssignment &ra_;
  const SymbolTable &symbols_;
  const std::string &file_;
  std::set<std::string> seen_;
};

std::uint16_t checked_arity(std::size_t n, const std::string &file, SourcePos pos, const std::string &name) {
  if (n > bytecode::kMaxRegisters)
    compile_fail(file, pos,
                 "'" + name + "' has " + std::to_string(n) + " arguments; the register file holds " +
                     std::to_string(bytecode::kMaxRegisters));
  return static_cast<std::uint16_t>(n);
}

/// Predicates defined or declared by a module, with their arities.
std::map<std::string, std::pair<std::uint16_t, std::optional<TypeExpr>>>
module_predicates(const ModuleAst &m, const std::string &file) {
  std::map<std::string, std::pair<std::uint16_t, std::optional<TypeExpr>>> preds;
  for (const auto &d : m.local_sig) {
    if (!d.type.is_predicate())
      compile_fail(file, d.pos, "type of '" + d.name + "' is not a predicate type");
    auto arity = checked_arity(d.type.domains().size(), file, d.pos, d.name);
    auto [it, inserted] = preds.try_emplace(d.name, arity, d.type);
    if (!inserted)
      compile_fail(file, d.pos, "duplicate type declaration for '" + d.name + "'");
  }
  for (const auto &c : m.clauses) {
    auto arity = checked_arity(c.head.arity(), file, c.head.pos, c.head.name);
    auto [it, inserted] = preds.try_emplace(c.head.name, arity, std::nullopt);
    if (!inserted && it->second.first != arity)
      compile_fail(file, c.head.pos,
                   "clause for '" + c.head.name + "' has " + std::to_string(arity) + " argument(s), expected " +
                       std::to_string(it->second.first));
  }
  return preds;
}

} // namespace

SymbolTable build_symbol_table(const ModuleAst &m, const std::map<std::string, SignatureAst> &sigs,
                               const std::map<std::string, ModuleAst> &accumulated,
                               std::vector<ExternEntry> *extern_table, const std::string &file) {
  SymbolTable symbols = SymbolTable::with_intrinsics();
  std::vector<ExternEntry> table;
  std::map<std::string, std::string> origin;  // predicate name -> where it came from

  for (std::size_t i = 0; i < m.accum_externs.size(); ++i) {
    const std::string &sig_name = m.accum_externs[i];
    SourcePos pos = i < m.accum_extern_positions.size() ? m.accum_extern_positions[i] : SourcePos{};
    auto it = sigs.find(sig_name);
    if (it == sigs.end())
      compile_fail(file, pos, "accum_extern " + sig_name + ": signature '" + sig_name + "' not found");
    const SignatureAst &sig = it->second;
    for (const auto &d : sig.externs) {
      if (const SymbolTableEntry *prev = symbols.find(d.lp_name)) {
        if (prev->kind == SymbolKind::Intrinsic)
          compile_fail(file, pos, "extern '" + d.lp_name + "' from signature '" + sig_name +
                                      "' collides with an intrinsic");
        compile_fail(file, pos, "extern '" + d.lp_name + "' declared by both " + origin[d.lp_name] +
                                    " and signature '" + sig_name + "'");
      }
      SymbolTableEntry e;
      e.name = d.lp_name;
      e.arity = checked_arity(d.type.domains().size(), file, pos, d.lp_name);
      e.type = d.type;
      e.kind = SymbolKind::Extern;
      e.extern_index = static_cast<std::uint32_t>(table.size());
      e.regcl = sig.regcl.count(d.lp_name) > 0;
      table.push_back(ExternEntry{sig.lib_name, d.c_name, d.lp_name, e.arity, e.regcl});
      origin[d.lp_name] = "signature '" + sig_name + "'";
      symbols.add(std::move(e));
    }
  }

  for (std::size_t i = 0; i < m.accumulates.size(); ++i) {
    const std::string &mod_name = m.accumulates[i];
    SourcePos pos = i < m.accumulate_positions.size() ? m.accumulate_positions[i] : SourcePos{};
    auto it = accumulated.find(mod_name);
    if (it == accumulated.end())
      compile_fail(file, pos, "accumulate " + mod_name + ": module '" + mod_name + "' not found");
    for (auto &[name, info] : module_predicates(it->second, file)) {
      if (const SymbolTableEntry *prev = symbols.find(name)) {
        std::string from = prev->kind == SymbolKind::Intrinsic ? std::string("an intrinsic") : origin[name];
        compile_fail(file, pos, "predicate '" + name + "' of module '" + mod_name + "' collides with " + from);
      }
      SymbolTableEntry e;
      e.name = name;
      e.arity = info.first;
      e.type = info.second;
      e.kind = SymbolKind::Accumulated;
      origin[name] = "module '" + mod_name + "'";
      symbols.add(std::move(e));
    }
  }

  for (const auto &d : m.local_sig) {
    if (const SymbolTableEntry *prev = symbols.find(d.name))
      compile_fail(file, d.pos, "type declaration for " + describe(prev->kind) + " predicate '" + d.name + "'");
  }
  for (const auto &c : m.clauses) {
    if (const SymbolTableEntry *prev = symbols.find(c.head.name)) {
      if (prev->kind != SymbolKind::Local)
        compile_fail(file, c.head.pos, "redefinition of " + describe(prev->kind) + " predicate '" + c.head.name + "'");
    }
  }
  for (auto &[name, info] : module_predicates(m, file)) {
    SymbolTableEntry e;
    e.name = name;
    e.arity = info.first;
    e.type = info.second;
    e.kind = SymbolKind::Local;
    symbols.add(std::move(e));
  }
  if (extern_table)
    *extern_table = std::move(table);
  return symbols;
}

static void check_clause_types(const Clause &c, const SymbolTable &symbols, const std::string &file) {
  VarTypes vars;
  const SymbolTableEntry *head = symbols.find(c.head.name);
  if (head)
    check_call(c.head, *head, vars, file);
  for (const auto &g : c.body) {
    const SymbolTableEntry &e = lookup_goal(symbols, g, file);
    check_call(g, e, vars, file);
  }
}

BytecodeImage compile_module(const ModuleAst &m, const std::map<std::string, SignatureAst> &sigs,
                             const CompileOptions &options, const std::map<std::string, ModuleAst> &accumulated) {
  const std::string &file = options.file;
  ImageBuilder b;
  SymbolTable symbols = build_symbol_table(m, sigs, accumulated, &b.img.extern_table, file);

  // Group clauses per predicate, in order of first appearance.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Clause *>> clauses;
  for (const auto &c : m.clauses) {
    auto [it, inserted] = clauses.try_emplace(c.head.name);
    if (inserted)
      order.push_back(c.head.name);
    it->second.push_back(&c);
  }
  for (const auto &d : m.local_sig)
    if (clauses.try_emplace(d.name).second)
      order.push_back(d.name);

  std::vector<Diagnostic> diags;
  for (const auto &name : order) {
    const SymbolTableEntry &entry = *symbols.find(name);
    const auto &cs = clauses[name];
    std::uint32_t entry_pc = b.here();
    if (cs.empty()) {
      // Declared without clauses: the predicate simply fails.
      b.emit(Opcode::Fail);
    }
    std::vector<std::uint32_t> patch;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (cs.size() > 1) {
        if (!patch.empty())
          b.img.code[patch.back()].a = b.here();
        if (k == 0)
          patch.push_back(b.emit(Opcode::TryMeElse));
        else if (k + 1 < cs.size())
          patch.push_back(b.emit(Opcode::RetryMeElse));
        else
          b.emit(Opcode::TrustMe);
      }
      try {
        check_clause_types(*cs[k], symbols, file);
        RegisterAssignment ra = allocate_registers(*cs[k], symbols, options.conservative_regs, false, file);
        ClauseEmitter(b, ra, symbols, file).emit_clause(*cs[k], false);
      } catch (const CompileError &e) {
        diags.insert(diags.end(), e.diagnostics().begin(), e.diagnostics().end());
        b.emit(Opcode::Fail);
      }
    }
    b.img.predicate_table.push_back(bytecode::PredicateEntry{name, entry.arity, entry_pc});
  }
  if (!diags.empty())
    throw CompileError(std::move(diags));
  if (b.img.const_pool.size() > 0xFFFF || b.img.template_pool.size() > 0xFFFF || b.img.extern_table.size() > 0xFFFF)
    compile_fail(file, {}, "module exceeds the 16-bit pool limits of the bytecode format");
  return std::move(b.img);
}

QueryCode compile_query(std::span<const SrcTerm> goals, const SymbolTable &symbols) {
  const std::string file = "<query>";
  Clause c;
  c.head = SrcTerm::atom("$query");
  c.body.assign(goals.begin(), goals.end());
  QueryCode q;
  for (const auto &g : c.body) {
    if (!g.is_callable())
      compile_fail(file, g.pos, "query goal must be an atom or compound term, not " + frontend::format_term(g));
    if (!symbols.find(g.name))
      q.unknown_predicates.push_back(g.name);
  }
  if (!q.unknown_predicates.empty()) {
    q.fragment.code.push_back(Instruction{Opcode::Fail, 0, 0});
    return q;
  }
  VarTypes vars;
  for (const auto &g : c.body)
    check_call(g, *symbols.find(g.name), vars, file);

  RegisterAssignment ra = allocate_registers(c, symbols, true, true, file);
  ImageBuilder b;
  ClauseEmitter(b, ra, symbols, file).emit_clause(c, true);

  std::vector<std::string> names;
  for (const auto &g : c.body)
    visit_vars(g, [&](const std::string &n) {
      if (std::find(names.begin(), names.end(), n) == names.end())
        names.push_back(n);
    });
  for (const auto &n : names) {
    if (n.starts_with("_"))
      continue;
    q.var_names.push_back(n);
    q.var_slots.push_back(ra.homes.at(n).index);
  }
  q.fragment = std::move(b.img);
  return q;
}

SymbolTable symbols_from_image(const BytecodeImage &img) {
  SymbolTable symbols = SymbolTable::with_intrinsics();
  for (std::size_t i = 0; i < img.extern_table.size(); ++i) {
    const ExternEntry &x = img.extern_table[i];
    SymbolTableEntry e;
    e.name = x.pred_name;
    e.arity = x.arity;
    e.kind = SymbolKind::Extern;
    e.extern_index = static_cast<std::uint32_t>(i);
    e.regcl = x.regcl;
    symbols.add(std::move(e));
  }
  for (const auto &p : img.predicate_table) {
    SymbolTableEntry e;
    e.name = p.name;
    e.arity = p.arity;
    e.kind = SymbolKind::Local;
    symbols.add(std::move(e));
  }
  return symbols;
}

} // namespace mlp::compiler
