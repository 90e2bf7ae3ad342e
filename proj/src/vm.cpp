#include "mlp/vm.hpp"

#include "mlp/compiler.hpp"
#include "mlp/hostapi.hpp"
#include "mlp/linker.hpp"

#include <cmath>
#include <map>

namespace mlp::vm {

using bytecode::Constant;
using bytecode::Instruction;
using bytecode::IntrinsicId;
using bytecode::Opcode;
using bytecode::Template;
using bytecode::TemplateNode;
using terms::Tag;
using terms::TermRef;

// ---------------------------------------------------------------------------
// Arithmetic

namespace {

constexpr int kMaxEvalDepth = 10000;

Number eval_node(const terms::Store &s, TermRef t, int depth) {
  if (depth > kMaxEvalDepth)
    throw EvalError("expression nested too deeply");
  t = s.deref(t);
  switch (s.tag(t)) {
  case Tag::Int: return s.int_value(t);
  case Tag::Real: return s.real_value(t);
  case Tag::Var: throw EvalError("unbound variable in arithmetic expression");
  case Tag::Str:
  case Tag::Atom: throw EvalError("not a number: " + s.format(t));
  case Tag::Cmp: break;
  }
  const std::string &op = s.symbols().name(s.functor(t));
  if (s.arity(t) != 2 || op.size() != 1 || std::string_view("+-*/").find(op[0]) == std::string_view::npos)
    throw EvalError("unknown arithmetic functor " + op + "/" + std::to_string(s.arity(t)));
  Number a = eval_node(s, s.arg(t, 0), depth + 1);
  Number b = eval_node(s, s.arg(t, 1), depth + 1);
  if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
    std::int64_t x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b), r = 0;
    bool overflow = false;
    switch (op[0]) {
    case '+': overflow = __builtin_add_overflow(x, y, &r); break;
    case '-': overflow = __builtin_sub_overflow(x, y, &r); break;
    case '*': overflow = __builtin_mul_overflow(x, y, &r); break;
    case '/':
      if (y == 0)
        throw EvalError("integer division by zero");
      overflow = x == INT64_MIN && y == -1;
      r = overflow ? 0 : x / y;
      break;
    }
    if (overflow)
      throw EvalError("integer overflow in " + s.format(t));
    return r;
  }
  auto real = [](const Number &n) {
    return std::holds_alternative<double>(n) ? std::get<double>(n) : static_cast<double>(std::get<std::int64_t>(n));
  };
  double x = real(a), y = real(b);
  switch (op[0]) {
  case '+': return x + y;
  case '-': return x - y;
  case '*': return x * y;
  default: return x / y;
  }
}

} // namespace

Number evaluate(const terms::Store &store, TermRef expr) { return eval_node(store, expr, 0); }

TermRef make_number(terms::Store &store, const Number &n) {
  if (std::holds_alternative<std::int64_t>(n))
    return store.make_int(std::get<std::int64_t>(n));
  return store.make_real(std::get<double>(n));
}

bool compare(Comparison c, const Number &a, const Number &b) {
  auto cmp = [c](auto x, auto y) {
    switch (c) {
    case Comparison::Lt: return x < y;
    case Comparison::Gt: return x > y;
    case Comparison::Le: return x <= y;
    case Comparison::Ge: return x >= y;
    case Comparison::Eq: return x == y;
    }
    return false;
  };
  if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b))
    return cmp(std::get<std::int64_t>(a), std::get<std::int64_t>(b));
  auto real = [](const Number &n) {
    return std::holds_alternative<double>(n) ? std::get<double>(n) : static_cast<double>(std::get<std::int64_t>(n));
  };
  return cmp(real(a), real(b));
}

// ---------------------------------------------------------------------------
// Machine

const char *outcome_name(Outcome o) {
  switch (o) {
  case Outcome::Success: return "success";
  case Outcome::Failure: return "failure";
  case Outcome::BudgetExhausted: return "budget exhausted";
  case Outcome::Error: return "error";
  }
  return "?";
}

std::string Answer::str() const {
  if (bindings.empty())
    return "true";
  std::string out;
  for (const auto &[name, value] : bindings) {
    if (!out.empty())
      out += "\n";
    out += name + " = " + value;
  }
  return out;
}

namespace {

constexpr std::uint32_t kNone = UINT32_MAX;
constexpr std::uint32_t kReturned = UINT32_MAX;      // continuation of a nested run
constexpr std::uint32_t kBacktracked = UINT32_MAX - 1;

struct RuntimeFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfSteps {};

struct Frame {
  std::uint32_t prev_e = kNone;
  std::uint32_t cp = 0;
  std::vector<TermRef> slots;
};

struct ChoicePoint {
  std::uint32_t alternative = 0;
  std::uint32_t e = kNone;
  std::uint32_t cp = 0;
  std::uint32_t protect = 0;  // frames below this index stay live
  std::uint16_t num_args = 0;
  terms::TrailMark trail_mark;
  std::array<TermRef, bytecode::kMaxRegisters> args;
};

enum class Stop { Halted, Returned, Failed };

} // namespace

struct Machine::Impl {
  Machine &m;
  std::shared_ptr<const loader::LoadedProgram> prog;
  RunOptions options;

  // Program image plus the relocated query.
  std::vector<Instruction> code;
  std::vector<Constant> consts;
  std::vector<Template> templates;
  std::vector<std::optional<TermRef>> const_terms;
  std::vector<std::optional<terms::SymbolId>> functor_ids;
  std::map<std::string, const bytecode::PredicateEntry *, std::less<>> predicates;
  std::map<std::string, std::uint32_t, std::less<>> externs;

  std::array<TermRef, bytecode::kMaxRegisters> regs{};
  terms::Trail trail;
  std::vector<Frame> frames;
  std::vector<ChoicePoint> choices;
  std::uint32_t e = kNone;
  std::uint32_t cp = 0;
  std::uint32_t pc = 0;
  std::uint16_t num_args = 0;
  std::size_t barrier = 0;

  compiler::QueryCode query;
  std::uint32_t query_entry = 0;
  std::uint32_t query_frame = kNone;
  terms::TrailMark start_mark;
  enum class Phase { Idle, Ready, Answered, Done } phase = Phase::Idle;

  Impl(Machine &machine, std::shared_ptr<const loader::LoadedProgram> p, RunOptions o)
      : m(machine), prog(std::move(p)), options(o) {
    for (const auto &e : prog->image.predicate_table)
      predicates.emplace(e.name, &e);
    for (std::size_t i = 0; i < prog->handles.size(); ++i)
      externs.emplace(prog->handles[i].pred_name, static_cast<std::uint32_t>(i));
  }

  terms::Store &store() { return m.store_; }

  void install_query(compiler::QueryCode q) {
    query = std::move(q);
    bytecode::BytecodeImage img;
    img.const_pool = prog->image.const_pool;
    img.template_pool = prog->image.template_pool;
    img.code = prog->image.code;
    std::vector<std::uint32_t> identity(prog->handles.size());
    for (std::size_t i = 0; i < identity.size(); ++i)
      identity[i] = static_cast<std::uint32_t>(i);
    std::size_t first_query_ins = img.code.size();
    query_entry = linker::append_relocated(img, query.fragment, identity);
    for (std::size_t i = first_query_ins; i < img.code.size(); ++i) {
      Instruction &ins = img.code[i];
      if (ins.op != Opcode::Call && ins.op != Opcode::Execute)
        continue;
      const Constant &f = img.const_pool[ins.a];
      const bytecode::PredicateEntry *p = prog->image.find_predicate(f.text, f.arity);
      if (!p)
        throw RuntimeFault("query calls undefined predicate " + f.text);
      ins.a = p->code_offset;
      ins.b = p->arity;
    }
    code = std::move(img.code);
    consts = std::move(img.const_pool);
    templates = std::move(img.template_pool);

    m.store_ = terms::Store();
    trail = terms::Trail();
    const_terms.assign(consts.size(), std::nullopt);
    functor_ids.assign(consts.size(), std::nullopt);
    regs.fill(TermRef{});
    frames.clear();
    choices.clear();
    e = kNone;
    cp = kReturned;
    pc = query_entry;
    num_args = 0;
    barrier = 0;
    query_frame = kNone;
    m.diagnostics_.clear();
    m.stats_ = {};
    start_mark = trail.mark();
    phase = Phase::Ready;
  }

  // -- terms ----------------------------------------------------------------

  TermRef const_term(std::uint32_t idx) {
    if (const_terms[idx])
      return *const_terms[idx];
    const Constant &c = consts[idx];
    TermRef t;
    switch (c.kind) {
    case Constant::Kind::Atom: t = store().make_atom(c.text); break;
    case Constant::Kind::Int: t = store().make_int(c.int_value); break;
    case Constant::Kind::Real: t = store().make_real(c.real_value); break;
    case Constant::Kind::Str: t = store().make_str(c.text); break;
    case Constant::Kind::Functor: throw RuntimeFault("functor constant used as a term");
    }
    const_terms[idx] = t;
    return t;
  }

  terms::SymbolId functor_id(std::uint32_t idx) {
    if (!functor_ids[idx])
      functor_ids[idx] = store().symbols().intern(consts[idx].text);
    return *functor_ids[idx];
  }

  TermRef &env_slot(std::uint32_t n) {
    if (e == kNone || n >= frames[e].slots.size())
      throw RuntimeFault("environment slot Y" + std::to_string(n) + " out of range");
    return frames[e].slots[n];
  }

  TermRef build(const Template &t, std::size_t &i) {
    const TemplateNode &n = t.nodes[i++];
    switch (n.kind) {
    case TemplateNode::Kind::Const: return const_term(n.index);
    case TemplateNode::Kind::Void: return store().make_var();
    case TemplateNode::Kind::Reg: {
      TermRef &r = regs[n.index - 1];
      if (n.first)
        r = store().make_var();
      return r;
    }
    case TemplateNode::Kind::Env: {
      TermRef &y = env_slot(n.index);
      if (n.first)
        y = store().make_var();
      return y;
    }
    case TemplateNode::Kind::Struct: {
      std::uint16_t arity = consts[n.index].arity;
      if (arity == 0)
        return store().make_atom(consts[n.index].text);
      std::vector<TermRef> args(arity);
      for (auto &a : args)
        a = build(t, i);
      return store().make_cmp(functor_id(n.index), args);
    }
    }
    throw RuntimeFault("bad template node");
  }

  // Preorder match of t's nodes starting at i against term.
  bool match(const Template &t, std::size_t &i, TermRef term) {
    const TemplateNode &n = t.nodes[i];
    switch (n.kind) {
    case TemplateNode::Kind::Const: ++i; return store().unify(term, const_term(n.index), trail);
    case TemplateNode::Kind::Void: ++i; return true;
    case TemplateNode::Kind::Reg:
    case TemplateNode::Kind::Env: {
      ++i;
      TermRef &home = n.kind == TemplateNode::Kind::Reg ? regs[n.index - 1] : env_slot(n.index);
      if (n.first) {
        home = term;
        return true;
      }
      return store().unify(home, term, trail);
    }
    case TemplateNode::Kind::Struct: {
      TermRef d = store().deref(term);
      if (store().tag(d) == Tag::Var) {
        TermRef built = build(t, i);
        return store().unify(d, built, trail);
      }
      ++i;
      const Constant &f = consts[n.index];
      if (f.arity == 0)
        return store().tag(d) == Tag::Atom && store().atom(d) == functor_id(n.index);
      if (store().tag(d) != Tag::Cmp || store().arity(d) != f.arity || !(store().functor(d) == functor_id(n.index)))
        return false;
      for (std::uint32_t k = 0; k < f.arity; ++k)
        if (!match(t, i, store().arg(d, k)))
          return false;
      return true;
    }
    }
    throw RuntimeFault("bad template node");
  }

  // -- control --------------------------------------------------------------

  std::size_t depth() const { return (e == kNone ? 0 : e + 1) + choices.size(); }

  void note_depth() {
    m.stats_.max_control_depth = std::max(m.stats_.max_control_depth, depth());
    m.stats_.max_choice_depth = std::max(m.stats_.max_choice_depth, choices.size());
  }

  void backtrack() {
    if (choices.size() <= barrier) {
      pc = kBacktracked;
      return;
    }
    ChoicePoint &c = choices.back();
    store().undo(trail, c.trail_mark);
    std::copy_n(c.args.begin(), c.num_args, regs.begin());
    e = c.e;
    cp = c.cp;
    num_args = c.num_args;
    pc = c.alternative;
  }

  void allocate(std::uint32_t n) {
    std::uint32_t idx = e == kNone ? 0 : e + 1;
    if (!choices.empty())
      idx = std::max(idx, choices.back().protect);
    if (frames.size() <= idx)
      frames.resize(idx + 1);
    Frame &f = frames[idx];
    f.prev_e = e;
    f.cp = cp;
    f.slots.assign(n, TermRef{});
    e = idx;
    note_depth();
  }

  void push_choice(std::uint32_t alternative) {
    ChoicePoint c;
    c.alternative = alternative;
    c.e = e;
    c.cp = cp;
    c.protect = e == kNone ? 0 : e + 1;
    if (!choices.empty())
      c.protect = std::max(c.protect, choices.back().protect);
    c.num_args = num_args;
    c.trail_mark = trail.mark();
    std::copy_n(regs.begin(), num_args, c.args.begin());
    choices.push_back(c);
    note_depth();
  }

  bool invoke_extern(std::uint32_t k) {
    const loader::ResolvedHandle &h = prog->handles.at(k);
    hostapi::HostFrame frame;
    frame.registers = std::span<TermRef>(regs.data(), regs.size());
    frame.store = &store();
    frame.trail = &trail;
    frame.predicate = h.pred_name;
    std::vector<TermRef> before;
    if (m.probe_)
      before.assign(regs.begin(), regs.begin() + h.arity);
    {
      hostapi::Invocation inv(frame);
      h.fn();
    }
    ++m.stats_.extern_calls;
    if (m.probe_)
      m.probe_(h, before, std::span<const TermRef>(regs.data(), h.arity));
    for (auto &f : frame.faults)
      m.diagnostics_.push_back(std::move(f));
    return !frame.failed;
  }

  Number eval_arg(std::size_t reg) {
    try {
      return evaluate(store(), regs[reg]);
    } catch (const EvalError &err) {
      throw RuntimeFault(std::string("evaluation error: ") + err.what());
    }
  }

  // Loads the arguments of a callable term into A1..An and transfers
  // control to its predicate, continuing at `ret` on success.
  void dispatch_goal(TermRef goal, std::uint32_t ret) {
    goal = store().deref(goal);
    Tag tag = store().tag(goal);
    if (tag != Tag::Atom && tag != Tag::Cmp)
      throw RuntimeFault("goal is not callable: " + (tag == Tag::Var ? std::string("unbound variable")
                                                                     : store().format(goal)));
    const std::string &name =
        store().symbols().name(tag == Tag::Atom ? store().atom(goal) : store().functor(goal));
    std::uint32_t arity = tag == Tag::Cmp ? store().arity(goal) : 0;
    if (arity > bytecode::kMaxRegisters)
      throw RuntimeFault("goal " + name + " has too many arguments");
    std::array<TermRef, bytecode::kMaxRegisters> args;
    for (std::uint32_t k = 0; k < arity; ++k)
      args[k] = store().arg(goal, k);
    auto load = [&](std::uint32_t want) {
      if (want != arity)
        throw RuntimeFault("goal " + name + "/" + std::to_string(arity) + " does not match arity " +
                           std::to_string(want));
      std::copy_n(args.begin(), arity, regs.begin());
    };

    if (auto p = predicates.find(name); p != predicates.end()) {
      load(p->second->arity);
      cp = ret;
      num_args = p->second->arity;
      pc = p->second->code_offset;
    } else if (auto x = externs.find(name); x != externs.end()) {
      load(prog->handles[x->second].arity);
      if (invoke_extern(x->second))
        pc = ret;
      else
        backtrack();
    } else if (auto in = compiler::find_intrinsic(name)) {
      load(in->arity);
      exec_intrinsic(in->id, ret);
    } else {
      throw RuntimeFault("unknown predicate in meta-call: " + name + "/" + std::to_string(arity));
    }
  }

  bool run_negated(TermRef goal) {
    auto saved_regs = regs;
    std::uint32_t saved_e = e, saved_cp = cp, saved_pc = pc;
    std::uint16_t saved_args = num_args;
    std::size_t saved_barrier = barrier;
    terms::TrailMark mark = trail.mark();
    barrier = choices.size();

    dispatch_goal(goal, kReturned);
    Stop stop = run_loop();

    choices.resize(barrier);
    barrier = saved_barrier;
    store().undo(trail, mark);
    regs = saved_regs;
    e = saved_e;
    cp = saved_cp;
    pc = saved_pc;
    num_args = saved_args;
    if (stop == Stop::Halted)
      throw RuntimeFault("halt inside negation");
    return stop == Stop::Returned;
  }

  void exec_intrinsic(IntrinsicId id, std::uint32_t ret) {
    bool ok = true;
    switch (id) {
    case IntrinsicId::Solve: dispatch_goal(regs[0], ret); return;
    case IntrinsicId::Not: ok = !run_negated(regs[0]); break;
    case IntrinsicId::Eval: {
      TermRef value = make_number(store(), eval_arg(1));
      ok = store().unify(regs[0], value, trail);
      break;
    }
    case IntrinsicId::Lt: ok = compare(Comparison::Lt, eval_arg(0), eval_arg(1)); break;
    case IntrinsicId::Gt: ok = compare(Comparison::Gt, eval_arg(0), eval_arg(1)); break;
    case IntrinsicId::Le: ok = compare(Comparison::Le, eval_arg(0), eval_arg(1)); break;
    case IntrinsicId::Ge: ok = compare(Comparison::Ge, eval_arg(0), eval_arg(1)); break;
    case IntrinsicId::EqNum: ok = compare(Comparison::Eq, eval_arg(0), eval_arg(1)); break;
    }
    if (ok)
      pc = ret;
    else
      backtrack();
  }

  Stop run_loop() {
    for (;;) {
      if (pc == kReturned)
        return Stop::Returned;
      if (pc == kBacktracked)
        return Stop::Failed;
      if (pc >= code.size())
        throw RuntimeFault("program counter out of range: " + std::to_string(pc));
      if (++m.stats_.steps > options.max_steps)
        throw OutOfSteps{};
      const Instruction ins = code[pc];
      switch (ins.op) {
      case Opcode::Allocate:
        allocate(ins.a);
        if (query_frame == kNone)
          query_frame = e;
        ++pc;
        break;
      case Opcode::Deallocate:
        cp = frames[e].cp;
        e = frames[e].prev_e;
        ++pc;
        break;
      case Opcode::Call:
        cp = pc + 1;
        num_args = static_cast<std::uint16_t>(ins.b);
        pc = ins.a;
        break;
      case Opcode::Execute:
        num_args = static_cast<std::uint16_t>(ins.b);
        pc = ins.a;
        break;
      case Opcode::Proceed: pc = cp; break;
      case Opcode::TryMeElse:
        push_choice(ins.a);
        ++pc;
        break;
      case Opcode::RetryMeElse:
        choices.back().alternative = ins.a;
        ++pc;
        break;
      case Opcode::TrustMe:
        choices.pop_back();
        ++pc;
        break;
      case Opcode::Fail: backtrack(); break;
      case Opcode::GetTemplate: {
        std::size_t i = 0;
        if (match(templates[ins.a], i, regs[ins.b - 1]))
          ++pc;
        else
          backtrack();
        break;
      }
      case Opcode::PutTemplate: {
        std::size_t i = 0;
        TermRef t = build(templates[ins.a], i);
        regs[ins.b - 1] = t;
        ++pc;
        break;
      }
      case Opcode::MoveReg:
        regs[ins.b - 1] = regs[ins.a - 1];
        ++pc;
        break;
      case Opcode::StoreEnv:
        env_slot(ins.b) = regs[ins.a - 1];
        ++pc;
        break;
      case Opcode::LoadEnv:
        regs[ins.b - 1] = env_slot(ins.a);
        ++pc;
        break;
      case Opcode::Intrinsic: exec_intrinsic(static_cast<IntrinsicId>(ins.a), pc + 1); break;
      case Opcode::CallExtern:
        if (invoke_extern(ins.a))
          ++pc;
        else
          backtrack();
        break;
      case Opcode::ExecuteExtern:
        if (invoke_extern(ins.a))
          pc = cp;
        else
          backtrack();
        break;
      case Opcode::Halt: return Stop::Halted;
      }
    }
  }

  Outcome next() {
    if (phase == Phase::Idle)
      throw std::logic_error("Machine::next called before set_query");
    if (phase == Phase::Done)
      return Outcome::Failure;
    if (phase == Phase::Answered)
      backtrack();
    try {
      Stop stop = run_loop();
      if (stop == Stop::Halted) {
        phase = Phase::Answered;
        return Outcome::Success;
      }
      finish();
      return Outcome::Failure;
    } catch (const OutOfSteps &) {
      finish();
      m.diagnostics_.push_back("step budget of " + std::to_string(options.max_steps) + " exhausted");
      return Outcome::BudgetExhausted;
    } catch (const RuntimeFault &err) {
      finish();
      m.diagnostics_.push_back(err.what());
      return Outcome::Error;
    }
  }

  void finish() {
    phase = Phase::Done;
    choices.clear();
    barrier = 0;
    store().undo(trail, start_mark);
  }

  Answer answer() const {
    Answer a;
    if (phase != Phase::Answered || query_frame == kNone)
      return a;
    const Frame &f = frames[query_frame];
    for (std::size_t i = 0; i < query.var_names.size(); ++i)
      a.bindings.emplace_back(query.var_names[i], m.store_.format(f.slots[query.var_slots[i]]));
    return a;
  }
};

Machine::Machine(std::shared_ptr<const loader::LoadedProgram> program, RunOptions options)
    : impl_(std::make_unique<Impl>(*this, std::move(program), options)) {}

Machine::~Machine() = default;

void Machine::set_query(std::string_view text) {
  auto goals = frontend::parse_query(text);
  set_query(goals);
}

void Machine::set_query(std::span<const frontend::SrcTerm> goals) {
  auto symbols = compiler::symbols_from_image(impl_->prog->image);
  auto q = compiler::compile_query(goals, symbols);
  try {
    impl_->install_query(std::move(q));
  } catch (const RuntimeFault &err) {
    throw CompileError(error_at("<query>", {}, err.what()));
  }
}

Outcome Machine::next() { return impl_->next(); }

Answer Machine::answer() const { return impl_->answer(); }

const std::vector<std::string> &Machine::unknown_predicates() const { return impl_->query.unknown_predicates; }

std::vector<TermRef> Machine::snapshot_registers(std::size_t n) const {
  n = std::min<std::size_t>(n, bytecode::kMaxRegisters);
  return std::vector<TermRef>(impl_->regs.begin(), impl_->regs.begin() + static_cast<std::ptrdiff_t>(n));
}

std::size_t Machine::control_depth() const { return impl_->depth(); }

RunResult run_all(std::shared_ptr<const loader::LoadedProgram> program, std::string_view query, std::size_t limit,
                  RunOptions options) {
  Machine m(std::move(program), options);
  m.set_query(query);
  RunResult r;
  while (r.answers.size() < limit) {
    r.outcome = m.next();
    if (r.outcome != Outcome::Success)
      break;
    r.answers.push_back(m.answer());
  }
  r.diagnostics = m.diagnostics();
  return r;
}

} // namespace mlp::vm
