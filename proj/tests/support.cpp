#include "support.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mlp::testing {

using bytecode::BytecodeImage;
using bytecode::Constant;
using bytecode::Instruction;
using bytecode::Opcode;
using bytecode::TemplateNode;

std::string fixture_path(const std::string &name) { return std::string(MLP_FIXTURE_DIR) + "/" + name; }

std::string read_fixture(const std::string &name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in)
    throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BytecodeImage compile(std::string_view module_source, const SigSources &sigs, bool conservative,
                      const std::map<std::string, std::string> &accumulated) {
  frontend::ModuleAst m = frontend::parse_module(module_source, "<test>");
  std::map<std::string, frontend::SignatureAst> parsed;
  parsed.emplace("testlib", frontend::parse_signature(read_fixture("testlib.sig"), "testlib.sig"));
  for (const auto &[name, src] : sigs)
    parsed.insert_or_assign(name, frontend::parse_signature(src, name + ".sig"));
  std::map<std::string, frontend::ModuleAst> acc;
  for (const auto &[name, src] : accumulated)
    acc.emplace(name, frontend::parse_module(src, name + ".mod"));
  compiler::CompileOptions opts;
  opts.conservative_regs = conservative;
  opts.file = "<test>";
  return compiler::compile_module(m, parsed, opts, acc);
}

std::shared_ptr<const loader::LoadedProgram> load(const BytecodeImage &img) {
  loader::Loader ld;
  return ld.load(img);
}

QueryResult query(std::shared_ptr<const loader::LoadedProgram> prog, std::string_view q, std::size_t limit,
                  std::uint64_t max_steps) {
  vm::RunOptions opts;
  opts.max_steps = max_steps;
  vm::RunResult r = vm::run_all(std::move(prog), q, limit, opts);
  QueryResult out;
  out.last = r.outcome;
  for (const auto &a : r.answers)
    out.answers.push_back(a.str());
  out.diagnostics = r.diagnostics;
  return out;
}

QueryResult solve(std::string_view module_source, std::string_view q, const SigSources &sigs, bool conservative) {
  return query(load(compile(module_source, sigs, conservative)), q);
}

// -- random terms -------------------------------------------------------------

terms::TermRef random_term(terms::Store &s, Rng &rng, std::vector<terms::TermRef> &vars, int depth,
                           std::size_t max_vars) {
  int choice = static_cast<int>(rng.range(0, depth > 0 ? 7 : 4));
  switch (choice) {
  case 0:
  case 1:
    if (vars.size() < max_vars && (vars.empty() || rng.chance(0.3)))
      vars.push_back(s.make_var());
    return rng.pick(vars);
  case 2: return s.make_int(rng.range(0, 2));
  case 3: return rng.chance(0.5) ? s.make_atom(rng.chance(0.5) ? "a" : "b") : s.make_real(rng.chance(0.5) ? 1.0 : 0.0);
  case 4: return s.make_str(rng.chance(0.5) ? "x" : "y");
  default: {
    static const char *names[] = {"f", "g", "h"};
    int arity = static_cast<int>(rng.range(1, 3));
    std::vector<terms::TermRef> args;
    for (int k = 0; k < arity; ++k)
      args.push_back(random_term(s, rng, vars, depth - 1, max_vars));
    return s.make_cmp(names[rng.range(0, 2)], args);
  }
  }
}

// -- random images --------------------------------------------------------------

BytecodeImage random_image(Rng &rng) {
  BytecodeImage img;
  int nconst = static_cast<int>(rng.range(0, 12));
  for (int i = 0; i < nconst; ++i) {
    switch (rng.range(0, 4)) {
    case 0: img.const_pool.push_back(Constant::atom(std::string(1, static_cast<char>('a' + rng.range(0, 25))))); break;
    case 1: img.const_pool.push_back(Constant::integer(rng.range(INT64_MIN, INT64_MAX))); break;
    case 2: {
      double d = std::bit_cast<double>(static_cast<std::uint64_t>(rng.range(INT64_MIN, INT64_MAX)));
      img.const_pool.push_back(Constant::real(std::isnan(d) ? 0.5 : d));
      break;
    }
    case 3: {
      std::string s;
      for (int k = static_cast<int>(rng.range(0, 6)); k > 0; --k)
        s += static_cast<char>(rng.range(0, 255));
      img.const_pool.push_back(Constant::str(s));
      break;
    }
    default:
      img.const_pool.push_back(Constant::functor("f" + std::to_string(rng.range(0, 9)),
                                                 static_cast<std::uint16_t>(rng.range(0, 3))));
    }
  }
  std::vector<std::uint32_t> leaves, functors, callables;
  for (std::uint32_t i = 0; i < img.const_pool.size(); ++i) {
    const Constant &c = img.const_pool[i];
    if (c.kind != Constant::Kind::Functor)
      leaves.push_back(i);
    else {
      callables.push_back(i);
      if (c.arity > 0)
        functors.push_back(i);
    }
  }

  auto leaf = [&](std::vector<TemplateNode> &nodes) {
    TemplateNode n;
    int k = static_cast<int>(rng.range(0, 3));
    if (k == 0 && !leaves.empty()) {
      n.kind = TemplateNode::Kind::Const;
      n.index = rng.pick(leaves);
    } else if (k == 1) {
      n.kind = TemplateNode::Kind::Reg;
      n.index = static_cast<std::uint32_t>(rng.range(1, 64));
      n.first = rng.chance(0.5);
    } else if (k == 2) {
      n.kind = TemplateNode::Kind::Env;
      n.index = static_cast<std::uint32_t>(rng.range(0, 20));
      n.first = rng.chance(0.5);
    } else {
      n.kind = TemplateNode::Kind::Void;
    }
    nodes.push_back(n);
  };
  int ntmpl = static_cast<int>(rng.range(0, 6));
  for (int t = 0; t < ntmpl; ++t) {
    bytecode::Template tmpl;
    std::size_t pending = 1;
    while (pending > 0) {
      --pending;
      if (!functors.empty() && tmpl.nodes.size() < 12 && rng.chance(0.35)) {
        TemplateNode n;
        n.kind = TemplateNode::Kind::Struct;
        n.index = rng.pick(functors);
        tmpl.nodes.push_back(n);
        pending += img.const_pool[n.index].arity;
      } else {
        leaf(tmpl.nodes);
      }
    }
    img.template_pool.push_back(std::move(tmpl));
  }

  int nextern = static_cast<int>(rng.range(0, 4));
  for (int i = 0; i < nextern; ++i)
    img.extern_table.push_back(bytecode::ExternEntry{rng.chance(0.5) ? "host:test" : "m" + std::to_string(i),
                                                     "sym" + std::to_string(rng.range(0, 99)),
                                                     "p" + std::to_string(i),
                                                     static_cast<std::uint16_t>(rng.range(0, 64)), rng.chance(0.5)});

  int ncode = static_cast<int>(rng.range(0, 30));
  for (int i = 0; i < ncode; ++i) {
    Instruction ins;
    for (;;) {
      ins = Instruction{};
      ins.op = static_cast<Opcode>(rng.range(0, bytecode::kOpcodeCount - 1));
      switch (ins.op) {
      case Opcode::Allocate: ins.a = static_cast<std::uint32_t>(rng.range(0, 65535)); break;
      case Opcode::Call:
      case Opcode::Execute:
        if (callables.empty())
          continue;
        ins.a = rng.pick(callables);
        break;
      case Opcode::TryMeElse:
      case Opcode::RetryMeElse: ins.a = static_cast<std::uint32_t>(rng.range(0, ncode - 1)); break;
      case Opcode::GetTemplate:
      case Opcode::PutTemplate:
        if (img.template_pool.empty())
          continue;
        ins.a = static_cast<std::uint32_t>(rng.range(0, static_cast<std::int64_t>(img.template_pool.size()) - 1));
        ins.b = static_cast<std::uint32_t>(rng.range(1, 64));
        break;
      case Opcode::MoveReg:
        ins.a = static_cast<std::uint32_t>(rng.range(1, 64));
        ins.b = static_cast<std::uint32_t>(rng.range(1, 64));
        break;
      case Opcode::StoreEnv:
        ins.a = static_cast<std::uint32_t>(rng.range(1, 64));
        ins.b = static_cast<std::uint32_t>(rng.range(0, 65535));
        break;
      case Opcode::LoadEnv:
        ins.a = static_cast<std::uint32_t>(rng.range(0, 65535));
        ins.b = static_cast<std::uint32_t>(rng.range(1, 64));
        break;
      case Opcode::Intrinsic: ins.a = static_cast<std::uint32_t>(rng.range(0, bytecode::kIntrinsicCount - 1)); break;
      case Opcode::CallExtern:
      case Opcode::ExecuteExtern:
        if (img.extern_table.empty())
          continue;
        ins.a = static_cast<std::uint32_t>(rng.range(0, static_cast<std::int64_t>(img.extern_table.size()) - 1));
        break;
      default: break;
      }
      break;
    }
    img.code.push_back(ins);
  }
  if (!img.code.empty()) {
    int npred = static_cast<int>(rng.range(0, 4));
    for (int i = 0; i < npred; ++i)
      img.predicate_table.push_back(bytecode::PredicateEntry{
          "q" + std::to_string(i), static_cast<std::uint16_t>(rng.range(0, 5)),
          static_cast<std::uint32_t>(rng.range(0, static_cast<std::int64_t>(img.code.size()) - 1))});
  }
  return img;
}

// -- arithmetic oracle --------------------------------------------------------

Expr random_expr(Rng &rng, int depth) {
  Expr e;
  if (depth == 0 || rng.chance(0.3)) {
    if (rng.chance(0.6)) {
      e.kind = Expr::Kind::Int;
      e.i = rng.chance(0.1) ? 0 : rng.range(-1000, 1000);
    } else {
      e.kind = Expr::Kind::Real;
      e.r = rng.chance(0.05) ? 0.0 : rng.real(-1000.0, 1000.0);
    }
    return e;
  }
  e.kind = Expr::Kind::Op;
  e.op = "+-*/"[rng.range(0, 3)];
  e.kids.push_back(random_expr(rng, depth - 1));
  e.kids.push_back(random_expr(rng, depth - 1));
  return e;
}

frontend::SrcTerm expr_term(const Expr &e) {
  switch (e.kind) {
  case Expr::Kind::Int: return frontend::SrcTerm::integer(e.i);
  case Expr::Kind::Real: return frontend::SrcTerm::real(e.r);
  case Expr::Kind::Op: break;
  }
  return frontend::SrcTerm::cmp(std::string(1, e.op), {expr_term(e.kids[0]), expr_term(e.kids[1])});
}

namespace {

// Truncating division computed from magnitudes, so it does not lean on the
// behaviour of the built-in operator.
std::int64_t trunc_div(std::int64_t a, std::int64_t b) {
  __int128 ma = a < 0 ? -static_cast<__int128>(a) : a;
  __int128 mb = b < 0 ? -static_cast<__int128>(b) : b;
  __int128 q = 0;
  // Long division by repeated doubling.
  __int128 rem = ma;
  while (rem >= mb) {
    __int128 chunk = mb, times = 1;
    while ((chunk << 1) <= rem) {
      chunk <<= 1;
      times <<= 1;
    }
    rem -= chunk;
    q += times;
  }
  bool negative = (a < 0) != (b < 0);
  return static_cast<std::int64_t>(negative ? -q : q);
}

} // namespace

std::optional<OracleValue> oracle_eval(const Expr &e) {
  switch (e.kind) {
  case Expr::Kind::Int: return OracleValue{true, e.i, 0.0};
  case Expr::Kind::Real: return OracleValue{false, 0, e.r};
  case Expr::Kind::Op: break;
  }
  auto a = oracle_eval(e.kids[0]);
  auto b = oracle_eval(e.kids[1]);
  if (!a || !b)
    return std::nullopt;
  if (a->is_int && b->is_int) {
    __int128 x = a->i, y = b->i, r = 0;
    switch (e.op) {
    case '+': r = x + y; break;
    case '-': r = x - y; break;
    case '*': r = x * y; break;
    case '/':
      if (y == 0)
        return std::nullopt;
      r = trunc_div(a->i, b->i);
      break;
    }
    if (r > INT64_MAX || r < INT64_MIN)
      return std::nullopt;
    return OracleValue{true, static_cast<std::int64_t>(r), 0.0};
  }
  double x = a->is_int ? static_cast<double>(a->i) : a->r;
  double y = b->is_int ? static_cast<double>(b->i) : b->r;
  double r = 0.0;
  switch (e.op) {
  case '+': r = x + y; break;
  case '-': r = x - y; break;
  case '*': r = x * y; break;
  case '/': r = x / y; break;
  }
  return OracleValue{false, 0, r};
}

std::uint64_t ulp_distance(double a, double b) {
  if (a == b)
    return 0;
  if (std::isnan(a) || std::isnan(b))
    return UINT64_MAX;
  auto key = [](double d) {
    auto u = std::bit_cast<std::int64_t>(d);
    return u < 0 ? INT64_MIN - u : u;  // monotone mapping of the bit patterns
  };
  std::int64_t ka = key(a), kb = key(b);
  return ka > kb ? static_cast<std::uint64_t>(ka) - static_cast<std::uint64_t>(kb)
                 : static_cast<std::uint64_t>(kb) - static_cast<std::uint64_t>(ka);
}

} // namespace mlp::testing
