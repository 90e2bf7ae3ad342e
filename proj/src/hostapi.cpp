#include "mlp/hostapi.hpp"

#include "mlp/arith.hpp"

#include <atomic>
#include <cstring>
#include <optional>

namespace mlp::hostapi {

using terms::Tag;
using terms::TermRef;

namespace {

std::mutex g_execution_lock;
thread_local HostFrame *t_frame = nullptr;
std::atomic<std::uint64_t> g_stray_calls{0};

// Returns the active frame if calls may proceed, nullptr otherwise.
HostFrame *active() {
  HostFrame *f = t_frame;
  if (!f) {
    ++g_stray_calls;
    return nullptr;
  }
  return f->failed ? nullptr : f;
}

void fault(HostFrame &f, const std::string &msg) {
  f.failed = true;
  f.faults.push_back("type fault in '" + f.predicate + "': " + msg);
}

std::string describe(const terms::Store &s, TermRef t) {
  t = s.deref(t);
  if (s.tag(t) == Tag::Var)
    return "an unbound variable";
  return std::string(terms::tag_name(s.tag(t))) + " " + s.format(t);
}

// Dereferenced register i, or nullopt after recording a fault.
std::optional<TermRef> reg(HostFrame &f, int i, const char *fn) {
  if (i < 1 || static_cast<std::size_t>(i) > f.registers.size()) {
    fault(f, std::string(fn) + ": register " + std::to_string(i) + " out of range");
    return std::nullopt;
  }
  return f.store->deref(f.registers[static_cast<std::size_t>(i - 1)]);
}

std::optional<TermRef> reg_tagged(HostFrame &f, int i, Tag want, const char *fn) {
  auto t = reg(f, i, fn);
  if (!t)
    return std::nullopt;
  if (f.store->tag(*t) != want) {
    fault(f, std::string(fn) + "(" + std::to_string(i) + ") expects " + std::string(terms::tag_name(want)) + ", register holds " +
                 describe(*f.store, *t));
    return std::nullopt;
  }
  return t;
}

void unify_result(HostFrame &f, int i, TermRef value, const char *fn) {
  auto t = reg(f, i, fn);
  if (!t)
    return;
  if (!f.store->unify(*t, value, *f.trail))
    f.failed = true;
}

std::optional<TermRef> ctor_arg(HostFrame &f, int i, int k, const char *fn) {
  auto t = reg_tagged(f, i, Tag::Cmp, fn);
  if (!t)
    return std::nullopt;
  auto arity = f.store->arity(*t);
  if (k < 1 || static_cast<std::uint32_t>(k) > arity) {
    fault(f, std::string(fn) + ": argument " + std::to_string(k) + " out of range for " + describe(*f.store, *t));
    return std::nullopt;
  }
  return f.store->deref(f.store->arg(*t, static_cast<std::uint32_t>(k - 1)));
}

extern "C" {

std::int64_t api_get_int(int i) {
  HostFrame *f = active();
  if (!f)
    return 0;
  auto t = reg_tagged(*f, i, Tag::Int, "get_int");
  return t ? f->store->int_value(*t) : 0;
}

double api_get_real(int i) {
  HostFrame *f = active();
  if (!f)
    return 0.0;
  auto t = reg_tagged(*f, i, Tag::Real, "get_real");
  return t ? f->store->real_value(*t) : 0.0;
}

size_t api_get_string_len(int i) {
  HostFrame *f = active();
  if (!f)
    return 0;
  auto t = reg_tagged(*f, i, Tag::Str, "get_string_len");
  return t ? f->store->str_value(*t).size() : 0;
}

size_t api_get_string(int i, char *buf, size_t buflen) {
  HostFrame *f = active();
  if (!f)
    return 0;
  auto t = reg_tagged(*f, i, Tag::Str, "get_string");
  if (!t)
    return 0;
  const std::string &s = f->store->str_value(*t);
  size_t n = std::min(buflen, s.size());
  if (n > 0)
    std::memcpy(buf, s.data(), n);
  return n;
}

void api_return_int(int i, std::int64_t v) {
  if (HostFrame *f = active())
    unify_result(*f, i, f->store->make_int(v), "return_int");
}

void api_return_real(int i, double v) {
  if (HostFrame *f = active())
    unify_result(*f, i, f->store->make_real(v), "return_real");
}

void api_return_string(int i, const char *bytes, size_t len) {
  if (HostFrame *f = active())
    unify_result(*f, i, f->store->make_str(std::string_view(bytes ? bytes : "", bytes ? len : 0)), "return_string");
}

void api_fail() {
  if (HostFrame *f = t_frame)
    f->failed = true;
  else
    ++g_stray_calls;
}

std::int64_t api_get_ctor_arg_int(int i, int k) {
  HostFrame *f = active();
  if (!f)
    return 0;
  auto a = ctor_arg(*f, i, k, "get_ctor_arg_int");
  if (!a)
    return 0;
  if (f->store->tag(*a) != Tag::Int) {
    fault(*f, "get_ctor_arg_int(" + std::to_string(i) + ", " + std::to_string(k) + ") expects INT, argument is " +
                  describe(*f->store, *a));
    return 0;
  }
  return f->store->int_value(*a);
}

void api_return_ctor(int i, const char *ctor, int arity) {
  HostFrame *f = active();
  if (!f)
    return;
  if (!ctor || arity < 0 || arity > 0xFFFF) {
    fault(*f, "return_ctor: invalid constructor");
    return;
  }
  TermRef value;
  if (arity == 0) {
    value = f->store->make_atom(ctor);
  } else {
    std::vector<TermRef> args;
    for (int k = 0; k < arity; ++k)
      args.push_back(f->store->make_var());
    value = f->store->make_cmp(ctor, args);
  }
  unify_result(*f, i, value, "return_ctor");
}

void api_set_ctor_arg_int(int i, int k, std::int64_t v) {
  HostFrame *f = active();
  if (!f)
    return;
  auto a = ctor_arg(*f, i, k, "set_ctor_arg_int");
  if (!a)
    return;
  if (!f->store->unify(*a, f->store->make_int(v), *f->trail))
    f->failed = true;
}

} // extern "C"

const mlp_host_table kTable = {
    kApiVersion,        api_get_int,          api_get_real,    api_get_string_len,
    api_get_string,     api_return_int,       api_return_real, api_return_string,
    api_fail,           api_get_ctor_arg_int, api_return_ctor, api_set_ctor_arg_int,
};

// ---------------------------------------------------------------------------
// host:test

const mlp_host_table &T = kTable;

void t_echo_int() { T.return_int(2, T.get_int(1)); }
void t_echo_real() { T.return_real(2, T.get_real(1)); }
void t_echo_string() {
  std::string buf(T.get_string_len(1), '\0');
  size_t n = T.get_string(1, buf.data(), buf.size());
  T.return_string(2, buf.data(), n);
}
void t_dec() { T.return_int(2, T.get_int(1) - 1); }
void t_inc() { T.return_int(2, T.get_int(1) + 1); }
void t_add() { T.return_int(3, T.get_int(1) + T.get_int(2)); }
void t_mul_real() { T.return_real(3, T.get_real(1) * T.get_real(2)); }
void t_str_len() { T.return_int(2, static_cast<std::int64_t>(T.get_string_len(1))); }
void t_always_fail() { T.fail(); }
void t_nonzero() {
  if (T.get_int(1) == 0)
    T.fail();
}
void t_mk_pair() {
  std::int64_t x = T.get_int(1), y = T.get_int(2);
  T.return_ctor(3, "pr", 2);
  T.set_ctor_arg_int(3, 1, x);
  T.set_ctor_arg_int(3, 2, y);
}
void t_pair_sum() { T.return_int(2, T.get_ctor_arg_int(1, 1) + T.get_ctor_arg_int(1, 2)); }

// Doubles A1 into A2, then overwrites every other register. Only correct
// when declared regcl.
void t_clobber() {
  std::int64_t v = T.get_int(1);
  T.return_int(2, 2 * v);
  HostFrame *f = t_frame;
  if (!f || f->failed)
    return;
  for (std::size_t k = 0; k < f->registers.size(); ++k)
    if (k != 1)
      f->registers[k] = f->store->make_atom("clobbered");
}

// ---------------------------------------------------------------------------
// host:intrinsics

void i_eval() {
  HostFrame *f = active();
  if (!f)
    return;
  auto e = reg(*f, 2, "eval");
  if (!e)
    return;
  try {
    unify_result(*f, 1, vm::make_number(*f->store, vm::evaluate(*f->store, *e)), "eval");
  } catch (const vm::EvalError &err) {
    fault(*f, std::string("eval: ") + err.what());
  }
}

template <vm::Comparison C> void i_compare() {
  HostFrame *f = active();
  if (!f)
    return;
  auto a = reg(*f, 1, "compare");
  auto b = a ? reg(*f, 2, "compare") : std::nullopt;
  if (!b)
    return;
  try {
    if (!vm::compare(C, vm::evaluate(*f->store, *a), vm::evaluate(*f->store, *b)))
      f->failed = true;
  } catch (const vm::EvalError &err) {
    fault(*f, std::string("compare: ") + err.what());
  }
}

constexpr TestCallable kPreserving[] = {
    {"echo_int", 2}, {"echo_real", 2}, {"echo_string", 2}, {"dec", 2},      {"inc", 2},     {"add", 3},
    {"mul_real", 3}, {"str_len", 2},   {"always_fail", 0}, {"nonzero", 1},  {"mk_pair", 3}, {"pair_sum", 2},
};

} // namespace

Invocation::Invocation(HostFrame &frame) : lock_(g_execution_lock), previous_(t_frame) { t_frame = &frame; }

Invocation::~Invocation() { t_frame = previous_; }

HostFrame *current_frame() { return t_frame; }

const mlp_host_table &host_table() { return kTable; }

std::uint64_t stray_call_count() { return g_stray_calls.load(); }

void HostRegistry::add(const std::string &lib, const std::string &symbol, mlp_entry_fn fn) {
  libs_[lib][symbol] = fn;
}

mlp_entry_fn HostRegistry::find(const std::string &lib, const std::string &symbol) const {
  auto l = libs_.find(lib);
  if (l == libs_.end())
    return nullptr;
  auto s = l->second.find(symbol);
  return s == l->second.end() ? nullptr : s->second;
}

std::vector<std::string> HostRegistry::symbols(const std::string &lib) const {
  std::vector<std::string> out;
  auto l = libs_.find(lib);
  if (l != libs_.end())
    for (const auto &[name, _] : l->second)
      out.push_back(name);
  return out;
}

HostRegistry HostRegistry::with_builtins() {
  HostRegistry r;
  const std::string test = "host:test";
  r.add(test, "echo_int", t_echo_int);
  r.add(test, "echo_real", t_echo_real);
  r.add(test, "echo_string", t_echo_string);
  r.add(test, "dec", t_dec);
  r.add(test, "inc", t_inc);
  r.add(test, "add", t_add);
  r.add(test, "mul_real", t_mul_real);
  r.add(test, "str_len", t_str_len);
  r.add(test, "always_fail", t_always_fail);
  r.add(test, "nonzero", t_nonzero);
  r.add(test, "mk_pair", t_mk_pair);
  r.add(test, "pair_sum", t_pair_sum);
  r.add(test, "clobber", t_clobber);

  const std::string intr = "host:intrinsics";
  r.add(intr, "eval", i_eval);
  r.add(intr, "lt", i_compare<vm::Comparison::Lt>);
  r.add(intr, "gt", i_compare<vm::Comparison::Gt>);
  r.add(intr, "le", i_compare<vm::Comparison::Le>);
  r.add(intr, "ge", i_compare<vm::Comparison::Ge>);
  r.add(intr, "eq_num", i_compare<vm::Comparison::Eq>);
  return r;
}

std::span<const TestCallable> preserving_test_callables() { return kPreserving; }

} // namespace mlp::hostapi
