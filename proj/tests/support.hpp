#pragma once

// Shared helpers for the unit tests and the acceptance binary: compile and
// run snippets, random generators, and oracles that do not reuse the code
// under test.

#include "mlp/bytecode.hpp"
#include "mlp/compiler.hpp"
#include "mlp/frontend.hpp"
#include "mlp/loader.hpp"
#include "mlp/terms.hpp"
#include "mlp/vm.hpp"

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mlp::testing {

std::string fixture_path(const std::string &name);
std::string read_fixture(const std::string &name);

/// Signature sources by name. "testlib" (host:test) is always available.
using SigSources = std::map<std::string, std::string>;

bytecode::BytecodeImage compile(std::string_view module_source, const SigSources &sigs = {},
                                bool conservative = false,
                                const std::map<std::string, std::string> &accumulated = {});

std::shared_ptr<const loader::LoadedProgram> load(const bytecode::BytecodeImage &img);

struct QueryResult {
  vm::Outcome last = vm::Outcome::Failure;
  std::vector<std::string> answers;  // Answer::str() of each answer
  std::vector<std::string> diagnostics;
};

QueryResult query(std::shared_ptr<const loader::LoadedProgram> prog, std::string_view q,
                  std::size_t limit = SIZE_MAX, std::uint64_t max_steps = 5'000'000);

/// Compile, load and query in one go.
QueryResult solve(std::string_view module_source, std::string_view q, const SigSources &sigs = {},
                  bool conservative = false);

class Rng {
public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(g_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(g_); }
  template <class T> const T &pick(const std::vector<T> &v) {
    return v[static_cast<std::size_t>(range(0, static_cast<std::int64_t>(v.size()) - 1))];
  }
  std::mt19937_64 &engine() { return g_; }

private:
  std::mt19937_64 g_;
};

/// Random term over a small signature; variables are drawn from `vars`
/// (extended on demand up to `max_vars`).
terms::TermRef random_term(terms::Store &s, Rng &rng, std::vector<terms::TermRef> &vars, int depth,
                           std::size_t max_vars = 4);

/// Random image that satisfies bytecode::validate.
bytecode::BytecodeImage random_image(Rng &rng);

// -- arithmetic oracle --------------------------------------------------------

struct Expr {
  enum class Kind { Int, Real, Op } kind = Kind::Int;
  std::int64_t i = 0;
  double r = 0.0;
  char op = '+';
  std::vector<Expr> kids;
};

Expr random_expr(Rng &rng, int depth);
frontend::SrcTerm expr_term(const Expr &e);

/// Independent evaluator: nullopt when evaluation must raise an error.
struct OracleValue {
  bool is_int = true;
  std::int64_t i = 0;
  double r = 0.0;
};
std::optional<OracleValue> oracle_eval(const Expr &e);

/// Distance in units in the last place between two finite doubles.
std::uint64_t ulp_distance(double a, double b);

} // namespace mlp::testing
