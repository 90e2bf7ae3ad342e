#pragma once

// The abstract machine: argument registers, environment and choice-point
// stacks, template unification, intrinsics and extern dispatch.

#include "mlp/arith.hpp"
#include "mlp/frontend.hpp"
#include "mlp/loader.hpp"
#include "mlp/terms.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mlp::vm {

enum class Outcome { Success, Failure, BudgetExhausted, Error };

const char *outcome_name(Outcome o);

struct RunOptions {
  std::uint64_t max_steps = 50'000'000;
};

struct Answer {
  std::vector<std::pair<std::string, std::string>> bindings;  // query variable order
  /// "X = 1\nY = f(a)", or "true" when the query has no named variables.
  std::string str() const;
};

struct MachineStats {
  std::uint64_t steps = 0;
  std::uint64_t extern_calls = 0;
  std::size_t max_control_depth = 0;  // env frames + choice points
  std::size_t max_choice_depth = 0;
};

/// Called around each extern invocation with raw copies of A1..An, where n
/// is the callee's arity.
using ExternProbe = std::function<void(const loader::ResolvedHandle &, std::span<const terms::TermRef> before,
                                       std::span<const terms::TermRef> after)>;

class Machine {
public:
  explicit Machine(std::shared_ptr<const loader::LoadedProgram> program, RunOptions options = {});
  ~Machine();

  /// Compiles the query against the program and resets the machine. Throws
  /// ParseError or CompileError.
  void set_query(std::string_view text);
  void set_query(std::span<const frontend::SrcTerm> goals);

  /// Runs to the next answer. After Success, call again for more answers.
  Outcome next();

  /// Bindings of the named query variables for the latest Success.
  Answer answer() const;

  /// Predicates named by the query that the program does not define.
  const std::vector<std::string> &unknown_predicates() const;

  /// Runtime diagnostics: host API faults and the reason for an Error.
  const std::vector<std::string> &diagnostics() const { return diagnostics_; }

  /// Copies of the cells of A1..An (not dereferenced).
  std::vector<terms::TermRef> snapshot_registers(std::size_t n) const;

  /// Current environment frames plus choice points.
  std::size_t control_depth() const;

  const MachineStats &stats() const { return stats_; }
  const terms::Store &store() const { return store_; }
  void set_extern_probe(ExternProbe probe) { probe_ = std::move(probe); }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  terms::Store store_;
  std::vector<std::string> diagnostics_;
  MachineStats stats_;
  ExternProbe probe_;
};

/// Convenience: load-free run of every answer of `query`, up to `limit`.
struct RunResult {
  Outcome outcome = Outcome::Failure;  // of the last next() call
  std::vector<Answer> answers;
  std::vector<std::string> diagnostics;
};
RunResult run_all(std::shared_ptr<const loader::LoadedProgram> program, std::string_view query,
                  std::size_t limit = SIZE_MAX, RunOptions options = {});

} // namespace mlp::vm
