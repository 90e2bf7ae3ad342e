#pragma once

// The host side of the plugin interface: the call table handed to plugins,
// the per-invocation frame it operates on, and the in-process host:
// libraries.

#include "mlp/terms.hpp"
#include "mlp_plugin.h"

#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace mlp::hostapi {

inline constexpr std::uint32_t kApiVersion = MLP_API_VERSION;

/// The machine state an extern invocation may touch. Register i lives at
/// registers[i - 1].
struct HostFrame {
  std::span<terms::TermRef> registers;
  terms::Store *store = nullptr;
  terms::Trail *trail = nullptr;
  std::string predicate;
  bool failed = false;
  std::vector<std::string> faults;
};

/// Installs `frame` as the current frame for the calling thread and holds the
/// process-wide extern execution lock for its lifetime.
class Invocation {
public:
  explicit Invocation(HostFrame &frame);
  ~Invocation();
  Invocation(const Invocation &) = delete;
  Invocation &operator=(const Invocation &) = delete;

private:
  std::unique_lock<std::mutex> lock_;
  HostFrame *previous_;
};

HostFrame *current_frame();

/// The table passed to mlp_init. Lives for the whole process.
const mlp_host_table &host_table();

/// Host API calls made while no invocation was active. They return zero
/// and change nothing.
std::uint64_t stray_call_count();

/// In-process callables grouped by library name ("host:test", ...).
class HostRegistry {
public:
  void add(const std::string &lib, const std::string &symbol, mlp_entry_fn fn);
  /// nullptr when the library or symbol is unknown.
  mlp_entry_fn find(const std::string &lib, const std::string &symbol) const;
  bool has_library(const std::string &lib) const { return libs_.count(lib) > 0; }
  std::vector<std::string> symbols(const std::string &lib) const;

  /// host:test and host:intrinsics.
  static HostRegistry with_builtins();

private:
  std::map<std::string, std::map<std::string, mlp_entry_fn>> libs_;
};

/// host:test callables that leave registers untouched, with their arities.
/// Used by the register preservation harness.
struct TestCallable {
  const char *symbol;
  std::uint16_t arity;
};
std::span<const TestCallable> preserving_test_callables();

} // namespace mlp::hostapi
