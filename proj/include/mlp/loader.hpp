#pragma once

// Turns a linked image into a runnable program: opens the libraries named by
// the extern table, resolves every entry symbol once, and patches call
// operands.

#include "mlp/bytecode.hpp"
#include "mlp/hostapi.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace mlp::loader {

enum class LoadErrorKind {
  LibraryNotFound,
  LibraryOpenFailed,
  SymbolNotFound,
  AbiMismatch,
  UndefinedPredicate,
};

const char *load_error_kind_name(LoadErrorKind k);

class LoadError : public std::runtime_error {
public:
  LoadError(LoadErrorKind kind, std::string library, std::string symbol, std::string predicate, std::string detail);

  LoadErrorKind kind() const { return kind_; }
  const std::string &library() const { return library_; }
  const std::string &symbol() const { return symbol_; }
  const std::string &predicate() const { return predicate_; }

private:
  LoadErrorKind kind_;
  std::string library_, symbol_, predicate_;
};

enum class Platform { Linux, MacOS, Windows };

Platform host_platform();

/// "math" -> "libmath.so" / "libmath.dylib" / "math.dll". host: libraries
/// have no file and map to the empty string.
std::string library_filename(std::string_view lib_name, Platform platform = host_platform());

struct ResolvedHandle {
  mlp_entry_fn fn = nullptr;
  std::string pred_name;
  std::uint16_t arity = 0;
  bool regcl = false;
  std::string lib_name;
  std::string entry_symbol;
};

class OpenLibraries;

/// A loaded image. In `image.code`, call/execute operands are code offsets
/// (with the callee's arity in operand b) and extern operands index
/// `handles`.
struct LoadedProgram {
  bytecode::BytecodeImage image;
  std::vector<ResolvedHandle> handles;
  std::shared_ptr<OpenLibraries> libraries;  // keeps native code mapped
};

struct LoaderStats {
  std::size_t library_opens = 0;
  std::size_t symbol_resolutions = 0;
  std::vector<std::string> trace;
};

class Loader {
public:
  explicit Loader(std::vector<std::string> search_paths = {},
                  hostapi::HostRegistry host = hostapi::HostRegistry::with_builtins());

  /// Throws LoadError. Nothing is returned unless every extern resolved and
  /// every called predicate exists.
  std::shared_ptr<const LoadedProgram> load(const bytecode::BytecodeImage &img);

  /// Callable for a host: library symbol. Throws LoadError.
  mlp_entry_fn resolve_host(const std::string &lib, const std::string &symbol) const;

  const LoaderStats &stats() const { return stats_; }
  const std::vector<std::string> &search_paths() const { return search_paths_; }

private:
  mlp_entry_fn resolve(const bytecode::ExternEntry &e);
  void *open_library(const bytecode::ExternEntry &e);

  std::vector<std::string> search_paths_;
  hostapi::HostRegistry host_;
  std::shared_ptr<OpenLibraries> libraries_;
  std::map<std::pair<std::string, std::string>, mlp_entry_fn> resolved_;
  LoaderStats stats_;
};

} // namespace mlp::loader
