#pragma once

// Stub generator: from a spec file to a signature file, plugin wrapper
// source and the native declarations the wrappers call.
//
// Native calling convention for a predicate `p base T1 -> ... -> Tn -> o`:
//   n >= 2   Tn base(T1, ..., Tn-1)   result is unified with register n
//   n <= 1   int base(T1...)          nonzero means success
// int maps to int64_t, real to double, string to const char * and a mapped
// kind to its record, passed and returned by value.

#include "mlp/frontend.hpp"
#include "mlp/terms.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace mlp::stubgen {

inline constexpr const char *kToolVersion = "mlp-stubgen 1";

class GenerationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  std::string source_name = "<spec>";  // named in the provenance header
};

std::string entry_symbol(const frontend::SpecPred &p);

frontend::SignatureAst signature_of(const frontend::SpecAst &spec);
std::string generate_signature(const frontend::SpecAst &spec);

/// Record declarations and native prototypes, `<spec>_natives.h`.
std::string generate_natives_header(const frontend::SpecAst &spec, const GenOptions &options = {});

/// Wrapper source, `<spec>_wrappers.c`. Throws GenerationError naming the
/// predicate and argument position of an unmappable type.
std::string generate_wrappers(const frontend::SpecAst &spec, const GenOptions &options = {});

/// Build note, `<spec>_build.txt`: entry symbols and native functions.
std::string generate_build_note(const frontend::SpecAst &spec, const GenOptions &options = {});

std::string natives_header_name(const frontend::SpecAst &spec);
std::string wrappers_file_name(const frontend::SpecAst &spec);

// -- term-side marshal plan for flat single-constructor kinds ---------------

struct MarshalPlan {
  std::string kind;
  std::string constructor;
  std::string record;
  std::vector<frontend::NativeField> fields;  // constructor argument order
};

class MarshalFault : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Throws GenerationError when the kind is unmapped or has non-int fields.
MarshalPlan marshal_plan(const frontend::SpecAst &spec, std::string_view kind);

/// Field values of a ground `ctor(i1, ..., in)` term. Throws MarshalFault.
std::vector<std::int64_t> unmarshal(const MarshalPlan &plan, const terms::Store &store, terms::TermRef t);

terms::TermRef marshal(const MarshalPlan &plan, terms::Store &store, const std::vector<std::int64_t> &record);

} // namespace mlp::stubgen
