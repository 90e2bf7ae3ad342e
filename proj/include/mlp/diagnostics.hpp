#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlp {

struct SourcePos {
  std::uint32_t line = 0;  // 1-based; 0 when unknown
  std::uint32_t column = 0;
};

enum class Severity : std::uint8_t { Error, Warning, Note };

struct Diagnostic {
  std::string file;
  SourcePos pos;
  Severity severity = Severity::Error;
  std::string message;

  /// `file:line:col: severity: message`
  std::string str() const;
};

Diagnostic error_at(std::string file, SourcePos pos, std::string message);

/// Carries one or more diagnostics; what() is the first one rendered.
class DiagnosticError : public std::runtime_error {
public:
  explicit DiagnosticError(std::vector<Diagnostic> diags);
  explicit DiagnosticError(Diagnostic diag) : DiagnosticError(std::vector<Diagnostic>{std::move(diag)}) {}
  const std::vector<Diagnostic> &diagnostics() const { return diags_; }

private:
  std::vector<Diagnostic> diags_;
};

class ParseError : public DiagnosticError {
public:
  using DiagnosticError::DiagnosticError;
};

class CompileError : public DiagnosticError {
public:
  using DiagnosticError::DiagnosticError;
};

} // namespace mlp
