#include "mlp/diagnostics.hpp"

namespace mlp {

static const char *severity_name(Severity s) {
  switch (s) {
  case Severity::Error: return "error";
  case Severity::Warning: return "warning";
  case Severity::Note: return "note";
  }
  return "error";
}

std::string Diagnostic::str() const {
  std::string out = file.empty() ? "<input>" : file;
  out += ':' + std::to_string(pos.line) + ':' + std::to_string(pos.column) + ": ";
  out += severity_name(severity);
  out += ": " + message;
  return out;
}

Diagnostic error_at(std::string file, SourcePos pos, std::string message) {
  return Diagnostic{std::move(file), pos, Severity::Error, std::move(message)};
}

static std::string first_message(const std::vector<Diagnostic> &diags) {
  return diags.empty() ? std::string("error") : diags.front().str();
}

DiagnosticError::DiagnosticError(std::vector<Diagnostic> diags)
    : std::runtime_error(first_message(diags)), diags_(std::move(diags)) {}

} // namespace mlp
