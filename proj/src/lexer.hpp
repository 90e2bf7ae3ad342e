#pragma once

// Tokenizer shared by the three source dialects.

#include "mlp/diagnostics.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mlp::frontend::detail {

enum class Tok {
  Name,       // lowercase identifier or quoted atom
  Var,        // capitalized identifier or _
  Int,        // unsigned digits; sign handled by the parser
  Real,
  Str,
  Sym,        // run of symbol characters: :- -> + < =< ...
  Directive,  // #name
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  End,        // terminating period
  Eof,
};

const char *tok_name(Tok t);

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  double real = 0.0;
  SourcePos pos;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool quoted = false;
};

/// Throws ParseError on bytes that cannot start any token.
std::vector<Token> tokenize(std::string_view src, const std::string &file);

bool is_symbol_char(char c);

} // namespace mlp::frontend::detail
