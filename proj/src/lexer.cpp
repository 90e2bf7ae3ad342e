#include "lexer.hpp"

#include <cctype>
#include <charconv>

namespace mlp::frontend::detail {

const char *tok_name(Tok t) {
  switch (t) {
  case Tok::Name: return "name";
  case Tok::Var: return "variable";
  case Tok::Int: return "integer";
  case Tok::Real: return "real";
  case Tok::Str: return "string";
  case Tok::Sym: return "symbol";
  case Tok::Directive: return "directive";
  case Tok::LParen: return "'('";
  case Tok::RParen: return "')'";
  case Tok::LBrace: return "'{'";
  case Tok::RBrace: return "'}'";
  case Tok::Comma: return "','";
  case Tok::Semi: return "';'";
  case Tok::End: return "'.'";
  case Tok::Eof: return "end of input";
  }
  return "?";
}

bool is_symbol_char(char c) {
  switch (c) {
  case '+': case '-': case '*': case '/': case '<': case '>': case '=':
  case ':': case '\\': case '~': case '^': case '&': case '?': case '@':
  case '$': case '!':
    return true;
  default:
    return false;
  }
}

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
  Lexer(std::string_view src, const std::string &file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t;
      t.pos = SourcePos{line_, col_};
      t.begin = i_;
      if (i_ >= src_.size()) {
        t.kind = Tok::Eof;
        t.end = i_;
        out.push_back(std::move(t));
        return out;
      }
      lex_one(t);
      t.end = i_;
      out.push_back(std::move(t));
    }
  }

private:
  [[noreturn]] void fail(SourcePos pos, const std::string &msg) {
    throw ParseError(error_at(file_, pos, msg));
  }

  char peek(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_blank() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '%') {
        while (i_ < src_.size() && src_[i_] != '\n')
          advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  void lex_one(Token &t) {
    char c = peek();
    if (c >= 'a' && c <= 'z') {
      t.kind = Tok::Name;
      while (i_ < src_.size() && is_ident_char(peek()))
        t.text += take();
    } else if ((c >= 'A' && c <= 'Z') || c == '_') {
      t.kind = Tok::Var;
      while (i_ < src_.size() && is_ident_char(peek()))
        t.text += take();
    } else if (c >= '0' && c <= '9') {
      lex_number(t);
    } else if (c == '"') {
      t.kind = Tok::Str;
      t.text = lex_quoted('"', t.pos);
    } else if (c == '\'') {
      t.kind = Tok::Name;
      t.quoted = true;
      t.text = lex_quoted('\'', t.pos);
    } else if (c == '#') {
      advance();
      if (!(peek() >= 'a' && peek() <= 'z'))
        fail(t.pos, "expected directive name after '#'");
      t.kind = Tok::Directive;
      while (i_ < src_.size() && is_ident_char(peek()))
        t.text += take();
    } else if (c == '.') {
      char n = peek(1);
      if (n == '\0' || n == ' ' || n == '\t' || n == '\n' || n == '\r' || n == '%') {
        t.kind = Tok::End;
        t.text = ".";
        advance();
      } else {
        fail(t.pos, "unexpected '.'");
      }
    } else if (is_symbol_char(c)) {
      t.kind = Tok::Sym;
      while (i_ < src_.size() && is_symbol_char(peek()))
        t.text += take();
    } else {
      switch (c) {
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case ',': t.kind = Tok::Comma; break;
      case ';': t.kind = Tok::Semi; break;
      default: {
        auto byte = static_cast<unsigned char>(c);
        fail(t.pos, byte >= 0x20 && byte < 0x7f ? std::string("unexpected character '") + c + "'"
                                                : "unexpected byte " + std::to_string(byte));
      }
      }
      t.text = std::string(1, c);
      advance();
    }
  }

  char take() {
    char c = src_[i_];
    advance();
    return c;
  }

  void lex_number(Token &t) {
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek())))
      digits += take();
    bool is_real = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_real = true;
      digits += take();
      while (std::isdigit(static_cast<unsigned char>(peek())))
        digits += take();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      is_real = true;
      digits += take();
      if (peek() == '+' || peek() == '-')
        digits += take();
      while (std::isdigit(static_cast<unsigned char>(peek())))
        digits += take();
    }
    if (is_ident_char(peek()))
      fail(t.pos, "malformed number");
    t.text = digits;
    if (is_real) {
      t.kind = Tok::Real;
      auto res = std::from_chars(digits.data(), digits.data() + digits.size(), t.real);
      if (res.ec != std::errc())
        fail(t.pos, "real literal out of range");
    } else {
      t.kind = Tok::Int;
    }
  }

  std::string lex_quoted(char quote, SourcePos start) {
    advance();
    std::string out;
    for (;;) {
      if (i_ >= src_.size())
        fail(start, "unterminated quoted text");
      char c = take();
      if (c == quote)
        return out;
      if (c == '\\') {
        if (i_ >= src_.size())
          fail(start, "unterminated quoted text");
        char e = take();
        switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '\\': out += '\\'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        default: fail(start, std::string("unknown escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
  }

  std::string_view src_;
  const std::string &file_;
  std::size_t i_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

} // namespace

std::vector<Token> tokenize(std::string_view src, const std::string &file) {
  return Lexer(src, file).run();
}

} // namespace mlp::frontend::detail
