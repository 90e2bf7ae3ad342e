#include "mlp/terms.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace mlp::terms {

const char *tag_name(Tag tag) {
  switch (tag) {
  case Tag::Var: return "var";
  case Tag::Int: return "int";
  case Tag::Real: return "real";
  case Tag::Str: return "string";
  case Tag::Atom: return "atom";
  case Tag::Cmp: return "compound";
  }
  return "?";
}

SymbolId SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end())
    return SymbolId{it->second};
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return SymbolId{id};
}

TrailMark Trail::mark() {
  return TrailMark{entries_.size(), generations_.at(entries_.size())};
}

void Trail::push(TermRef var) {
  entries_.push_back(var);
  if (generations_.size() <= entries_.size())
    generations_.push_back(0);
}

bool Trail::is_stale(const TrailMark &m) const {
  return m.position > entries_.size() || generations_.at(m.position) != m.generation;
}

TermRef Store::push(const Cell &c) {
  cells_.push_back(c);
  return TermRef{static_cast<std::uint32_t>(cells_.size() - 1)};
}

TermRef Store::make_var() {
  Cell c;
  c.tag = Tag::Var;
  c.ref = static_cast<std::uint32_t>(cells_.size());
  return push(c);
}

TermRef Store::make_int(std::int64_t v) {
  Cell c;
  c.tag = Tag::Int;
  c.integer = v;
  return push(c);
}

TermRef Store::make_real(double v) {
  Cell c;
  c.tag = Tag::Real;
  c.real = v;
  return push(c);
}

TermRef Store::make_str(std::string_view s) {
  Cell c;
  c.tag = Tag::Str;
  c.string = static_cast<std::uint32_t>(strings_.size());
  strings_.emplace_back(s);
  return push(c);
}

TermRef Store::make_atom(SymbolId sym) {
  Cell c;
  c.tag = Tag::Atom;
  c.symbol = sym.value;
  return push(c);
}

TermRef Store::make_cmp(SymbolId functor, std::span<const TermRef> args) {
  if (args.empty())
    throw UsageError("compound term needs at least one argument");
  Cell c;
  c.tag = Tag::Cmp;
  c.functor = functor.value;
  c.arity = static_cast<std::uint32_t>(args.size());
  c.args = static_cast<std::uint32_t>(args_.size());
  args_.insert(args_.end(), args.begin(), args.end());
  return push(c);
}

TermRef Store::deref(TermRef t) const {
  for (;;) {
    const Cell &c = cell(t);
    if (c.tag != Tag::Var || c.ref == t.index)
      return t;
    t = TermRef{c.ref};
  }
}

bool Store::is_unbound(TermRef t) const {
  t = deref(t);
  return cell(t).tag == Tag::Var;
}

std::int64_t Store::int_value(TermRef t) const {
  const Cell &c = cell(deref(t));
  if (c.tag != Tag::Int)
    throw UsageError("not an int term");
  return c.integer;
}

double Store::real_value(TermRef t) const {
  const Cell &c = cell(deref(t));
  if (c.tag != Tag::Real)
    throw UsageError("not a real term");
  return c.real;
}

const std::string &Store::str_value(TermRef t) const {
  const Cell &c = cell(deref(t));
  if (c.tag != Tag::Str)
    throw UsageError("not a string term");
  return strings_[c.string];
}

SymbolId Store::atom(TermRef t) const {
  const Cell &c = cell(deref(t));
  if (c.tag != Tag::Atom)
    throw UsageError("not an atom");
  return SymbolId{c.symbol};
}

SymbolId Store::functor(TermRef t) const {
  const Cell &c = cell(deref(t));
  if (c.tag == Tag::Atom)
    return SymbolId{c.symbol};
  if (c.tag != Tag::Cmp)
    throw UsageError("not a compound term");
  return SymbolId{c.functor};
}

std::uint32_t Store::arity(TermRef t) const {
  const Cell &c = cell(deref(t));
  return c.tag == Tag::Cmp ? c.arity : 0;
}

TermRef Store::arg(TermRef t, std::uint32_t k) const {
  const Cell &c = cell(deref(t));
  if (c.tag != Tag::Cmp || k >= c.arity)
    throw UsageError("argument index out of range");
  return args_[c.args + k];
}

void Store::bind(TermRef var, TermRef value, Trail &trail) {
  var = deref(var);
  Cell &c = cells_.at(var.index);
  if (c.tag != Tag::Var || c.ref != var.index)
    throw UsageError("bind of a non-variable");
  c.ref = value.index;
  trail.push(var);
}

bool Store::occurs(TermRef var, TermRef t) const {
  var = deref(var);
  std::vector<TermRef> todo{t};
  while (!todo.empty()) {
    TermRef cur = deref(todo.back());
    todo.pop_back();
    if (cur == var)
      return true;
    const Cell &c = cell(cur);
    if (c.tag == Tag::Cmp)
      for (std::uint32_t k = 0; k < c.arity; ++k)
        todo.push_back(args_[c.args + k]);
  }
  return false;
}

bool Store::unify(TermRef a, TermRef b, Trail &trail) {
  TrailMark start = trail.mark();
  std::vector<std::pair<TermRef, TermRef>> todo{{a, b}};
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y)
      continue;
    const Cell &cx = cell(x);
    const Cell &cy = cell(y);
    bool ok = true;
    if (cx.tag == Tag::Var && cy.tag == Tag::Var) {
      // Younger variable points at the older one.
      if (x.index < y.index)
        std::swap(x, y);
      bind(x, y, trail);
    } else if (cx.tag == Tag::Var) {
      ok = !occurs(x, y);
      if (ok)
        bind(x, y, trail);
    } else if (cy.tag == Tag::Var) {
      ok = !occurs(y, x);
      if (ok)
        bind(y, x, trail);
    } else if (cx.tag != cy.tag) {
      ok = false;
    } else {
      switch (cx.tag) {
      case Tag::Int: ok = cx.integer == cy.integer; break;
      case Tag::Real: ok = cx.real == cy.real || (std::isnan(cx.real) && std::isnan(cy.real)); break;
      case Tag::Str: ok = strings_[cx.string] == strings_[cy.string]; break;
      case Tag::Atom: ok = cx.symbol == cy.symbol; break;
      case Tag::Cmp:
        ok = cx.functor == cy.functor && cx.arity == cy.arity;
        if (ok)
          for (std::uint32_t k = cx.arity; k-- > 0;)
            todo.emplace_back(args_[cx.args + k], args_[cy.args + k]);
        break;
      case Tag::Var: break;
      }
    }
    if (!ok) {
      undo(trail, start);
      return false;
    }
  }
  return true;
}

void Store::undo(Trail &trail, const TrailMark &mark) {
  if (trail.is_stale(mark))
    throw UsageError("trail mark is stale");
  auto old_size = trail.entries_.size();
  while (trail.entries_.size() > mark.position) {
    TermRef var = trail.entries_.back();
    trail.entries_.pop_back();
    cells_.at(var.index).ref = var.index;
  }
  for (std::size_t p = mark.position + 1; p <= old_size; ++p)
    ++trail.generations_.at(p);
}

bool Store::identical(TermRef a, TermRef b) const {
  std::vector<std::pair<TermRef, TermRef>> todo{{a, b}};
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y)
      continue;
    const Cell &cx = cell(x);
    const Cell &cy = cell(y);
    if (cx.tag != cy.tag || cx.tag == Tag::Var)
      return false;
    switch (cx.tag) {
    case Tag::Int:
      if (cx.integer != cy.integer) return false;
      break;
    case Tag::Real:
      if (!(cx.real == cy.real || (std::isnan(cx.real) && std::isnan(cy.real)))) return false;
      break;
    case Tag::Str:
      if (strings_[cx.string] != strings_[cy.string]) return false;
      break;
    case Tag::Atom:
      if (cx.symbol != cy.symbol) return false;
      break;
    case Tag::Cmp:
      if (cx.functor != cy.functor || cx.arity != cy.arity) return false;
      for (std::uint32_t k = 0; k < cx.arity; ++k)
        todo.emplace_back(args_[cx.args + k], args_[cy.args + k]);
      break;
    case Tag::Var: break;
    }
  }
  return true;
}

std::string format_real(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v < 0 ? "-inf" : "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos)
    s += ".0";
  else if (s.find('.') == std::string::npos) {
    // 1e+300 -> 1.0e+300 so the lexer sees a real.
    s.insert(s.find('e'), ".0");
  }
  return s;
}

static bool is_symbol_char(char c) {
  switch (c) {
  case '+': case '-': case '*': case '/': case '<': case '>': case '=':
  case ':': case '\\': case '~': case '^': case '&': case '?': case '@':
  case '$': case '!':
    return true;
  default:
    return false;
  }
}

std::string quote_atom(std::string_view name) {
  bool plain = !name.empty() && name[0] >= 'a' && name[0] <= 'z';
  if (plain)
    for (char c : name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        plain = false;
  bool symbolic = !name.empty();
  for (char c : name)
    if (!is_symbol_char(c))
      symbolic = false;
  if (plain || symbolic)
    return std::string(name);
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\')
      out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    default: out += c;
    }
  }
  out += '"';
  return out;
}

void Store::format_into(std::string &out, TermRef t, int depth) const {
  t = deref(t);
  const Cell &c = cell(t);
  if (depth > 10000) {
    out += "...";
    return;
  }
  switch (c.tag) {
  case Tag::Var: out += "_G" + std::to_string(t.index); break;
  case Tag::Int: out += std::to_string(c.integer); break;
  case Tag::Real: out += format_real(c.real); break;
  case Tag::Str: out += quote_string(strings_[c.string]); break;
  case Tag::Atom: out += quote_atom(symbols_.name(SymbolId{c.symbol})); break;
  case Tag::Cmp:
    out += quote_atom(symbols_.name(SymbolId{c.functor}));
    out += '(';
    for (std::uint32_t k = 0; k < c.arity; ++k) {
      if (k)
        out += ", ";
      format_into(out, args_[c.args + k], depth + 1);
    }
    out += ')';
    break;
  }
}

std::string Store::format(TermRef t) const {
  std::string out;
  format_into(out, t, 0);
  return out;
}

} // namespace mlp::terms
