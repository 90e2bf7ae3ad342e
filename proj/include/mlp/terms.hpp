#pragma once

// Heap term store, trail and first-order unification with occurs check.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mlp::terms {

enum class Tag : std::uint8_t { Var, Int, Real, Str, Atom, Cmp };

const char *tag_name(Tag tag);

/// Index of a cell in a Store. Values are only meaningful for the store that
/// produced them.
struct TermRef {
  std::uint32_t index = 0;
  friend bool operator==(TermRef, TermRef) = default;
};

struct SymbolId {
  std::uint32_t value = 0;
  friend bool operator==(SymbolId, SymbolId) = default;
};

class SymbolTable {
public:
  SymbolId intern(std::string_view name);
  const std::string &name(SymbolId id) const { return names_.at(id.value); }
  std::size_t size() const { return names_.size(); }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

class UsageError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct TrailMark {
  std::size_t position = 0;
  std::uint64_t generation = 0;
};

/// Log of variable bindings. A mark becomes stale once the trail has been
/// undone below its position; undoing to a stale mark is a usage error.
class Trail {
public:
  TrailMark mark();
  void push(TermRef var);
  std::size_t size() const { return entries_.size(); }
  bool is_stale(const TrailMark &m) const;

private:
  friend class Store;
  std::vector<TermRef> entries_;
  // generations_[p] changes whenever an undo truncates the trail below p.
  std::vector<std::uint64_t> generations_{0};
};

class Store {
public:
  Store() = default;

  TermRef make_var();
  TermRef make_int(std::int64_t v);
  TermRef make_real(double v);
  TermRef make_str(std::string_view s);
  TermRef make_atom(SymbolId sym);
  TermRef make_atom(std::string_view name) { return make_atom(symbols_.intern(name)); }
  TermRef make_cmp(SymbolId functor, std::span<const TermRef> args);
  TermRef make_cmp(std::string_view functor, std::span<const TermRef> args) {
    return make_cmp(symbols_.intern(functor), args);
  }

  TermRef deref(TermRef t) const;
  Tag tag(TermRef t) const { return cells_.at(t.index).tag; }
  bool is_unbound(TermRef t) const;

  std::int64_t int_value(TermRef t) const;
  double real_value(TermRef t) const;
  const std::string &str_value(TermRef t) const;
  SymbolId atom(TermRef t) const;
  SymbolId functor(TermRef t) const;
  std::uint32_t arity(TermRef t) const;
  /// k is 0-based.
  TermRef arg(TermRef t, std::uint32_t k) const;

  /// Binds an unbound variable and records it on the trail.
  void bind(TermRef var, TermRef value, Trail &trail);
  bool occurs(TermRef var, TermRef t) const;

  /// True iff a and b unify. On failure every binding made during the attempt
  /// has already been undone.
  bool unify(TermRef a, TermRef b, Trail &trail);

  /// Restores every variable bound after the mark to unbound.
  void undo(Trail &trail, const TrailMark &mark);

  /// Same shape and identical variables after dereferencing.
  bool identical(TermRef a, TermRef b) const;

  std::string format(TermRef t) const;

  SymbolTable &symbols() { return symbols_; }
  const SymbolTable &symbols() const { return symbols_; }
  std::size_t cell_count() const { return cells_.size(); }

private:
  struct Cell {
    Tag tag = Tag::Var;
    std::uint32_t arity = 0;
    union {
      std::uint32_t ref;     // Var: self when unbound
      std::int64_t integer;  // Int
      double real;           // Real
      std::uint32_t string;  // Str: index into strings_
      std::uint32_t symbol;  // Atom
      std::uint32_t args;    // Cmp: index into args_, functor in `functor`
    };
    std::uint32_t functor = 0;
    Cell() : integer(0) {}
  };

  const Cell &cell(TermRef t) const { return cells_.at(t.index); }
  TermRef push(const Cell &c);
  void format_into(std::string &out, TermRef t, int depth) const;

  std::vector<Cell> cells_;
  std::vector<TermRef> args_;
  std::vector<std::string> strings_;
  SymbolTable symbols_;
};

/// Renders a real so that it reads back as a real ("0.0", "2.5", "1e+300").
std::string format_real(double v);
/// Quotes an atom name when it would not lex back as a plain name.
std::string quote_atom(std::string_view name);
std::string quote_string(std::string_view s);

} // namespace mlp::terms
