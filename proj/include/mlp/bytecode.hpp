#pragma once

// In-memory bytecode image, instruction set and the .lpx wire format.
// The byte layout is documented in docs/bytecode.md.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlp/diagnostics.hpp"

namespace mlp::bytecode {

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::uint16_t kMaxRegisters = 64;
inline constexpr char kMagic[4] = {'M', 'L', 'P', 'X'};
/// lib_name prefix for in-process libraries.
inline constexpr std::string_view kHostPrefix = "host:";

enum class Opcode : std::uint8_t {
  Allocate = 0,
  Deallocate,
  Call,
  Execute,
  Proceed,
  TryMeElse,
  RetryMeElse,
  TrustMe,
  Fail,
  GetTemplate,
  PutTemplate,
  MoveReg,
  StoreEnv,
  LoadEnv,
  Intrinsic,
  CallExtern,
  ExecuteExtern,
  Halt,
};
inline constexpr std::uint8_t kOpcodeCount = static_cast<std::uint8_t>(Opcode::Halt) + 1;

const char *opcode_name(Opcode op);

enum class IntrinsicId : std::uint8_t { Solve = 0, Not, Eval, Lt, Gt, Le, Ge, EqNum };
inline constexpr std::uint8_t kIntrinsicCount = 8;

const char *intrinsic_name(IntrinsicId id);

/// Operands are held as u32 in memory; the wire width depends on the opcode.
///
///   allocate n            a = n
///   call / execute        a = const-pool index of the callee functor
///   try/retry_me_else     a = code offset
///   get/put_template      a = template index, b = register
///   move_reg Ai, Aj       a = i, b = j
///   store_env Ai, Yn      a = i, b = n
///   load_env Yn, Ai       a = n, b = i
///   intrinsic             a = IntrinsicId
///   call/execute_extern   a = extern-table index (handle index after load)
struct Instruction {
  Opcode op = Opcode::Halt;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  friend bool operator==(const Instruction &, const Instruction &) = default;
};

struct Constant {
  enum class Kind : std::uint8_t { Atom = 0, Int, Real, Str, Functor };
  Kind kind = Kind::Atom;
  std::string text;  // Atom, Str, Functor name
  std::int64_t int_value = 0;
  double real_value = 0.0;
  std::uint16_t arity = 0;  // Functor

  static Constant atom(std::string name);
  static Constant integer(std::int64_t v);
  static Constant real(double v);
  static Constant str(std::string s);
  static Constant functor(std::string name, std::uint16_t arity);

  /// Reals compare by bit pattern so that round trips are exact.
  friend bool operator==(const Constant &x, const Constant &y);
};

/// One node of a term template, stored in preorder.
struct TemplateNode {
  enum class Kind : std::uint8_t {
    Const = 0,  // index = const-pool index (atom, int, real or string)
    Reg,        // index = register number (1-based)
    Env,        // index = environment slot (0-based)
    Void,       // fresh anonymous variable
    Struct,     // index = const-pool index of a functor; children follow
  };
  Kind kind = Kind::Void;
  std::uint32_t index = 0;
  bool first = false;  // Reg/Env: first occurrence creates the variable

  friend bool operator==(const TemplateNode &, const TemplateNode &) = default;
};

struct Template {
  std::vector<TemplateNode> nodes;
  friend bool operator==(const Template &, const Template &) = default;
};

struct ExternEntry {
  std::string lib_name;
  std::string entry_symbol;
  std::string pred_name;
  std::uint16_t arity = 0;
  bool regcl = false;

  bool is_host() const { return lib_name.starts_with(kHostPrefix); }
  friend bool operator==(const ExternEntry &, const ExternEntry &) = default;
};

struct PredicateEntry {
  std::string name;
  std::uint16_t arity = 0;
  std::uint32_t code_offset = 0;
  friend bool operator==(const PredicateEntry &, const PredicateEntry &) = default;
};

struct BytecodeImage {
  std::uint16_t version = kFormatVersion;
  std::vector<Constant> const_pool;
  std::vector<Template> template_pool;
  std::vector<ExternEntry> extern_table;
  std::vector<PredicateEntry> predicate_table;
  std::vector<Instruction> code;

  const PredicateEntry *find_predicate(std::string_view name, std::uint16_t arity) const;
  friend bool operator==(const BytecodeImage &, const BytecodeImage &) = default;
};

class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Throws FormatError naming the first violated invariant.
void validate(const BytecodeImage &img);

std::vector<std::uint8_t> serialize(const BytecodeImage &img);
/// Validates eagerly; throws FormatError.
BytecodeImage deserialize(std::span<const std::uint8_t> bytes);

/// Number of children a node has: the functor's arity for Struct, else 0.
std::uint16_t template_node_arity(const BytecodeImage &img, const TemplateNode &n);

std::string format_instruction(const BytecodeImage &img, const Instruction &ins);
std::string format_template(const BytecodeImage &img, const Template &t);
std::string disassemble(const BytecodeImage &img);

std::vector<std::uint8_t> read_file(const std::string &path);
void write_file(const std::string &path, std::span<const std::uint8_t> bytes);

} // namespace mlp::bytecode
