#include "mlp/bytecode.hpp"
#include "mlp/terms.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <utility>

namespace mlp::bytecode {

const char *opcode_name(Opcode op) {
  switch (op) {
  case Opcode::Allocate: return "allocate";
  case Opcode::Deallocate: return "deallocate";
  case Opcode::Call: return "call";
  case Opcode::Execute: return "execute";
  case Opcode::Proceed: return "proceed";
  case Opcode::TryMeElse: return "try_me_else";
  case Opcode::RetryMeElse: return "retry_me_else";
  case Opcode::TrustMe: return "trust_me";
  case Opcode::Fail: return "fail";
  case Opcode::GetTemplate: return "get_template";
  case Opcode::PutTemplate: return "put_template";
  case Opcode::MoveReg: return "move_reg";
  case Opcode::StoreEnv: return "store_env";
  case Opcode::LoadEnv: return "load_env";
  case Opcode::Intrinsic: return "intrinsic";
  case Opcode::CallExtern: return "call_extern";
  case Opcode::ExecuteExtern: return "execute_extern";
  case Opcode::Halt: return "halt";
  }
  return "?";
}

const char *intrinsic_name(IntrinsicId id) {
  switch (id) {
  case IntrinsicId::Solve: return "solve";
  case IntrinsicId::Not: return "not";
  case IntrinsicId::Eval: return "eval";
  case IntrinsicId::Lt: return "lt";
  case IntrinsicId::Gt: return "gt";
  case IntrinsicId::Le: return "le";
  case IntrinsicId::Ge: return "ge";
  case IntrinsicId::EqNum: return "eq_num";
  }
  return "?";
}

Constant Constant::atom(std::string name) {
  Constant c;
  c.kind = Kind::Atom;
  c.text = std::move(name);
  return c;
}

Constant Constant::integer(std::int64_t v) {
  Constant c;
  c.kind = Kind::Int;
  c.int_value = v;
  return c;
}

Constant Constant::real(double v) {
  Constant c;
  c.kind = Kind::Real;
  c.real_value = v;
  return c;
}

Constant Constant::str(std::string s) {
  Constant c;
  c.kind = Kind::Str;
  c.text = std::move(s);
  return c;
}

Constant Constant::functor(std::string name, std::uint16_t arity) {
  Constant c;
  c.kind = Kind::Functor;
  c.text = std::move(name);
  c.arity = arity;
  return c;
}

bool operator==(const Constant &x, const Constant &y) {
  if (x.kind != y.kind)
    return false;
  switch (x.kind) {
  case Constant::Kind::Atom:
  case Constant::Kind::Str: return x.text == y.text;
  case Constant::Kind::Int: return x.int_value == y.int_value;
  case Constant::Kind::Real:
    return std::bit_cast<std::uint64_t>(x.real_value) == std::bit_cast<std::uint64_t>(y.real_value);
  case Constant::Kind::Functor: return x.text == y.text && x.arity == y.arity;
  }
  return false;
}

const PredicateEntry *BytecodeImage::find_predicate(std::string_view name, std::uint16_t arity) const {
  for (const auto &p : predicate_table)
    if (p.name == name && p.arity == arity)
      return &p;
  return nullptr;
}

std::uint16_t template_node_arity(const BytecodeImage &img, const TemplateNode &n) {
  if (n.kind != TemplateNode::Kind::Struct || n.index >= img.const_pool.size())
    return 0;
  return img.const_pool[n.index].arity;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

[[noreturn]] void invalid(const std::string &msg) { throw FormatError(msg); }

std::string at_code(std::size_t pc) { return "code[" + std::to_string(pc) + "]: "; }

void check_register(std::uint32_t r, const std::string &where) {
  if (r < 1 || r > kMaxRegisters)
    invalid(where + "register A" + std::to_string(r) + " out of range 1.." + std::to_string(kMaxRegisters));
}

void check_u16(std::uint32_t v, const std::string &where) {
  if (v > 0xFFFF)
    invalid(where + "operand " + std::to_string(v) + " does not fit in 16 bits");
}

void validate_template(const BytecodeImage &img, const Template &t, std::size_t idx) {
  std::string where = "template t" + std::to_string(idx) + ": ";
  if (t.nodes.empty())
    invalid(where + "empty template");
  // Number of subterms still to be read; a well-formed preorder ends at 0
  // exactly on the last node.
  std::size_t pending = 1;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (pending == 0)
      invalid(where + "trailing nodes after the root term");
    const TemplateNode &n = t.nodes[i];
    --pending;
    switch (n.kind) {
    case TemplateNode::Kind::Const: {
      if (n.index >= img.const_pool.size())
        invalid(where + "constant index " + std::to_string(n.index) + " out of range");
      if (img.const_pool[n.index].kind == Constant::Kind::Functor)
        invalid(where + "constant leaf refers to a functor");
      break;
    }
    case TemplateNode::Kind::Reg:
      check_register(n.index, where);
      break;
    case TemplateNode::Kind::Env:
      check_u16(n.index, where);
      break;
    case TemplateNode::Kind::Void:
      break;
    case TemplateNode::Kind::Struct: {
      if (n.index >= img.const_pool.size())
        invalid(where + "functor index " + std::to_string(n.index) + " out of range");
      const Constant &c = img.const_pool[n.index];
      if (c.kind != Constant::Kind::Functor || c.arity == 0)
        invalid(where + "structure node does not refer to a functor");
      pending += c.arity;
      break;
    }
    default:
      invalid(where + "unknown node kind");
    }
  }
  if (pending != 0)
    invalid(where + "template is missing " + std::to_string(pending) + " subterm(s)");
}

} // namespace

void validate(const BytecodeImage &img) {
  if (img.version != kFormatVersion)
    invalid("unsupported version " + std::to_string(img.version));
  for (std::size_t i = 0; i < img.template_pool.size(); ++i)
    validate_template(img, img.template_pool[i], i);
  for (std::size_t i = 0; i < img.extern_table.size(); ++i) {
    const ExternEntry &e = img.extern_table[i];
    if (e.entry_symbol.empty() || e.pred_name.empty() || e.lib_name.empty())
      invalid("extern[" + std::to_string(i) + "]: empty name");
    if (e.arity > kMaxRegisters)
      invalid("extern[" + std::to_string(i) + "]: arity exceeds register file");
  }
  std::set<std::pair<std::string, std::uint16_t>> seen;
  for (const auto &p : img.predicate_table) {
    if (p.code_offset >= img.code.size())
      invalid("predicate " + p.name + "/" + std::to_string(p.arity) + ": code offset out of range");
    if (!seen.emplace(p.name, p.arity).second)
      invalid("predicate " + p.name + "/" + std::to_string(p.arity) + " defined twice");
  }
  for (std::size_t pc = 0; pc < img.code.size(); ++pc) {
    const Instruction &ins = img.code[pc];
    std::string where = at_code(pc);
    auto no_operands = [&] {
      if (ins.a || ins.b)
        invalid(where + "unexpected operands");
    };
    switch (ins.op) {
    case Opcode::Allocate:
      check_u16(ins.a, where);
      if (ins.b)
        invalid(where + "unexpected operand");
      break;
    case Opcode::Call:
    case Opcode::Execute:
      if (ins.a >= img.const_pool.size() || img.const_pool[ins.a].kind != Constant::Kind::Functor)
        invalid(where + "call target " + std::to_string(ins.a) + " is not a predicate constant");
      check_u16(ins.a, where);
      if (ins.b)
        invalid(where + "unexpected operand");
      break;
    case Opcode::TryMeElse:
    case Opcode::RetryMeElse:
      if (ins.a >= img.code.size())
        invalid(where + "label " + std::to_string(ins.a) + " out of range");
      if (ins.b)
        invalid(where + "unexpected operand");
      break;
    case Opcode::GetTemplate:
    case Opcode::PutTemplate:
      if (ins.a >= img.template_pool.size())
        invalid(where + "template index " + std::to_string(ins.a) + " out of range");
      check_u16(ins.a, where);
      check_register(ins.b, where);
      break;
    case Opcode::MoveReg:
      check_register(ins.a, where);
      check_register(ins.b, where);
      break;
    case Opcode::StoreEnv:
      check_register(ins.a, where);
      check_u16(ins.b, where);
      break;
    case Opcode::LoadEnv:
      check_u16(ins.a, where);
      check_register(ins.b, where);
      break;
    case Opcode::Intrinsic:
      if (ins.a >= kIntrinsicCount)
        invalid(where + "unknown intrinsic " + std::to_string(ins.a));
      if (ins.b)
        invalid(where + "unexpected operand");
      break;
    case Opcode::CallExtern:
    case Opcode::ExecuteExtern:
      if (ins.a >= img.extern_table.size())
        invalid(where + "extern index " + std::to_string(ins.a) + " out of range (table has " +
                std::to_string(img.extern_table.size()) + " entries)");
      if (ins.b)
        invalid(where + "unexpected operand");
      break;
    case Opcode::Deallocate:
    case Opcode::Proceed:
    case Opcode::TrustMe:
    case Opcode::Fail:
    case Opcode::Halt:
      no_operands();
      break;
    default:
      invalid(where + "unknown opcode " + std::to_string(static_cast<int>(ins.op)));
    }
  }
}

// ---------------------------------------------------------------------------
// Wire format

namespace {

class Writer {
public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint32_t v) {
    u8(static_cast<std::uint8_t>(v));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
      u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void str(const std::string &s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

private:
  std::vector<std::uint8_t> out_;
};

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }

  void need(std::size_t n, const char *what) {
    if (remaining() < n)
      throw FormatError(std::string("truncated ") + what + " at byte " + std::to_string(pos_));
  }
  std::uint8_t u8(const char *what) {
    need(1, what);
    return in_[pos_++];
  }
  std::uint16_t u16(const char *what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char *what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char *what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::string str(const char *what) {
    std::uint32_t n = u32(what);
    need(n, what);
    std::string s(reinterpret_cast<const char *>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  /// Segment entry count; each entry occupies at least min_entry bytes.
  std::uint32_t count(const char *what, std::size_t min_entry) {
    std::uint32_t n = u32(what);
    if (static_cast<std::uint64_t>(n) * min_entry > remaining())
      throw FormatError(std::string("truncated ") + what + ": count " + std::to_string(n) +
                        " exceeds remaining " + std::to_string(remaining()) + " bytes");
    return n;
  }

private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

enum class OperandShape { None, U16, U32, U16U16 };

OperandShape shape_of(Opcode op) {
  switch (op) {
  case Opcode::Allocate:
  case Opcode::Call:
  case Opcode::Execute:
  case Opcode::Intrinsic:
  case Opcode::CallExtern:
  case Opcode::ExecuteExtern:
    return OperandShape::U16;
  case Opcode::TryMeElse:
  case Opcode::RetryMeElse:
    return OperandShape::U32;
  case Opcode::GetTemplate:
  case Opcode::PutTemplate:
  case Opcode::MoveReg:
  case Opcode::StoreEnv:
  case Opcode::LoadEnv:
    return OperandShape::U16U16;
  default:
    return OperandShape::None;
  }
}

} // namespace

std::vector<std::uint8_t> serialize(const BytecodeImage &img) {
  validate(img);
  Writer w;
  for (char c : kMagic)
    w.u8(static_cast<std::uint8_t>(c));
  w.u16(img.version);

  w.u32(static_cast<std::uint32_t>(img.const_pool.size()));
  for (const auto &c : img.const_pool) {
    w.u8(static_cast<std::uint8_t>(c.kind));
    switch (c.kind) {
    case Constant::Kind::Atom:
    case Constant::Kind::Str: w.str(c.text); break;
    case Constant::Kind::Int: w.u64(static_cast<std::uint64_t>(c.int_value)); break;
    case Constant::Kind::Real: w.u64(std::bit_cast<std::uint64_t>(c.real_value)); break;
    case Constant::Kind::Functor:
      w.str(c.text);
      w.u16(c.arity);
      break;
    }
  }

  w.u32(static_cast<std::uint32_t>(img.template_pool.size()));
  for (const auto &t : img.template_pool) {
    w.u32(static_cast<std::uint32_t>(t.nodes.size()));
    for (const auto &n : t.nodes) {
      w.u8(static_cast<std::uint8_t>(n.kind));
      switch (n.kind) {
      case TemplateNode::Kind::Const:
      case TemplateNode::Kind::Struct: w.u32(n.index); break;
      case TemplateNode::Kind::Reg:
      case TemplateNode::Kind::Env:
        w.u16(n.index);
        w.u8(n.first ? 1 : 0);
        break;
      case TemplateNode::Kind::Void: break;
      }
    }
  }

  w.u32(static_cast<std::uint32_t>(img.extern_table.size()));
  for (const auto &e : img.extern_table) {
    w.str(e.lib_name);
    w.str(e.entry_symbol);
    w.str(e.pred_name);
    w.u16(e.arity);
    w.u8(e.regcl ? 1 : 0);
  }

  w.u32(static_cast<std::uint32_t>(img.predicate_table.size()));
  for (const auto &p : img.predicate_table) {
    w.str(p.name);
    w.u16(p.arity);
    w.u32(p.code_offset);
  }

  w.u32(static_cast<std::uint32_t>(img.code.size()));
  for (const auto &ins : img.code) {
    w.u8(static_cast<std::uint8_t>(ins.op));
    switch (shape_of(ins.op)) {
    case OperandShape::None: break;
    case OperandShape::U16: w.u16(ins.a); break;
    case OperandShape::U32: w.u32(ins.a); break;
    case OperandShape::U16U16:
      w.u16(ins.a);
      w.u16(ins.b);
      break;
    }
  }
  return w.take();
}

BytecodeImage deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  BytecodeImage img;
  r.need(4, "header");
  for (char c : kMagic)
    if (r.u8("header") != static_cast<std::uint8_t>(c))
      throw FormatError("bad magic");
  img.version = r.u16("header");
  if (img.version != kFormatVersion)
    throw FormatError("unsupported version " + std::to_string(img.version));

  std::uint32_t n = r.count("const_pool", 5);
  img.const_pool.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Constant c;
    std::uint8_t kind = r.u8("const_pool");
    switch (kind) {
    case 0: c = Constant::atom(r.str("const_pool")); break;
    case 1: c = Constant::integer(static_cast<std::int64_t>(r.u64("const_pool"))); break;
    case 2: c = Constant::real(std::bit_cast<double>(r.u64("const_pool"))); break;
    case 3: c = Constant::str(r.str("const_pool")); break;
    case 4: {
      std::string name = r.str("const_pool");
      c = Constant::functor(std::move(name), r.u16("const_pool"));
      break;
    }
    default: throw FormatError("const[" + std::to_string(i) + "]: unknown kind " + std::to_string(kind));
    }
    img.const_pool.push_back(std::move(c));
  }

  n = r.count("template_pool", 5);
  img.template_pool.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Template t;
    std::uint32_t nodes = r.count("template_pool", 1);
    t.nodes.reserve(nodes);
    for (std::uint32_t k = 0; k < nodes; ++k) {
      TemplateNode node;
      std::uint8_t kind = r.u8("template_pool");
      if (kind > static_cast<std::uint8_t>(TemplateNode::Kind::Struct))
        throw FormatError("template t" + std::to_string(i) + ": unknown node kind " + std::to_string(kind));
      node.kind = static_cast<TemplateNode::Kind>(kind);
      switch (node.kind) {
      case TemplateNode::Kind::Const:
      case TemplateNode::Kind::Struct: node.index = r.u32("template_pool"); break;
      case TemplateNode::Kind::Reg:
      case TemplateNode::Kind::Env: {
        node.index = r.u16("template_pool");
        std::uint8_t first = r.u8("template_pool");
        if (first > 1)
          throw FormatError("template t" + std::to_string(i) + ": bad first-occurrence flag");
        node.first = first == 1;
        break;
      }
      case TemplateNode::Kind::Void: break;
      }
      t.nodes.push_back(node);
    }
    img.template_pool.push_back(std::move(t));
  }

  n = r.count("extern_table", 15);
  img.extern_table.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    ExternEntry e;
    e.lib_name = r.str("extern_table");
    e.entry_symbol = r.str("extern_table");
    e.pred_name = r.str("extern_table");
    e.arity = r.u16("extern_table");
    std::uint8_t regcl = r.u8("extern_table");
    if (regcl > 1)
      throw FormatError("extern[" + std::to_string(i) + "]: bad regcl flag");
    e.regcl = regcl == 1;
    img.extern_table.push_back(std::move(e));
  }

  n = r.count("predicate_table", 10);
  img.predicate_table.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    PredicateEntry p;
    p.name = r.str("predicate_table");
    p.arity = r.u16("predicate_table");
    p.code_offset = r.u32("predicate_table");
    img.predicate_table.push_back(std::move(p));
  }

  n = r.count("code", 1);
  img.code.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Instruction ins;
    std::uint8_t op = r.u8("code");
    if (op >= kOpcodeCount)
      throw FormatError(at_code(i) + "unknown opcode " + std::to_string(op));
    ins.op = static_cast<Opcode>(op);
    switch (shape_of(ins.op)) {
    case OperandShape::None: break;
    case OperandShape::U16: ins.a = r.u16("code"); break;
    case OperandShape::U32: ins.a = r.u32("code"); break;
    case OperandShape::U16U16:
      ins.a = r.u16("code");
      ins.b = r.u16("code");
      break;
    }
    img.code.push_back(ins);
  }
  if (r.remaining() != 0)
    throw FormatError(std::to_string(r.remaining()) + " trailing bytes after code segment");
  validate(img);
  return img;
}

// ---------------------------------------------------------------------------
// Disassembly

static std::string const_text(const Constant &c) {
  switch (c.kind) {
  case Constant::Kind::Atom: return terms::quote_atom(c.text);
  case Constant::Kind::Int: return std::to_string(c.int_value);
  case Constant::Kind::Real: return terms::format_real(c.real_value);
  case Constant::Kind::Str: return terms::quote_string(c.text);
  case Constant::Kind::Functor: return terms::quote_atom(c.text) + "/" + std::to_string(c.arity);
  }
  return "?";
}

static std::string predicate_ref(const BytecodeImage &img, std::uint32_t idx) {
  if (idx >= img.const_pool.size())
    return "#" + std::to_string(idx);
  return const_text(img.const_pool[idx]);
}

std::string format_template(const BytecodeImage &img, const Template &t) {
  std::string out;
  std::size_t i = 0;
  auto walk = [&](auto &self) -> void {
    if (i >= t.nodes.size()) {
      out += "?";
      return;
    }
    const TemplateNode &n = t.nodes[i++];
    switch (n.kind) {
    case TemplateNode::Kind::Const:
      out += n.index < img.const_pool.size() ? const_text(img.const_pool[n.index]) : "?";
      break;
    case TemplateNode::Kind::Reg:
      out += "A" + std::to_string(n.index) + (n.first ? "*" : "");
      break;
    case TemplateNode::Kind::Env:
      out += "Y" + std::to_string(n.index) + (n.first ? "*" : "");
      break;
    case TemplateNode::Kind::Void: out += "_"; break;
    case TemplateNode::Kind::Struct: {
      std::uint16_t arity = template_node_arity(img, n);
      out += terms::quote_atom(img.const_pool[n.index].text) + "(";
      for (std::uint16_t k = 0; k < arity; ++k) {
        if (k)
          out += ", ";
        self(self);
      }
      out += ")";
      break;
    }
    }
  };
  walk(walk);
  return out;
}

std::string format_instruction(const BytecodeImage &img, const Instruction &ins) {
  std::string out = opcode_name(ins.op);
  auto reg = [](std::uint32_t r) { return "A" + std::to_string(r); };
  auto slot = [](std::uint32_t s) { return "Y" + std::to_string(s); };
  switch (ins.op) {
  case Opcode::Allocate: out += " " + std::to_string(ins.a); break;
  case Opcode::Call:
  case Opcode::Execute: out += " " + predicate_ref(img, ins.a); break;
  case Opcode::TryMeElse:
  case Opcode::RetryMeElse: out += " " + std::to_string(ins.a); break;
  case Opcode::GetTemplate:
  case Opcode::PutTemplate: out += " t" + std::to_string(ins.a) + ", " + reg(ins.b); break;
  case Opcode::MoveReg: out += " " + reg(ins.a) + ", " + reg(ins.b); break;
  case Opcode::StoreEnv: out += " " + reg(ins.a) + ", " + slot(ins.b); break;
  case Opcode::LoadEnv: out += " " + slot(ins.a) + ", " + reg(ins.b); break;
  case Opcode::Intrinsic:
    out += " ";
    out += ins.a < kIntrinsicCount ? intrinsic_name(static_cast<IntrinsicId>(ins.a)) : "?";
    break;
  case Opcode::CallExtern:
  case Opcode::ExecuteExtern:
    out += " " + std::to_string(ins.a);
    if (ins.a < img.extern_table.size()) {
      const ExternEntry &e = img.extern_table[ins.a];
      out += " ; " + e.pred_name + "/" + std::to_string(e.arity) + " @ " + e.lib_name + ":" + e.entry_symbol;
    }
    break;
  default: break;
  }
  return out;
}

std::string disassemble(const BytecodeImage &img) {
  std::ostringstream out;
  if (!img.template_pool.empty()) {
    out << "; templates\n";
    for (std::size_t i = 0; i < img.template_pool.size(); ++i)
      out << "t" << i << " = " << format_template(img, img.template_pool[i]) << "\n";
  }
  out << "; code\n";
  for (std::size_t pc = 0; pc < img.code.size(); ++pc) {
    for (const auto &p : img.predicate_table)
      if (p.code_offset == pc)
        out << p.name << "/" << p.arity << ":\n";
    char num[16];
    std::snprintf(num, sizeof num, "%04zu", pc);
    out << "  " << num << "  " << format_instruction(img, img.code[pc]) << "\n";
  }
  return out.str();
}

std::vector<std::uint8_t> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string &path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw std::runtime_error("write failed for " + path);
}

} // namespace mlp::bytecode
