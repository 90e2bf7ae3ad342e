#include "mlp/stubgen.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

namespace mlp::stubgen {

using frontend::BaseType;
using frontend::SpecAst;
using frontend::SpecPred;
using frontend::TypeExpr;

namespace {

const std::set<std::string> kIntegerCTypes = {
    "int",     "long",    "long long", "short",    "int8_t",   "int16_t",  "int32_t",
    "int64_t", "uint8_t", "uint16_t",  "uint32_t", "unsigned", "unsigned int",
};

std::string upper_ident(std::string_view s) {
  std::string out;
  for (char c : s)
    out += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                                                       : '_';
  return out;
}

std::string provenance(const GenOptions &o, const char *open, const char *close) {
  return std::string(open) + " Generated by " + kToolVersion + " from " + o.source_name + ". Do not edit." + close +
         "\n";
}

// Native type of one argument position, or GenerationError.
struct Slot {
  enum class Kind { Int, Real, String, Record } kind;
  const frontend::NativeMap *map = nullptr;
};

Slot classify(const SpecAst &spec, const SpecPred &p, const TypeExpr &t, std::size_t position) {
  if (t.is_base(BaseType::Int))
    return {Slot::Kind::Int};
  if (t.is_base(BaseType::Real))
    return {Slot::Kind::Real};
  if (t.is_base(BaseType::String))
    return {Slot::Kind::String};
  auto where = [&] { return "predicate '" + p.lp_name + "', argument " + std::to_string(position); };
  if (t.kind != TypeExpr::Kind::User)
    throw GenerationError(where() + ": type " + frontend::format_type(t) + " cannot cross the native boundary");
  const frontend::NativeMap *m = spec.find_map(t.name);
  if (!m)
    throw GenerationError(where() + ": kind '" + t.name + "' has no native map");
  if (!(m->lp_type == t))
    throw GenerationError(where() + ": type " + frontend::format_type(t) + " does not match the mapped instance " +
                          frontend::format_type(m->lp_type));
  marshal_plan(spec, t.name);  // field checks
  return {Slot::Kind::Record, m};
}

std::string c_type(const Slot &s) {
  switch (s.kind) {
  case Slot::Kind::Int: return "int64_t";
  case Slot::Kind::Real: return "double";
  case Slot::Kind::String: return "const char *";
  case Slot::Kind::Record: return "struct " + s.map->record_name;
  }
  return "void";
}

std::string param(const std::string &type, const std::string &name) {
  return type.ends_with("*") ? type + name : type + " " + name;
}

struct Shape {
  std::vector<Slot> inputs;
  std::optional<Slot> output;
};

Shape shape_of(const SpecAst &spec, const SpecPred &p) {
  auto domains = p.type.domains();
  Shape s;
  for (std::size_t i = 0; i < domains.size(); ++i)
    s.inputs.push_back(classify(spec, p, domains[i], i + 1));
  if (s.inputs.size() >= 2) {
    s.output = s.inputs.back();
    s.inputs.pop_back();
  }
  return s;
}

std::string prototype(const SpecAst &spec, const SpecPred &p) {
  Shape s = shape_of(spec, p);
  std::string ret = s.output ? c_type(*s.output) : "int";
  std::string out = ret.ends_with("*") ? ret + p.entry_base + "(" : ret + " " + p.entry_base + "(";
  if (s.inputs.empty())
    out += "void";
  for (std::size_t i = 0; i < s.inputs.size(); ++i) {
    if (i)
      out += ", ";
    out += param(c_type(s.inputs[i]), "a" + std::to_string(i + 1));
  }
  return out + ")";
}

void emit_unmarshal_fn(std::ostringstream &o, const MarshalPlan &plan) {
  o << "static struct " << plan.record << " mlp_unmarshal_" << plan.record << "(int i)\n{\n";
  o << "    struct " << plan.record << " r;\n";
  for (std::size_t k = 0; k < plan.fields.size(); ++k)
    o << "    r." << plan.fields[k].name << " = (" << plan.fields[k].c_type << ")mlp_get_ctor_arg_int(i, " << k + 1
      << ");\n";
  o << "    return r;\n}\n\n";
}

void emit_marshal_fn(std::ostringstream &o, const MarshalPlan &plan) {
  o << "static void mlp_marshal_" << plan.record << "(int i, struct " << plan.record << " r)\n{\n";
  o << "    mlp_return_ctor(i, \"" << plan.constructor << "\", " << plan.fields.size() << ");\n";
  for (std::size_t k = 0; k < plan.fields.size(); ++k)
    o << "    mlp_set_ctor_arg_int(i, " << k + 1 << ", (int64_t)r." << plan.fields[k].name << ");\n";
  o << "}\n\n";
}

} // namespace

std::string entry_symbol(const SpecPred &p) { return p.entry_base + "_wrapper"; }

std::string natives_header_name(const SpecAst &spec) { return spec.spec_name + "_natives.h"; }
std::string wrappers_file_name(const SpecAst &spec) { return spec.spec_name + "_wrappers.c"; }

frontend::SignatureAst signature_of(const SpecAst &spec) {
  frontend::SignatureAst sig;
  sig.sig_name = spec.spec_name;
  sig.lib_name = spec.lib_name;
  for (const auto &p : spec.preds) {
    sig.externs.push_back(frontend::ExternDecl{p.lp_name, entry_symbol(p), p.type, p.pos});
    if (p.regcl)
      sig.regcl.insert(p.lp_name);
  }
  return sig;
}

std::string generate_signature(const SpecAst &spec) { return frontend::format_signature(signature_of(spec)); }

MarshalPlan marshal_plan(const SpecAst &spec, std::string_view kind) {
  const frontend::NativeMap *m = spec.find_map(kind);
  if (!m)
    throw GenerationError("kind '" + std::string(kind) + "' has no native map");
  const frontend::CtorDecl *ctor = spec.constructor_of(kind);
  if (!ctor)
    throw GenerationError("kind '" + std::string(kind) + "' has no constructor");
  auto args = ctor->type.domains();
  if (args.size() != m->fields.size())
    throw GenerationError("record '" + m->record_name + "' does not match constructor '" + ctor->name + "'");
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (!args[k].is_base(BaseType::Int))
      throw GenerationError("constructor '" + ctor->name + "' argument " + std::to_string(k + 1) + " has type " +
                            frontend::format_type(args[k]) + "; only int fields are supported");
    if (!kIntegerCTypes.count(m->fields[k].c_type))
      throw GenerationError("record '" + m->record_name + "' field '" + m->fields[k].name + "' has type '" +
                            m->fields[k].c_type + "'; only integer fields are supported");
  }
  return MarshalPlan{std::string(kind), ctor->name, m->record_name, m->fields};
}

std::string generate_natives_header(const SpecAst &spec, const GenOptions &options) {
  std::ostringstream o;
  std::string guard = "MLP_" + upper_ident(spec.spec_name) + "_NATIVES_H";
  o << provenance(options, "/*", " */");
  o << "#ifndef " << guard << "\n#define " << guard << "\n\n#include <stdint.h>\n\n";
  for (const auto &m : spec.native_maps) {
    o << "/* " << frontend::format_type(m.lp_type) << " */\n";
    o << "struct " << m.record_name << " {\n";
    for (const auto &f : m.fields)
      o << "    " << param(f.c_type, f.name) << ";\n";
    o << "};\n\n";
  }
  for (const auto &p : spec.preds)
    o << "/* " << p.lp_name << " : " << frontend::format_type(p.type) << " */\n" << prototype(spec, p) << ";\n";
  o << "\n#endif\n";
  return o.str();
}

std::string generate_wrappers(const SpecAst &spec, const GenOptions &options) {
  std::ostringstream o;
  o << provenance(options, "/*", " */");
  o << "#include <stdlib.h>\n#include <string.h>\n\n#include \"mlp_plugin.h\"\n#include \""
    << natives_header_name(spec) << "\"\n\nMLP_PLUGIN_DEFINE_HOST()\n\n";

  std::set<std::string> used_records;
  for (const auto &p : spec.preds) {
    Shape s = shape_of(spec, p);
    for (const auto &slot : s.inputs)
      if (slot.kind == Slot::Kind::Record)
        used_records.insert(slot.map->lp_type.name);
    if (s.output && s.output->kind == Slot::Kind::Record)
      used_records.insert(s.output->map->lp_type.name);
  }
  for (const auto &m : spec.native_maps) {
    if (!used_records.count(m.lp_type.name))
      continue;
    MarshalPlan plan = marshal_plan(spec, m.lp_type.name);
    emit_unmarshal_fn(o, plan);
    emit_marshal_fn(o, plan);
  }

  for (const auto &p : spec.preds) {
    Shape s = shape_of(spec, p);
    o << "MLP_EXPORT void " << entry_symbol(p) << "(void)\n{\n";
    std::vector<std::string> strings;
    for (std::size_t i = 0; i < s.inputs.size(); ++i) {
      std::string a = "a" + std::to_string(i + 1);
      std::size_t reg = i + 1;
      switch (s.inputs[i].kind) {
      case Slot::Kind::Int: o << "    int64_t " << a << " = mlp_get_int(" << reg << ");\n"; break;
      case Slot::Kind::Real: o << "    double " << a << " = mlp_get_real(" << reg << ");\n"; break;
      case Slot::Kind::String:
        o << "    size_t " << a << "_len = mlp_get_string_len(" << reg << ");\n";
        o << "    char *" << a << " = (char *)malloc(" << a << "_len + 1);\n";
        o << "    if (!" << a << ") {\n        mlp_fail();\n        return;\n    }\n";
        o << "    mlp_get_string(" << reg << ", " << a << ", " << a << "_len);\n";
        o << "    " << a << "[" << a << "_len] = '\\0';\n";
        strings.push_back(a);
        break;
      case Slot::Kind::Record:
        o << "    struct " << s.inputs[i].map->record_name << " " << a << " = mlp_unmarshal_"
          << s.inputs[i].map->record_name << "(" << reg << ");\n";
        break;
      }
    }
    std::string args;
    for (std::size_t i = 0; i < s.inputs.size(); ++i)
      args += (i ? ", a" : "a") + std::to_string(i + 1);
    auto free_strings = [&] {
      for (const auto &a : strings)
        o << "    free(" << a << ");\n";
    };
    if (!s.output) {
      o << "    int ok = " << p.entry_base << "(" << args << ");\n";
      free_strings();
      o << "    if (!ok)\n        mlp_fail();\n";
    } else {
      std::size_t out_reg = s.inputs.size() + 1;
      o << "    " << param(c_type(*s.output), "ret") << " = " << p.entry_base << "(" << args << ");\n";
      free_strings();
      switch (s.output->kind) {
      case Slot::Kind::Int: o << "    mlp_return_int(" << out_reg << ", ret);\n"; break;
      case Slot::Kind::Real: o << "    mlp_return_real(" << out_reg << ", ret);\n"; break;
      case Slot::Kind::String:
        o << "    if (!ret) {\n        mlp_fail();\n        return;\n    }\n";
        o << "    mlp_return_string(" << out_reg << ", ret, strlen(ret));\n";
        break;
      case Slot::Kind::Record:
        o << "    mlp_marshal_" << s.output->map->record_name << "(" << out_reg << ", ret);\n";
        break;
      }
    }
    o << "}\n\n";
  }
  std::string text = o.str();
  while (text.ends_with("\n\n"))
    text.pop_back();
  return text;
}

std::string generate_build_note(const SpecAst &spec, const GenOptions &options) {
  std::ostringstream o;
  o << provenance(options, "#", "");
  o << "library: " << spec.lib_name << "\n";
  o << "sources: " << wrappers_file_name(spec) << " plus your implementation of the natives below\n";
  o << "header: " << natives_header_name(spec) << "\n";
  o << "compile: cc -shared -fPIC -I<mlp>/include " << wrappers_file_name(spec) << " natives.c -o lib"
    << spec.lib_name << ".so\n\n";
  o << "entry symbols:\n";
  for (const auto &p : spec.preds)
    o << "  " << entry_symbol(p) << "\n";
  o << "\nnative functions:\n";
  for (const auto &p : spec.preds)
    o << "  " << prototype(spec, p) << ";\n";
  return o.str();
}

std::vector<std::int64_t> unmarshal(const MarshalPlan &plan, const terms::Store &store, terms::TermRef t) {
  t = store.deref(t);
  if (store.tag(t) != terms::Tag::Cmp || store.symbols().name(store.functor(t)) != plan.constructor ||
      store.arity(t) != plan.fields.size())
    throw MarshalFault("expected " + plan.constructor + "/" + std::to_string(plan.fields.size()) + ", got " +
                       store.format(t));
  std::vector<std::int64_t> out;
  for (std::uint32_t k = 0; k < plan.fields.size(); ++k) {
    terms::TermRef a = store.deref(store.arg(t, k));
    if (store.tag(a) != terms::Tag::Int)
      throw MarshalFault("field " + plan.fields[k].name + " of " + store.format(t) + " is not an integer");
    out.push_back(store.int_value(a));
  }
  return out;
}

terms::TermRef marshal(const MarshalPlan &plan, terms::Store &store, const std::vector<std::int64_t> &record) {
  if (record.size() != plan.fields.size())
    throw MarshalFault("record has " + std::to_string(record.size()) + " fields, expected " +
                       std::to_string(plan.fields.size()));
  std::vector<terms::TermRef> args;
  for (auto v : record)
    args.push_back(store.make_int(v));
  return store.make_cmp(plan.constructor, args);
}

} // namespace mlp::stubgen
