#include "mlp/linker.hpp"

#include <map>

namespace mlp::linker {

using bytecode::BytecodeImage;
using bytecode::ExternEntry;
using bytecode::Opcode;
using bytecode::TemplateNode;

namespace {

std::string join(const std::vector<std::string> &lines) {
  std::string out;
  for (const auto &l : lines) {
    if (!out.empty())
      out += "\n";
    out += l;
  }
  return out;
}

std::string image_name(std::span<const std::string> names, std::size_t k) {
  if (k < names.size() && !names[k].empty())
    return names[k];
  return "image #" + std::to_string(k);
}

std::string describe(const ExternEntry &e) {
  return e.pred_name + "/" + std::to_string(e.arity) + " @ " + e.lib_name + ":" + e.entry_symbol +
         (e.regcl ? " regcl" : "");
}

struct Plan {
  std::vector<std::string> errors;
  std::vector<ExternEntry> externs;
  std::vector<std::vector<std::uint32_t>> extern_maps;
};

Plan plan_link(std::span<const BytecodeImage> images, std::span<const std::string> names) {
  Plan plan;
  if (images.empty()) {
    plan.errors.push_back("link: no input images");
    return plan;
  }
  std::map<std::string, std::size_t> defined_in;           // predicate -> image
  std::map<std::string, std::pair<std::size_t, std::size_t>> extern_by_name;  // pred -> (image, merged idx)

  for (std::size_t k = 0; k < images.size(); ++k) {
    const BytecodeImage &img = images[k];
    for (const auto &p : img.predicate_table) {
      auto [it, inserted] = defined_in.try_emplace(p.name, k);
      if (!inserted)
        plan.errors.push_back("duplicate definition of " + p.name + "/" + std::to_string(p.arity) + " in " +
                              image_name(names, it->second) + " and " + image_name(names, k));
    }
    auto &map = plan.extern_maps.emplace_back();
    for (const auto &e : img.extern_table) {
      auto it = extern_by_name.find(e.pred_name);
      if (it == extern_by_name.end()) {
        extern_by_name.emplace(e.pred_name, std::make_pair(k, plan.externs.size()));
        map.push_back(static_cast<std::uint32_t>(plan.externs.size()));
        plan.externs.push_back(e);
        continue;
      }
      const ExternEntry &prev = plan.externs[it->second.second];
      if (prev == e) {
        map.push_back(static_cast<std::uint32_t>(it->second.second));
      } else {
        plan.errors.push_back("conflicting extern declarations for '" + e.pred_name + "': " + describe(prev) +
                              " in " + image_name(names, it->second.first) + ", " + describe(e) + " in " +
                              image_name(names, k));
        map.push_back(static_cast<std::uint32_t>(it->second.second));
      }
    }
  }
  for (const auto &[name, where] : extern_by_name) {
    auto it = defined_in.find(name);
    if (it != defined_in.end())
      plan.errors.push_back("'" + name + "' is an extern predicate in " + image_name(names, where.first) +
                            " and defined by clauses in " + image_name(names, it->second));
  }

  std::size_t consts = 0, templates = 0, externs = plan.externs.size(), code = 0;
  for (const auto &img : images) {
    consts += img.const_pool.size();
    templates += img.template_pool.size();
    code += img.code.size();
  }
  if (consts > 0xFFFF || templates > 0xFFFF || externs > 0xFFFF)
    plan.errors.push_back("linked image exceeds the 16-bit pool limits (" + std::to_string(consts) + " constants, " +
                          std::to_string(templates) + " templates, " + std::to_string(externs) + " externs)");
  if (code > 0xFFFFFFFFull)
    plan.errors.push_back("linked code segment is too large");
  return plan;
}

} // namespace

LinkError::LinkError(std::vector<std::string> messages)
    : std::runtime_error(join(messages)), messages_(std::move(messages)) {}

std::uint32_t append_relocated(BytecodeImage &out, const BytecodeImage &in, std::span<const std::uint32_t> extern_map) {
  const auto consts = static_cast<std::uint32_t>(out.const_pool.size());
  const auto templates = static_cast<std::uint32_t>(out.template_pool.size());
  const auto code = static_cast<std::uint32_t>(out.code.size());

  out.const_pool.insert(out.const_pool.end(), in.const_pool.begin(), in.const_pool.end());
  for (auto t : in.template_pool) {
    for (auto &n : t.nodes)
      if (n.kind == TemplateNode::Kind::Const || n.kind == TemplateNode::Kind::Struct)
        n.index += consts;
    out.template_pool.push_back(std::move(t));
  }
  for (auto ins : in.code) {
    switch (ins.op) {
    case Opcode::Call:
    case Opcode::Execute: ins.a += consts; break;
    case Opcode::TryMeElse:
    case Opcode::RetryMeElse: ins.a += code; break;
    case Opcode::GetTemplate:
    case Opcode::PutTemplate: ins.a += templates; break;
    case Opcode::CallExtern:
    case Opcode::ExecuteExtern: ins.a = extern_map[ins.a]; break;
    default: break;
    }
    out.code.push_back(ins);
  }
  return code;
}

std::vector<std::string> link_check(std::span<const BytecodeImage> images, std::span<const std::string> names) {
  return plan_link(images, names).errors;
}

BytecodeImage link(std::span<const BytecodeImage> images, std::span<const std::string> names) {
  Plan plan = plan_link(images, names);
  if (!plan.errors.empty())
    throw LinkError(std::move(plan.errors));
  BytecodeImage out;
  out.extern_table = std::move(plan.externs);
  for (std::size_t k = 0; k < images.size(); ++k) {
    std::uint32_t base = append_relocated(out, images[k], plan.extern_maps[k]);
    for (auto p : images[k].predicate_table) {
      p.code_offset += base;
      out.predicate_table.push_back(std::move(p));
    }
  }
  bytecode::validate(out);
  return out;
}

} // namespace mlp::linker
