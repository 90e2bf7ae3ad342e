// mlp: compile, link, run, inspect and stubgen driver.

#include "mlp/bytecode.hpp"
#include "mlp/compiler.hpp"
#include "mlp/frontend.hpp"
#include "mlp/linker.hpp"
#include "mlp/loader.hpp"
#include "mlp/stubgen.hpp"
#include "mlp/vm.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace mlp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoAnswer = 2;

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw UsageFailure("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text))
    throw UsageFailure("cannot write " + p.string());
}

std::optional<fs::path> find_in(const std::vector<fs::path> &dirs, const std::string &file) {
  for (const auto &d : dirs) {
    std::error_code ec;
    if (fs::is_regular_file(d / file, ec))
      return d / file;
  }
  return std::nullopt;
}

// -- compile ----------------------------------------------------------------

struct CompileArgs {
  std::string module;
  std::vector<std::string> sig_paths;
  std::string output;
  bool conservative = false;
};

int cmd_compile(const CompileArgs &a) {
  fs::path mod_path(a.module);
  frontend::ModuleAst m = frontend::parse_module(read_text(mod_path), mod_path.string());

  std::vector<fs::path> dirs;
  for (const auto &d : a.sig_paths)
    dirs.emplace_back(d);
  dirs.push_back(mod_path.has_parent_path() ? mod_path.parent_path() : fs::path("."));

  std::map<std::string, frontend::SignatureAst> sigs;
  for (std::size_t i = 0; i < m.accum_externs.size(); ++i) {
    const auto &name = m.accum_externs[i];
    if (sigs.count(name))
      continue;
    auto p = find_in(dirs, name + ".sig");
    if (!p) {
      SourcePos pos = i < m.accum_extern_positions.size() ? m.accum_extern_positions[i] : SourcePos{};
      throw CompileError(error_at(mod_path.string(), pos,
                                  "accum_extern " + name + ": signature file " + name + ".sig not found"));
    }
    sigs.emplace(name, frontend::parse_signature(read_text(*p), p->string()));
  }
  std::map<std::string, frontend::ModuleAst> accumulated;
  for (std::size_t i = 0; i < m.accumulates.size(); ++i) {
    const auto &name = m.accumulates[i];
    auto p = find_in(dirs, name + ".mod");
    if (!p) {
      SourcePos pos = i < m.accumulate_positions.size() ? m.accumulate_positions[i] : SourcePos{};
      throw CompileError(error_at(mod_path.string(), pos,
                                  "accumulate " + name + ": module file " + name + ".mod not found"));
    }
    accumulated.emplace(name, frontend::parse_module(read_text(*p), p->string()));
  }

  compiler::CompileOptions opts;
  opts.conservative_regs = a.conservative;
  opts.file = mod_path.string();
  bytecode::BytecodeImage img = compiler::compile_module(m, sigs, opts, accumulated);
  fs::path out = a.output.empty() ? fs::path(mod_path).replace_extension(".lpx") : fs::path(a.output);
  bytecode::write_file(out.string(), bytecode::serialize(img));
  return kExitOk;
}

// -- link -------------------------------------------------------------------

int cmd_link(const std::vector<std::string> &inputs, const std::string &output) {
  std::vector<bytecode::BytecodeImage> images;
  for (const auto &in : inputs)
    images.push_back(bytecode::deserialize(bytecode::read_file(in)));
  bytecode::BytecodeImage img = linker::link(images, inputs);
  bytecode::write_file(output, bytecode::serialize(img));
  return kExitOk;
}

// -- run --------------------------------------------------------------------

struct RunArgs {
  std::string program;
  std::string query;
  std::vector<std::string> lib_paths;
  std::uint64_t max_steps = 50'000'000;
  bool all = false;
};

std::vector<std::string> split_path_list(const char *value) {
  std::vector<std::string> out;
  if (!value)
    return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ':'))
    if (!item.empty())
      out.push_back(item);
  return out;
}

int cmd_run(const RunArgs &a) {
  bytecode::BytecodeImage img = bytecode::deserialize(bytecode::read_file(a.program));
  std::string query = a.query;
  if (query.empty()) {
    if (!img.find_predicate("main", 0))
      throw UsageFailure("no query given (-q) and the program has no main/0");
    query = "main";
  }
  std::vector<std::string> paths = a.lib_paths;
  for (auto &p : split_path_list(std::getenv("MLP_LIB_PATH")))
    paths.push_back(std::move(p));

  loader::Loader ld(paths);
  auto prog = ld.load(img);

  vm::RunOptions opts;
  opts.max_steps = a.max_steps;
  vm::Machine m(prog, opts);
  m.set_query(query);
  for (const auto &name : m.unknown_predicates())
    std::cerr << "mlp: warning: query uses undefined predicate '" << name << "'\n";

  std::size_t answers = 0;
  std::size_t reported = 0;
  auto flush_diagnostics = [&] {
    for (; reported < m.diagnostics().size(); ++reported)
      std::cerr << "mlp: " << m.diagnostics()[reported] << "\n";
  };
  for (;;) {
    vm::Outcome o = m.next();
    flush_diagnostics();
    if (o == vm::Outcome::Success) {
      if (answers > 0)
        std::cout << ";\n";
      std::cout << m.answer().str() << "\n";
      ++answers;
      if (!a.all)
        break;
      continue;
    }
    if (o == vm::Outcome::Error)
      return kExitError;
    break;
  }
  std::cout.flush();
  return answers > 0 ? kExitOk : kExitNoAnswer;
}

// -- inspect ----------------------------------------------------------------

int cmd_inspect(const std::string &file, bool externs, bool code, bool header) {
  auto bytes = bytecode::read_file(file);
  bytecode::BytecodeImage img = bytecode::deserialize(bytes);
  bool all = !externs && !code && !header;
  if (header || all) {
    std::cout << "magic    MLPX\n";
    std::cout << "version  " << img.version << "\n";
    std::cout << "size     " << bytes.size() << " bytes\n";
    std::cout << "consts     " << img.const_pool.size() << "\n";
    std::cout << "templates  " << img.template_pool.size() << "\n";
    std::cout << "externs    " << img.extern_table.size() << "\n";
    std::cout << "predicates " << img.predicate_table.size() << "\n";
    std::cout << "code       " << img.code.size() << "\n";
  }
  if (externs || all) {
    if (all)
      std::cout << "\n";
    std::cout << "idx  pred            arity  lib              symbol                   regcl\n";
    for (std::size_t i = 0; i < img.extern_table.size(); ++i) {
      const auto &e = img.extern_table[i];
      char line[256];
      std::snprintf(line, sizeof line, "%-4zu %-15s %-6u %-16s %-24s %s\n", i, e.pred_name.c_str(),
                    static_cast<unsigned>(e.arity), e.lib_name.c_str(), e.entry_symbol.c_str(),
                    e.regcl ? "yes" : "no");
      std::cout << line;
    }
  }
  if (code || all) {
    if (all)
      std::cout << "\n";
    std::cout << bytecode::disassemble(img);
  }
  return kExitOk;
}

// -- stubgen ----------------------------------------------------------------

int cmd_stubgen(const std::string &spec_file, const std::string &out_dir) {
  fs::path sp(spec_file);
  frontend::SpecAst spec = frontend::parse_spec(read_text(sp), sp.string());
  stubgen::GenOptions opts;
  opts.source_name = sp.filename().string();
  // Generate everything before writing anything.
  std::string sig = stubgen::generate_signature(spec);
  std::string header = stubgen::generate_natives_header(spec, opts);
  std::string wrappers = stubgen::generate_wrappers(spec, opts);
  std::string note = stubgen::generate_build_note(spec, opts);
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw UsageFailure("cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / (spec.spec_name + ".sig"), sig);
  write_text(dir / stubgen::natives_header_name(spec), header);
  write_text(dir / stubgen::wrappers_file_name(spec), wrappers);
  write_text(dir / (spec.spec_name + "_build.txt"), note);
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"mlp: logic-programming toolchain with native extern predicates"};
  app.require_subcommand(1);

  CompileArgs ca;
  auto *compile = app.add_subcommand("compile", "compile a module to bytecode");
  compile->add_option("module", ca.module, "module file (.mod)")->required();
  compile->add_option("--sig-path", ca.sig_paths, "directory searched for .sig and .mod files");
  compile->add_option("-o,--output", ca.output, "output file (default: module path with .lpx)");
  compile->add_flag("--conservative-regs", ca.conservative, "treat every extern as register clobbering");

  std::vector<std::string> link_inputs;
  std::string link_output;
  auto *link = app.add_subcommand("link", "link bytecode files");
  link->add_option("inputs", link_inputs, "input .lpx files")->required();
  link->add_option("-o,--output", link_output, "output .lpx")->required();

  RunArgs ra;
  auto *run = app.add_subcommand("run", "load a program and answer a query");
  run->add_option("program", ra.program, "program .lpx")->required();
  run->add_option("-q,--query", ra.query, "goal conjunction (default: main)");
  run->add_option("--lib-path", ra.lib_paths, "directory searched for native libraries");
  run->add_option("--max-steps", ra.max_steps, "instruction budget");
  run->add_flag("--all", ra.all, "print every answer");

  std::string inspect_file;
  bool want_externs = false, want_code = false, want_header = false;
  auto *inspect = app.add_subcommand("inspect", "describe a bytecode file");
  inspect->add_option("file", inspect_file, ".lpx file")->required();
  inspect->add_flag("--externs", want_externs, "extern table");
  inspect->add_flag("--code", want_code, "disassembly");
  inspect->add_flag("--header", want_header, "header and segment sizes");

  std::string spec_file, stub_dir;
  auto *stub = app.add_subcommand("stubgen", "generate a signature and wrappers from a spec");
  stub->add_option("spec", spec_file, "spec file (.spec)")->required();
  stub->add_option("-o,--output", stub_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*compile)
      return cmd_compile(ca);
    if (*link)
      return cmd_link(link_inputs, link_output);
    if (*run)
      return cmd_run(ra);
    if (*inspect)
      return cmd_inspect(inspect_file, want_externs, want_code, want_header);
    if (*stub)
      return cmd_stubgen(spec_file, stub_dir);
  } catch (const DiagnosticError &e) {
    for (const auto &d : e.diagnostics())
      std::cerr << d.str() << "\n";
  } catch (const linker::LinkError &e) {
    for (const auto &msg : e.messages())
      std::cerr << "mlp: link error: " << msg << "\n";
  } catch (const loader::LoadError &e) {
    std::cerr << "mlp: load error: " << e.what() << "\n";
  } catch (const bytecode::FormatError &e) {
    std::cerr << "mlp: bad bytecode: " << e.what() << "\n";
  } catch (const std::exception &e) {
    std::cerr << "mlp: error: " << e.what() << "\n";
  }
  return kExitError;
}
