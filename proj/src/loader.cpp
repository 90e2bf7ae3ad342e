#include "mlp/loader.hpp"

#include <dlfcn.h>

#include <filesystem>

namespace mlp::loader {

using bytecode::BytecodeImage;
using bytecode::ExternEntry;
using bytecode::Opcode;

const char *load_error_kind_name(LoadErrorKind k) {
  switch (k) {
  case LoadErrorKind::LibraryNotFound: return "LibraryNotFound";
  case LoadErrorKind::LibraryOpenFailed: return "LibraryOpenFailed";
  case LoadErrorKind::SymbolNotFound: return "SymbolNotFound";
  case LoadErrorKind::AbiMismatch: return "AbiMismatch";
  case LoadErrorKind::UndefinedPredicate: return "UndefinedPredicate";
  }
  return "?";
}

LoadError::LoadError(LoadErrorKind kind, std::string library, std::string symbol, std::string predicate,
                     std::string detail)
    : std::runtime_error(std::string(load_error_kind_name(kind)) + ": " + detail), kind_(kind),
      library_(std::move(library)), symbol_(std::move(symbol)), predicate_(std::move(predicate)) {}

Platform host_platform() {
#if defined(_WIN32)
  return Platform::Windows;
#elif defined(__APPLE__)
  return Platform::MacOS;
#else
  return Platform::Linux;
#endif
}

std::string library_filename(std::string_view lib_name, Platform platform) {
  if (lib_name.starts_with(bytecode::kHostPrefix))
    return {};
  std::string name(lib_name);
  switch (platform) {
  case Platform::Linux: return "lib" + name + ".so";
  case Platform::MacOS: return "lib" + name + ".dylib";
  case Platform::Windows: return name + ".dll";
  }
  return name;
}

class OpenLibraries {
public:
  ~OpenLibraries() {
    for (auto &[_, h] : handles)
      dlclose(h);
  }
  std::map<std::string, void *> handles;
};

Loader::Loader(std::vector<std::string> search_paths, hostapi::HostRegistry host)
    : search_paths_(std::move(search_paths)), host_(std::move(host)),
      libraries_(std::make_shared<OpenLibraries>()) {}

mlp_entry_fn Loader::resolve_host(const std::string &lib, const std::string &symbol) const {
  if (!host_.has_library(lib))
    throw LoadError(LoadErrorKind::LibraryNotFound, lib, symbol, "", "no in-process library '" + lib + "'");
  mlp_entry_fn fn = host_.find(lib, symbol);
  if (!fn)
    throw LoadError(LoadErrorKind::SymbolNotFound, lib, symbol, "",
                    "symbol '" + symbol + "' not found in library '" + lib + "'");
  return fn;
}

void *Loader::open_library(const ExternEntry &e) {
  auto cached = libraries_->handles.find(e.lib_name);
  if (cached != libraries_->handles.end())
    return cached->second;

  namespace fs = std::filesystem;
  std::vector<std::string> dirs = search_paths_;
  dirs.push_back(".");
  std::string file = library_filename(e.lib_name);
  std::vector<fs::path> candidates;
  if (e.lib_name.find('/') != std::string::npos)
    candidates.emplace_back(e.lib_name);
  else
    for (const auto &d : dirs)
      candidates.push_back(fs::path(d) / file);

  std::string searched;
  for (const auto &p : candidates) {
    if (!searched.empty())
      searched += ", ";
    searched += p.string();
    std::error_code ec;
    if (!fs::is_regular_file(p, ec))
      continue;
    // A relative path without a slash would make dlopen consult the system
    // search path instead of the directory we found it in.
    std::string path = p.has_parent_path() ? p.string() : "./" + p.string();
    void *h = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
    if (!h) {
      const char *err = dlerror();
      throw LoadError(LoadErrorKind::LibraryOpenFailed, e.lib_name, e.entry_symbol, e.pred_name,
                      "cannot open " + path + " for predicate '" + e.pred_name + "': " + (err ? err : "unknown error"));
    }
    auto *version = static_cast<const std::uint32_t *>(dlsym(h, "mlp_abi_version"));
    auto init = reinterpret_cast<mlp_init_fn>(dlsym(h, "mlp_init"));
    if (!version || !init || *version != hostapi::kApiVersion) {
      std::string why = !version ? "does not export mlp_abi_version"
                        : !init  ? "does not export mlp_init"
                                 : "was built for plugin API version " + std::to_string(*version) +
                                      ", host provides " + std::to_string(hostapi::kApiVersion);
      dlclose(h);
      throw LoadError(LoadErrorKind::AbiMismatch, e.lib_name, e.entry_symbol, e.pred_name,
                      "library '" + e.lib_name + "' (" + path + ") " + why);
    }
    init(&hostapi::host_table());
    ++stats_.library_opens;
    stats_.trace.push_back("open " + e.lib_name + " " + path);
    libraries_->handles.emplace(e.lib_name, h);
    return h;
  }
  throw LoadError(LoadErrorKind::LibraryNotFound, e.lib_name, e.entry_symbol, e.pred_name,
                  "library '" + e.lib_name + "' needed by predicate '" + e.pred_name + "' not found (searched " +
                      searched + ")");
}

mlp_entry_fn Loader::resolve(const ExternEntry &e) {
  auto key = std::make_pair(e.lib_name, e.entry_symbol);
  if (auto it = resolved_.find(key); it != resolved_.end())
    return it->second;

  mlp_entry_fn fn = nullptr;
  if (e.is_host()) {
    if (!host_.has_library(e.lib_name))
      throw LoadError(LoadErrorKind::LibraryNotFound, e.lib_name, e.entry_symbol, e.pred_name,
                      "in-process library '" + e.lib_name + "' needed by predicate '" + e.pred_name +
                          "' does not exist");
    fn = host_.find(e.lib_name, e.entry_symbol);
    if (!fn)
      throw LoadError(LoadErrorKind::SymbolNotFound, e.lib_name, e.entry_symbol, e.pred_name,
                      "symbol '" + e.entry_symbol + "' not found in library '" + e.lib_name +
                          "' (needed by predicate '" + e.pred_name + "')");
  } else {
    void *h = open_library(e);
    dlerror();
    void *sym = dlsym(h, e.entry_symbol.c_str());
    if (!sym)
      throw LoadError(LoadErrorKind::SymbolNotFound, e.lib_name, e.entry_symbol, e.pred_name,
                      "symbol '" + e.entry_symbol + "' not found in library '" + e.lib_name +
                          "' (needed by predicate '" + e.pred_name + "')");
    fn = reinterpret_cast<mlp_entry_fn>(sym);
  }
  ++stats_.symbol_resolutions;
  stats_.trace.push_back("resolve " + e.lib_name + ":" + e.entry_symbol + " for " + e.pred_name + "/" +
                         std::to_string(e.arity));
  resolved_.emplace(key, fn);
  return fn;
}

std::shared_ptr<const LoadedProgram> Loader::load(const BytecodeImage &img) {
  bytecode::validate(img);
  auto prog = std::make_shared<LoadedProgram>();
  prog->image = img;
  prog->libraries = libraries_;

  for (const auto &e : img.extern_table) {
    ResolvedHandle h;
    h.fn = resolve(e);
    h.pred_name = e.pred_name;
    h.arity = e.arity;
    h.regcl = e.regcl;
    h.lib_name = e.lib_name;
    h.entry_symbol = e.entry_symbol;
    prog->handles.push_back(std::move(h));
  }

  for (auto &ins : prog->image.code) {
    if (ins.op != Opcode::Call && ins.op != Opcode::Execute)
      continue;
    const auto &f = img.const_pool[ins.a];
    const bytecode::PredicateEntry *p = img.find_predicate(f.text, f.arity);
    if (!p)
      throw LoadError(LoadErrorKind::UndefinedPredicate, "", "", f.text,
                      "predicate " + f.text + "/" + std::to_string(f.arity) + " is called but not defined");
    ins.a = p->code_offset;
    ins.b = p->arity;
  }
  return prog;
}

} // namespace mlp::loader
