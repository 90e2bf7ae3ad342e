#include "doctest.h"

#include "support.hpp"

#include "mlp/loader.hpp"

#include <filesystem>
#include <fstream>

using namespace mlp;
using namespace mlp::loader;

namespace {

bool have_plugin(const std::string &file) {
  return std::filesystem::exists(std::string(MLP_PLUGIN_DIR) + "/" + file);
}

bytecode::BytecodeImage calls(std::vector<bytecode::ExternEntry> externs) {
  bytecode::BytecodeImage img;
  img.extern_table = std::move(externs);
  img.predicate_table.push_back({"main", 0, 0});
  for (std::uint32_t i = 0; i < img.extern_table.size(); ++i)
    img.code.push_back({bytecode::Opcode::CallExtern, i, 0});
  img.code.push_back({bytecode::Opcode::Proceed, 0, 0});
  return img;
}

LoadError load_failure(Loader &ld, const bytecode::BytecodeImage &img) {
  try {
    ld.load(img);
  } catch (const LoadError &e) {
    return e;
  }
  FAIL("load succeeded");
  return LoadError(LoadErrorKind::LibraryNotFound, "", "", "", "");
}

const char *kMathSig = "sig math. lib testplug.\n"
                       "extern type sin sin_wrapper real -> real -> o.\n"
                       "extern type cos cos_wrapper real -> real -> o.\n"
                       "extern type greet greet_wrapper string -> string -> o.\n"
                       "extern type reject reject_wrapper real -> o.\n"
                       "regcl sin.\n";

} // namespace

TEST_CASE("library file names per platform") {
  CHECK(library_filename("math", Platform::Linux) == "libmath.so");
  CHECK(library_filename("math", Platform::MacOS) == "libmath.dylib");
  CHECK(library_filename("math", Platform::Windows) == "math.dll");
  CHECK(library_filename("host:test", Platform::Linux).empty());
}

TEST_CASE("host libraries resolve once per symbol") {
  Loader ld;
  bytecode::ExternEntry inc{"host:test", "inc", "inc", 2, false};
  bytecode::ExternEntry inc_again{"host:test", "inc", "plus_one", 2, false};
  auto prog = ld.load(calls({inc, inc_again}));
  REQUIRE(prog->handles.size() == 2);
  CHECK(prog->handles[0].fn == prog->handles[1].fn);
  CHECK(ld.stats().symbol_resolutions == 1);
  CHECK(ld.stats().library_opens == 0);
  ld.load(calls({inc}));
  CHECK(ld.stats().symbol_resolutions == 1);
  REQUIRE(ld.stats().trace.size() == 1);
  CHECK(ld.stats().trace[0] == "resolve host:test:inc for inc/2");
}

TEST_CASE("missing library and missing symbol are distinct errors") {
  Loader ld({"/nonexistent"});
  LoadError lib = load_failure(ld, calls({{"nosuch", "f_wrapper", "f", 1, false}}));
  CHECK(lib.kind() == LoadErrorKind::LibraryNotFound);
  CHECK(lib.library() == "nosuch");
  CHECK(lib.predicate() == "f");
  CHECK(std::string(lib.what()).find("LibraryNotFound") == 0);
  CHECK(std::string(lib.what()).find("/nonexistent/libnosuch.so") != std::string::npos);

  LoadError sym = load_failure(ld, calls({{"host:test", "nope", "g", 1, false}}));
  CHECK(sym.kind() == LoadErrorKind::SymbolNotFound);
  CHECK(sym.symbol() == "nope");
  CHECK(std::string(sym.what()).find("needed by predicate 'g'") != std::string::npos);

  LoadError host = load_failure(ld, calls({{"host:nothing", "x", "h", 1, false}}));
  CHECK(host.kind() == LoadErrorKind::LibraryNotFound);
  CHECK_THROWS_AS(ld.resolve_host("host:test", "nope"), LoadError);
  CHECK(ld.resolve_host("host:test", "inc") != nullptr);
}

TEST_CASE("a call to an undefined predicate is a load error") {
  bytecode::BytecodeImage img = testing::compile("module u.\naccumulate v.\np :- q.\n", {}, false,
                                                 {{"v", "module v.\nq.\n"}});
  Loader ld;
  LoadError e = load_failure(ld, img);
  CHECK(e.kind() == LoadErrorKind::UndefinedPredicate);
  CHECK(e.predicate() == "q");
}

TEST_CASE("loading patches call targets to code offsets") {
  bytecode::BytecodeImage img = testing::compile("module c.\np :- q, q.\nq.\n");
  auto prog = testing::load(img);
  const auto *q = img.find_predicate("q", 0);
  REQUIRE(q);
  int patched = 0;
  for (const auto &ins : prog->image.code)
    if (ins.op == bytecode::Opcode::Call || ins.op == bytecode::Opcode::Execute) {
      CHECK(ins.a == q->code_offset);
      CHECK(ins.b == 0);
      ++patched;
    }
  CHECK(patched == 2);
}

TEST_CASE("native plugin through dlopen") {
  if (!have_plugin("libtestplug.so")) {
    MESSAGE("libtestplug.so not built; skipping");
    return;
  }
  bytecode::BytecodeImage img =
      testing::compile("module t.\naccum_extern math.\nboth X Z :- sin X Y, cos Y Z.\n", {{"math", kMathSig}});
  Loader ld({MLP_PLUGIN_DIR});
  auto prog = ld.load(img);
  CHECK(ld.stats().library_opens == 1);
  CHECK(ld.stats().symbol_resolutions == 4);  // every extern in the table
  auto r = testing::query(prog, "both 0.0 Z");
  REQUIRE(r.answers.size() == 1);
  CHECK(r.answers[0] == "Z = 1.0");

  SUBCASE("the library stays open while a program uses it") {
    std::shared_ptr<const LoadedProgram> keep;
    {
      Loader scoped({MLP_PLUGIN_DIR});
      keep = scoped.load(img);
    }
    CHECK(testing::query(keep, "both 0.0 Z").answers == std::vector<std::string>{"Z = 1.0"});
  }
}

TEST_CASE("plugin strings and explicit failure") {
  if (!have_plugin("libtestplug.so")) {
    MESSAGE("libtestplug.so not built; skipping");
    return;
  }
  Loader ld({MLP_PLUGIN_DIR});
  auto prog = ld.load(testing::compile("module t.\naccum_extern math.\n", {{"math", kMathSig}}));
  CHECK(testing::query(prog, "greet \"world\" S").answers == std::vector<std::string>{"S = \"world, hi!\""});
  auto rejected = testing::query(prog, "reject 1.0");
  CHECK(rejected.answers.empty());
  CHECK(rejected.last == vm::Outcome::Failure);
}

TEST_CASE("symbol missing from a real library") {
  if (!have_plugin("libtestplug.so")) {
    MESSAGE("libtestplug.so not built; skipping");
    return;
  }
  Loader ld({MLP_PLUGIN_DIR});
  LoadError e = load_failure(ld, calls({{"testplug", "absent_wrapper", "absent", 1, false}}));
  CHECK(e.kind() == LoadErrorKind::SymbolNotFound);
  CHECK(e.library() == "testplug");
}

TEST_CASE("a plugin built for another ABI version is refused") {
  if (!have_plugin("libbadabi.so")) {
    MESSAGE("libbadabi.so not built; skipping");
    return;
  }
  Loader ld({MLP_PLUGIN_DIR});
  LoadError e = load_failure(ld, calls({{"badabi", "sin_wrapper", "sin", 2, false}}));
  CHECK(e.kind() == LoadErrorKind::AbiMismatch);
  CHECK(std::string(e.what()).find("plugin API version 43") != std::string::npos);
  CHECK(ld.stats().library_opens == 0);
}

TEST_CASE("a file that is not a library fails to open") {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "mlp_loader_test";
  std::filesystem::create_directories(dir);
  { std::ofstream(dir / "libjunk.so") << "not an ELF file"; }
  Loader ld({dir.string()});
  LoadError e = load_failure(ld, calls({{"junk", "f", "f", 0, false}}));
  CHECK(e.kind() == LoadErrorKind::LibraryOpenFailed);
  std::filesystem::remove_all(dir);
}
