#include "doctest.h"

#include "support.hpp"

#include "mlp/stubgen.hpp"

#include <filesystem>
#include <fstream>

using namespace mlp;
using namespace mlp::stubgen;

namespace {

frontend::SpecAst spec_fixture(const std::string &name) {
  return frontend::parse_spec(testing::read_fixture(name), name);
}

bool contains(const std::string &hay, const std::string &needle) { return hay.find(needle) != std::string::npos; }

} // namespace

TEST_CASE("generated math signature matches the hand-written one") {
  frontend::SpecAst math = spec_fixture("math.spec");
  std::string sig = generate_signature(math);
  frontend::SignatureAst generated = frontend::parse_signature(sig, "generated.sig");
  frontend::SignatureAst hand = frontend::parse_signature(testing::read_fixture("math.sig"), "math.sig");
  CHECK(generated.same_as(hand));
  CHECK(signature_of(math).same_as(hand));
}

TEST_CASE("entry symbols") {
  frontend::SpecPred p;
  p.lp_name = "sum";
  p.entry_base = "pair_sum";
  CHECK(entry_symbol(p) == "pair_sum_wrapper");
}

TEST_CASE("natives header declares records and prototypes") {
  frontend::SpecAst pair = spec_fixture("pair.spec");
  std::string h = generate_natives_header(pair, {.source_name = "pair.spec"});
  CHECK(h.rfind("/* Generated by mlp-stubgen 1 from pair.spec. Do not edit. */", 0) == 0);
  CHECK(contains(h, "struct pair {\n    int x;\n    int y;\n};"));
  CHECK(contains(h, "struct pair mk_pair(int64_t a1, int64_t a2);"));
  CHECK(contains(h, "int64_t pair_sum(struct pair a1);"));
  CHECK(contains(h, "int is_origin(struct pair a1);"));
  CHECK(natives_header_name(pair) == "pair_natives.h");
  CHECK(wrappers_file_name(pair) == "pair_wrappers.c");
}

TEST_CASE("wrappers marshal through the host table") {
  frontend::SpecAst pair = spec_fixture("pair.spec");
  std::string w = generate_wrappers(pair);
  CHECK(contains(w, "#include \"mlp_plugin.h\""));
  CHECK(contains(w, "#include \"pair_natives.h\""));
  CHECK(contains(w, "MLP_PLUGIN_DEFINE_HOST()"));
  CHECK(contains(w, "MLP_EXPORT void mk_pair_wrapper(void)"));
  CHECK(contains(w, "mlp_return_ctor(i, \"pr\", 2);"));
  CHECK(contains(w, "r.y = (int)mlp_get_ctor_arg_int(i, 2);"));
  CHECK(contains(w, "mlp_fail();"));

  frontend::SpecAst math = spec_fixture("math.spec");
  std::string mw = generate_wrappers(math);
  CHECK(contains(mw, "double a1 = mlp_get_real(1);"));
  CHECK(contains(mw, "mlp_return_real(2, ret);"));
}

TEST_CASE("strings and the build note") {
  frontend::SpecAst s = frontend::parse_spec("spec text. lib text.\npred shout shout string -> string -> o.\n"
                                             "pred blank is_blank string -> o.\n");
  std::string h = generate_natives_header(s);
  CHECK(contains(h, "const char *shout(const char *a1);"));
  std::string w = generate_wrappers(s);
  CHECK(contains(w, "mlp_get_string_len(1)"));
  CHECK(contains(w, "mlp_return_string(2, ret, strlen(ret));"));
  std::string note = generate_build_note(s);
  CHECK(contains(note, "shout_wrapper"));
  CHECK(contains(note, "is_blank_wrapper"));
}

TEST_CASE("unmappable types are rejected with their position") {
  frontend::SpecAst s = frontend::parse_spec("spec h. lib h.\npred apply apply (int -> o) -> int -> o.\n");
  CHECK_THROWS_WITH_AS(generate_wrappers(s), doctest::Contains("predicate 'apply', argument 1"), GenerationError);

  frontend::SpecAst reals = frontend::parse_spec("spec r. lib r.\nkind box type -> type.\ntype bx real -> box real.\n"
                                                 "map box real = struct box { double v; }.\npred open unbox box real -> real -> o.\n");
  CHECK_THROWS_AS(marshal_plan(reals, "box"), GenerationError);
  CHECK_THROWS_AS(generate_wrappers(reals), GenerationError);
}

TEST_CASE("marshal plan round trips ground records") {
  frontend::SpecAst pair = spec_fixture("pair.spec");
  MarshalPlan plan = marshal_plan(pair, "pair");
  CHECK(plan.constructor == "pr");
  CHECK(plan.record == "pair");
  REQUIRE(plan.fields.size() == 2);

  testing::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    terms::Store s;
    std::vector<std::int64_t> rec{rng.range(INT64_MIN, INT64_MAX), rng.range(INT64_MIN, INT64_MAX)};
    terms::TermRef t = marshal(plan, s, rec);
    CHECK(unmarshal(plan, s, t) == rec);
  }

  terms::Store s;
  terms::TermRef partial[] = {s.make_int(1), s.make_var()};
  CHECK_THROWS_AS(unmarshal(plan, s, s.make_cmp("pr", partial)), MarshalFault);
  terms::TermRef wrong[] = {s.make_int(1), s.make_int(2)};
  CHECK_THROWS_AS(unmarshal(plan, s, s.make_cmp("pq", wrong)), MarshalFault);
  CHECK_THROWS_AS(unmarshal(plan, s, s.make_atom("pr")), MarshalFault);
}

TEST_CASE("generated pair plugin end to end") {
  std::string lib = std::string(MLP_PLUGIN_DIR) + "/libpair.so";
  std::string sig_path = std::string(MLP_GEN_DIR) + "/pair/pair.sig";
  if (!std::filesystem::exists(lib) || !std::filesystem::exists(sig_path)) {
    MESSAGE("generated pair plugin not built; skipping");
    return;
  }
  std::ifstream in(sig_path);
  std::string sig((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  bytecode::BytecodeImage img = testing::compile(
      "module usepair.\naccum_extern pair.\nroundtrip X Y S :- mk X Y P, swap P Q, sum Q S.\n", {{"pair", sig}});
  loader::Loader ld({MLP_PLUGIN_DIR});
  auto prog = ld.load(img);
  CHECK(testing::query(prog, "mk 3 4 P").answers == std::vector<std::string>{"P = pr(3, 4)"});
  CHECK(testing::query(prog, "swap (pr 1 2) Q").answers == std::vector<std::string>{"Q = pr(2, 1)"});
  CHECK(testing::query(prog, "roundtrip 5 -7 S").answers == std::vector<std::string>{"S = -2"});
  CHECK(testing::query(prog, "origin (pr 0 0)").answers == std::vector<std::string>{"true"});
  CHECK(testing::query(prog, "origin (pr 0 1)").answers.empty());
  auto bad = testing::query(prog, "sum (pr a 1) S");
  CHECK(bad.answers.empty());
  REQUIRE_FALSE(bad.diagnostics.empty());
  CHECK(contains(bad.diagnostics[0], "type fault in 'sum'"));
}
