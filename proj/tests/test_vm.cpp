#include "doctest.h"

#include "support.hpp"

#include "mlp/vm.hpp"

using namespace mlp;
using testing::solve;
using vm::Outcome;

namespace {

using Answers = std::vector<std::string>;

const char *kFamily = R"(module family.
parent tom bob.
parent tom liz.
parent bob ann.
parent bob pat.
parent pat jim.
grand X Z :- parent X Y, parent Y Z.
ancestor X Y :- parent X Y.
ancestor X Z :- parent X Y, ancestor Y Z.
childless X :- parent _ X, not (parent X _).
)";

} // namespace

TEST_CASE("facts and backtracking through rules") {
  CHECK(solve(kFamily, "parent tom W").answers == Answers{"W = bob", "W = liz"});
  CHECK(solve(kFamily, "grand tom G").answers == Answers{"G = ann", "G = pat"});
  CHECK(solve(kFamily, "ancestor tom jim").answers == Answers{"true"});
  CHECK(solve(kFamily, "ancestor A jim").answers == Answers{"A = pat", "A = tom", "A = bob"});
  auto none = solve(kFamily, "parent jim X");
  CHECK(none.answers.empty());
  CHECK(none.last == Outcome::Failure);
}

TEST_CASE("negation as failure leaves no bindings") {
  CHECK(solve(kFamily, "childless C").answers == Answers{"C = liz", "C = ann", "C = jim"});
  auto unbound = solve(kFamily, "not (parent jim X)");
  REQUIRE(unbound.answers.size() == 1);
  CHECK(unbound.answers[0].rfind("X = _G", 0) == 0);
  CHECK(solve(kFamily, "not (parent tom X)").answers.empty());
}

TEST_CASE("solve calls a goal held in a variable") {
  auto r = solve(kFamily, "solve (parent bob K)");
  CHECK(r.answers == Answers{"K = ann", "K = pat"});
  CHECK(solve("module m.\nrun G :- solve G.\np 1.\np 2.\n", "run (p N)").answers == Answers{"N = 1", "N = 2"});
  CHECK(solve("module m.\nrun G :- solve G.\n", "run X").last == Outcome::Error);
}

TEST_CASE("structures unify through templates") {
  const char *lists = R"(module lists.
app nil L L.
app (cons H T) L (cons H R) :- app T L R.
len nil 0.
len (cons _ T) N :- len T M, eval N (+(M, 1)).
)";
  CHECK(solve(lists, "app (cons 1 (cons 2 nil)) (cons 3 nil) R").answers == Answers{"R = cons(1, cons(2, cons(3, nil)))"});
  auto splits = solve(lists, "app X Y (cons a (cons b nil))");
  CHECK(splits.answers.size() == 3);
  CHECK(splits.answers[0] == "X = nil\nY = cons(a, cons(b, nil))");
  CHECK(solve(lists, "len (cons a (cons b (cons c nil))) N").answers == Answers{"N = 3"});
}

TEST_CASE("the occurs check applies to clause heads") {
  CHECK(solve("module o.\nsame X X.\n", "same Y (f Y)").answers.empty());
}

TEST_CASE("arithmetic and comparison") {
  const char *m = "module a.\n";
  CHECK(solve(m, "eval X (+(1, *(2, 3)))").answers == Answers{"X = 7"});
  CHECK(solve(m, "eval X (/(7, 2))").answers == Answers{"X = 3"});
  CHECK(solve(m, "eval X (/(-7, 2))").answers == Answers{"X = -3"});
  CHECK(solve(m, "eval X (/(7.0, 2))").answers == Answers{"X = 3.5"});
  CHECK(solve(m, "eval X (+(1, 0.5))").answers == Answers{"X = 1.5"});
  CHECK(solve(m, "< 1 2, >= 2 2.0, =:= 3 3.0").answers == Answers{"true"});
  CHECK(solve(m, "lt 2 1").answers.empty());

  auto div0 = solve(m, "eval X (/(1, 0))");
  CHECK(div0.last == Outcome::Error);
  REQUIRE_FALSE(div0.diagnostics.empty());
  CHECK(div0.diagnostics.back().find("integer division by zero") != std::string::npos);
  CHECK(solve(m, "eval X (*(9223372036854775807, 2))").last == Outcome::Error);
  CHECK(solve(m, "eval X (+(Y, 1))").last == Outcome::Error);
  CHECK(solve(m, "eval X (pow(2, 3))").last == Outcome::Error);
  CHECK(solve(m, "eval X (/(1.0, 0))").answers == Answers{"X = inf"});
}

TEST_CASE("externs through host:test") {
  const char *m = "module e.\naccum_extern testlib.\n"
                  "twice X Z :- inc X Y, inc Y Z.\n"
                  "count 0.\ncount N :- dec N M, count M.\n";
  CHECK(solve(m, "twice 1 Z").answers == Answers{"Z = 3"});
  CHECK(solve(m, "echo_string \"x\" S").answers == Answers{"S = \"x\""});
  CHECK(solve(m, "echo_real 2.5 R").answers == Answers{"R = 2.5"});
  CHECK(solve(m, "add 2 3 5").answers == Answers{"true"});
  CHECK(solve(m, "add 2 3 6").answers.empty());
  CHECK(solve(m, "always_fail").answers.empty());
  CHECK(solve(m, "count 10").answers == Answers{"true"});
}

TEST_CASE("a host type fault fails the goal and is reported") {
  const char *m = "module e.\naccum_extern testlib.\n";
  auto r = solve(m, "inc X Y");
  CHECK(r.answers.empty());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].find("type fault in 'inc'") != std::string::npos);
}

TEST_CASE("the clobbering extern is safe when declared regcl") {
  const char *m = "module c.\naccum_extern testlib.\nt X Y Z :- clobber X Y, add Y X Z.\n";
  CHECK(solve(m, "t 5 Y Z").answers == Answers{"Y = 10\nZ = 15"});
  CHECK(solve(m, "t 5 Y Z", {}, true).answers == Answers{"Y = 10\nZ = 15"});
}

TEST_CASE("machine API") {
  auto prog = testing::load(testing::compile(kFamily));
  vm::Machine m(prog);
  m.set_query("parent tom W");
  REQUIRE(m.next() == Outcome::Success);
  CHECK(m.answer().str() == "W = bob");
  REQUIRE(m.next() == Outcome::Success);
  CHECK(m.answer().bindings == std::vector<std::pair<std::string, std::string>>{{"W", "liz"}});
  CHECK(m.next() == Outcome::Failure);
  CHECK(m.next() == Outcome::Failure);

  m.set_query("nobody X");
  CHECK(m.unknown_predicates() == std::vector<std::string>{"nobody"});
  CHECK(m.next() == Outcome::Failure);

  CHECK_THROWS_AS(m.set_query("parent ("), ParseError);
  CHECK_THROWS_AS(m.set_query("parent a b c"), CompileError);
}

TEST_CASE("step budget") {
  auto prog = testing::load(testing::compile("module l.\nloop :- loop.\nnat 0.\nnat N :- nat M, eval N (+(M, 1)).\n"));
  auto r = testing::query(prog, "loop", SIZE_MAX, 10'000);
  CHECK(r.last == Outcome::BudgetExhausted);
  auto n = testing::query(prog, "nat N", SIZE_MAX, 10'000);
  CHECK(n.last == Outcome::BudgetExhausted);
  CHECK(n.answers.size() > 3);
  CHECK(n.answers[2] == "N = 2");
}

TEST_CASE("deep recursion uses the heap, not the C++ stack") {
  const char *m = "module d.\naccum_extern testlib.\n"
                  "down 0.\ndown N :- dec N M, down M, nonzero N.\n";
  auto r = testing::query(testing::load(testing::compile(m)), "down 200000", SIZE_MAX, 50'000'000);
  CHECK(r.answers == Answers{"true"});
}

TEST_CASE("registers seen by the extern probe") {
  auto prog = testing::load(testing::compile("module p.\naccum_extern testlib.\n"));
  vm::Machine m(prog);
  std::vector<std::string> seen;
  m.set_extern_probe([&](const loader::ResolvedHandle &h, std::span<const terms::TermRef> before,
                         std::span<const terms::TermRef> after) {
    seen.push_back(h.pred_name + "/" + std::to_string(before.size()) + "/" + std::to_string(after.size()));
    CHECK(m.store().int_value(before[0]) == 7);
  });
  m.set_query("inc 7 X, dec 7 Y");
  REQUIRE(m.next() == Outcome::Success);
  CHECK(seen == std::vector<std::string>{"inc/2/2", "dec/2/2"});
  CHECK(m.stats().extern_calls == 2);
  CHECK(m.snapshot_registers(3).size() == 3);
}

TEST_CASE("repeated answers reuse no stale state") {
  auto prog = testing::load(testing::compile(kFamily));
  for (int i = 0; i < 50; ++i)
    CHECK(testing::query(prog, "grand tom G").answers == Answers{"G = ann", "G = pat"});
}
