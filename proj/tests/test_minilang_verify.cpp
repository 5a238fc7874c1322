#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "triad/minilang/compile.hpp"
#include "triad/minilang/verify.hpp"

using namespace triad;
using namespace triad::minilang;

namespace {

const char* kMaxArrayMethod = R"(method max_array(a: array<int>) returns (m: int)
  requires len(a) >= 1
  ensures forall k in 0 .. len(a) :: m >= a[k]
  ensures exists k in 0 .. len(a) :: m == a[k]
{
  m := a[0];
  var i := 1;
  while (i < len(a))
    bound len(a) - i
    invariant 1 <= i && i <= len(a)
    invariant forall k in 0 .. i :: m >= a[k]
    invariant exists k in 0 .. i :: m == a[k]
  {
    if (a[i] > m) { m := a[i]; }
    i := i + 1;
  }
}
)";

ParsedMethod parse_ok(const std::string& text) {
  auto r = compile_method(text);
  REQUIRE(r.ok());
  return *r.value;
}

// Grid used by most cases here: arrays of length 1..3 over {-2..2}.
InputGrid small_grid() {
  InputGrid g;
  g.array_overrides["a"] = ArrayShape{1, 3, {-2, 2}};
  return g;
}

// Independent enumeration of the same grid with plain nested loops, kept free
// of GridAxis/for_each_point so it can cross-check their order.
std::vector<std::vector<Int>> enumerate_arrays(Int len_lo, Int len_hi, Int lo, Int hi) {
  std::vector<std::vector<Int>> out;
  for (Int len = len_lo; len <= len_hi; ++len) {
    std::vector<Int> cur(static_cast<std::size_t>(len), lo);
    while (true) {
      out.push_back(cur);
      Int i = len - 1;
      while (i >= 0) {
        if (++cur[static_cast<std::size_t>(i)] <= hi) break;
        cur[static_cast<std::size_t>(i)] = lo;
        --i;
      }
      if (i < 0) break;
    }
  }
  return out;
}

Value arr(std::vector<Int> xs) { return Value(std::move(xs)); }

}  // namespace

TEST_CASE("the ported running example verifies on its grid") {
  ParsedMethod m = parse_ok(kMaxArrayMethod);
  MiniProgram prog{m.signature, m.body};
  auto cex = bounded_verify(prog, m.spec, small_grid());
  CHECK_FALSE(cex.has_value());
}

TEST_CASE("dropping the loop yields the first counterexample in grid order") {
  ParsedMethod m = parse_ok(kMaxArrayMethod);
  MiniProgram broken{m.signature, parse_body("m := a[0];")};

  // Independent oracle: first array (in enumeration order) whose first
  // element is not its maximum.
  std::vector<Int> expected;
  for (const auto& xs : enumerate_arrays(1, 3, -2, 2)) {
    bool is_max = true;
    for (Int v : xs) is_max = is_max && xs[0] >= v;
    if (!is_max) {
      expected = xs;
      break;
    }
  }
  REQUIRE(expected == std::vector<Int>{-2, -1});

  auto cex = bounded_verify(broken, m.spec, small_grid());
  REQUIRE(cex.has_value());
  REQUIRE(cex->inputs.size() == 1);
  CHECK(std::get<std::vector<Int>>(cex->inputs[0]) == expected);
  CHECK(cex->reason == "postcondition 1 violated");
}

TEST_CASE("a false precondition verifies vacuously") {
  ParsedMethod m = parse_ok(
      "method f(a: array<int>) returns (m: int)\n"
      "  requires false\n"
      "  ensures m == a[0] + 100\n"
      "{\n  m := 0;\n}\n");
  MiniProgram prog{m.signature, m.body};
  CHECK_FALSE(bounded_verify(prog, m.spec, small_grid()).has_value());
}

TEST_CASE("runtime faults inside the body are counterexamples") {
  ParsedMethod m = parse_ok(
      "method f(a: array<int>) returns (m: int)\n"
      "  ensures m == 0\n"
      "{\n  m := a[0] - a[0];\n}\n");
  MiniProgram prog{m.signature, m.body};
  InputGrid g;  // default array length 0..3: the empty array faults a[0]
  auto cex = bounded_verify(prog, m.spec, g);
  REQUIRE(cex.has_value());
  CHECK(std::get<std::vector<Int>>(cex->inputs[0]).empty());
  CHECK(cex->reason == "fault: IndexOOB");
}

TEST_CASE("grid cap exceedance is a configuration error") {
  ParsedMethod m = parse_ok(kMaxArrayMethod);
  MiniProgram prog{m.signature, m.body};
  InputGrid g;
  g.array_overrides["a"] = ArrayShape{1, 12, {-2, 2}};  // 5^12 points and change
  CHECK_THROWS_AS(bounded_verify(prog, m.spec, g), StructuralError);
}

TEST_CASE("grid enumeration matches an independent re-enumeration") {
  // Soundness hinges on actually covering the grid; compare point-for-point.
  FunctionSignature sig{"f", {{"a", SemType::IntArray}}, {{"m", SemType::Int}}};
  InputGrid g;
  g.array_overrides["a"] = ArrayShape{0, 2, {-1, 1}};
  auto axes = detail::axes_for(sig.params, g);
  std::vector<std::vector<Int>> seen;
  detail::for_each_point(axes, [&](const std::vector<Value>& p) {
    seen.push_back(std::get<std::vector<Int>>(p[0]));
    return true;
  });
  CHECK(seen == enumerate_arrays(0, 2, -1, 1));
}

TEST_CASE("spec_equivalent accepts renamed bound variables and reordered clauses") {
  FunctionSignature sig{"max_array", {{"a", SemType::IntArray}}, {{"m", SemType::Int}}};
  auto s1 = compile_annotations(sig,
                                "requires len(a) >= 1\n"
                                "ensures forall k in 0 .. len(a) :: m >= a[k]\n"
                                "ensures exists k in 0 .. len(a) :: m == a[k]\n");
  auto s2 = compile_annotations(sig,
                                "requires 1 <= len(a)\n"
                                "ensures exists j in 0 .. len(a) :: a[j] == m\n"
                                "ensures forall j in 0 .. len(a) :: a[j] <= m\n");
  REQUIRE(s1.ok());
  REQUIRE(s2.ok());
  MiniSpec a{s1.value->pre, s1.value->post};
  MiniSpec b{s2.value->pre, s2.value->post};
  CHECK_FALSE(spec_equivalent(sig, a, b, small_grid()).has_value());
}

TEST_CASE("spec_equivalent distinguishes >= from > with the first failing point") {
  FunctionSignature sig{"f", {{"a", SemType::IntArray}}, {{"m", SemType::Int}}};
  auto s1 = compile_annotations(sig, "ensures m >= a[0]");
  auto s2 = compile_annotations(sig, "ensures m > a[0]");
  REQUIRE(s1.ok());
  REQUIRE(s2.ok());

  // Independent oracle over the same enumeration: first (a, m) with
  //   (m >= a[0]) != (m > a[0]),  i.e. first point with m == a[0].
  std::vector<Int> exp_a;
  Int exp_m = 0;
  bool found = false;
  for (const auto& xs : enumerate_arrays(1, 3, -2, 2)) {
    for (Int mv = -2; mv <= 2 && !found; ++mv)
      if ((mv >= xs[0]) != (mv > xs[0])) {
        exp_a = xs;
        exp_m = mv;
        found = true;
      }
    if (found) break;
  }
  REQUIRE(found);
  CHECK(exp_a == std::vector<Int>{-2});
  CHECK(exp_m == -2);

  MiniSpec a{s1.value->pre, s1.value->post};
  MiniSpec b{s2.value->pre, s2.value->post};
  auto d = spec_equivalent(sig, a, b, small_grid());
  REQUIRE(d.has_value());
  CHECK(d->pair == Distinguisher::Pair::Post);
  CHECK(std::get<std::vector<Int>>(d->point[0]) == exp_a);
  CHECK(std::get<Int>(d->point[1]) == exp_m);
  CHECK(d->direction == "left postcondition holds, right does not");
}

TEST_CASE("spec_equivalent with a free variable is a structural error") {
  FunctionSignature sig{"f", {{"x", SemType::Int}}, {{"y", SemType::Int}}};
  // Parsed against a wider signature, then compared against the narrow one.
  FunctionSignature wide{"f", {{"x", SemType::Int}, {"z", SemType::Int}}, {{"y", SemType::Int}}};
  auto c = compile_annotations(wide, "requires z >= 0");
  REQUIRE(c.ok());
  MiniSpec stray{c.value->pre, {}};
  MiniSpec fine{{}, {}};
  CHECK_THROWS_AS(spec_equivalent(sig, stray, fine, InputGrid{}), StructuralError);
}

TEST_CASE("spec_equivalent is reflexive on random small specs") {
  FunctionSignature sig{"f", {{"a", SemType::IntArray}, {"x", SemType::Int}},
                        {{"y", SemType::Int}}};
  InputGrid g;
  g.array_overrides["a"] = ArrayShape{0, 2, {-1, 1}};
  g.int_overrides["x"] = IntRange{-1, 1};
  g.int_overrides["y"] = IntRange{-1, 1};

  std::mt19937_64 rng(7);
  // allow_y: return variables may appear in postconditions only.
  auto gen_expr = [&](auto&& self, int depth, bool allow_y) -> std::string {
    switch (rng() % (depth > 2 ? 3 : 6)) {
      case 0: return "x >= 0";
      case 1: return allow_y ? "y == x" : "x <= 1";
      case 2: return "len(a) >= 1";
      case 3:
        return "(" + self(self, depth + 1, allow_y) + ") && (" + self(self, depth + 1, allow_y) +
               ")";
      case 4:
        return "(" + self(self, depth + 1, allow_y) + ") || (" + self(self, depth + 1, allow_y) +
               ")";
      default:
        return "forall k in 0 .. len(a) :: a[k] <= " + std::to_string(int(rng() % 3) - 1);
    }
  };
  for (int i = 0; i < 25; ++i) {
    std::string pre = gen_expr(gen_expr, 0, false);
    std::string post = gen_expr(gen_expr, 0, true);
    auto c = compile_annotations(sig, "requires " + pre + "\nensures " + post + "\n");
    REQUIRE(c.ok());
    MiniSpec s{c.value->pre, c.value->post};
    CHECK_FALSE(spec_equivalent(sig, s, s, g).has_value());
  }
}

TEST_CASE("spec_equivalent is symmetric and transitive on the grid") {
  FunctionSignature sig{"f", {{"x", SemType::Int}}, {{"y", SemType::Int}}};
  InputGrid g;
  std::vector<MiniSpec> specs;
  for (const char* post :
       {"ensures y >= x", "ensures x <= y", "ensures y > x - 1 || y == x",
        "ensures y > x", "ensures y >= 0"}) {
    auto c = compile_annotations(sig, post);
    REQUIRE(c.ok());
    specs.push_back({c.value->pre, c.value->post});
  }
  auto eq = [&](const MiniSpec& a, const MiniSpec& b) {
    return !spec_equivalent(sig, a, b, g).has_value();
  };
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (std::size_t j = 0; j < specs.size(); ++j) {
      CHECK(eq(specs[i], specs[j]) == eq(specs[j], specs[i]));
      for (std::size_t k = 0; k < specs.size(); ++k)
        if (eq(specs[i], specs[j]) && eq(specs[j], specs[k])) CHECK(eq(specs[i], specs[k]));
    }
  // Sanity: the first three are mutually equivalent, the last two are not.
  CHECK(eq(specs[0], specs[1]));
  CHECK(eq(specs[0], specs[2]));
  CHECK_FALSE(eq(specs[0], specs[3]));
  CHECK_FALSE(eq(specs[0], specs[4]));
}

TEST_CASE("io tests replay in order and report the first mismatch") {
  ParsedMethod m = parse_ok(kMaxArrayMethod);
  MiniProgram prog{m.signature, m.body};
  std::vector<IOTest> tests = {
      {{arr({1, 2, 3, 4, 5})}, "5"},
      {{arr({-1, -2, -3})}, "-1"},
      {{arr({0, 0, 0})}, "0"},
  };
  CHECK_FALSE(run_io_tests(prog, tests).has_value());

  // The classic adversarial swap: a minimum instead of a maximum.
  MiniProgram min_prog{m.signature, parse_body(R"(
    m := a[0];
    var i := 1;
    while (i < len(a)) bound len(a) - i {
      if (a[i] < m) { m := a[i]; }
      i := i + 1;
    }
  )")};
  auto mm = run_io_tests(min_prog, tests);
  REQUIRE(mm.has_value());
  CHECK(mm->index == 0);
  CHECK(mm->got == "1");
  CHECK(mm->want == "5");

  CHECK_THROWS_AS(run_io_tests(prog, {}), StructuralError);
}

TEST_CASE("io tests generated from a program always replay cleanly") {
  ParsedMethod m = parse_ok(kMaxArrayMethod);
  MiniProgram prog{m.signature, m.body};
  std::mt19937_64 rng(99);
  std::vector<IOTest> tests;
  for (int i = 0; i < 40; ++i) {
    std::vector<Int> xs(1 + rng() % 6);
    for (Int& v : xs) v = static_cast<Int>(rng() % 21) - 10;
    auto out = evaluate(prog, {arr(xs)});
    REQUIRE(std::holds_alternative<std::vector<Value>>(out));
    tests.push_back({{arr(xs)}, render_outputs(std::get<std::vector<Value>>(out))});
  }
  CHECK_FALSE(run_io_tests(prog, tests).has_value());
}

TEST_CASE("self-consistency holds for every bundled program on random inputs") {
  namespace fs = std::filesystem;
  std::mt19937_64 rng(1234);
  int programs = 0;
  for (const auto& entry :
       fs::directory_iterator(std::string(TRIAD_SOURCE_DIR) + "/data/mini_corpus")) {
    if (!entry.is_directory()) continue;
    std::ifstream mf(entry.path() / "manifest.json");
    std::ostringstream sig_ss;
    {
      std::ifstream body_in(entry.path() / "body.code");
      std::ostringstream body_ss;
      body_ss << body_in.rdbuf();
      std::ostringstream mf_ss;
      mf_ss << mf.rdbuf();
      auto manifest = nlohmann::json::parse(mf_ss.str());
      FunctionSignature sig = parse_signature(manifest.at("signature").get<std::string>());
      auto compiled = compile_body(sig, body_ss.str());
      REQUIRE(compiled.ok());
      MiniProgram prog{sig, *compiled.value};
      ++programs;

      std::vector<IOTest> tests;
      for (int t = 0; t < 20; ++t) {
        std::vector<Value> inputs;
        for (const Param& p : sig.params) {
          if (p.type == SemType::Int) {
            inputs.push_back(static_cast<Int>(rng() % 11) - 5);
          } else {
            std::vector<Int> xs(rng() % 5);
            for (Int& v : xs) v = static_cast<Int>(rng() % 9) - 4;
            inputs.push_back(xs);
          }
        }
        auto out = evaluate(prog, inputs);
        std::string rendered = std::holds_alternative<RuntimeFault>(out)
                                   ? render_fault(std::get<RuntimeFault>(out))
                                   : render_outputs(std::get<std::vector<Value>>(out));
        tests.push_back({inputs, rendered});
      }
      CHECK_FALSE(run_io_tests(prog, tests).has_value());
    }
  }
  CHECK(programs == 7);
}
