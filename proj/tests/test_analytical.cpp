#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "triad/analytical/model.hpp"
#include "triad/analytical/random_world.hpp"

using namespace triad;
using namespace triad::analytical;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The worked two-by-two example; frozen expectations below were produced by
// tests/oracles/w1_enumeration.py, which enumerates the joint distribution
// independently of this library.
WorldBundle<Rational> w1() {
  return load_world_text<Rational>(slurp(std::string(TRIAD_SOURCE_DIR) + "/data/worlds/w1.json"));
}

// Three-element domain with classes {b1,b2} and {b3}; row (1/2, 3/10, 1/5).
WorldBundle<Rational> grouped_world() {
  return load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a"}],
    "domain_b": [
      {"name": "b1", "class": "big"},
      {"name": "b2", "class": "big"},
      {"name": "b3", "class": "small"}
    ],
    "consistent": [["a1", "b1"], ["a1", "b2"]],
    "joint": [{"a": "a1", "b": "b1", "mass": 1}],
    "transfer": [{"a": "a1", "row": {"b1": "1/2", "b2": "3/10", "b3": "1/5"}}]
  })");
}

}  // namespace

TEST_CASE("class_mass sums the row over a class") {
  auto b = grouped_world();
  CHECK(class_mass(b.model, b.world, "a1", "big") == Rational(4, 5));
  CHECK(class_mass(b.model, b.world, "a1", "small") == Rational(1, 5));
  CHECK_THROWS_AS(class_mass(b.model, b.world, "a1", "nope"), StructuralError);
  CHECK_THROWS_AS(class_mass(b.model, b.world, "zz", "big"), StructuralError);
}

TEST_CASE("transfer_function picks the unique argmax class") {
  auto b = grouped_world();
  int cls = transfer_function(b.model, b.world, 0);
  CHECK(b.world.b_class_names[cls] == "big");

  // (1/4, 1/4, 1/2) ties the two classes exactly.
  b.model.rows[0] = {Rational(1, 4), Rational(1, 4), Rational(1, 2)};
  CHECK_THROWS_AS(transfer_function(b.model, b.world, 0), NotTransferRational);
  CHECK_FALSE(is_transfer_rational(b.model, b.world).ok);
  CHECK(is_transfer_rational(b.model, b.world).offending_x == "a1");

  // A single class in B is trivially the argmax.
  auto single = load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a"}],
    "domain_b": [{"name": "b1", "class": "only"}, {"name": "b2", "class": "only"}],
    "consistent": [["a1", "b1"], ["a1", "b2"]],
    "joint": [{"a": "a1", "b": "b1", "mass": 1}],
    "transfer": [{"a": "a1", "row": {"b1": "1/2", "b2": "1/2"}}]
  })");
  CHECK(single.world.b_class_names[transfer_function(single.model, single.world, 0)] == "only");
}

TEST_CASE("alignment parameters on the worked example") {
  auto b = w1();
  auto a = estimate_alignment(b.world, b.model);
  CHECK_FALSE(a.c1.vacuous);
  CHECK_FALSE(a.c0.vacuous);
  CHECK(a.c1.value == 1);
  CHECK(a.c0.value == 0);
}

TEST_CASE("alignment edge cases: vacuous strata and a single class") {
  // Deterministic model matching G exactly, D supported on G only.
  auto b = load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a1"}, {"name": "a2", "class": "a2"}],
    "domain_b": [{"name": "b1", "class": "b1"}, {"name": "b2", "class": "b2"}],
    "consistent": [["a1", "b1"], ["a2", "b2"]],
    "joint": [{"a": "a1", "b": "b1", "mass": "1/2"}, {"a": "a2", "b": "b2", "mass": "1/2"}],
    "transfer": [
      {"a": "a1", "row": {"b1": 1, "b2": 0}},
      {"a": "a2", "row": {"b1": 0, "b2": 1}}
    ]
  })");
  auto a = estimate_alignment(b.world, b.model);
  CHECK(a.c1.value == 1);
  CHECK(a.c0.vacuous);
  CHECK(a.c0.value == 1);  // vacuous conditionals report 1 with the flag set

  auto acc = exact_accept_prob(b.world, b.model);
  CHECK(acc.given_g.value == 1);
  CHECK(acc.given_not_g.vacuous);

  // One equivalence class in B contains everything: c1 = c0 = 1.
  auto single = load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "m"}, {"name": "a2", "class": "n"}],
    "domain_b": [{"name": "b1", "class": "only"}, {"name": "b2", "class": "only"}],
    "consistent": [["a1", "b1"], ["a1", "b2"]],
    "joint": [
      {"a": "a1", "b": "b1", "mass": "1/4"}, {"a": "a1", "b": "b2", "mass": "1/4"},
      {"a": "a2", "b": "b1", "mass": "1/4"}, {"a": "a2", "b": "b2", "mass": "1/4"}
    ],
    "transfer": [
      {"a": "a1", "row": {"b1": "1/2", "b2": "1/2"}},
      {"a": "a2", "row": {"b1": "1/2", "b2": "1/2"}}
    ]
  })");
  auto s = estimate_alignment(single.world, single.model);
  CHECK(s.c1.value == 1);
  CHECK(s.c0.value == 1);
  CHECK_FALSE(s.c0.vacuous);
}

TEST_CASE("concentration parameters on the worked example") {
  auto b = w1();
  auto c = concentration_params(b.world, b.model, Rational(4, 5), Rational(1, 10));
  CHECK(c.p_c1.value == 1);
  CHECK(c.p_c2.value == 1);

  // l = 1 on a strictly mixed model: no row concentrates fully.
  auto strict = concentration_params(b.world, b.model, Rational(1), Rational(1, 10));
  CHECK(strict.p_c1.value == 0);

  // u = 0 on a strictly positive model: some non-top mass always remains.
  auto zero_u = concentration_params(b.world, b.model, Rational(4, 5), Rational(0));
  CHECK(zero_u.p_c2.value == 0);

  CHECK_THROWS_AS(concentration_params(b.world, b.model, Rational(0), Rational(1, 10)),
                  StructuralError);
  CHECK_THROWS_AS(concentration_params(b.world, b.model, Rational(1, 2), Rational(1)),
                  StructuralError);
}

TEST_CASE("theorem_bounds implements both formulas") {
  AssumptionParams<double> p;
  p.l = 0.8;
  p.u = 0.1;
  p.p_c1.value = 1;
  p.p_c2.value = 1;
  p.c1.value = 1;
  p.c0.value = 0;
  auto b = theorem_bounds(p);
  CHECK(b.a_lower == Catch::Approx(0.8));
  CHECK(b.r_upper == Catch::Approx(0.1));

  p.u = 0.05;
  p.p_c2.value = 0.9;
  p.c0.value = 0.02;
  b = theorem_bounds(p);
  CHECK(b.r_upper == Catch::Approx(0.0441 + 0.098 + 0.02));
}

TEST_CASE("exact acceptance on the worked example brackets within the bounds") {
  auto b = w1();
  auto acc = exact_accept_prob(b.world, b.model);
  CHECK(acc.given_g.value == Rational(17, 20));      // 0.85, from the enumeration script
  CHECK(acc.given_not_g.value == Rational(1, 10));   // 0.10

  auto params = measure_params(b.world, b.model, Rational(4, 5), Rational(1, 10));
  auto bounds = theorem_bounds(params);
  CHECK(bounds.a_lower == Rational(4, 5));
  CHECK(bounds.r_upper == Rational(1, 10));
  CHECK(acc.given_g.value >= bounds.a_lower);
  CHECK(acc.given_not_g.value <= bounds.r_upper);
}

TEST_CASE("monte carlo agrees with exact and is seed-deterministic") {
  auto exact = exact_accept_prob(w1().world, w1().model);
  auto dbl = to_double_bundle(w1());
  auto mc = monte_carlo_accept(dbl.world, dbl.model, 100'000, 1234);
  REQUIRE_FALSE(mc.given_g.vacuous);
  REQUIRE_FALSE(mc.given_not_g.vacuous);
  CHECK(std::abs(mc.given_g.estimate - to_double(exact.given_g.value)) <=
        4 * mc.given_g.standard_error);
  CHECK(std::abs(mc.given_not_g.estimate - to_double(exact.given_not_g.value)) <=
        4 * mc.given_not_g.standard_error);

  auto mc2 = monte_carlo_accept(dbl.world, dbl.model, 100'000, 1234);
  CHECK(mc.given_g.estimate == mc2.given_g.estimate);
  CHECK(mc.given_not_g.estimate == mc2.given_not_g.estimate);

  auto one = monte_carlo_accept(dbl.world, dbl.model, 1, 77);
  CHECK((one.given_g.estimate == 0.0 || one.given_g.estimate == 1.0));
}

TEST_CASE("monte carlo flags a vacuous stratum and omits its estimate") {
  auto b = load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a1"}],
    "domain_b": [{"name": "b1", "class": "b1"}, {"name": "b2", "class": "b2"}],
    "consistent": [["a1", "b1"]],
    "joint": [{"a": "a1", "b": "b1", "mass": 1}],
    "transfer": [{"a": "a1", "row": {"b1": "3/4", "b2": "1/4"}}]
  })");
  auto dbl2 = to_double_bundle(b);
  auto mc = monte_carlo_accept(dbl2.world, dbl2.model, 1000, 5);
  CHECK_FALSE(mc.given_g.vacuous);
  CHECK(mc.given_not_g.vacuous);  // D puts no mass outside G
}

TEST_CASE("k_amplified") {
  CHECK(k_amplified(Rational(17, 20), 1) == Rational(17, 20));
  CHECK(k_amplified(Rational(1, 2), 10) == Rational(1023, 1024));
  CHECK(to_double(k_amplified(Rational(1, 2), 10)) == Catch::Approx(0.9990234375));
  CHECK(k_amplified(Rational(0), 7) == 0);
  CHECK_THROWS_AS(k_amplified(Rational(3, 2), 2), StructuralError);
}

TEST_CASE("validate_relation finds witnesses") {
  CHECK_FALSE(validate_relation(w1().world).has_value());

  // One x consistent with two distinct classes.
  auto bad = load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a1"}],
    "domain_b": [{"name": "b1", "class": "b1"}, {"name": "b2", "class": "b2"}],
    "consistent": [["a1", "b1"], ["a1", "b2"]],
    "joint": [{"a": "a1", "b": "b1", "mass": 1}],
    "transfer": [{"a": "a1", "row": {"b1": "1/2", "b2": "1/2"}}]
  })");
  auto v = validate_relation(bad.world);
  REQUIRE(v.has_value());
  CHECK(v->property == "at-most-one-class");

  // Substitution closure: b1 and b2 share a class but only one pairs with a1.
  auto bad2 = load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a1"}],
    "domain_b": [{"name": "b1", "class": "c"}, {"name": "b2", "class": "c"}],
    "consistent": [["a1", "b1"]],
    "joint": [{"a": "a1", "b": "b1", "mass": 1}],
    "transfer": [{"a": "a1", "row": {"b1": "1/2", "b2": "1/2"}}]
  })");
  v = validate_relation(bad2.world);
  REQUIRE(v.has_value());
  CHECK(v->property == "substitution-closure");
}

TEST_CASE("a hairline perturbation of an exact tie resolves under rational arithmetic") {
  // An exact tie is not transfer-rational; nudging one mass by 10^-12 must
  // flip the verdict, which only exact comparison can see reliably.
  auto tied = load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a"}],
    "domain_b": [{"name": "b1", "class": "c1"}, {"name": "b2", "class": "c2"}],
    "consistent": [["a1", "b1"]],
    "joint": [{"a": "a1", "b": "b1", "mass": 1}],
    "transfer": [{"a": "a1", "row": {"b1": "1/2", "b2": "1/2"}}]
  })");
  CHECK_FALSE(is_transfer_rational(tied.model, tied.world).ok);

  auto nudged = tied;
  Rational eps(1, 1'000'000'000'000LL);
  nudged.model.rows[0][0] = Rational(1, 2) + eps;
  nudged.model.rows[0][1] = Rational(1, 2) - eps;
  CHECK(is_transfer_rational(nudged.model, nudged.world).ok);
  CHECK(nudged.world.b_class_names[transfer_function(nudged.model, nudged.world, 0)] == "c1");
}

TEST_CASE("random worlds validate by construction and are transfer-rational") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto rw = generate_random_world<Rational>(s);
    CHECK_FALSE(validate_relation(rw.bundle.world).has_value());
    CHECK(is_transfer_rational(rw.bundle.model, rw.bundle.world).ok);
  }
}

TEST_CASE("the acceptance bounds hold exactly on randomized worlds") {
  int checked_a = 0, checked_r = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto rw = generate_random_world<Rational>(s * 7919 + 13);
    const auto& w = rw.bundle.world;
    const auto& m = rw.bundle.model;
    auto params = measure_params(w, m, rw.l, rw.u);
    auto bounds = theorem_bounds(params);
    auto acc = exact_accept_prob(w, m);
    if (!acc.given_g.vacuous) {
      CHECK(acc.given_g.value >= bounds.a_lower);
      ++checked_a;
    }
    if (!acc.given_not_g.vacuous) {
      CHECK(acc.given_not_g.value <= bounds.r_upper);
      ++checked_r;
    }
  }
  CHECK(checked_a > 30);
  CHECK(checked_r > 30);
}

TEST_CASE("transfer_function is invariant under uniform row scaling") {
  for (std::uint64_t s = 100; s < 120; ++s) {
    auto rw = generate_random_world<Rational>(s);
    auto scaled = rw.bundle.model;
    // Scale raw weights uniformly; renormalization gives back the same rows,
    // so the argmax class cannot move.
    for (auto& row : scaled.rows) {
      Rational total(0);
      for (auto& v : row) {
        v *= Rational(7, 3);
        total += v;
      }
      for (auto& v : row) v /= total;
    }
    for (std::size_t x = 0; x < rw.bundle.world.a_size(); ++x)
      CHECK(transfer_function(scaled, rw.bundle.world, static_cast<int>(x)) ==
            transfer_function(rw.bundle.model, rw.bundle.world, static_cast<int>(x)));
  }
}

TEST_CASE("world files parse strictly and round-trip") {
  auto b = w1();
  auto j = world_to_json(b);
  auto again = parse_world<Rational>(j);
  CHECK(again.world.joint == b.world.joint);
  CHECK(again.model.rows == b.model.rows);
  CHECK(again.world.in_g == b.world.in_g);

  CHECK_THROWS_AS(load_world_text<Rational>(R"({"schema_version": 2})"), StructuralError);
  CHECK_THROWS_AS(load_world_text<Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a1"}],
    "domain_b": [{"name": "b1", "class": "b1"}],
    "consistent": [],
    "joint": [{"a": "a1", "b": "b1", "mass": "1/2"}],
    "transfer": [{"a": "a1", "row": {"b1": 1}}]
  })"),
                  StructuralError);  // joint does not sum to 1
}
