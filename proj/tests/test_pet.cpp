#include <doctest.h>

#include <algorithm>
#include <json.hpp>
#include <random>

#include "petlab/errors.hpp"
#include "petlab/pet.hpp"
#include "petlab/poly.hpp"

using namespace petlab;

namespace {

std::vector<Poly> polys(std::initializer_list<const char*> texts) {
  std::vector<Poly> out;
  for (const char* t : texts) out.push_back(parse_poly(t));
  return out;
}

PolyFamily family_of(std::initializer_list<const char*> texts) {
  PolyFamily f;
  f.active = polys(texts);
  f.normalize();
  return f;
}

}  // namespace

TEST_CASE("type vectors and their order") {
  const PolyFamily f = family_of({"m^2", "m^2 + m", "2*m^2", "m", "3*m", "h1"});
  CHECK(family_type(f, 3) == TypeVector{2, 2, 0});
  CHECK(type_less({5, 0}, {0, 1}));
  CHECK_FALSE(type_less({0, 1}, {5, 0}));
  CHECK(type_less({1, 1, 0}, {0, 2}));
  CHECK_FALSE(type_less({1, 2}, {1, 2}));
  CHECK(is_zero_type({0, 0}));
  CHECK_FALSE(is_zero_type({0, 1}));
}

TEST_CASE("vdC operation by hand") {
  const PolyFamily f = family_of({"m^2", "3*m"});
  const PolyFamily g = vdc_operation(f, parse_poly("3*m"), 1);
  // S_h A - q = {(m+h1)^2 - 3m, 3h1}, A - q = {m^2 - 3m, 0}
  PolyFamily expect;
  expect.active = polys({"m^2 + 2*m*h1 + h1^2 - 3*m", "3*h1", "m^2 - 3*m", "0"});
  expect.step = 1;
  expect.normalize();
  CHECK(g.active == expect.active);
  CHECK(g.constants == expect.constants);
  CHECK(g.constants.size() == 2);
  CHECK(g.retired.empty());
  CHECK_THROWS_AS(vdc_operation(g, parse_poly("3*h1"), 2), InvalidArgument);
  CHECK_THROWS_AS(vdc_operation(f, parse_poly("m"), 1), InvalidArgument);
}

TEST_CASE("constants move to the retired list shifted by q") {
  const PolyFamily f = family_of({"m^2", "h1"});
  const PolyFamily g = vdc_operation(f, parse_poly("m^2"), 2);
  CHECK(g.retired == polys({"-m^2 + h1"}));
}

TEST_CASE("toy trace for m^2") {
  const PetTrace t = pet_run(parse_poly_system("m^2"));
  CHECK(t.t == 2);
  CHECK(t.d == 3);
  CHECK(t.group_multiplier == 7);
  REQUIRE(t.steps.size() == 2);
  CHECK(t.initial_type == TypeVector{0, 1});
  CHECK(t.steps[0].type_after == TypeVector{1, 0});
  CHECK(t.steps[1].type_after == TypeVector{0, 0});
  CHECK(t.steps[0].q == parse_poly("m^2"));
  CHECK(t.steps[0].family.active == polys({"0", "2*m*h1 + h1^2"}));
  CHECK(t.steps[1].family.active == polys({"0", "2*h1*h2"}));
  CHECK(t.steps[1].family.retired == polys({"-2*m*h1 - h1^2"}));
  for (const auto& s : t.steps) CHECK(s.claims.all());
}

TEST_CASE("W rescaling keeps the toy trace shape") {
  PetOptions o;
  o.W = 2;
  const PetTrace t = pet_run(parse_poly_system("m^2"), o);
  CHECK(t.rescaled == polys({"2*m^2"}));
  CHECK(t.d == 3);
  CHECK(t.group_multiplier == 7);
  CHECK(t.steps[1].family.active == polys({"0", "4*h1*h2"}));
}

TEST_CASE("each step removes one linear class") {
  const PetTrace one = pet_run(parse_poly_system("3*m"));
  CHECK(one.t == 1);
  CHECK(one.d == 2);
  CHECK(one.group_multiplier == 5);
  const PetTrace t = pet_run(parse_poly_system("m;2*m;5*m"));
  CHECK(t.t == 3);
  CHECK(t.initial_type == TypeVector{3});
  CHECK(t.steps[0].type_after == TypeVector{2});
  CHECK(t.steps[1].type_after == TypeVector{1});
  CHECK(t.group_multiplier == 9);
}

TEST_CASE("types decrease and claims hold on random systems") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> k_dist(1, 2), deg(1, 2), coeff(-3, 3);
  PetOptions o;
  o.max_family = 1u << 12;
  int done = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Poly> sys;
    const int k = k_dist(rng);
    while (static_cast<int>(sys.size()) < k) {
      Poly p;
      const int d = deg(rng);
      for (int e = 1; e <= d; ++e) p.add_term(Monomial{static_cast<std::uint16_t>(e)}, coeff(rng));
      if (p.degree_in(0) != d) continue;
      if (std::find(sys.begin(), sys.end(), p) != sys.end()) continue;
      sys.push_back(p);
    }
    const PetTrace t = pet_run(sys, o);
    TypeVector prev = t.initial_type;
    for (const auto& s : t.steps) {
      CHECK(type_less(s.type_after, prev));
      CHECK(s.claims.all());
      prev = s.type_after;
    }
    CHECK(is_zero_type(prev));
    CHECK(t.d == t.t + 1);
    ++done;
  }
  CHECK(done == 30);
}

TEST_CASE("claim checks flag violations") {
  PolyFamily f;
  f.active = polys({"m^2", "m^2 + 3"});
  f.normalize();
  CHECK_FALSE(check_claims(f).c1);
  PolyFamily g;
  g.step = 1;
  g.active = polys({"m^2"});
  g.retired = polys({"h1"});
  g.normalize();
  CHECK_FALSE(check_claims(g).c3);
  PolyFamily h;
  h.step = 1;
  h.active = polys({"m^2 + h1"});
  h.retired = polys({"m^2"});
  h.normalize();
  CHECK_FALSE(check_claims(h).c2);
}

TEST_CASE("pet_run input errors and budgets") {
  CHECK_THROWS_AS(pet_run({}), InvalidArgument);
  CHECK_THROWS_AS(pet_run(polys({"m", "m"})), InvalidArgument);
  CHECK_THROWS_AS(pet_run(polys({"m*h1"})), InvalidArgument);
  CHECK_THROWS_AS(pet_run({Poly()}), InvalidArgument);
  PetOptions o;
  o.max_steps = 1;
  CHECK_THROWS_AS(pet_run(parse_poly_system("m^2"), o), ResourceError);
  PetOptions small;
  small.max_family = 4;
  CHECK_THROWS_AS(pet_run(parse_poly_system("m^3;2*m^3;m^2"), small), ResourceError);
}

TEST_CASE("trace JSON is deterministic and complete") {
  PetOptions o;
  o.W = 2;
  const std::string a = pet_trace_json(pet_run(parse_poly_system("m^2"), o));
  const std::string b = pet_trace_json(pet_run(parse_poly_system("m^2"), o));
  CHECK(a == b);
  const auto j = nlohmann::json::parse(a);
  CHECK(j["d"] == 3);
  CHECK(j["group_multiplier"] == 7);
  CHECK(j["t"] == 2);
  CHECK(j["steps"].size() == 2);
  CHECK(j["steps"][0]["claims"]["c1"] == true);
}
