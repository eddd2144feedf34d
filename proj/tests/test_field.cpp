#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "dbf/field.hpp"

using dbf::FieldElement;
using dbf::FieldSpec;
using dbf::kZeroLog;

namespace {

// Independent oracle: enumerate monic degree-2 polynomials over GF(3) in
// lexicographic coefficient order (c0 first) and return the first primitive
// one, testing primitivity with a hand-rolled 2x2 companion-matrix power
// sequence. Shares no code with the library.
std::vector<int32_t> smallest_primitive_quadratic_gf3() {
  for (int c0 = 0; c0 < 3; ++c0) {
    for (int c1 = 0; c1 < 3; ++c1) {
      // x^2 + c1 x + c0; roots in GF(3)?
      bool has_root = false;
      for (int r = 0; r < 3; ++r)
        if ((r * r + c1 * r + c0) % 3 == 0) has_root = true;
      if (has_root) continue;
      // order of x in GF(3)[x]/(f): iterate (a + b x) * x = -c0 b + (a - c1 b) x
      int a = 0, b = 1;  // start at x
      int ord = 1;
      while (!(a == 1 && b == 0)) {
        int na = (3 - c0 % 3) * b % 3;
        int nb = ((a + (3 - c1 % 3) * b) % 3);
        a = na;
        b = nb;
        ++ord;
      }
      if (ord == 8) return {static_cast<int32_t>(c0), static_cast<int32_t>(c1), 1};
    }
  }
  return {};
}

}  // namespace

TEST_CASE("default modulus is the lexicographically smallest primitive polynomial") {
  auto expected = smallest_primitive_quadratic_gf3();
  REQUIRE(expected == std::vector<int32_t>{2, 1, 1});  // x^2 + x + 2, frozen from the oracle
  auto spec = FieldSpec::build(3, 1, 2);
  CHECK(spec->modulus() == expected);
}

TEST_CASE("primitive element has full order") {
  auto spec = FieldSpec::build(3, 1, 2);
  CHECK(spec->theta().pow(8) == spec->one());
  for (int e = 1; e < 8; ++e) CHECK(spec->theta().pow(e) != spec->one());
}

TEST_CASE("build rejects invalid parameters") {
  CHECK_THROWS_AS(FieldSpec::build(4, 1, 2), std::invalid_argument);   // not prime
  CHECK_THROWS_AS(FieldSpec::build(2, 1, 2), std::invalid_argument);   // even
  CHECK_THROWS_AS(FieldSpec::build(9, 1, 2), std::invalid_argument);   // not prime
  CHECK_THROWS_AS(FieldSpec::build(3, 0, 2), std::invalid_argument);   // m < 1
  CHECK_THROWS_AS(FieldSpec::build(3, 1, 1), std::invalid_argument);   // n < 2
  CHECK_THROWS_AS(FieldSpec::build(3, 1, 16), std::invalid_argument);  // size guard
}

TEST_CASE("supplied modulus is validated") {
  // x^2 + 2 over GF(5): no root (squares mod 5 are 0,1,4 and -2 = 3), so
  // irreducible; x^2 = -2 gives x order 8 < 24, not primitive
  CHECK_THROWS_WITH(FieldSpec::build(5, 1, 2, std::vector<int32_t>{2, 0, 1}),
                    Catch::Matchers::ContainsSubstring("not primitive"));
  // x^2 + 1 = (x - 2)(x + 2) over GF(5)
  CHECK_THROWS_WITH(FieldSpec::build(5, 1, 2, std::vector<int32_t>{1, 0, 1}),
                    Catch::Matchers::ContainsSubstring("not irreducible"));
  // x^2 + 2x + 1 = (x+1)^2 over GF(3) is reducible
  CHECK_THROWS_WITH(FieldSpec::build(3, 1, 2, std::vector<int32_t>{1, 2, 1}),
                    Catch::Matchers::ContainsSubstring("not irreducible"));
  // non-monic
  CHECK_THROWS_AS(FieldSpec::build(3, 1, 2, std::vector<int32_t>{1, 1, 2}), std::invalid_argument);
  // valid alternative primitive polynomial is accepted: x^2 + 2x + 2? roots:
  // 0->2, 1->5=2, 2->4+4+2=10=1, no roots; accepted iff primitive
  auto spec = FieldSpec::build(3, 1, 2, std::vector<int32_t>{2, 2, 1});
  CHECK(spec->modulus() == std::vector<int32_t>{2, 2, 1});
}

TEST_CASE("field axioms hold on random elements") {
  auto spec = FieldSpec::build(3, 2, 2);  // GF(81) with subfield GF(9)
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int32_t> dist(-1, static_cast<int32_t>(spec->order()) - 1);
  auto rand_elem = [&]() {
    int32_t l = dist(rng);
    return l < 0 ? spec->zero() : spec->from_log(l);
  };
  for (int trial = 0; trial < 200; ++trial) {
    FieldElement a = rand_elem(), b = rand_elem(), c = rand_elem();
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == spec->zero());
    CHECK(a + spec->zero() == a);
    CHECK(a * spec->one() == a);
    if (!a.is_zero()) CHECK(a * a.inverse() == spec->one());
  }
}

TEST_CASE("multiplication is exponent addition") {
  auto spec = FieldSpec::build(3, 1, 2);
  CHECK(spec->from_log(2) * spec->from_log(3) == spec->from_log(5));
  CHECK(spec->from_log(5).inverse() == spec->from_log(8 - 5));
  CHECK(spec->from_log(5).pow(-1) == spec->from_log(3));
  CHECK(spec->from_log(3).pow(0) == spec->one());
  CHECK(spec->zero().pow(0) == spec->one());
  CHECK(spec->zero().pow(4).is_zero());
  CHECK_THROWS_AS(spec->zero().inverse(), std::invalid_argument);
  CHECK_THROWS_AS(spec->zero().pow(-2), std::invalid_argument);
}

TEST_CASE("mixed specs are rejected") {
  auto s1 = FieldSpec::build(3, 1, 2);
  auto s2 = FieldSpec::build(3, 1, 2);
  CHECK_THROWS_AS(s1->one() + s2->one(), std::invalid_argument);
}

TEST_CASE("relative trace lands in the subfield and is additive") {
  auto spec = FieldSpec::build(3, 2, 2);
  std::mt19937 rng(99);
  std::uniform_int_distribution<int32_t> dist(0, static_cast<int32_t>(spec->order()) - 1);
  CHECK(spec->rel_trace(spec->zero()).is_zero());
  for (int trial = 0; trial < 100; ++trial) {
    FieldElement x = spec->from_log(dist(rng)), y = spec->from_log(dist(rng));
    FieldElement tx = spec->rel_trace(x);
    CHECK(spec->subfield_index_of_log(tx.log()) >= 0);
    CHECK(tx.pow(9) == tx);  // fixed by y -> y^q
    CHECK(spec->rel_trace(x + y) == spec->rel_trace(x) + spec->rel_trace(y));
  }
}

TEST_CASE("relative trace is GF(q)-linear") {
  auto spec = FieldSpec::build(3, 2, 2);
  std::mt19937 rng(7);
  std::uniform_int_distribution<int32_t> dist(0, static_cast<int32_t>(spec->order()) - 1);
  for (int trial = 0; trial < 100; ++trial) {
    FieldElement x = spec->from_log(dist(rng));
    for (const FieldElement& c : spec->subfield_elements())
      CHECK(spec->rel_trace(c * x) == c * spec->rel_trace(x));
  }
}

TEST_CASE("trace zero fiber has q^(n-1)-1 nonzero points") {
  auto spec = FieldSpec::build(3, 1, 2);
  int count = 0;
  for (int e = 0; e < 8; ++e)
    if (spec->rel_trace(spec->from_log(e)).is_zero()) ++count;
  CHECK(count == 2);
}

TEST_CASE("subfield elements form GF(q)") {
  auto spec = FieldSpec::build(3, 1, 2);
  auto sub = spec->subfield_elements();
  REQUIRE(sub.size() == 3);
  CHECK(sub[0].is_zero());
  CHECK(sub[1].log() == 0);
  CHECK(sub[2].log() == 4);  // stride (9-1)/(3-1) = 4

  // closure under + and * by direct lookup
  for (const auto& a : sub)
    for (const auto& b : sub) {
      CHECK(spec->subfield_index_of_log((a + b).log()) >= 0);
      CHECK(spec->subfield_index_of_log((a * b).log()) >= 0);
    }
  // every nonzero member satisfies e^(q-1) = 1, and Frobenius fixes members
  for (const auto& a : sub) {
    if (!a.is_zero()) CHECK(a.pow(2) == spec->one());
    CHECK(a.pow(3) == a);
  }
}

TEST_CASE("subfield index arithmetic matches element arithmetic") {
  auto spec = FieldSpec::build(3, 2, 2);
  const int64_t q = spec->subfield_order();
  for (int32_t i = 0; i < q; ++i) {
    for (int32_t j = 0; j < q; ++j) {
      FieldElement a = spec->subfield_element(i), b = spec->subfield_element(j);
      CHECK(spec->subfield_element(spec->sadd(i, j)) == a + b);
      CHECK(spec->subfield_element(spec->ssub(i, j)) == a - b);
      CHECK(spec->subfield_element(spec->smul(i, j)) == a * b);
    }
    CHECK(spec->subfield_element(spec->sneg(i)) == -spec->subfield_element(i));
  }
}

TEST_CASE("build is deterministic") {
  auto s1 = FieldSpec::build(5, 1, 2);
  auto s2 = FieldSpec::build(5, 1, 2);
  CHECK(s1->modulus() == s2->modulus());
  CHECK(s1->fingerprint() == s2->fingerprint());
  for (int e = 0; e < 24; ++e) CHECK(s1->packed_of_log(e) == s2->packed_of_log(e));
}

TEST_CASE("json round trip is exact") {
  auto spec = FieldSpec::build(3, 1, 2);
  auto j = spec->to_json();
  CHECK(j == nlohmann::json::parse(R"({"p":3,"m":1,"n":2,"modulus":[2,1,1]})"));
  auto spec2 = FieldSpec::from_json(j);
  CHECK(spec2->to_json().dump() == j.dump());
  CHECK(spec->describes_same_field(*spec2));
}

TEST_CASE("prime subfield residues") {
  auto spec = FieldSpec::build(3, 2, 2);
  CHECK(spec->subfield_index_of_residue(0) == 0);
  // residue r maps to the subfield element equal to 1 + ... + 1 (r times)
  FieldElement one = spec->one();
  FieldElement two = one + one;
  CHECK(spec->subfield_element(spec->subfield_index_of_residue(2)) == two);
  // absolute trace of GF(q) elements lies in [0, p)
  for (int32_t i = 0; i < spec->subfield_order(); ++i) {
    int32_t t = spec->strace_p(i);
    CHECK(t >= 0);
    CHECK(t < 3);
  }
  // tr_{q/p} is additive
  for (int32_t i = 0; i < spec->subfield_order(); ++i)
    for (int32_t j = 0; j < spec->subfield_order(); ++j)
      CHECK(spec->strace_p(spec->sadd(i, j)) == (spec->strace_p(i) + spec->strace_p(j)) % 3);
}
