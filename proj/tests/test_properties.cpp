#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "dbf/constructions.hpp"
#include "dbf/properties.hpp"

using namespace dbf;

namespace {

// Independent difference-balance oracle: recomputes f(ax) - f(x) with
// element-level field arithmetic and a map, sharing no counting code with
// the checker's index-table scan.
bool db_oracle(const FunctionTable& f) {
  const FieldSpec& spec = f.field();
  const int64_t n = spec.order();
  const int64_t fiber = spec.field_order() / spec.subfield_order();
  for (int64_t j = 1; j < n; ++j) {
    std::map<int32_t, int64_t> counts;
    for (int64_t i = 0; i < n; ++i) {
      FieldElement diff = f.value((i + j) % n) - f.value(i);
      ++counts[diff.log()];
    }
    if (counts[kZeroLog] != fiber - 1) return false;
    for (const auto& [log, c] : counts)
      if (log != kZeroLog && c != fiber) return false;
    if (static_cast<int64_t>(counts.size()) != spec.subfield_order()) return false;
  }
  return true;
}

FunctionTable constant_table(std::shared_ptr<const FieldSpec> spec, uint16_t v) {
  return FunctionTable(spec, std::vector<uint16_t>(static_cast<size_t>(spec->order()), v));
}

}  // namespace

TEST_CASE("value counts of the trace") {
  auto spec = FieldSpec::build(3, 1, 2);
  auto f = trace_function(spec);
  CHECK(value_counts(f) == std::vector<int64_t>{2, 3, 3});
  CHECK(value_counts(constant_table(spec, 0)) == std::vector<int64_t>{8, 0, 0});
}

TEST_CASE("value counts of the Lin function") {
  auto f = lin_function(FieldSpec::build(3, 1, 3));
  auto counts = value_counts(f);
  std::multiset<int64_t> bag(counts.begin(), counts.end());
  CHECK(bag == std::multiset<int64_t>{8, 9, 9});
}

TEST_CASE("balance checker") {
  auto spec = FieldSpec::build(3, 1, 2);
  auto f = trace_function(spec);
  CHECK(is_balanced(f).verdict);

  auto r = is_balanced(constant_table(spec, 0));
  CHECK_FALSE(r.verdict);
  CHECK(r.witness.at("counts") == nlohmann::json({8, 0, 0}));

  // shifting moves the deficient fiber away from zero
  CHECK_FALSE(is_balanced(affine_shift(f, 1)).verdict);
}

TEST_CASE("difference balance: positives") {
  for (auto [p, m, n] : {std::tuple{3L, 1L, 2L}, {3L, 1L, 3L}, {5L, 1L, 2L}, {3L, 2L, 2L}}) {
    auto f = trace_function(FieldSpec::build(p, m, n));
    CHECK(is_difference_balanced(f).verdict);
  }
  CHECK(is_difference_balanced(lin_function(FieldSpec::build(3, 1, 3))).verdict);
}

TEST_CASE("difference balance: alternating-value function fails") {
  auto spec = FieldSpec::build(3, 1, 2);
  std::vector<uint16_t> v(8);
  for (int i = 0; i < 8; ++i) v[static_cast<size_t>(i)] = (i % 2 == 0) ? 1 : 0;
  auto r = is_difference_balanced(FunctionTable(spec, v));
  CHECK_FALSE(r.verdict);
  // the witness is a re-checkable counterexample
  int32_t a = r.witness.at("a_log").get<int32_t>();
  CHECK(a == 1);  // shifts scanned by increasing exponent
  std::vector<int64_t> recount(3, 0);
  for (int i = 0; i < 8; ++i)
    ++recount[static_cast<size_t>(spec->ssub(v[static_cast<size_t>((i + a) % 8)], v[static_cast<size_t>(i)]))];
  CHECK(recount == r.witness.at("counts").get<std::vector<int64_t>>());
}

TEST_CASE("difference balance checker agrees with an independent oracle") {
  auto spec = FieldSpec::build(3, 1, 2);
  std::mt19937 rng(2024);
  int positives = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<uint16_t> v(8);
    for (auto& x : v) x = static_cast<uint16_t>(rng() % 3);
    FunctionTable f(spec, v);
    bool got = is_difference_balanced(f).verdict;
    CHECK(got == db_oracle(f));
    positives += got;
  }
  auto f = trace_function(spec);
  CHECK(is_difference_balanced(f).verdict == db_oracle(f));
}

TEST_CASE("homogeneity degree") {
  auto spec3 = FieldSpec::build(3, 1, 2);
  auto r = homogeneity_degree(trace_function(spec3));
  REQUIRE(r.verdict);
  CHECK(r.witness.at("d") == 1);

  // q = 3 admits only d = 1; a homogeneous-but-shifted function has no degree
  CHECK_FALSE(homogeneity_degree(affine_shift(trace_function(spec3), 1)).verdict);

  auto spec9 = FieldSpec::build(3, 2, 2);
  auto r9 = homogeneity_degree(trace_function(spec9));
  REQUIRE(r9.verdict);
  CHECK(r9.witness.at("d") == 1);

  // d-homogeneity for composed powers: f(x) = tr(x)^d has degree d
  {
    auto spec5 = FieldSpec::build(5, 1, 2);
    auto tr = trace_function(spec5);
    std::vector<uint16_t> v;
    for (int64_t i = 0; i < tr.size(); ++i)
      v.push_back(static_cast<uint16_t>(spec5->spow(tr.value_index(i), 3)));
    auto rd = homogeneity_degree(FunctionTable(spec5, v));
    REQUIRE(rd.verdict);
    CHECK(rd.witness.at("d") == 3);
  }
}

TEST_CASE("two-tuple balance of the trace") {
  auto spec = FieldSpec::build(3, 1, 3);
  auto f = trace_function(spec);
  auto [r, profile] = is_two_tuple_balanced(f);
  REQUIRE(r.verdict);

  // mu_a = a for the trace (degree 1)
  for (int32_t a = 1; a < 3; ++a) CHECK(profile.mu_by_subfield_index[static_cast<size_t>(a)] == a);

  // outside GF(q): N_00 = q^(n-2) - 1 = 2, everything else 3
  auto counts = profile.sampled_counts.begin().value().get<std::vector<int64_t>>();
  bool has_outside = false;
  for (auto& [key, val] : profile.sampled_counts.items()) {
    if (key.rfind("outside", 0) == 0) {
      auto c = val.get<std::vector<int64_t>>();
      CHECK(c[0] == 2);
      for (size_t i = 1; i < c.size(); ++i) CHECK(c[i] == 3);
      has_outside = true;
    }
  }
  CHECK(has_outside);
  (void)counts;
}

TEST_CASE("two-tuple balance equivalence with db+homogeneity") {
  // over a small corpus the checkers agree pairwise
  auto spec = FieldSpec::build(3, 1, 2);
  std::mt19937 rng(555);
  std::vector<FunctionTable> corpus;
  corpus.push_back(trace_function(spec));
  corpus.push_back(affine_shift(trace_function(spec), 1));
  corpus.push_back(constant_table(spec, 0));
  corpus.push_back(constant_table(spec, 1));
  for (int t = 0; t < 20; ++t) {
    std::vector<uint16_t> v(8);
    for (auto& x : v) x = static_cast<uint16_t>(rng() % 3);
    corpus.emplace_back(spec, v);
  }
  for (const auto& f : corpus) {
    bool lhs = is_two_tuple_balanced(f).first.verdict;
    bool rhs = is_difference_balanced(f).verdict && homogeneity_degree(f).verdict;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("two-tuple balance fails on a difference balanced but inhomogeneous table") {
  // a shifted trace over GF(81) -> GF(9) is difference balanced yet has no
  // scalar mu with f(ax) = mu f(x); the witness names the failing a
  auto spec = FieldSpec::build(3, 2, 2);
  auto f = affine_shift(trace_function(spec), 1);
  REQUIRE(is_difference_balanced(f).verdict);
  auto [r, profile] = is_two_tuple_balanced(f);
  CHECK_FALSE(r.verdict);
  REQUIRE(r.witness.contains("a_log"));
  CHECK(r.witness.at("a_in_subfield") == true);
}

TEST_CASE("mu map is multiplicative") {
  auto spec = FieldSpec::build(5, 1, 2);
  auto [r, profile] = is_two_tuple_balanced(trace_function(spec));
  REQUIRE(r.verdict);
  const int64_t q = spec->subfield_order();
  for (int32_t a = 1; a < q; ++a)
    for (int32_t b = 1; b < q; ++b)
      CHECK(profile.mu_by_subfield_index[static_cast<size_t>(spec->smul(a, b))] ==
            spec->smul(profile.mu_by_subfield_index[static_cast<size_t>(a)],
                       profile.mu_by_subfield_index[static_cast<size_t>(b)]));
}

TEST_CASE("frobenius-composed trace has degree p and stays difference balanced") {
  // f = tr(x)^3 over GF(81) -> GF(9): cubing is the Frobenius of GF(9), so
  // derivative counts are permuted, and f(ax) = a^3 f(x)
  auto spec = FieldSpec::build(3, 2, 2);
  auto tr = trace_function(spec);
  std::vector<uint16_t> v;
  for (int64_t i = 0; i < tr.size(); ++i)
    v.push_back(static_cast<uint16_t>(spec->spow(tr.value_index(i), 3)));
  FunctionTable f(spec, v);

  CHECK(is_difference_balanced(f).verdict);
  CHECK(is_balanced(f).verdict);
  CHECK(homogeneity_degree_value(f) == 3);

  auto [r, profile] = is_two_tuple_balanced(f);
  CHECK(r.verdict);
  for (int32_t a = 1; a < 9; ++a)
    CHECK(profile.mu_by_subfield_index[static_cast<size_t>(a)] == spec->spow(a, 3));
}

TEST_CASE("balanced shift") {
  auto spec = FieldSpec::build(3, 1, 2);
  auto f = trace_function(spec);

  auto r0 = balanced_shift(f);
  REQUIRE(r0.verdict);
  CHECK(r0.witness.at("b_index") == 0);

  auto r1 = balanced_shift(affine_shift(f, 1));
  REQUIRE(r1.verdict);
  CHECK(r1.witness.at("b_index") == 1);
  CHECK(r1.witness.at("b_log") == 0);

  CHECK_FALSE(balanced_shift(constant_table(spec, 0)).verdict);
}

TEST_CASE("difference balance is invariant under shift and rescale") {
  auto spec = FieldSpec::build(3, 1, 3);
  auto f = lin_function(spec);
  for (int32_t b = 0; b < 3; ++b) CHECK(is_difference_balanced(affine_shift(f, b)).verdict);
  for (int64_t c : {1, 2, 5, 11}) CHECK(is_difference_balanced(rescale_argument(f, c)).verdict);
}

TEST_CASE("counts always sum to q^n - 1") {
  auto spec = FieldSpec::build(5, 1, 2);
  std::mt19937 rng(1);
  for (int t = 0; t < 10; ++t) {
    std::vector<uint16_t> v(24);
    for (auto& x : v) x = static_cast<uint16_t>(rng() % 5);
    auto counts = value_counts(FunctionTable(spec, v));
    int64_t total = 0;
    for (int64_t c : counts) total += c;
    CHECK(total == 24);
  }
}
