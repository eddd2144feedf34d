#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dbf/constructions.hpp"
#include "dbf/sequences.hpp"

using namespace dbf;

TEST_CASE("to_sequence basics") {
  auto spec = FieldSpec::build(3, 1, 2);
  auto f = trace_function(spec);
  auto s = to_sequence(f);
  CHECK(s.p == 3);
  CHECK(s.period == 8);
  for (uint8_t sym : s.symbols) CHECK(sym < 3);

  // symbol multiset matches the value counts
  std::vector<int64_t> sym_counts(3, 0);
  for (uint8_t sym : s.symbols) ++sym_counts[sym];
  auto vc = value_counts(f);
  std::multiset<int64_t> a(sym_counts.begin(), sym_counts.end()), b(vc.begin(), vc.end());
  CHECK(a == b);

  // shifting the function shifts the symbols pointwise
  auto s1 = to_sequence(affine_shift(f, 1));
  int64_t delta = spec->strace_p(1);
  for (int64_t i = 0; i < s.period; ++i)
    CHECK(s1.symbols[static_cast<size_t>(i)] == (s.symbols[static_cast<size_t>(i)] + delta) % 3);

  CHECK_THROWS_AS(to_sequence(trace_function(FieldSpec::build(3, 2, 2))), std::invalid_argument);
}

TEST_CASE("autocorrelation at shift zero is the period") {
  auto s = to_sequence(trace_function(FieldSpec::build(3, 1, 2)));
  auto ac = autocorrelation(s, 0);
  CHECK(ac.counts[0] == 8);
  CHECK(ac.value.real() == Catch::Approx(8.0));
  CHECK(ac.value.imag() == Catch::Approx(0.0));
  CHECK_THROWS_AS(autocorrelation(s, 8), std::invalid_argument);
}

TEST_CASE("m-sequence has ideal two-level autocorrelation") {
  auto s = to_sequence(trace_function(FieldSpec::build(3, 1, 2)));
  for (int64_t tau = 1; tau < s.period; ++tau) {
    auto ac = autocorrelation(s, tau);
    CHECK(ac.counts == std::vector<int64_t>{2, 3, 3});
    CHECK(ac.value.real() == Catch::Approx(-1.0).margin(1e-9));
    CHECK(ac.value.imag() == Catch::Approx(0.0).margin(1e-9));
  }
  CHECK(is_ideal_two_level(s).verdict);
}

TEST_CASE("constant sequence autocorrelation equals the period") {
  PSequence s{3, 8, std::vector<uint8_t>(8, 1)};
  auto ac = autocorrelation(s, 3);
  CHECK(ac.counts[0] == 8);
  CHECK_FALSE(is_ideal_two_level(s).verdict);
}

TEST_CASE("Lin sequences are ideal") {
  for (int64_t n : {3, 5}) {
    auto s = to_sequence(lin_function(FieldSpec::build(3, 1, n)));
    auto r = is_ideal_two_level(s);
    CHECK(r.verdict);
    for (int64_t tau = 1; tau < s.period; ++tau) {
      auto ac = autocorrelation(s, tau);
      int64_t fiber = (s.period + 1) / 3;
      CHECK(ac.counts[0] == fiber - 1);
      CHECK(ac.counts[1] == fiber);
      CHECK(ac.counts[2] == fiber);
    }
  }
}

TEST_CASE("difference balance is ideal autocorrelation, exactly") {
  auto spec = FieldSpec::build(3, 1, 2);
  std::mt19937 rng(4242);
  int db_seen = 0;
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<uint16_t> v(8);
    for (auto& x : v) x = static_cast<uint16_t>(rng() % 3);
    FunctionTable f(spec, v);
    bool db = is_difference_balanced(f).verdict;
    bool ideal = is_ideal_two_level(to_sequence(f)).verdict;
    CHECK(db == ideal);
    db_seen += db;
  }
  // positives too
  CHECK(is_ideal_two_level(to_sequence(trace_function(spec))).verdict);
  CHECK(is_difference_balanced(trace_function(spec)).verdict);
}

TEST_CASE("count vectors sum to the period and obey conjugate symmetry") {
  auto s = to_sequence(lin_function(FieldSpec::build(3, 1, 3)));
  for (int64_t tau = 1; tau < s.period; ++tau) {
    auto a = autocorrelation(s, tau);
    auto b = autocorrelation(s, s.period - tau);
    int64_t total = 0;
    for (int64_t c : a.counts) total += c;
    CHECK(total == s.period);
    // N_c(tau) = N_{-c}(period - tau)
    for (int64_t c = 0; c < s.p; ++c)
      CHECK(a.counts[static_cast<size_t>(c)] == b.counts[static_cast<size_t>((s.p - c) % s.p)]);
  }
}

TEST_CASE("shift-sum identity on exact counts") {
  // sum over nonzero shifts of C(tau) equals |sum_i zeta^(s_i)|^2 - C(0);
  // verified on aggregated integer count vectors
  auto check_sequence = [](const PSequence& s) {
    std::vector<int64_t> aggregated(static_cast<size_t>(s.p), 0);
    for (int64_t tau = 1; tau < s.period; ++tau) {
      auto ac = autocorrelation(s, tau);
      for (int64_t c = 0; c < s.p; ++c) aggregated[static_cast<size_t>(c)] += ac.counts[static_cast<size_t>(c)];
    }
    // |sum zeta^{s_i}|^2 = sum over ALL ordered pairs (i, j) of zeta^(s_i - s_j)
    std::vector<int64_t> pair_counts(static_cast<size_t>(s.p), 0);
    for (int64_t i = 0; i < s.period; ++i)
      for (int64_t j = 0; j < s.period; ++j) {
        int64_t c = s.symbols[static_cast<size_t>(i)] - s.symbols[static_cast<size_t>(j)];
        if (c < 0) c += s.p;
        ++pair_counts[static_cast<size_t>(c)];
      }
    // aggregated[c] must equal pair_counts[c] - period * [c == 0]
    for (int64_t c = 0; c < s.p; ++c) {
      int64_t expect = pair_counts[static_cast<size_t>(c)] - (c == 0 ? s.period : 0);
      CHECK(aggregated[static_cast<size_t>(c)] == expect);
    }
  };
  check_sequence(to_sequence(trace_function(FieldSpec::build(3, 1, 2))));
  check_sequence(to_sequence(lin_function(FieldSpec::build(3, 1, 3))));

  // for an ideal sequence the identity collapses to (p^n - 2)(-1) + (p^n - 1) = 1
  auto s = to_sequence(trace_function(FieldSpec::build(3, 1, 2)));
  int64_t lhs = 0;
  for (int64_t tau = 1; tau < s.period; ++tau) {
    auto ac = autocorrelation(s, tau);
    lhs += ac.counts[0] - ac.counts[1];  // integral C(tau)
  }
  auto ac0 = autocorrelation(s, 0);
  CHECK(lhs + (ac0.counts[0] - ac0.counts[1]) == 1);
}
