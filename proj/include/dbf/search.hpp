#ifndef DBF_SEARCH_HPP
#define DBF_SEARCH_HPP

// Exhaustive enumeration of difference balanced functions at small
// parameters. Every survivor gets a balancing shift and a homogeneity degree;
// a survivor with no degree after shifting is flagged as a counterexample and
// dumped verbatim. Work is partitioned into contiguous candidate ranges per
// worker, with resumable checkpoints at fixed candidate intervals.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dbf/constructions.hpp"
#include "dbf/designs.hpp"
#include "dbf/function_table.hpp"
#include "dbf/properties.hpp"

namespace dbf {

enum class SearchMode { FullEnumeration, HomogeneousOnly, RandomSample };

inline const char* to_string(SearchMode m) {
  switch (m) {
    case SearchMode::FullEnumeration: return "full";
    case SearchMode::HomogeneousOnly: return "homogeneous";
    default: return "random";
  }
}

struct SearchConfig {
  std::shared_ptr<const FieldSpec> spec;
  SearchMode mode = SearchMode::FullEnumeration;
  int worker_count = 1;
  std::string report_path;  // canonical JSON report written here when nonempty
  uint64_t candidate_budget = 1'000'000'000;
  uint64_t checkpoint_interval = 1'000'000;
  std::string checkpoint_path;  // written after each interval when nonempty
  std::string resume_path;      // read before starting when nonempty
  uint64_t stop_after = 0;      // pause after this many candidates (0 = run to completion)
  uint64_t sample_count = 0;    // random mode
  uint64_t seed = 0;            // random mode (required by the CLI)
};

struct SurvivorRecord {
  uint64_t candidate_index = 0;
  std::vector<uint16_t> values;
  int32_t shift_b_index = -1;  // b with f - b balanced, -1 if none
  int64_t degree = -1;         // homogeneity degree of the shifted function, -1 if none
  bool counterexample = false; // difference balanced but no degree after shifting
  bool equivalences_ok = true; // homogeneous mode: four-way battery agreement
  int worker_id = 0;

  nlohmann::json to_json() const {
    nlohmann::json j{{"candidate_index", candidate_index}, {"values", values},
                     {"shift_b_index", shift_b_index},     {"degree", degree},
                     {"counterexample", counterexample},   {"equivalences_ok", equivalences_ok}};
    // only counterexample dumps carry the worker tag, so reports are
    // invariant under the worker count
    if (counterexample) j["worker_id"] = worker_id;
    return j;
  }
};

struct SearchReport {
  std::string mode;
  std::string restriction_note;
  nlohmann::json field;
  uint64_t total_candidates = 0;
  uint64_t visited = 0;
  uint64_t db_count = 0;
  uint64_t counterexample_count = 0;
  std::vector<SurvivorRecord> survivors;
  double wall_seconds = 0;  // reported separately; not part of the canonical JSON

  nlohmann::json to_json() const {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& r : survivors) s.push_back(r.to_json());
    return nlohmann::json{{"mode", mode},
                          {"restriction_note", restriction_note},
                          {"field", field},
                          {"total_candidates", total_candidates},
                          {"visited", visited},
                          {"db_count", db_count},
                          {"counterexample_count", counterexample_count},
                          {"survivors", s}};
  }
};

/// Shift order for the difference-balance scan: nontrivial shifts sorted by
/// the multiplicative order of theta^j (small order first), ties by exponent.
/// Pure scheduling; verdicts are order-independent.
inline std::vector<int32_t> prune_order(const FieldSpec& spec) {
  const int64_t n = spec.order();
  std::vector<int32_t> schedule(static_cast<size_t>(n - 1));
  std::iota(schedule.begin(), schedule.end(), 1);
  std::stable_sort(schedule.begin(), schedule.end(), [&](int32_t a, int32_t b) {
    int64_t oa = n / std::gcd<int64_t>(a, n), ob = n / std::gcd<int64_t>(b, n);
    return oa != ob ? oa < ob : a < b;
  });
  return schedule;
}

namespace detail {

inline uint64_t pow_saturating(uint64_t base, uint64_t exp, uint64_t cap) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

inline uint64_t binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  uint64_t r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    if (r > (uint64_t{1} << 62) / (n - k + i)) return uint64_t{1} << 62;  // saturate
    r = r * (n - k + i) / i;
  }
  return r;
}

/// Lexicographic unranking of a k-subset of {0, ..., n-1}.
inline std::vector<int64_t> unrank_combination(uint64_t rank, int64_t n, int64_t k) {
  std::vector<int64_t> out;
  int64_t x = 0;
  for (int64_t i = 0; i < k; ++i) {
    while (true) {
      uint64_t block = binomial(static_cast<uint64_t>(n - x - 1), static_cast<uint64_t>(k - i - 1));
      if (rank < block) break;
      rank -= block;
      ++x;
    }
    out.push_back(x);
    ++x;
  }
  return out;
}

struct HomogeneousClass {
  std::vector<int64_t> d_choices;
  int64_t coset_count = 0;     // M = (q^n-1)/(q-1)
  int64_t zero_cosets = 0;     // z = (q^(n-1)-1)/(q-1)
  uint64_t comb_count = 0;     // C(M-1, z-1): zero cosets beyond the pinned coset 0
  uint64_t value_count = 0;    // (q-1)^(M-z-1): free coset values, first pinned to 1
  uint64_t total = 0;
};

inline HomogeneousClass homogeneous_class(const FieldSpec& spec, uint64_t cap) {
  HomogeneousClass h;
  const int64_t q = spec.subfield_order();
  for (int64_t d = 1; d <= q - 1; ++d)
    if (std::gcd(d, q - 1) == 1) h.d_choices.push_back(d);
  h.coset_count = spec.subfield_stride();
  h.zero_cosets = (spec.field_order() / q - 1) / (q - 1);
  h.comb_count = binomial(static_cast<uint64_t>(h.coset_count - 1),
                          static_cast<uint64_t>(h.zero_cosets - 1));
  h.value_count = pow_saturating(static_cast<uint64_t>(q - 1),
                                 static_cast<uint64_t>(h.coset_count - h.zero_cosets - 1), cap);
  if (h.comb_count > cap || h.value_count > cap) {
    h.total = cap + 1;
    return h;
  }
  uint64_t t = static_cast<uint64_t>(h.d_choices.size()) * h.comb_count;
  h.total = (t == 0 || h.value_count > cap / t) ? cap + 1 : t * h.value_count;
  return h;
}

/// Materializes the canonical homogeneous candidate with the given index:
/// degree d, zero-coset set Z (always containing coset 0), value 1 on the
/// first nonzero coset, free values on the rest, extended to all of
/// GF(q^n)* by f(a * theta^j) = a^d f(theta^j).
inline void homogeneous_candidate(const FieldSpec& spec, const HomogeneousClass& h, uint64_t index,
                                  std::vector<uint16_t>& values) {
  const int64_t q = spec.subfield_order();
  const int64_t m = h.coset_count;
  uint64_t vi = index % h.value_count;
  index /= h.value_count;
  uint64_t ci = index % h.comb_count;
  int64_t d = h.d_choices[static_cast<size_t>(index / h.comb_count)];

  std::vector<int8_t> is_zero_coset(static_cast<size_t>(m), 0);
  is_zero_coset[0] = 1;
  for (int64_t extra : unrank_combination(ci, m - 1, h.zero_cosets - 1))
    is_zero_coset[static_cast<size_t>(extra + 1)] = 1;

  std::vector<int32_t> coset_value(static_cast<size_t>(m), 0);
  bool first_nonzero = true;
  for (int64_t j = 0; j < m; ++j) {
    if (is_zero_coset[static_cast<size_t>(j)]) continue;
    if (first_nonzero) {
      coset_value[static_cast<size_t>(j)] = 1;
      first_nonzero = false;
    } else {
      coset_value[static_cast<size_t>(j)] = static_cast<int32_t>(vi % (q - 1)) + 1;
      vi /= static_cast<uint64_t>(q - 1);
    }
  }

  const int64_t n = spec.order();
  values.resize(static_cast<size_t>(n));
  for (int64_t e = 0; e < n; ++e) {
    int64_t j = e % m;
    int32_t v = coset_value[static_cast<size_t>(j)];
    if (v == 0) {
      values[static_cast<size_t>(e)] = 0;
    } else {
      int32_t a_idx = static_cast<int32_t>(e / m) + 1;  // subfield index of theta^(m*(e/m))
      values[static_cast<size_t>(e)] = static_cast<uint16_t>(spec.smul(spec.spow(a_idx, d), v));
    }
  }
}

inline void full_candidate(const FieldSpec& spec, uint64_t index, std::vector<uint16_t>& values) {
  const int64_t n = spec.order();
  const uint64_t q = static_cast<uint64_t>(spec.subfield_order());
  values.resize(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    values[static_cast<size_t>(i)] = static_cast<uint16_t>(index % q);
    index /= q;
  }
}

inline void random_candidate(const FieldSpec& spec, uint64_t seed, uint64_t index,
                             std::vector<uint16_t>& values) {
  const int64_t n = spec.order();
  const uint64_t q = static_cast<uint64_t>(spec.subfield_order());
  std::mt19937_64 gen(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
  values.resize(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) values[static_cast<size_t>(i)] = static_cast<uint16_t>(gen() % q);
}

}  // namespace detail

/// Runs the configured enumeration. Deterministic: candidate order, survivor
/// records, and the report are independent of the worker count.
inline SearchReport enumerate_db(const SearchConfig& config) {
  if (!config.spec) throw std::invalid_argument("search requires a field spec");
  const FieldSpec& spec = *config.spec;
  const auto t_start = std::chrono::steady_clock::now();

  SearchReport report;
  report.mode = to_string(config.mode);
  report.field = spec.to_json();

  uint64_t total = 0;
  detail::HomogeneousClass homog;
  switch (config.mode) {
    case SearchMode::FullEnumeration:
      total = detail::pow_saturating(static_cast<uint64_t>(spec.subfield_order()),
                                     static_cast<uint64_t>(spec.order()), config.candidate_budget);
      report.restriction_note = "all functions GF(q^n)* -> GF(q), base-q counter order";
      break;
    case SearchMode::HomogeneousOnly:
      homog = detail::homogeneous_class(spec, config.candidate_budget);
      total = homog.total;
      report.restriction_note =
          "balanced d-homogeneous functions only, one representative per orbit of "
          "f -> mu f(c x): the coset of theta^0 is a zero coset and the first nonzero "
          "coset takes value 1; not exhaustive over all functions";
      break;
    case SearchMode::RandomSample:
      total = config.sample_count;
      report.restriction_note = "independent uniform samples, seed-deterministic";
      break;
  }
  if (total > config.candidate_budget)
    throw std::invalid_argument("candidate count exceeds the configured budget");
  report.total_candidates = total;

  uint64_t next = 0;
  if (!config.resume_path.empty()) {
    std::ifstream in(config.resume_path);
    if (!in) throw std::invalid_argument("cannot open checkpoint: " + config.resume_path);
    nlohmann::json ck = nlohmann::json::parse(in);
    if (ck.at("mode").get<std::string>() != report.mode ||
        ck.at("field") != report.field || ck.at("total_candidates").get<uint64_t>() != total)
      throw std::invalid_argument("checkpoint does not match this search configuration");
    next = ck.at("next_index").get<uint64_t>();
    report.visited = ck.at("visited").get<uint64_t>();
    report.db_count = ck.at("db_count").get<uint64_t>();
    report.counterexample_count = ck.at("counterexample_count").get<uint64_t>();
    for (const auto& sj : ck.at("survivors")) {
      SurvivorRecord r;
      r.candidate_index = sj.at("candidate_index").get<uint64_t>();
      r.values = sj.at("values").get<std::vector<uint16_t>>();
      r.shift_b_index = sj.at("shift_b_index").get<int32_t>();
      r.degree = sj.at("degree").get<int64_t>();
      r.counterexample = sj.at("counterexample").get<bool>();
      r.equivalences_ok = sj.at("equivalences_ok").get<bool>();
      r.worker_id = sj.value("worker_id", 0);
      report.survivors.push_back(std::move(r));
    }
  }

  const auto schedule = prune_order(spec);
  const int workers = std::max(1, config.worker_count);

  struct WorkerResult {
    uint64_t db_count = 0;
    std::vector<SurvivorRecord> survivors;
  };

  auto process_range = [&](uint64_t lo, uint64_t hi, int worker_id, WorkerResult& out) {
    std::vector<uint16_t> values;
    for (uint64_t idx = lo; idx < hi; ++idx) {
      switch (config.mode) {
        case SearchMode::FullEnumeration: detail::full_candidate(spec, idx, values); break;
        case SearchMode::HomogeneousOnly:
          detail::homogeneous_candidate(spec, homog, idx, values);
          break;
        case SearchMode::RandomSample:
          detail::random_candidate(spec, config.seed, idx, values);
          break;
      }
      if (!detail::difference_balance_scan(spec, values, &schedule).ok) continue;

      ++out.db_count;
      SurvivorRecord rec;
      rec.candidate_index = idx;
      rec.values = values;
      rec.worker_id = worker_id;
      FunctionTable table(config.spec, values);
      auto shift = balanced_shift(table);
      if (shift.verdict) {
        rec.shift_b_index = shift.witness.at("b_index").get<int32_t>();
        FunctionTable balanced =
            affine_shift(table, table.field().sneg(rec.shift_b_index));
        auto deg = homogeneity_degree_value(balanced);
        rec.degree = deg.value_or(-1);
      }
      rec.counterexample = rec.shift_b_index < 0 || rec.degree < 0;
      if (config.mode == SearchMode::HomogeneousOnly)
        rec.equivalences_ok = run_equivalence_battery(table).agree();
      out.survivors.push_back(std::move(rec));
    }
  };

  uint64_t visited_this_run = 0;
  while (next < total) {
    if (config.stop_after > 0 && visited_this_run >= config.stop_after) break;
    uint64_t limit = total;
    if (config.stop_after > 0)
      limit = std::min<uint64_t>(limit, next + (config.stop_after - visited_this_run));
    const uint64_t chunk_hi = std::min<uint64_t>(limit, next + config.checkpoint_interval);
    const uint64_t chunk = chunk_hi - next;
    std::vector<WorkerResult> results(static_cast<size_t>(workers));
    if (workers == 1) {
      process_range(next, chunk_hi, 0, results[0]);
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < workers; ++w) {
        uint64_t lo = next + chunk * static_cast<uint64_t>(w) / static_cast<uint64_t>(workers);
        uint64_t hi = next + chunk * static_cast<uint64_t>(w + 1) / static_cast<uint64_t>(workers);
        threads.emplace_back(process_range, lo, hi, w, std::ref(results[static_cast<size_t>(w)]));
      }
      for (auto& t : threads) t.join();
    }
    for (auto& r : results) {
      report.db_count += r.db_count;
      for (auto& s : r.survivors) {
        if (s.counterexample) ++report.counterexample_count;
        report.survivors.push_back(std::move(s));
      }
    }
    report.visited += chunk;
    visited_this_run += chunk;
    next = chunk_hi;

    if (!config.checkpoint_path.empty()) {
      nlohmann::json ck = report.to_json();
      ck["next_index"] = next;
      std::ofstream outf(config.checkpoint_path);
      outf << ck.dump(2) << "\n";
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (!config.report_path.empty()) {
    std::ofstream outf(config.report_path);
    if (!outf) throw std::invalid_argument("cannot open report path: " + config.report_path);
    outf << report.to_json().dump(2) << "\n";
  }
  return report;
}

}  // namespace dbf

#endif  // DBF_SEARCH_HPP
