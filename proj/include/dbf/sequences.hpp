#ifndef DBF_SEQUENCES_HPP
#define DBF_SEQUENCES_HPP

// p-ary sequences s_i = f(theta^i) for q = p, and exact autocorrelation
// testing. Ideal two-level autocorrelation is decided on integer count
// vectors, never on complex magnitudes: C(tau) = -1 is equivalent to the
// difference counts (p^(n-1)-1 at 0, p^(n-1) elsewhere).

#include <complex>
#include <cstdint>
#include <vector>

#include "dbf/function_table.hpp"
#include "dbf/properties.hpp"

namespace dbf {

struct PSequence {
  int64_t p = 0;
  int64_t period = 0;
  std::vector<uint8_t> symbols;  // residues mod p
};

/// Requires m = 1; GF(p) is identified with Z_p through the constant
/// coefficient of the polynomial representation.
inline PSequence to_sequence(const FunctionTable& f) {
  const FieldSpec& spec = f.field();
  if (spec.m() != 1) throw std::invalid_argument("sequences require q = p (m = 1)");
  PSequence s;
  s.p = spec.p();
  s.period = spec.order();
  s.symbols.reserve(static_cast<size_t>(s.period));
  for (int64_t i = 0; i < s.period; ++i)
    s.symbols.push_back(static_cast<uint8_t>(spec.strace_p(f.value_index(i))));
  return s;
}

struct Autocorrelation {
  std::vector<int64_t> counts;        // counts[c] = |{i : s_{i+tau} - s_i = c mod p}|
  std::complex<double> value{0, 0};   // sum_c counts[c] * zeta_p^c
};

inline Autocorrelation autocorrelation(const PSequence& s, int64_t tau) {
  if (tau < 0 || tau >= s.period) throw std::invalid_argument("tau out of range");
  Autocorrelation out;
  out.counts.assign(static_cast<size_t>(s.p), 0);
  for (int64_t i = 0; i < s.period; ++i) {
    int64_t i2 = i + tau;
    if (i2 >= s.period) i2 -= s.period;
    int64_t c = s.symbols[static_cast<size_t>(i2)] - s.symbols[static_cast<size_t>(i)];
    if (c < 0) c += s.p;
    ++out.counts[static_cast<size_t>(c)];
  }
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int64_t c = 0; c < s.p; ++c)
    out.value += static_cast<double>(out.counts[static_cast<size_t>(c)]) *
                 std::polar(1.0, two_pi * static_cast<double>(c) / static_cast<double>(s.p));
  return out;
}

/// True iff every nonzero shift has count vector (p^(n-1)-1 at 0, p^(n-1)
/// elsewhere); the witness is the first failing shift with its counts.
inline PropertyReport is_ideal_two_level(const PSequence& s) {
  PropertyReport r{"ideal_two_level_autocorrelation", true, nullptr};
  const int64_t fiber = (s.period + 1) / s.p;  // p^(n-1)
  std::vector<int64_t> counts(static_cast<size_t>(s.p));
  for (int64_t tau = 1; tau < s.period; ++tau) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int64_t i = 0; i < s.period; ++i) {
      int64_t i2 = i + tau;
      if (i2 >= s.period) i2 -= s.period;
      int64_t c = s.symbols[static_cast<size_t>(i2)] - s.symbols[static_cast<size_t>(i)];
      if (c < 0) c += s.p;
      ++counts[static_cast<size_t>(c)];
    }
    bool ok = counts[0] == fiber - 1;
    for (int64_t c = 1; c < s.p && ok; ++c) ok = counts[static_cast<size_t>(c)] == fiber;
    if (!ok) {
      r.verdict = false;
      r.witness = nlohmann::json{{"tau", tau}, {"counts", counts}};
      return r;
    }
  }
  return r;
}

}  // namespace dbf

#endif  // DBF_SEQUENCES_HPP
