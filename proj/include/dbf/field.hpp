#ifndef DBF_FIELD_HPP
#define DBF_FIELD_HPP

// Exact arithmetic in GF(p^(m*n)) with a distinguished subfield GF(q), q = p^m.
//
// Nonzero elements are stored as discrete logarithms of a fixed primitive
// element theta; a Zech logarithm table makes addition O(1). The subfield
// GF(q)* sits inside GF(q^n)* as the exponents divisible by
// (q^n - 1)/(q - 1), so membership tests are exact integer arithmetic.

#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dbf {

inline constexpr int32_t kZeroLog = -1;
inline constexpr int64_t kDefaultFieldSizeGuard = int64_t{1} << 24;
inline constexpr const char* kToolVersion = "1.0.0";

class FieldSpec;

/// A field element: the zero sentinel or an exponent of theta, plus the
/// spec it belongs to. Arithmetic between elements of different specs throws.
class FieldElement {
 public:
  FieldElement() = default;

  bool is_zero() const { return log_ == kZeroLog; }
  int32_t log() const { return log_; }
  const FieldSpec* spec() const { return spec_; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.spec_ == b.spec_ && a.log_ == b.log_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  FieldElement pow(int64_t e) const;
  FieldElement inverse() const;

 private:
  friend class FieldSpec;
  FieldElement(const FieldSpec* s, int32_t l) : spec_(s), log_(l) {}

  const FieldSpec* spec_ = nullptr;
  int32_t log_ = kZeroLog;
};

namespace detail {

inline bool is_prime(int64_t x) {
  if (x < 2) return false;
  for (int64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

inline std::vector<int64_t> prime_factors(int64_t x) {
  std::vector<int64_t> out;
  for (int64_t d = 2; d * d <= x; ++d) {
    if (x % d == 0) {
      out.push_back(d);
      while (x % d == 0) x /= d;
    }
  }
  if (x > 1) out.push_back(x);
  return out;
}

// Dense coefficient vectors over GF(p), low degree first.
using Poly = std::vector<int32_t>;

inline int poly_degree(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

// Remainder of f by monic g.
inline Poly poly_mod(Poly f, const Poly& g, int64_t p) {
  int dg = poly_degree(g);
  for (int i = poly_degree(f); i >= dg; --i) {
    int64_t c = f[i];
    if (c == 0) continue;
    for (int j = 0; j <= dg; ++j) {
      int64_t v = f[i - dg + j] - c * g[j] % p;
      f[i - dg + j] = static_cast<int32_t>(((v % p) + p) % p);
    }
  }
  f.resize(dg);
  return f;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& mod, int64_t p) {
  Poly prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      prod[i + j] = static_cast<int32_t>((prod[i + j] + int64_t{a[i]} * b[j]) % p);
  }
  return poly_mod(std::move(prod), mod, p);
}

inline Poly poly_x_powmod(int64_t e, const Poly& mod, int64_t p) {
  int d = poly_degree(mod);
  Poly result(d, 0);
  result[0] = 1;
  Poly base(d, 0);
  if (d == 1) {
    base = poly_mod(Poly{0, 1}, mod, p);
  } else {
    base[1] = 1;
  }
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, mod, p);
    base = poly_mulmod(base, base, mod, p);
    e >>= 1;
  }
  return result;
}

inline bool poly_is_one(const Poly& f) {
  if (f.empty() || f[0] != 1) return false;
  for (size_t i = 1; i < f.size(); ++i)
    if (f[i] != 0) return false;
  return true;
}

// Trial division by every monic polynomial of degree <= deg(f)/2.
inline bool poly_is_irreducible(const Poly& f, int64_t p) {
  int d = poly_degree(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  if (f[0] == 0) return false;  // divisible by x
  for (int dg = 1; dg <= d / 2; ++dg) {
    int64_t count = 1;
    for (int i = 0; i < dg; ++i) count *= p;
    for (int64_t k = 0; k < count; ++k) {
      Poly g(dg + 1, 0);
      g[dg] = 1;
      int64_t kk = k;
      for (int i = 0; i < dg; ++i) {
        g[i] = static_cast<int32_t>(kk % p);
        kk /= p;
      }
      if (poly_degree(poly_mod(f, g, p)) < 0) return false;
    }
  }
  return true;
}

// True iff x has multiplicative order exactly field_order - 1 in GF(p)[x]/(f).
// That simultaneously certifies that f is irreducible and x is primitive:
// a quotient by a reducible f has a unit group of order < field_order - 1.
inline bool x_has_full_order(const Poly& f, int64_t p, int64_t field_order,
                             const std::vector<int64_t>& order_prime_factors) {
  if (f[0] == 0) return false;
  if (!poly_is_one(poly_x_powmod(field_order - 1, f, p))) return false;
  for (int64_t r : order_prime_factors) {
    if (poly_is_one(poly_x_powmod((field_order - 1) / r, f, p))) return false;
  }
  return true;
}

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

/// Immutable description of the tower GF(p) <= GF(q = p^m) <= GF(q^n),
/// with full log/antilog/Zech tables. Shareable across threads.
class FieldSpec {
 public:
  static std::shared_ptr<const FieldSpec> build(int64_t p, int64_t m, int64_t n,
                                                int64_t size_guard = kDefaultFieldSizeGuard) {
    return build_impl(p, m, n, nullptr, size_guard);
  }
  static std::shared_ptr<const FieldSpec> build(int64_t p, int64_t m, int64_t n,
                                                const std::vector<int32_t>& modulus,
                                                int64_t size_guard = kDefaultFieldSizeGuard) {
    return build_impl(p, m, n, &modulus, size_guard);
  }

  int64_t p() const { return p_; }
  int64_t m() const { return m_; }
  int64_t n() const { return n_; }
  int64_t field_order() const { return field_order_; }        // q^n
  int64_t order() const { return order_; }                    // q^n - 1
  int64_t subfield_order() const { return subfield_order_; }  // q
  int64_t subfield_stride() const { return stride_; }         // (q^n-1)/(q-1)
  const std::vector<int32_t>& modulus() const { return modulus_; }

  FieldElement zero() const { return FieldElement(this, kZeroLog); }
  FieldElement one() const { return FieldElement(this, 0); }
  FieldElement theta() const { return FieldElement(this, order_ > 1 ? 1 : 0); }
  FieldElement from_log(int64_t e) const {
    return FieldElement(this, static_cast<int32_t>(((e % order_) + order_) % order_));
  }
  FieldElement element_zero_or_log(int32_t log) const {
    if (log == kZeroLog) return zero();
    return from_log(log);
  }

  // Raw operations on logs; kZeroLog is the zero sentinel.
  int32_t add_log(int32_t a, int32_t b) const {
    if (a == kZeroLog) return b;
    if (b == kZeroLog) return a;
    int64_t d = b - a;
    if (d < 0) d += order_;
    int32_t z = zech_[static_cast<size_t>(d)];
    if (z == kZeroLog) return kZeroLog;
    int64_t r = a + z;
    if (r >= order_) r -= order_;
    return static_cast<int32_t>(r);
  }
  int32_t neg_log(int32_t a) const {
    if (a == kZeroLog) return kZeroLog;
    int64_t r = a + minus_one_log_;
    if (r >= order_) r -= order_;
    return static_cast<int32_t>(r);
  }
  int32_t sub_log(int32_t a, int32_t b) const { return add_log(a, neg_log(b)); }
  int32_t mul_log(int32_t a, int32_t b) const {
    if (a == kZeroLog || b == kZeroLog) return kZeroLog;
    int64_t r = int64_t{a} + b;
    if (r >= order_) r -= order_;
    return static_cast<int32_t>(r);
  }
  int32_t inv_log(int32_t a) const {
    if (a == kZeroLog) throw std::invalid_argument("division by zero field element");
    return static_cast<int32_t>((order_ - a) % order_);
  }
  int32_t pow_log(int32_t a, int64_t e) const {
    if (a == kZeroLog) {
      if (e == 0) return 0;
      if (e < 0) throw std::invalid_argument("negative power of zero field element");
      return kZeroLog;
    }
    int64_t ee = ((e % order_) + order_) % order_;
    return static_cast<int32_t>(int64_t{a} * ee % order_);
  }

  /// Relative trace onto GF(q): sum of x^(q^i) for i = 0..n-1.
  int32_t rel_trace_log(int32_t x) const {
    if (x == kZeroLog) return kZeroLog;
    int32_t acc = kZeroLog;
    for (int64_t i = 0; i < n_; ++i) {
      acc = add_log(acc, static_cast<int32_t>(int64_t{x} * qpow_mod_order_[static_cast<size_t>(i)] % order_));
    }
    return acc;
  }
  FieldElement rel_trace(const FieldElement& x) const {
    require_same(x);
    return FieldElement(this, rel_trace_log(x.log()));
  }

  // --- subfield GF(q), indexed 0..q-1: index 0 is zero, index i >= 1 is theta^((i-1)*stride) ---

  bool log_in_subfield(int32_t log) const { return log == kZeroLog || log % stride_ == 0; }
  /// Subfield index of a log, or -1 if the element is outside GF(q).
  int32_t subfield_index_of_log(int32_t log) const {
    if (log == kZeroLog) return 0;
    if (log % stride_ != 0) return -1;
    return static_cast<int32_t>(log / stride_ + 1);
  }
  int32_t subfield_log(int32_t idx) const {
    return idx == 0 ? kZeroLog : static_cast<int32_t>(int64_t{idx - 1} * stride_);
  }
  FieldElement subfield_element(int32_t idx) const {
    return FieldElement(this, subfield_log(idx));
  }
  std::vector<FieldElement> subfield_elements() const {
    std::vector<FieldElement> out;
    out.reserve(static_cast<size_t>(subfield_order_));
    for (int32_t i = 0; i < subfield_order_; ++i) out.push_back(subfield_element(i));
    return out;
  }

  int32_t sadd(int32_t i, int32_t j) const { return sub_add_[static_cast<size_t>(i) * subfield_order_ + j]; }
  int32_t ssub(int32_t i, int32_t j) const { return sub_sub_[static_cast<size_t>(i) * subfield_order_ + j]; }
  int32_t smul(int32_t i, int32_t j) const {
    if (i == 0 || j == 0) return 0;
    return static_cast<int32_t>((int64_t{i - 1} + (j - 1)) % (subfield_order_ - 1) + 1);
  }
  int32_t sneg(int32_t i) const { return sub_neg_[static_cast<size_t>(i)]; }
  int32_t sinv(int32_t i) const {
    if (i == 0) throw std::invalid_argument("division by zero subfield element");
    return static_cast<int32_t>((subfield_order_ - 1 - (i - 1)) % (subfield_order_ - 1) + 1);
  }
  int32_t spow(int32_t i, int64_t e) const {
    if (i == 0) return e == 0 ? 1 : 0;
    int64_t g = subfield_order_ - 1;
    int64_t ee = ((e % g) + g) % g;
    return static_cast<int32_t>(int64_t{i - 1} * ee % g + 1);
  }
  /// Absolute trace GF(q) -> GF(p), as a residue in [0, p).
  int32_t strace_p(int32_t idx) const { return sub_trace_p_[static_cast<size_t>(idx)]; }
  /// Index of the prime-subfield element with residue r.
  int32_t subfield_index_of_residue(int64_t r) const {
    return prime_idx_of_residue_[static_cast<size_t>(((r % p_) + p_) % p_)];
  }
  const int32_t* sub_sub_table() const { return sub_sub_.data(); }

  /// Packed base-p coefficient vector of theta^e (constant digit least significant).
  int32_t packed_of_log(int32_t log) const {
    return log == kZeroLog ? 0 : poly_of_exp_[static_cast<size_t>(log)];
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"p", p_}, {"m", m_}, {"n", n_}, {"modulus", modulus_}};
  }
  static std::shared_ptr<const FieldSpec> from_json(const nlohmann::json& j) {
    std::vector<int32_t> mod = j.at("modulus").get<std::vector<int32_t>>();
    return build(j.at("p").get<int64_t>(), j.at("m").get<int64_t>(), j.at("n").get<int64_t>(), mod);
  }

  std::string fingerprint() const {
    std::string s = std::to_string(p_) + ":" + std::to_string(m_) + ":" + std::to_string(n_) + ":";
    for (int32_t c : modulus_) s += std::to_string(c) + ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(s)));
    return buf;
  }

  bool describes_same_field(const FieldSpec& other) const {
    return p_ == other.p_ && m_ == other.m_ && n_ == other.n_ && modulus_ == other.modulus_;
  }

  void require_same(const FieldElement& e) const {
    if (e.spec() != this) throw std::invalid_argument("field element belongs to a different FieldSpec");
  }

 private:
  FieldSpec() = default;

  static std::shared_ptr<const FieldSpec> build_impl(int64_t p, int64_t m, int64_t n,
                                                     const std::vector<int32_t>* modulus,
                                                     int64_t size_guard);
  void build_tables();

  int64_t p_ = 0, m_ = 0, n_ = 0;
  int64_t field_order_ = 0, order_ = 0, subfield_order_ = 0, stride_ = 0;
  int64_t minus_one_log_ = 0;
  std::vector<int32_t> modulus_;
  std::vector<int32_t> poly_of_exp_;  // log -> packed coefficients
  std::vector<int32_t> exp_of_poly_;  // packed -> log (kZeroLog at 0)
  std::vector<int32_t> zech_;         // log of 1 + theta^k
  std::vector<int64_t> qpow_mod_order_;
  std::vector<int32_t> sub_add_, sub_sub_, sub_neg_, sub_trace_p_, prime_idx_of_residue_;
};

inline std::shared_ptr<const FieldSpec> FieldSpec::build_impl(int64_t p, int64_t m, int64_t n,
                                                              const std::vector<int32_t>* modulus,
                                                              int64_t size_guard) {
  if (!detail::is_prime(p)) throw std::invalid_argument("p must be prime");
  if (p == 2) throw std::invalid_argument("p must be odd");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (size_guard > (int64_t{1} << 28)) throw std::invalid_argument("size guard exceeds hard cap 2^28");

  int64_t degree = m * n;
  int64_t field_order = 1;
  for (int64_t i = 0; i < degree; ++i) {
    field_order *= p;
    if (field_order > size_guard)
      throw std::invalid_argument("field size p^(m*n) exceeds the size guard");
  }

  auto spec = std::shared_ptr<FieldSpec>(new FieldSpec());
  spec->p_ = p;
  spec->m_ = m;
  spec->n_ = n;
  spec->field_order_ = field_order;
  spec->order_ = field_order - 1;
  spec->subfield_order_ = 1;
  for (int64_t i = 0; i < m; ++i) spec->subfield_order_ *= p;
  spec->stride_ = spec->order_ / (spec->subfield_order_ - 1);

  const auto factors = detail::prime_factors(spec->order_);
  if (modulus != nullptr) {
    if (static_cast<int64_t>(modulus->size()) != degree + 1)
      throw std::invalid_argument("modulus must have degree m*n (m*n+1 coefficients)");
    for (int32_t c : *modulus)
      if (c < 0 || c >= p) throw std::invalid_argument("modulus coefficients must lie in [0, p)");
    if (modulus->back() != 1) throw std::invalid_argument("modulus must be monic");
    detail::Poly f(modulus->begin(), modulus->end());
    if (!detail::poly_is_irreducible(f, p))
      throw std::invalid_argument("supplied modulus is not irreducible over GF(p)");
    if (!detail::x_has_full_order(f, p, field_order, factors))
      throw std::invalid_argument("supplied modulus is not primitive");
    spec->modulus_ = *modulus;
  } else {
    // Lexicographically smallest monic primitive polynomial, comparing the
    // low-degree-first coefficient list (c_0, ..., c_{d-1}).
    int64_t total = 1;
    for (int64_t i = 0; i < degree; ++i) total *= p;
    bool found = false;
    for (int64_t k = 0; k < total && !found; ++k) {
      detail::Poly f(static_cast<size_t>(degree + 1), 0);
      f[static_cast<size_t>(degree)] = 1;
      int64_t kk = k;
      for (int64_t i = degree - 1; i >= 0; --i) {
        f[static_cast<size_t>(i)] = static_cast<int32_t>(kk % p);
        kk /= p;
      }
      if (f[0] == 0) continue;
      if (detail::x_has_full_order(f, p, field_order, factors)) {
        spec->modulus_.assign(f.begin(), f.end());
        found = true;
      }
    }
    if (!found) throw std::logic_error("no primitive polynomial found");  // cannot happen
  }

  spec->build_tables();
  return spec;
}

inline void FieldSpec::build_tables() {
  const int64_t p = p_;
  const int64_t degree = m_ * n_;
  poly_of_exp_.assign(static_cast<size_t>(order_), 0);
  exp_of_poly_.assign(static_cast<size_t>(field_order_), kZeroLog);

  std::vector<int32_t> v(static_cast<size_t>(degree), 0);
  v[0] = 1;
  for (int64_t e = 0; e < order_; ++e) {
    int32_t packed = 0;
    for (int64_t i = degree - 1; i >= 0; --i) packed = static_cast<int32_t>(packed * p + v[static_cast<size_t>(i)]);
    if (packed == 0 || exp_of_poly_[static_cast<size_t>(packed)] != kZeroLog)
      throw std::logic_error("modulus failed primitivity during table construction");
    poly_of_exp_[static_cast<size_t>(e)] = packed;
    exp_of_poly_[static_cast<size_t>(packed)] = static_cast<int32_t>(e);
    // multiply by x and reduce
    int32_t top = v[static_cast<size_t>(degree - 1)];
    for (int64_t i = degree - 1; i > 0; --i) v[static_cast<size_t>(i)] = v[static_cast<size_t>(i - 1)];
    v[0] = 0;
    if (top != 0) {
      for (int64_t i = 0; i < degree; ++i) {
        int64_t c = v[static_cast<size_t>(i)] - int64_t{top} * modulus_[static_cast<size_t>(i)] % p;
        v[static_cast<size_t>(i)] = static_cast<int32_t>(((c % p) + p) % p);
      }
    }
  }

  zech_.assign(static_cast<size_t>(order_), kZeroLog);
  for (int64_t e = 0; e < order_; ++e) {
    int32_t packed = poly_of_exp_[static_cast<size_t>(e)];
    int32_t c0 = packed % static_cast<int32_t>(p);
    int32_t packed2 = packed - c0 + static_cast<int32_t>((c0 + 1) % p);
    zech_[static_cast<size_t>(e)] = packed2 == 0 ? kZeroLog : exp_of_poly_[static_cast<size_t>(packed2)];
  }
  minus_one_log_ = order_ / 2;  // p odd, so theta^((q^n-1)/2) = -1
  if (zech_[static_cast<size_t>(minus_one_log_)] != kZeroLog)
    throw std::logic_error("Zech table inconsistent: 1 + theta^((q^n-1)/2) != 0");

  qpow_mod_order_.assign(static_cast<size_t>(n_), 0);
  int64_t qp = 1;
  for (int64_t i = 0; i < n_; ++i) {
    qpow_mod_order_[static_cast<size_t>(i)] = qp % order_;
    qp = qp % order_ * (subfield_order_ % order_) % order_;
  }

  const int64_t q = subfield_order_;
  sub_add_.assign(static_cast<size_t>(q * q), 0);
  sub_sub_.assign(static_cast<size_t>(q * q), 0);
  sub_neg_.assign(static_cast<size_t>(q), 0);
  for (int32_t i = 0; i < q; ++i) {
    int32_t li = subfield_log(i);
    sub_neg_[static_cast<size_t>(i)] = subfield_index_of_log(neg_log(li));
    if (sub_neg_[static_cast<size_t>(i)] < 0)
      throw std::logic_error("subfield not closed under negation");
    for (int32_t j = 0; j < q; ++j) {
      int32_t lj = subfield_log(j);
      int32_t s = subfield_index_of_log(add_log(li, lj));
      int32_t d = subfield_index_of_log(add_log(li, neg_log(lj)));
      if (s < 0 || d < 0) throw std::logic_error("subfield not closed under addition");
      sub_add_[static_cast<size_t>(i) * q + j] = s;
      sub_sub_[static_cast<size_t>(i) * q + j] = d;
    }
  }

  sub_trace_p_.assign(static_cast<size_t>(q), 0);
  for (int32_t i = 1; i < q; ++i) {
    int32_t y = subfield_log(i);
    int32_t acc = kZeroLog;
    int64_t pe = 1;
    for (int64_t k = 0; k < m_; ++k) {
      acc = add_log(acc, static_cast<int32_t>(int64_t{y} * (pe % order_) % order_));
      pe *= p;
    }
    // the absolute trace lands in GF(p), whose packed form is a constant digit
    sub_trace_p_[static_cast<size_t>(i)] =
        acc == kZeroLog ? 0 : poly_of_exp_[static_cast<size_t>(acc)] % static_cast<int32_t>(p);
  }

  prime_idx_of_residue_.assign(static_cast<size_t>(p), 0);
  int32_t acc = kZeroLog;
  for (int64_t r = 1; r < p; ++r) {
    acc = add_log(acc, 0);  // add 1
    int32_t idx = subfield_index_of_log(acc);
    if (idx < 0) throw std::logic_error("prime subfield escaped GF(q)");
    prime_idx_of_residue_[static_cast<size_t>(r)] = idx;
  }
}

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  if (a.spec_ == nullptr || a.spec_ != b.spec_)
    throw std::invalid_argument("field elements from different specs");
  return FieldElement(a.spec_, a.spec_->add_log(a.log_, b.log_));
}
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  if (a.spec_ == nullptr || a.spec_ != b.spec_)
    throw std::invalid_argument("field elements from different specs");
  return FieldElement(a.spec_, a.spec_->sub_log(a.log_, b.log_));
}
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  if (a.spec_ == nullptr || a.spec_ != b.spec_)
    throw std::invalid_argument("field elements from different specs");
  return FieldElement(a.spec_, a.spec_->mul_log(a.log_, b.log_));
}
inline FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  if (a.spec_ == nullptr || a.spec_ != b.spec_)
    throw std::invalid_argument("field elements from different specs");
  return FieldElement(a.spec_, a.spec_->mul_log(a.log_, b.spec_->inv_log(b.log_)));
}
inline FieldElement FieldElement::operator-() const {
  if (spec_ == nullptr) throw std::invalid_argument("uninitialized field element");
  return FieldElement(spec_, spec_->neg_log(log_));
}
inline FieldElement FieldElement::pow(int64_t e) const {
  if (spec_ == nullptr) throw std::invalid_argument("uninitialized field element");
  return FieldElement(spec_, spec_->pow_log(log_, e));
}
inline FieldElement FieldElement::inverse() const {
  if (spec_ == nullptr) throw std::invalid_argument("uninitialized field element");
  return FieldElement(spec_, spec_->inv_log(log_));
}

}  // namespace dbf

#endif  // DBF_FIELD_HPP
