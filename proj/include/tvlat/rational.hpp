#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "tvlat/errors.hpp"

namespace tvlat {

// Exact rational number, always in canonical form: denominator > 0,
// gcd(|num|, den) = 1, zero is 0/1. Backed by GMP so there is no
// fixed-width overflow anywhere. Division by zero throws instead of
// trapping the way raw mpq does.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(long n) : q_(n) {}  // NOLINT: implicit on purpose, mirrors integer literals
  Rat(long n, long d) {
    if (d == 0) throw error(errc::divide_by_zero, "rational with zero denominator");
    q_ = mpq_class(n, d);
    q_.canonicalize();
  }
  explicit Rat(mpz_class n) : q_(std::move(n)) {}
  Rat(mpz_class n, mpz_class d) {
    if (d == 0) throw error(errc::divide_by_zero, "rational with zero denominator");
    q_ = mpq_class(std::move(n), std::move(d));
    q_.canonicalize();
  }
  explicit Rat(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  // Parses "n" or "n/d" with optional leading sign. Throws on malformed
  // input or zero denominator.
  static Rat parse(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0)
      throw error(errc::syntax, "malformed rational '" + s + "'");
    if (q.get_den() == 0) throw error(errc::divide_by_zero, "rational with zero denominator");
    q.canonicalize();
    return Rat(std::move(q));
  }

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  int sign() const { return sgn(q_); }

  Rat operator-() const { return Rat(mpq_class(-q_)); }
  Rat abs() const { return sign() < 0 ? -*this : *this; }

  Rat inverse() const {
    if (is_zero()) throw error(errc::divide_by_zero, "inverse of zero");
    return Rat(mpq_class(1 / q_));
  }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.q_ + b.q_)); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.q_ - b.q_)); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.q_ * b.q_)); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw error(errc::divide_by_zero, "division by zero");
    return Rat(mpq_class(a.q_ / b.q_));
  }

  Rat& operator+=(const Rat& b) { q_ += b.q_; return *this; }
  Rat& operator-=(const Rat& b) { q_ -= b.q_; return *this; }
  Rat& operator*=(const Rat& b) { q_ *= b.q_; return *this; }
  Rat& operator/=(const Rat& b) { *this = *this / b; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

  // Canonical text form: "n" when the denominator is 1, else "n/d".
  std::string str() const { return q_.get_str(); }
  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.q_; }

  // p^e for integer e of either sign.
  static Rat pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    Rat b = e < 0 ? base.inverse() : base;
    unsigned long k = e < 0 ? -static_cast<unsigned long>(e) : static_cast<unsigned long>(e);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), b.num().get_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), b.den().get_mpz_t(), k);
    return Rat(std::move(num), std::move(den));
  }

  double approx() const { return q_.get_d(); }

 private:
  mpq_class q_;
};

inline Rat unit_like(const Rat&) { return Rat(1); }

inline Rat midpoint(const Rat& a, const Rat& b) { return (a + b) / Rat(2); }

// 2^(-k) as an exact rational, the width target used by valuation
// refinement.
inline Rat pow2_neg(int k) {
  mpz_class d = 1;
  mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return Rat(mpz_class(1), std::move(d));
}

// Deterministic primality check by trial division; sufficient because every
// modulus in this library is capped below 2^31.
inline bool is_prime_u32(std::uint64_t p) {
  if (p >= (1ull << 31))
    throw error(errc::invalid_model, "modulus exceeds the 2^31 cap");
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::uint64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

}  // namespace tvlat
