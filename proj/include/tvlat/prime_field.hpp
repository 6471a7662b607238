#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "tvlat/errors.hpp"
#include "tvlat/poly.hpp"
#include "tvlat/rational.hpp"
#include "tvlat/valuation.hpp"

namespace tvlat {

// Element of F_p for prime p < 2^31. Each value carries its modulus, so
// arithmetic can check that operands live in the same field. Products fit
// in 64 bits because of the modulus cap.
class Fp {
 public:
  Fp() : v_(0), p_(2) {}
  Fp(std::uint64_t v, std::uint32_t p) : v_(static_cast<std::uint32_t>(v % p)), p_(p) {}

  static Fp from_int(long long v, std::uint32_t p) {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += p;
    return Fp(static_cast<std::uint64_t>(r), p);
  }

  // Reduces a rational mod p; the denominator must be a unit.
  static Fp from_rat(const Rat& r, std::uint32_t p) {
    mpz_class num = r.num() % p, den = r.den() % p;
    if (num < 0) num += p;
    Fp n(num.get_ui(), p), d(den.get_ui(), p);
    if (d.is_zero())
      throw error(errc::divide_by_zero,
                  "rational " + r.str() + " has denominator divisible by " + std::to_string(p));
    return n * d.inverse();
  }

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    a.check(b);
    std::uint64_t s = static_cast<std::uint64_t>(a.v_) + b.v_;
    return Fp(s >= a.p_ ? s - a.p_ : s, a.p_);
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    a.check(b);
    return Fp(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_, a.p_);
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    a.check(b);
    return Fp(static_cast<std::uint64_t>(a.v_) * b.v_ % a.p_, a.p_);
  }
  Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_); }

  Fp inverse() const {
    if (v_ == 0) throw error(errc::divide_by_zero, "inverse of zero in F_p");
    // extended Euclid on (v, p); p prime so the gcd is 1
    std::int64_t t = 0, nt = 1, r = p_, nr = v_;
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
      tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += p_;
    return Fp(static_cast<std::uint64_t>(t), p_);
  }

  friend bool operator==(const Fp& a, const Fp& b) { return a.p_ == b.p_ && a.v_ == b.v_; }

  std::string str() const { return std::to_string(v_); }
  friend std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.v_; }

 private:
  void check(const Fp& b) const {
    if (p_ != b.p_)
      throw error(errc::model_mismatch, "mixed F_p moduli " + std::to_string(p_) + " and " +
                                            std::to_string(b.p_));
  }

  std::uint32_t v_;
  std::uint32_t p_;
};

inline Fp unit_like(const Fp& x) { return Fp(1, x.modulus()); }

// Field model for K = F_p with the discrete topology. The completion is K
// itself and the only absolute value is the trivial one, so D = K and the
// power-basis degree is 1. Exists mainly so that the topology layer and
// the CLI can treat finite base fields uniformly with the rational ones.
class PrimeFieldModel : public std::enable_shared_from_this<PrimeFieldModel> {
 public:
  using Base = Fp;
  using Elem = Fp;

  static std::shared_ptr<const PrimeFieldModel> create(std::uint32_t p) {
    if (!is_prime_u32(p))
      throw error(errc::composite_modulus, std::to_string(p) + " is not prime");
    return std::shared_ptr<const PrimeFieldModel>(new PrimeFieldModel(p));
  }

  std::uint32_t prime() const { return p_; }
  int degree() const { return 1; }

  Fp zero() const { return Fp(0, p_); }
  Fp one() const { return Fp(1, p_); }
  Fp base_zero() const { return zero(); }
  Fp base_one() const { return one(); }
  Fp embed(const Fp& b) const { return b; }
  std::vector<Fp> decompose(const Fp& e) const { return {e}; }

  Fp base_from_rat(const Rat& r) const { return Fp::from_rat(r, p_); }

  // The conceptual modulus is x, so a polynomial in the generator reduces
  // to its constant term.
  Fp from_poly(const Poly<Rat>& g) const {
    return g.is_zero() ? zero() : base_from_rat(g[0]);
  }

  // trivial absolute value: 1 on units, 0 at zero; always exact
  ValEnclosure valuation(const Fp& e, int) const {
    return exact_value(Rat(e.is_zero() ? 0 : 1));
  }

 private:
  explicit PrimeFieldModel(std::uint32_t p) : p_(p) {}
  std::uint32_t p_;
};

}  // namespace tvlat
