#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tvlat/errors.hpp"

namespace tvlat {

// Field element types additionally provide unit_like(x), returning the
// multiplicative identity of x's field; context-carrying types (elements
// of Q(a), F_p) recover it from x itself.
template <class F>
concept FieldScalar = requires(const F a, const F b) {
  { a + b } -> std::same_as<F>;
  { a - b } -> std::same_as<F>;
  { a * b } -> std::same_as<F>;
  { -a } -> std::same_as<F>;
  { a.inverse() } -> std::same_as<F>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a == b } -> std::convertible_to<bool>;
  { unit_like(a) } -> std::same_as<F>;
};

// Dense univariate polynomial over a field, coefficients stored lowest
// degree first. The zero polynomial is the empty list; otherwise the
// leading coefficient is nonzero. Dense storage is fine here: every
// modulus in this library has tiny degree.
template <FieldScalar F>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(F v) { return Poly(std::vector<F>{std::move(v)}); }

  bool is_zero() const { return c_.empty(); }
  // degree of the zero polynomial is -1
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<F>& coeffs() const { return c_; }
  const F& operator[](std::size_t i) const { return c_[i]; }
  const F& leading() const { return c_.back(); }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<F> r;
    const std::size_t n = std::max(a.c_.size(), b.c_.size());
    r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < a.c_.size() && i < b.c_.size()) r.push_back(a.c_[i] + b.c_[i]);
      else if (i < a.c_.size()) r.push_back(a.c_[i]);
      else r.push_back(b.c_[i]);
    }
    return Poly(std::move(r));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  Poly operator-() const {
    std::vector<F> r;
    r.reserve(c_.size());
    for (const F& x : c_) r.push_back(-x);
    return Poly(std::move(r));
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, a.c_[0] - a.c_[0]);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return Poly(std::move(r));
  }

  Poly scaled(const F& s) const {
    std::vector<F> r;
    r.reserve(c_.size());
    for (const F& x : c_) r.push_back(x * s);
    return Poly(std::move(r));
  }

  // Euclidean division: returns (q, r) with *this = q*g + r, deg r < deg g.
  std::pair<Poly, Poly> divmod(const Poly& g) const {
    if (g.is_zero()) throw error(errc::divide_by_zero, "polynomial division by zero");
    Poly rem = *this;
    if (rem.degree() < g.degree()) return {Poly(), rem};
    const F lg_inv = g.leading().inverse();
    std::vector<F> q(static_cast<std::size_t>(rem.degree() - g.degree()) + 1,
                     lg_inv - lg_inv);
    while (!rem.is_zero() && rem.degree() >= g.degree()) {
      const std::size_t shift = static_cast<std::size_t>(rem.degree() - g.degree());
      const F coef = rem.leading() * lg_inv;
      q[shift] = coef;
      std::vector<F> sub = rem.c_;
      for (std::size_t i = 0; i < g.c_.size(); ++i)
        sub[shift + i] = sub[shift + i] - coef * g.c_[i];
      sub.pop_back();  // leading term cancels exactly
      rem = Poly(std::move(sub));
    }
    return {Poly(std::move(q)), rem};
  }

  F eval(const F& x) const {
    if (is_zero()) return x - x;
    F acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<F> r;
    r.reserve(c_.size() - 1);
    const F one = c_.back() * c_.back().inverse();
    F k = c_[0] - c_[0];
    for (std::size_t i = 1; i < c_.size(); ++i) {
      k = k + one;  // k holds i as a field element
      r.push_back(c_[i] * k);
    }
    return Poly(std::move(r));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(leading().inverse());
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<F> c_;
};

// Monic gcd by the Euclidean algorithm. Precondition: not both zero.
template <FieldScalar F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
  if (a.is_zero() && b.is_zero())
    throw error(errc::divide_by_zero, "gcd of two zero polynomials");
  while (!b.is_zero()) {
    Poly<F> r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Extended Euclid: returns (g, u, v) with u*a + v*b = g, g monic.
template <FieldScalar F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> poly_xgcd(const Poly<F>& a, const Poly<F>& b) {
  if (a.is_zero() && b.is_zero())
    throw error(errc::divide_by_zero, "gcd of two zero polynomials");
  Poly<F> r0 = a, r1 = b;
  Poly<F> s0 = Poly<F>::constant(a.is_zero() ? b.leading() * b.leading().inverse()
                                             : a.leading() * a.leading().inverse());
  Poly<F> s1, t0, t1 = s0;
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1); r1 = std::move(r);
    Poly<F> s2 = s0 - q * s1;
    s0 = std::move(s1); s1 = std::move(s2);
    Poly<F> t2 = t0 - q * t1;
    t0 = std::move(t1); t1 = std::move(t2);
  }
  const F scale = r0.leading().inverse();
  return {r0.scaled(scale), s0.scaled(scale), t0.scaled(scale)};
}

// true iff gcd(m, m') = 1. Precondition: m nonconstant.
template <FieldScalar F>
bool poly_squarefree(const Poly<F>& m) {
  if (m.degree() < 1)
    throw error(errc::constant_polynomial, "squarefree check needs a nonconstant polynomial");
  return poly_gcd(m, m.derivative()).degree() == 0;
}

// Renders with terms in increasing degree, e.g. "-2+x^2" or "1/2+3a-a^2".
// `str(coef)` must produce the canonical scalar form.
template <FieldScalar F, class Str>
std::string poly_to_string(const Poly<F>& p, const std::string& sym, Str&& str) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = 0; i <= p.degree(); ++i) {
    const F& c = p[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    std::string cs = str(c);
    const bool neg = !cs.empty() && cs[0] == '-';
    if (!out.empty()) out += neg ? "-" : "+";
    else if (neg) out += "-";
    if (neg) cs = cs.substr(1);
    if (i == 0) {
      out += cs;
    } else {
      if (cs != "1") out += cs;
      out += sym;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

}  // namespace tvlat
