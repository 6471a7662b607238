#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvlat/errors.hpp"
#include "tvlat/poly.hpp"
#include "tvlat/rational.hpp"
#include "tvlat/valuation.hpp"

namespace tvlat {

class NumberFieldModel;

// Element of D = Q[x]/(m) for the model's modulus m, stored as coordinates
// over the power basis {1, a, ..., a^(d-1)}. Reduction mod m happens before
// storage, so coords are always fully reduced. Values are immutable.
class AlgebraicElem {
 public:
  AlgebraicElem() = default;
  AlgebraicElem(std::shared_ptr<const NumberFieldModel> model, std::vector<Rat> coords)
      : model_(std::move(model)), coords_(std::move(coords)) {}

  const std::vector<Rat>& coords() const { return coords_; }
  const std::shared_ptr<const NumberFieldModel>& model() const { return model_; }

  bool is_zero() const {
    for (const Rat& c : coords_)
      if (!c.is_zero()) return false;
    return true;
  }

  Poly<Rat> as_poly() const { return Poly<Rat>(coords_); }

  friend AlgebraicElem operator+(const AlgebraicElem& a, const AlgebraicElem& b);
  friend AlgebraicElem operator-(const AlgebraicElem& a, const AlgebraicElem& b);
  friend AlgebraicElem operator*(const AlgebraicElem& a, const AlgebraicElem& b);
  AlgebraicElem operator-() const;
  AlgebraicElem inverse() const;
  AlgebraicElem scale(const Rat& s) const;

  friend bool operator==(const AlgebraicElem& a, const AlgebraicElem& b) {
    a.check_model(b);
    return a.coords_ == b.coords_;
  }

  std::string str() const { return poly_to_string(as_poly(), "a", [](const Rat& r) { return r.str(); }); }

 private:
  void check_model(const AlgebraicElem& b) const {
    if (model_.get() != b.model_.get())
      throw error(errc::model_mismatch, "elements of different field models");
  }

  std::shared_ptr<const NumberFieldModel> model_;
  std::vector<Rat> coords_;
};

namespace detail {

// lambda * p has integer coefficients; returns (integer-coefficient poly
// as mpz list lowest-first, lambda).
inline std::pair<std::vector<mpz_class>, mpz_class> clear_denominators(const Poly<Rat>& p) {
  mpz_class lam = 1;
  for (const Rat& c : p.coeffs()) mpz_lcm(lam.get_mpz_t(), lam.get_mpz_t(), c.den().get_mpz_t());
  std::vector<mpz_class> out;
  out.reserve(p.coeffs().size());
  for (const Rat& c : p.coeffs()) out.push_back(c.num() * (lam / c.den()));
  return {std::move(out), std::move(lam)};
}

inline mpz_class eval_mod(const std::vector<mpz_class>& coeffs, const mpz_class& x,
                          const mpz_class& mod) {
  mpz_class acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = (acc * x + coeffs[i]) % mod;
  }
  if (acc < 0) acc += mod;
  return acc;
}

inline long padic_val(mpz_class v, const mpz_class& p) {
  // precondition: v != 0
  long k = 0;
  mpz_class q, r;
  for (;;) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    if (r != 0) return k;
    v = q;
    ++k;
  }
}

}  // namespace detail

// A computable sub-field D = Q(a) of the completion of (Q, |.|), where |.|
// is either the archimedean absolute value or a p-adic one. The generator
// is designated by certified data: an isolating interval with a Sturm root
// count for the real embedding, or a simple residue root with the Hensel
// condition for the p-adic one. Both designations are refinable on demand;
// refinement only ever narrows, so concurrent readers stay sound, and all
// mutation happens under an internal lock.
class NumberFieldModel : public std::enable_shared_from_this<NumberFieldModel> {
 public:
  enum class Kind { real_embedding, padic_embedding };

  using Base = Rat;
  using Elem = AlgebraicElem;

  // D = Q(a) with a the unique real root of m inside [lo, hi].
  // Rejects non-squarefree m, intervals without a sign change, and
  // intervals whose Sturm count differs from one.
  static std::shared_ptr<const NumberFieldModel> real_embedded(Poly<Rat> m, Rat lo, Rat hi) {
    auto model = std::shared_ptr<NumberFieldModel>(new NumberFieldModel());
    model->kind_ = Kind::real_embedding;
    model->init_minpoly(std::move(m));
    if (!(lo < hi)) throw error(errc::invalid_model, "isolating interval is empty");
    const Rat ml = model->minpoly_.eval(lo), mr = model->minpoly_.eval(hi);
    if (ml.sign() * mr.sign() >= 0)
      throw error(errc::invalid_model, "minimal polynomial has no sign change over the interval");
    model->sturm_ = sturm_chain(model->minpoly_);
    const int roots = sturm_count(model->sturm_, lo, hi);
    if (roots != 1)
      throw error(errc::invalid_model, "interval contains " + std::to_string(roots) +
                                           " roots, expected exactly one");
    model->lo_ = std::move(lo);
    model->hi_ = std::move(hi);
    return model;
  }

  // D = Q(a) with a the p-adic root of m lifting the residue root r,
  // certified by m(r) = 0, m'(r) != 0 (mod p).
  static std::shared_ptr<const NumberFieldModel> padic_embedded(Poly<Rat> m, std::uint32_t p,
                                                                std::uint32_t residue) {
    if (!is_prime_u32(p))
      throw error(errc::composite_modulus, std::to_string(p) + " is not prime");
    auto model = std::shared_ptr<NumberFieldModel>(new NumberFieldModel());
    model->kind_ = Kind::padic_embedding;
    model->init_minpoly(std::move(m));
    model->p_ = p;
    for (const Rat& c : model->minpoly_.coeffs())
      if (mpz_class(c.den() % p) == 0)
        throw error(errc::invalid_model, "minimal polynomial has a denominator divisible by p");
    auto [mz, lam] = detail::clear_denominators(model->minpoly_);
    model->minpoly_int_ = std::move(mz);
    if (residue >= p) throw error(errc::invalid_model, "residue root must lie in [0, p)");
    const mpz_class pz = p;
    if (detail::eval_mod(model->minpoly_int_, residue, pz) != 0)
      throw error(errc::invalid_model, "residue is not a root of the minimal polynomial mod p");
    std::vector<mpz_class> deriv = derivative_int(model->minpoly_int_);
    if (detail::eval_mod(deriv, residue, pz) == 0)
      throw error(errc::invalid_model, "residue is a multiple root mod p (Hensel condition fails)");
    model->lift_ = {mpz_class(residue)};
    return model;
  }

  Kind kind() const { return kind_; }
  const Poly<Rat>& minpoly() const { return minpoly_; }
  int degree() const { return minpoly_.degree(); }
  std::uint32_t prime() const { return p_; }

  Elem zero() const { return element(std::vector<Rat>{}); }
  Elem one() const { return element({Rat(1)}); }
  Base base_zero() const { return Rat(0); }
  Base base_one() const { return Rat(1); }

  // Coordinate vector, padded to length d.
  Elem element(std::vector<Rat> coords) const {
    if (static_cast<int>(coords.size()) > degree())
      throw error(errc::dimension_mismatch, "too many coordinates for the field degree");
    coords.resize(static_cast<std::size_t>(degree()), Rat(0));
    return Elem(shared_from_this(), std::move(coords));
  }

  // Arbitrary polynomial in the generator; reduced mod m before storage.
  Elem from_poly(const Poly<Rat>& g) const {
    Poly<Rat> r = g.degree() < degree() ? g : g.divmod(minpoly_).second;
    std::vector<Rat> coords = r.coeffs();
    coords.resize(static_cast<std::size_t>(degree()), Rat(0));
    return Elem(shared_from_this(), std::move(coords));
  }

  Elem embed(const Base& c) const { return element({c}); }

  Base base_from_rat(const Rat& r) const { return r; }

  std::vector<Base> decompose(const Elem& e) const { return e.coords(); }

  // Enclosure of the extended absolute value of e. Real embedding: interval
  // evaluation over the isolating interval, bisected until the enclosure
  // width is at most 2^-precision. p-adic: the exact value p^-v as a point.
  // Exact zeroes are decided by gcd-factor membership, never by smallness.
  ValEnclosure valuation(const Elem& e, int precision) const {
    const Poly<Rat> g = e.as_poly();
    if (g.is_zero()) return exact_value(Rat(0));
    if (kind_ == Kind::real_embedding) return real_valuation(g, precision);
    return padic_valuation(g);
  }

  // --- real-embedding designation -------------------------------------

  // Narrows the stored isolating interval to at most target_width and
  // returns it. Narrowing is monotone; if a bisection point happens to hit
  // the root exactly, the interval collapses to a point.
  RatInterval refine_interval(const Rat& target_width) const {
    if (kind_ != Kind::real_embedding)
      throw error(errc::invalid_model, "interval refinement needs a real-embedded model");
    if (target_width.sign() <= 0)
      throw error(errc::invalid_model, "target width must be positive");
    std::lock_guard<std::mutex> lock(mu_);
    while (hi_ - lo_ > target_width && !exact_root_) bisect_locked();
    return {lo_, hi_};
  }

  RatInterval isolating_interval() const {
    std::lock_guard<std::mutex> lock(mu_);
    return {lo_, hi_};
  }

  std::optional<Rat> exact_rational_root() const {
    std::lock_guard<std::mutex> lock(mu_);
    return exact_root_;
  }

  // --- p-adic designation ----------------------------------------------

  // a_k with m(a_k) = 0 (mod p^k), a_k = a_1 (mod p), canonical in [0, p^k).
  // Consecutive lifts agree: a_{k+1} = a_k (mod p^k).
  mpz_class hensel_root_mod(int k) const {
    if (kind_ != Kind::padic_embedding)
      throw error(errc::invalid_model, "Hensel lifting needs a p-adic model");
    if (k < 1) throw error(errc::invalid_model, "lift exponent must be positive");
    std::lock_guard<std::mutex> lock(mu_);
    const mpz_class pz = p_;
    std::vector<mpz_class> deriv = derivative_int(minpoly_int_);
    while (static_cast<int>(lift_.size()) < k) {
      const int j = static_cast<int>(lift_.size());
      const mpz_class& aj = lift_.back();
      mpz_class pj1;  // p^(j+1)
      mpz_pow_ui(pj1.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(j) + 1);
      const mpz_class fa = detail::eval_mod(minpoly_int_, aj, pj1);
      const mpz_class da = detail::eval_mod(deriv, aj, pz);
      mpz_class u;
      mpz_invert(u.get_mpz_t(), da.get_mpz_t(), pz.get_mpz_t());
      mpz_class next = (aj - fa * u) % pj1;
      if (next < 0) next += pj1;
      lift_.push_back(std::move(next));
    }
    return lift_[static_cast<std::size_t>(k - 1)];
  }

 private:
  NumberFieldModel() = default;

  void init_minpoly(Poly<Rat> m) {
    if (m.degree() < 1)
      throw error(errc::constant_polynomial, "minimal polynomial must be nonconstant");
    if (!poly_squarefree(m))
      throw error(errc::invalid_model, "minimal polynomial is not squarefree");
    minpoly_ = std::move(m);
  }

  static std::vector<mpz_class> derivative_int(const std::vector<mpz_class>& c) {
    std::vector<mpz_class> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long>(i));
    return d;
  }

  // --- Sturm machinery --------------------------------------------------

  static std::vector<Poly<Rat>> sturm_chain(const Poly<Rat>& m) {
    std::vector<Poly<Rat>> chain{m, m.derivative()};
    while (!chain.back().is_zero()) {
      const Poly<Rat>& a = chain[chain.size() - 2];
      const Poly<Rat>& b = chain.back();
      Poly<Rat> r = a.divmod(b).second;
      chain.push_back(-r);
    }
    chain.pop_back();  // drop the final zero
    return chain;
  }

  static int sign_variations(const std::vector<Poly<Rat>>& chain, const Rat& t) {
    int var = 0, prev = 0;
    for (const Poly<Rat>& p : chain) {
      const int s = p.eval(t).sign();
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++var;
      prev = s;
    }
    return var;
  }

  // number of distinct real roots in (a, b); endpoints must not be roots
  static int sturm_count(const std::vector<Poly<Rat>>& chain, const Rat& a, const Rat& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
  }

  void bisect_locked() const {
    const Rat mid = midpoint(lo_, hi_);
    const Rat v = minpoly_.eval(mid);
    if (v.is_zero()) {
      lo_ = mid;
      hi_ = mid;
      exact_root_ = mid;
      return;
    }
    if (minpoly_.eval(lo_).sign() * v.sign() < 0) hi_ = mid;
    else lo_ = mid;
  }

  // --- real valuation ----------------------------------------------------

  static RatInterval interval_eval(const Poly<Rat>& g, const RatInterval& x) {
    if (g.is_zero()) return RatInterval::point(Rat(0));
    RatInterval acc = RatInterval::point(g.leading());
    for (int i = g.degree() - 1; i >= 0; --i)
      acc = acc * x + RatInterval::point(g[static_cast<std::size_t>(i)]);
    return acc;
  }

  ValEnclosure real_valuation(const Poly<Rat>& g, int precision) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (exact_root_) return exact_value(g.eval(*exact_root_).abs());
      if (g.degree() >= 1) {
        // decide g(a) = 0 exactly: a is a root of gcd(g, m) iff the gcd
        // changes sign over the isolating interval
        const Poly<Rat> h = poly_gcd(g, minpoly_);
        if (h.degree() >= 1 && h.eval(lo_).sign() * h.eval(hi_).sign() < 0)
          return exact_value(Rat(0));
      }
    }
    const Rat target = pow2_neg(precision);
    for (;;) {
      std::lock_guard<std::mutex> lock(mu_);
      if (exact_root_) return exact_value(g.eval(*exact_root_).abs());
      const ValEnclosure enc = interval_eval(g, {lo_, hi_}).abs();
      if (enc.width() <= target) return enc;
      bisect_locked();
    }
  }

  // --- p-adic valuation ----------------------------------------------------

  // decide whether the designated root is a root of the monic factor h of m
  bool root_of_factor(const Poly<Rat>& h) const {
    const Poly<Rat> w = minpoly_.divmod(h).first;  // m = h * w exactly
    auto [hz, lh] = detail::clear_denominators(h);
    auto [wz, lw] = detail::clear_denominators(w);
    // Bezout over Q: u*H + v*W = 1; with N clearing the cofactors we get
    // min(v_p(H(a)), v_p(W(a))) <= v_p(N), so lifting one step past that
    // bound separates the vanishing factor from the other.
    const auto [gg, u, v] = poly_xgcd(Poly<Rat>(ratify(hz)), Poly<Rat>(ratify(wz)));
    if (gg.degree() != 0)
      throw error(errc::invalid_model, "factors of a squarefree modulus must be coprime");
    mpz_class den = 1;
    for (const Rat& c : u.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.den().get_mpz_t());
    for (const Rat& c : v.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.den().get_mpz_t());
    const mpz_class pz = p_;
    const long bound = den == 1 ? 0 : detail::padic_val(den, pz);
    const int k = static_cast<int>(bound) + 1;
    mpz_class pk;
    mpz_pow_ui(pk.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(k));
    return detail::eval_mod(hz, hensel_root_mod(k), pk) == 0;
  }

  ValEnclosure padic_valuation(const Poly<Rat>& g) const {
    if (g.degree() >= 1) {
      const Poly<Rat> h = poly_gcd(g, minpoly_);
      if (h.degree() >= 1 && root_of_factor(h)) return exact_value(Rat(0));
    }
    auto [gz, lam] = detail::clear_denominators(g);
    const mpz_class pz = p_;
    const long lam_val = lam == 1 ? 0 : detail::padic_val(lam, pz);
    for (int k = 1;; k *= 2) {
      if (k > (1 << 24))
        throw error(errc::cap_exceeded, "p-adic valuation failed to stabilize");
      mpz_class pk;
      mpz_pow_ui(pk.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(k));
      const mpz_class r = detail::eval_mod(gz, hensel_root_mod(k), pk);
      if (r != 0) {
        const long v = detail::padic_val(r, pz) - lam_val;
        return exact_value(Rat::pow(Rat(static_cast<long>(p_)), -v));
      }
    }
  }

  static std::vector<Rat> ratify(const std::vector<mpz_class>& v) {
    std::vector<Rat> out;
    out.reserve(v.size());
    for (const mpz_class& x : v) out.push_back(Rat(x));
    return out;
  }

  Kind kind_ = Kind::real_embedding;
  Poly<Rat> minpoly_;
  std::vector<Poly<Rat>> sturm_;
  std::vector<mpz_class> minpoly_int_;
  std::uint32_t p_ = 0;

  mutable std::mutex mu_;
  mutable Rat lo_, hi_;
  mutable std::optional<Rat> exact_root_;
  mutable std::vector<mpz_class> lift_;
};

inline AlgebraicElem operator+(const AlgebraicElem& a, const AlgebraicElem& b) {
  a.check_model(b);
  std::vector<Rat> c(a.coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords_[i] + b.coords_[i];
  return AlgebraicElem(a.model_, std::move(c));
}

inline AlgebraicElem operator-(const AlgebraicElem& a, const AlgebraicElem& b) {
  a.check_model(b);
  std::vector<Rat> c(a.coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords_[i] - b.coords_[i];
  return AlgebraicElem(a.model_, std::move(c));
}

inline AlgebraicElem operator*(const AlgebraicElem& a, const AlgebraicElem& b) {
  a.check_model(b);
  return a.model_->from_poly(a.as_poly() * b.as_poly());
}

inline AlgebraicElem AlgebraicElem::operator-() const {
  std::vector<Rat> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -coords_[i];
  return AlgebraicElem(model_, std::move(c));
}

inline AlgebraicElem AlgebraicElem::scale(const Rat& s) const {
  std::vector<Rat> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = coords_[i] * s;
  return AlgebraicElem(model_, std::move(c));
}

inline AlgebraicElem unit_like(const AlgebraicElem& x) { return x.model()->one(); }

inline AlgebraicElem AlgebraicElem::inverse() const {
  const Poly<Rat> g = as_poly();
  if (g.is_zero()) throw error(errc::divide_by_zero, "inverse of zero");
  const auto [h, u, v] = poly_xgcd(g, model_->minpoly());
  if (h.degree() >= 1)
    throw zero_divisor_error(
        "element is a zero divisor (modulus is not irreducible)",
        poly_to_string(h, "a", [](const Rat& r) { return r.str(); }));
  // u*g + v*m = 1, so u is the inverse of g mod m
  return model_->from_poly(u);
}

}  // namespace tvlat
