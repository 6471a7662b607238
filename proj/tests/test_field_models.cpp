#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tvlat/number_field.hpp"

using namespace tvlat;

namespace {

Poly<Rat> P(std::initializer_list<long> coeffs) {
  std::vector<Rat> c;
  for (long v : coeffs) c.push_back(Rat(v));
  return Poly<Rat>(std::move(c));
}

std::shared_ptr<const NumberFieldModel> sqrt2() {
  return NumberFieldModel::real_embedded(P({-2, 0, 1}), Rat(1), Rat(2));
}

std::shared_ptr<const NumberFieldModel> gauss5() {
  // Q(a) with a the 5-adic root of x^2+1 lifting 2
  return NumberFieldModel::padic_embedded(P({1, 0, 1}), 5, 2);
}

bool code_is(const error& e, errc c) { return e.code() == c; }

}  // namespace

TEST_CASE("real-embedded model accepts certified isolating intervals") {
  auto m = sqrt2();
  CHECK(m->degree() == 2);
  CHECK(m->kind() == NumberFieldModel::Kind::real_embedding);
  // [0,3] also isolates sqrt(2): the other root is negative
  CHECK_NOTHROW(NumberFieldModel::real_embedded(P({-2, 0, 1}), Rat(0), Rat(3)));
}

TEST_CASE("real-embedded model rejections") {
  // not squarefree: (x-1)^2
  CHECK_THROWS_MATCHES(NumberFieldModel::real_embedded(P({1, -2, 1}), Rat(0), Rat(2)), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return code_is(e, errc::invalid_model); }));
  // no sign change: x^2-2 over [2,3]
  CHECK_THROWS_AS(NumberFieldModel::real_embedded(P({-2, 0, 1}), Rat(2), Rat(3)), error);
  // sign change but three roots: x^3-3x over [-2,2] (Sturm count 3)
  CHECK_THROWS_MATCHES(NumberFieldModel::real_embedded(P({0, -3, 0, 1}), Rat(-2), Rat(2)), error,
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return code_is(e, errc::invalid_model) &&
                                std::string(e.what()).find("3 roots") != std::string::npos;
                       }));
  // empty interval
  CHECK_THROWS_AS(NumberFieldModel::real_embedded(P({-2, 0, 1}), Rat(2), Rat(1)), error);
  // constant minpoly
  CHECK_THROWS_AS(NumberFieldModel::real_embedded(P({3}), Rat(0), Rat(1)), error);
}

TEST_CASE("p-adic model accepts the Hensel-certified residue") {
  auto m = gauss5();
  CHECK(m->degree() == 2);
  CHECK(m->prime() == 5);
}

TEST_CASE("p-adic model rejections") {
  // composite modulus
  CHECK_THROWS_MATCHES(NumberFieldModel::padic_embedded(P({1, 0, 1}), 15, 2), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return code_is(e, errc::composite_modulus); }));
  // residue is not a root mod 5
  CHECK_THROWS_AS(NumberFieldModel::padic_embedded(P({1, 0, 1}), 5, 1), error);
  // multiple root mod 5: x^2-5 at 0
  CHECK_THROWS_AS(NumberFieldModel::padic_embedded(P({-5, 0, 1}), 5, 0), error);
  // denominator divisible by p
  CHECK_THROWS_AS(
      NumberFieldModel::padic_embedded(Poly<Rat>({Rat(1, 5), Rat(0), Rat(1)}), 5, 2), error);
}

TEST_CASE("arithmetic in Q(sqrt 2)") {
  auto m = sqrt2();
  const AlgebraicElem a = m->element({Rat(0), Rat(1)});
  CHECK(a * a == m->element({Rat(2)}));                       // a^2 = 2
  const AlgebraicElem one = m->one();
  CHECK((one + a) * (one - a) == m->element({Rat(-1)}));      // 1 - a^2 = -1
  CHECK(a.inverse() == m->element({Rat(0), Rat(1, 2)}));      // 1/a = a/2
  CHECK(a.inverse() * a == one);
  CHECK_THROWS_AS(m->zero().inverse(), error);
}

TEST_CASE("zero divisors carry a gcd witness") {
  auto m = NumberFieldModel::real_embedded(P({-1, 0, 1}), Rat(0, 1), Rat(3, 2));
  const AlgebraicElem x = m->element({Rat(-1), Rat(1)});  // a - 1 with a^2 = 1
  try {
    (void)x.inverse();
    FAIL("expected a zero-divisor error");
  } catch (const zero_divisor_error& e) {
    CHECK(e.witness() == "-1+a");
  }
}

TEST_CASE("decomposition over the power basis") {
  auto m = sqrt2();
  CHECK(m->decompose(m->element({Rat(3), Rat(2)})) == std::vector<Rat>{Rat(3), Rat(2)});
  CHECK(m->decompose(m->embed(Rat(5, 7))) == std::vector<Rat>{Rat(5, 7), Rat(0)});
  // a^2 reduces before storage
  CHECK(m->from_poly(P({0, 0, 1})) == m->element({Rat(2)}));
  CHECK(m->decompose(m->from_poly(P({0, 0, 1}))) == std::vector<Rat>{Rat(2), Rat(0)});
}

TEST_CASE("decompose is K-linear on random elements") {
  auto m = sqrt2();
  std::mt19937 rng(4);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  auto rand_elem = [&] {
    return m->element({Rat(num(rng), den(rng)), Rat(num(rng), den(rng))});
  };
  for (int i = 0; i < 100; ++i) {
    const AlgebraicElem x = rand_elem(), y = rand_elem();
    const Rat c(num(rng), den(rng));
    const auto lhs = m->decompose(x + y.scale(c));
    const auto dx = m->decompose(x), dy = m->decompose(y);
    for (std::size_t k = 0; k < lhs.size(); ++k) CHECK(lhs[k] == dx[k] + c * dy[k]);
  }
}

TEST_CASE("archimedean valuation encloses the real absolute value") {
  auto m = sqrt2();
  CHECK(m->valuation(m->zero(), 4).is_zero_point());

  const AlgebraicElem a = m->element({Rat(0), Rat(1)});
  const ValEnclosure e = m->valuation(a, 10);
  CHECK(e.width() <= pow2_neg(10));
  CHECK(e.lower * e.lower <= Rat(2));  // the enclosure straddles sqrt(2)
  CHECK(Rat(2) <= e.upper * e.upper);
  CHECK(e.lower.sign() > 0);

  // rational elements collapse to an exact point
  const ValEnclosure r = m->valuation(m->embed(Rat(-5, 7)), 1);
  CHECK(r.is_point());
  CHECK(r.lower == Rat(5, 7));
}

TEST_CASE("valuation separates zero exactly, never numerically") {
  // reducible squarefree modulus x^2-1 isolated around the root 1: the
  // residue a-1 is nonzero in D but evaluates to zero in the embedding
  auto m = NumberFieldModel::real_embedded(P({-1, 0, 1}), Rat(1, 2), Rat(3, 2));
  const AlgebraicElem x = m->element({Rat(-1), Rat(1)});
  CHECK_FALSE(x.is_zero());
  CHECK(m->valuation(x, 8).is_zero_point());
  const AlgebraicElem y = m->element({Rat(1), Rat(1)});  // a + 1 -> 2
  const ValEnclosure e = m->valuation(y, 8);
  CHECK(e.lower <= Rat(2));
  CHECK(Rat(2) <= e.upper);
  CHECK(e.width() <= pow2_neg(8));
}

TEST_CASE("nonzero elements never produce the zero point enclosure") {
  auto m = sqrt2();
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
  for (int i = 0; i < 60; ++i) {
    const AlgebraicElem x = m->element({Rat(num(rng), den(rng)), Rat(num(rng), den(rng))});
    const ValEnclosure e = m->valuation(x, 12);
    CHECK(e.is_zero_point() == x.is_zero());
  }
}

TEST_CASE("valuation respects multiplicativity and the triangle inequality") {
  auto m = sqrt2();
  std::mt19937 rng(22);
  std::uniform_int_distribution<long> num(-6, 6), den(1, 3);
  for (int i = 0; i < 60; ++i) {
    const AlgebraicElem x = m->element({Rat(num(rng), den(rng)), Rat(num(rng), den(rng))});
    const AlgebraicElem y = m->element({Rat(num(rng), den(rng)), Rat(num(rng), den(rng))});
    const ValEnclosure ex = m->valuation(x, 10), ey = m->valuation(y, 10);
    const ValEnclosure exy = m->valuation(x * y, 30);
    // both enclose the true value, so [lx*ly, ux*uy] must meet the refined product enclosure
    CHECK(std::max(exy.lower, ex.lower * ey.lower) <= std::min(exy.upper, ex.upper * ey.upper));
    const ValEnclosure es = m->valuation(x + y, 30);
    CHECK(es.lower <= ex.upper + ey.upper);
  }
}

TEST_CASE("hensel lifting reproduces the canonical lift") {
  auto m = gauss5();
  CHECK(m->hensel_root_mod(1) == 2);
  CHECK(m->hensel_root_mod(2) == 7);
  CHECK(m->hensel_root_mod(3) == 57);
  CHECK(m->hensel_root_mod(4) == 182);
  mpz_class pk = 1;
  for (int k = 1; k <= 30; ++k) {
    pk *= 5;
    const mpz_class ak = m->hensel_root_mod(k);
    CHECK((ak * ak + 1) % pk == 0);
    CHECK(ak % 5 == 2);
    if (k > 1) {
      mpz_class prev_mod = pk / 5;
      CHECK((ak - m->hensel_root_mod(k - 1)) % prev_mod == 0);
    }
  }
}

TEST_CASE("p-adic valuation is an exact point") {
  auto m = gauss5();
  const AlgebraicElem a = m->element({Rat(0), Rat(1)});
  // a - 2 = 0 mod 5 but not mod 25 (the lift of 2 is 7)
  const ValEnclosure e = m->valuation(a - m->embed(Rat(2)), 1);
  CHECK(e.is_point());
  CHECK(e.lower == Rat(1, 5));
  // a is a unit: a^2 = -1
  CHECK(m->valuation(a, 1).lower == Rat(1));
  // integer powers of p
  CHECK(m->valuation(m->embed(Rat(5)), 1).lower == Rat(1, 5));
  CHECK(m->valuation(m->embed(Rat(1, 5)), 1).lower == Rat(5));
  CHECK(m->valuation(m->element({Rat(0), Rat(1, 5)}), 1).lower == Rat(5));
  CHECK(m->valuation(m->zero(), 1).is_zero_point());
}

TEST_CASE("p-adic zero separation on a reducible modulus") {
  // x^2-1 = (x-1)(x+1) over Q_5; designate the root lifting 1
  auto m = NumberFieldModel::padic_embedded(P({-1, 0, 1}), 5, 1);
  const AlgebraicElem vanishing = m->element({Rat(-1), Rat(1)});  // a-1 -> 0
  CHECK(m->valuation(vanishing, 1).is_zero_point());
  const AlgebraicElem unit = m->element({Rat(1), Rat(1)});  // a+1 -> 2, a unit
  CHECK(m->valuation(unit, 1).lower == Rat(1));
}

TEST_CASE("interval refinement narrows monotonically") {
  auto m = sqrt2();
  const RatInterval first = m->refine_interval(Rat(1, 8));
  CHECK(first.width() <= Rat(1, 8));
  CHECK(Rat(1) <= first.lo);
  CHECK(first.hi <= Rat(2));
  CHECK(first.lo * first.lo <= Rat(2));
  CHECK(Rat(2) <= first.hi * first.hi);
  // asking for a coarser width must not widen the interval back
  const RatInterval second = m->refine_interval(Rat(1));
  CHECK(first.lo <= second.lo);
  CHECK(second.hi <= first.hi);
  CHECK_THROWS_AS(m->refine_interval(Rat(0)), error);
  CHECK_THROWS_AS(gauss5()->refine_interval(Rat(1)), error);
}

TEST_CASE("bisection that hits a rational root collapses the interval") {
  auto m = NumberFieldModel::real_embedded(P({-1, 0, 1}), Rat(1, 2), Rat(3, 2));
  const RatInterval refined = m->refine_interval(Rat(1, 4));
  CHECK(refined.lo == Rat(1));
  CHECK(refined.hi == Rat(1));
  CHECK(m->exact_rational_root().has_value());
  // valuations become exact once the root is known exactly
  const ValEnclosure e = m->valuation(m->element({Rat(1), Rat(3)}), 1);
  CHECK(e.is_point());
  CHECK(e.lower == Rat(4));
}

TEST_CASE("hensel lifting requires a p-adic model") {
  CHECK_THROWS_AS(sqrt2()->hensel_root_mod(2), error);
}
