#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tvlat/poly.hpp"
#include "tvlat/prime_field.hpp"
#include "tvlat/rational.hpp"

using namespace tvlat;

namespace {

Poly<Rat> P(std::initializer_list<long> coeffs) {
  std::vector<Rat> c;
  for (long v : coeffs) c.push_back(Rat(v));
  return Poly<Rat>(std::move(c));
}

Poly<Rat> random_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(-1, max_deg);
  std::uniform_int_distribution<long> coef(-6, 6);
  const int d = deg(rng);
  std::vector<Rat> c;
  for (int i = 0; i <= d; ++i) c.push_back(Rat(coef(rng)));
  return Poly<Rat>(std::move(c));
}

}  // namespace

TEST_CASE("polynomial product and identities") {
  // (x-1)(x+1) = x^2-1
  CHECK(P({-1, 1}) * P({1, 1}) == P({-1, 0, 1}));
  CHECK(P({3, 2, 1}) + Poly<Rat>() == P({3, 2, 1}));
  CHECK((P({1, 1}) - P({1, 1})).is_zero());
  CHECK(Poly<Rat>().degree() == -1);
}

TEST_CASE("euclidean division") {
  // x^2 - 2 = (x+1)(x-1) - 1, worked by hand
  const auto [q, r] = P({-2, 0, 1}).divmod(P({-1, 1}));
  CHECK(q == P({1, 1}));
  CHECK(r == P({-1}));
  CHECK_THROWS_AS(P({1}).divmod(Poly<Rat>()), error);

  std::mt19937 rng(12);
  for (int i = 0; i < 200; ++i) {
    const Poly<Rat> f = random_poly(rng, 6), g = random_poly(rng, 4);
    if (g.is_zero()) continue;
    const auto [qq, rr] = f.divmod(g);
    CHECK(qq * g + rr == f);
    CHECK(rr.degree() < g.degree());
  }
}

TEST_CASE("gcd examples and contract") {
  CHECK(poly_gcd(P({-2, 0, 1}), P({-1, 1})) == P({1}));      // coprime
  CHECK(poly_gcd(P({-1, 0, 1}), P({-1, 1})) == P({-1, 1}));  // common factor x-1
  // gcd(x^2-2, 2x) = 1: the derivative certifies x^2-2 squarefree
  CHECK(poly_gcd(P({-2, 0, 1}), P({0, 2})) == P({1}));
  CHECK_THROWS_AS(poly_gcd(Poly<Rat>(), Poly<Rat>()), error);

  std::mt19937 rng(34);
  for (int i = 0; i < 200; ++i) {
    const Poly<Rat> f = random_poly(rng, 5), g = random_poly(rng, 5);
    if (f.is_zero() && g.is_zero()) continue;
    const Poly<Rat> h = poly_gcd(f, g);
    CHECK(h.leading() == Rat(1));
    if (!f.is_zero()) CHECK(f.divmod(h).second.is_zero());
    if (!g.is_zero()) CHECK(g.divmod(h).second.is_zero());
  }
}

TEST_CASE("extended euclid certifies the gcd") {
  std::mt19937 rng(56);
  for (int i = 0; i < 150; ++i) {
    const Poly<Rat> f = random_poly(rng, 5), g = random_poly(rng, 5);
    if (f.is_zero() && g.is_zero()) continue;
    const auto [h, u, v] = poly_xgcd(f, g);
    CHECK(u * f + v * g == h);
    CHECK(h == poly_gcd(f, g));
  }
}

TEST_CASE("squarefree check") {
  CHECK(poly_squarefree(P({-2, 0, 1})));        // x^2-2
  CHECK_FALSE(poly_squarefree(P({1, -2, 1})));  // (x-1)^2
  CHECK(poly_squarefree(P({1, 0, 1})));         // x^2+1
  CHECK_THROWS_AS(poly_squarefree(P({3})), error);
}

TEST_CASE("ring axioms and degree additivity on random triples") {
  std::mt19937 rng(78);
  for (int i = 0; i < 150; ++i) {
    const Poly<Rat> f = random_poly(rng, 4), g = random_poly(rng, 4), h = random_poly(rng, 4);
    CHECK((f + g) + h == f + (g + h));
    CHECK(f + g == g + f);
    CHECK(f * g == g * f);
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * (g + h) == f * g + f * h);
    if (!f.is_zero() && !g.is_zero()) CHECK((f * g).degree() == f.degree() + g.degree());
  }
}

TEST_CASE("polynomials over F_p") {
  const std::uint32_t p = 5;
  auto FP = [&](std::initializer_list<int> coeffs) {
    std::vector<Fp> c;
    for (int v : coeffs) c.push_back(Fp::from_int(v, p));
    return Poly<Fp>(std::move(c));
  };
  // x^2+1 factors as (x-2)(x-3) over F_5
  CHECK(FP({-2, 1}) * FP({-3, 1}) == FP({1, 0, 1}));
  CHECK(poly_gcd(FP({1, 0, 1}), FP({-2, 1})) == FP({-2, 1}).monic());
  // derivative in characteristic p: (x^5)' = 0
  Poly<Fp> x5 = FP({0, 0, 0, 0, 0, 1});
  CHECK(x5.derivative().is_zero());
}

TEST_CASE("canonical printing") {
  auto str = [](const Poly<Rat>& p) {
    return poly_to_string(p, "x", [](const Rat& r) { return r.str(); });
  };
  CHECK(str(P({-2, 0, 1})) == "-2+x^2");
  CHECK(str(P({0, -1})) == "-x");
  CHECK(str(Poly<Rat>()) == "0");
  CHECK(str(Poly<Rat>({Rat(1, 2), Rat(3), Rat(-1)})) == "1/2+3x-x^2");
}
