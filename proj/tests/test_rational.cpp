#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tvlat/prime_field.hpp"
#include "tvlat/rational.hpp"

using namespace tvlat;

TEST_CASE("rational arithmetic is exact and canonical") {
  CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK(Rat(-2, -4).str() == "1/2");
  CHECK(Rat(0, 7).str() == "0");
  CHECK((Rat(1, 2) * Rat(2, 3)).str() == "1/3");
  CHECK(Rat(7, 3) - Rat(1, 3) == Rat(2));
  CHECK(Rat(3, 4) < Rat(4, 5));
  CHECK(Rat(-1, 2) < Rat(0));
}

TEST_CASE("division by zero is a distinct arithmetic error") {
  CHECK_THROWS_MATCHES(Rat(1, 2) / Rat(0), error, Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::divide_by_zero;
                       }));
  CHECK_THROWS_AS(Rat(0).inverse(), error);
  CHECK_THROWS_AS(Rat(1, 0), error);
}

TEST_CASE("rational parsing round-trips canonical text") {
  CHECK(Rat::parse("5/6") == Rat(5, 6));
  CHECK(Rat::parse("-3") == Rat(-3));
  CHECK(Rat::parse("10/4") == Rat(5, 2));
  CHECK(Rat::parse("10/4").str() == "5/2");
  CHECK_THROWS_AS(Rat::parse("1/0"), error);
}

TEST_CASE("canonicalization is idempotent") {
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<long> num(-400, 400), den(1, 60);
  for (int i = 0; i < 200; ++i) {
    const Rat r(num(rng), den(rng));
    const Rat again(r.num(), r.den());
    CHECK(r == again);
    CHECK(r.str() == again.str());
  }
}

TEST_CASE("field axioms hold for rationals on random triples") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 20);
  auto rand_rat = [&] { return Rat(num(rng), den(rng)); };
  for (int i = 0; i < 300; ++i) {
    const Rat a = rand_rat(), b = rand_rat(), c = rand_rat();
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == Rat(0));
    if (!a.is_zero()) CHECK(a * a.inverse() == Rat(1));
  }
}

TEST_CASE("prime field arithmetic") {
  const std::uint32_t p = 13;
  CHECK(Fp(7, p) + Fp(9, p) == Fp(3, p));
  CHECK(Fp(2, p) - Fp(5, p) == Fp(10, p));
  CHECK(Fp(6, p) * Fp(11, p) == Fp(66 % 13, p));
  CHECK(Fp(5, p).inverse() * Fp(5, p) == Fp(1, p));
  CHECK(Fp::from_int(-1, p) == Fp(12, p));
  CHECK(Fp::from_rat(Rat(1, 2), p) * Fp(2, p) == Fp(1, p));
  CHECK_THROWS_AS(Fp(0, p).inverse(), error);
  CHECK_THROWS_AS(Fp::from_rat(Rat(1, 13), p), error);
  CHECK_THROWS_AS(Fp(1, 13) + Fp(1, 7), error);
}

TEST_CASE("field axioms hold for F_p on random triples") {
  std::mt19937 rng(99);
  const std::uint32_t p = 101;
  std::uniform_int_distribution<std::uint32_t> val(0, p - 1);
  for (int i = 0; i < 300; ++i) {
    const Fp a(val(rng), p), b(val(rng), p), c(val(rng), p);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == Fp(0, p));
    if (!a.is_zero()) CHECK(a * a.inverse() == Fp(1, p));
  }
}

TEST_CASE("primality by trial division") {
  CHECK(is_prime_u32(2));
  CHECK(is_prime_u32(3));
  CHECK(is_prime_u32(5));
  CHECK(is_prime_u32(2147483647));  // 2^31 - 1
  CHECK_FALSE(is_prime_u32(1));
  CHECK_FALSE(is_prime_u32(4));
  CHECK_FALSE(is_prime_u32(91));
  CHECK_THROWS_AS(is_prime_u32(1ull << 31), error);
}
