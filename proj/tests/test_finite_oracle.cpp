#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "tvlat/finite_oracle.hpp"

using namespace tvlat;

TEST_CASE("gaussian-binomial subspace counts") {
  CHECK(count_subspaces(2, 2) == 5);
  CHECK(count_subspaces(3, 1) == 2);
  CHECK(count_subspaces(3, 2) == 6);
  CHECK(count_subspaces(2, 3) == 16);
  CHECK(count_subspaces(2, 0) == 1);
  CHECK(count_subspaces(5, 0) == 1);
  CHECK(count_subspaces(7, 2) == 2 + 8);  // 1 + (q+1) + 1
  CHECK_THROWS_MATCHES(count_subspaces(4, 2), error, Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::composite_modulus;
                       }));
}

TEST_CASE("exhaustive subspace enumeration at small scale") {
  const auto s22 = enumerate_subspaces(2, 2);
  REQUIRE(s22.size() == 5);
  CHECK(s22.front().is_zero());
  CHECK(s22.back().is_full());
  int lines = 0;
  for (const auto& s : s22) lines += s.dim() == 1;
  CHECK(lines == 3);

  CHECK(enumerate_subspaces(2, 1).size() == 2);
  CHECK(enumerate_subspaces(3, 2).size() == 6);
  CHECK(enumerate_subspaces(2, 0).size() == 1);

  // all results are distinct canonical forms
  const auto s52 = enumerate_subspaces(5, 2);
  std::set<std::vector<std::uint32_t>> keys;
  for (const auto& s : s52) {
    std::vector<std::uint32_t> key{static_cast<std::uint32_t>(s.dim())};
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t j = 0; j < s.ambient_dim(); ++j) key.push_back(s.basis().at(i, j).value());
    keys.insert(key);
  }
  CHECK(keys.size() == s52.size());
  CHECK(mpz_class(s52.size()) == count_subspaces(5, 2));

  CHECK_THROWS_MATCHES(enumerate_subspaces(7, 4), error, Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::cap_exceeded;
                       }));
}

TEST_CASE("strip topologies materialize saturated opens") {
  const auto subspaces = enumerate_subspaces(2, 2);

  const FiniteTopology discrete = strip_topology_finite(2, 2, subspaces.front());
  CHECK(discrete.opens.size() == 16);  // 2^(p^n)

  const FiniteTopology indiscrete = strip_topology_finite(2, 2, subspaces.back());
  CHECK(indiscrete.opens == std::vector<std::uint32_t>{0, 15});

  // S = span{(1,0)}: points 0=(0,0) and 1=(1,0); cosets {0,1} and {2,3}
  Matrix<Fp> g(1, 2, Fp(0, 2));
  g.at(0, 0) = Fp(1, 2);
  const auto line = Subspace<Fp>::from_generators(2, g);
  const FiniteTopology strip = strip_topology_finite(2, 2, line);
  CHECK(strip.opens == std::vector<std::uint32_t>{0, 3, 12, 15});
}

TEST_CASE("exhaustive topology enumeration matches the expected counts") {
  CHECK(enumerate_compatible_topologies(2, 1).size() == 2);
  CHECK(enumerate_compatible_topologies(3, 1).size() == 2);
  CHECK(enumerate_compatible_topologies(2, 2).size() == 5);
  CHECK_THROWS_AS(enumerate_compatible_topologies(5, 2), error);
}

TEST_CASE("enumerated topologies are exactly the strip topologies") {
  for (const auto& [p, n] : std::vector<std::pair<std::uint32_t, int>>{{2, 1}, {3, 1}, {2, 2}}) {
    std::vector<FiniteTopology> enumerated = enumerate_compatible_topologies(p, n);
    std::vector<FiniteTopology> strips;
    for (const auto& s : enumerate_subspaces(p, n)) strips.push_back(strip_topology_finite(p, n, s));
    std::sort(enumerated.begin(), enumerated.end());
    std::sort(strips.begin(), strips.end());
    CHECK(enumerated == strips);
  }
}

TEST_CASE("closure of zero recovers the subspace of each strip topology") {
  for (const auto& [p, n] : std::vector<std::pair<std::uint32_t, int>>{{2, 1}, {3, 1}, {2, 2}}) {
    const finite_detail::PointSpace space(p, n);
    for (const auto& s : enumerate_subspaces(p, n)) {
      const FiniteTopology t = strip_topology_finite(p, n, s);
      const std::uint32_t expected = subspace_point_mask(p, n, s);
      CHECK(t.closure_of_zero_mask() == expected);
      // the closure agrees with the intersection of zero's opens
      CHECK(t.zero_neighborhood_intersection_mask() == expected);
      // every open is invariant under adding the subspace
      for (std::uint32_t u : t.opens) {
        std::uint32_t saturated = 0;
        for (std::size_t x = 0; x < space.m; ++x)
          if (u >> x & 1)
            for (std::size_t y = 0; y < space.m; ++y)
              if (expected >> y & 1) saturated |= 1u << space.add[x * space.m + y];
        CHECK(saturated == u);
      }
    }
  }
}

TEST_CASE("closure of zero within each enumerated topology is a subspace point set") {
  const auto subspaces = enumerate_subspaces(2, 2);
  std::set<std::uint32_t> masks;
  for (const auto& s : subspaces) masks.insert(subspace_point_mask(2, 2, s));
  for (const auto& t : enumerate_compatible_topologies(2, 2))
    CHECK(masks.count(t.closure_of_zero_mask()) == 1);
}
