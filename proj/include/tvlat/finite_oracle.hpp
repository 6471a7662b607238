#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <future>
#include <set>
#include <thread>
#include <vector>

#include "tvlat/errors.hpp"
#include "tvlat/matrix.hpp"
#include "tvlat/prime_field.hpp"
#include "tvlat/rational.hpp"
#include "tvlat/subspace.hpp"

namespace tvlat {

// Number of subspaces of F_q^n, by the Gaussian-binomial sum
//   sum_d  prod_{k=1..n}(q^k-1) / (prod_{k=1..d}(q^k-1) prod_{k=1..n-d}(q^k-1))
// with empty products equal to 1. Exact; q must be prime.
inline mpz_class count_subspaces(std::uint32_t q, int n) {
  if (!is_prime_u32(q))
    throw error(errc::composite_modulus, std::to_string(q) + " is not prime");
  if (n < 0) throw error(errc::invalid_model, "dimension must be nonnegative");
  const mpz_class qz = q;
  auto qfact = [&](int j) {
    mpz_class acc = 1, qk = 1;
    for (int k = 1; k <= j; ++k) {
      qk *= qz;
      acc *= qk - 1;
    }
    return acc;
  };
  const mpz_class num = qfact(n);
  mpz_class total = 0;
  for (int d = 0; d <= n; ++d) {
    mpz_class den = qfact(d) * qfact(n - d), term;
    mpz_divexact(term.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    total += term;
  }
  return total;
}

namespace finite_detail {

constexpr std::size_t kMaxPoints = 625;  // exhaustive-enumeration cap, 5^4

struct PointSpace {
  std::uint32_t p;
  int n;
  std::size_t m;                         // p^n points
  std::vector<std::uint16_t> add;        // add[i*m+j]
  std::vector<std::uint16_t> smul;       // smul[c*m+i]

  PointSpace(std::uint32_t p_, int n_) : p(p_), n(n_) {
    m = 1;
    for (int i = 0; i < n; ++i) {
      m *= p;
      if (m > kMaxPoints) throw error(errc::cap_exceeded, "p^n exceeds the enumeration cap 625");
    }
    add.resize(m * m);
    smul.resize(p * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        std::size_t out = 0, pw = 1, a = i, b = j;
        for (int k = 0; k < n; ++k) {
          out += ((a % p + b % p) % p) * pw;
          a /= p; b /= p; pw *= p;
        }
        add[i * m + j] = static_cast<std::uint16_t>(out);
      }
    for (std::uint32_t c = 0; c < p; ++c)
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t out = 0, pw = 1, a = i;
        for (int k = 0; k < n; ++k) {
          out += (a % p * c % p) * pw;
          a /= p; pw *= p;
        }
        smul[c * m + i] = static_cast<std::uint16_t>(out);
      }
  }

  // little-endian digits of the point index
  std::vector<Fp> decode(std::size_t idx) const {
    std::vector<Fp> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      v.emplace_back(idx % p, p);
      idx /= p;
    }
    return v;
  }
};

using PointMask = std::array<std::uint64_t, (kMaxPoints + 63) / 64>;

inline void mask_set(PointMask& s, std::size_t i) { s[i / 64] |= 1ull << (i % 64); }
inline bool mask_test(const PointMask& s, std::size_t i) { return s[i / 64] >> (i % 64) & 1; }

}  // namespace finite_detail

// Every subspace of F_p^n found by exhaustive closure: grow spans one
// generator at a time starting from {0}, deduplicating by point set. The
// enumeration is independent of the counting formula, which is the point:
// it serves as its brute-force oracle. Results are canonical RREF bases in
// a deterministic order (by dimension, then entry-lexicographic).
inline std::vector<Subspace<Fp>> enumerate_subspaces(std::uint32_t p, int n) {
  using namespace finite_detail;
  if (!is_prime_u32(p))
    throw error(errc::composite_modulus, std::to_string(p) + " is not prime");
  if (n < 0) throw error(errc::invalid_model, "dimension must be nonnegative");
  const PointSpace space(p, n);
  const std::size_t m = space.m;

  struct Node {
    PointMask mask;
    std::vector<std::uint16_t> points;
  };
  std::set<PointMask> seen;
  std::vector<Node> work;
  Node zero{};
  mask_set(zero.mask, 0);
  zero.points = {0};
  seen.insert(zero.mask);
  work.push_back(zero);

  for (std::size_t head = 0; head < work.size(); ++head) {
    const Node cur = work[head];  // copy: work may reallocate
    for (std::size_t v = 1; v < m; ++v) {
      if (mask_test(cur.mask, v)) continue;
      Node next{};
      next.mask = cur.mask;
      for (std::uint32_t c = 1; c < p; ++c) {
        const std::uint16_t cv = space.smul[c * m + v];
        for (std::uint16_t s : cur.points) mask_set(next.mask, space.add[s * m + cv]);
      }
      if (!seen.insert(next.mask).second) continue;
      next.points.reserve(cur.points.size() * p);
      for (std::size_t i = 0; i < m; ++i)
        if (mask_test(next.mask, i)) next.points.push_back(static_cast<std::uint16_t>(i));
      work.push_back(std::move(next));
    }
  }

  const Fp fz(0, p);
  std::vector<Subspace<Fp>> out;
  out.reserve(work.size());
  for (const Node& node : work) {
    std::vector<std::vector<Fp>> rows;
    rows.reserve(node.points.size());
    for (std::uint16_t pt : node.points) rows.push_back(space.decode(pt));
    out.push_back(Subspace<Fp>::from_generators(
        static_cast<std::size_t>(n), Matrix<Fp>::from_rows(rows, fz, static_cast<std::size_t>(n))));
  }
  std::sort(out.begin(), out.end(), [](const Subspace<Fp>& a, const Subspace<Fp>& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.ambient_dim(); ++j) {
        const std::uint32_t x = a.basis().at(i, j).value(), y = b.basis().at(i, j).value();
        if (x != y) return x < y;
      }
    return false;
  });
  return out;
}

// A topology on the (enumerated) points of F_p^n, with every open set
// materialized as a bitmask. Feasible only for tiny point counts.
struct FiniteTopology {
  std::uint32_t point_count = 0;
  std::vector<std::uint32_t> opens;  // sorted ascending

  friend bool operator==(const FiniteTopology& a, const FiniteTopology& b) {
    return a.point_count == b.point_count && a.opens == b.opens;
  }
  friend bool operator<(const FiniteTopology& a, const FiniteTopology& b) {
    if (a.point_count != b.point_count) return a.point_count < b.point_count;
    return a.opens < b.opens;
  }

  bool is_open(std::uint32_t mask) const {
    return std::binary_search(opens.begin(), opens.end(), mask);
  }

  // cl[{0}] as a point mask: the complement of the union of opens that
  // avoid zero.
  std::uint32_t closure_of_zero_mask() const {
    std::uint32_t avoid = 0;
    for (std::uint32_t u : opens)
      if (!(u & 1u)) avoid |= u;
    const std::uint32_t full = point_count >= 32 ? ~0u : (1u << point_count) - 1;
    return full & ~avoid;
  }

  // intersection of all open sets containing zero
  std::uint32_t zero_neighborhood_intersection_mask() const {
    const std::uint32_t full = point_count >= 32 ? ~0u : (1u << point_count) - 1;
    std::uint32_t acc = full;
    for (std::uint32_t u : opens)
      if (u & 1u) acc &= u;
    return acc;
  }
};

// All points of the subspace as a bitmask over the enumerated points.
inline std::uint32_t subspace_point_mask(std::uint32_t p, int n, const Subspace<Fp>& s) {
  finite_detail::PointSpace space(p, n);
  if (space.m > 32) throw error(errc::cap_exceeded, "point mask limited to 32 points");
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < space.m; ++i)
    if (s.contains_vector(space.decode(i))) mask |= 1u << i;
  return mask;
}

// The topology whose opens are exactly the unions of cosets of S: the
// coarsest-possible saturation of the discrete topology by S.
inline FiniteTopology strip_topology_finite(std::uint32_t p, int n, const Subspace<Fp>& s) {
  using namespace finite_detail;
  const PointSpace space(p, n);
  if (space.m > 16)
    throw error(errc::cap_exceeded, "materializing a strip topology is capped at 16 points");
  const std::size_t m = space.m;
  // group points into S-cosets
  std::vector<std::uint32_t> coset_masks;
  std::vector<bool> placed(m, false);
  std::vector<std::uint16_t> members;
  members.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    if (s.contains_vector(space.decode(i))) members.push_back(static_cast<std::uint16_t>(i));
  for (std::size_t i = 0; i < m; ++i) {
    if (placed[i]) continue;
    std::uint32_t mask = 0;
    for (std::uint16_t sm : members) {
      const std::uint16_t pt = space.add[i * m + sm];
      mask |= 1u << pt;
      placed[pt] = true;
    }
    coset_masks.push_back(mask);
  }
  FiniteTopology t;
  t.point_count = static_cast<std::uint32_t>(m);
  t.opens.reserve(1u << coset_masks.size());
  for (std::uint32_t pick = 0; pick < (1u << coset_masks.size()); ++pick) {
    std::uint32_t u = 0;
    for (std::size_t c = 0; c < coset_masks.size(); ++c)
      if (pick >> c & 1) u |= coset_masks[c];
    t.opens.push_back(u);
  }
  std::sort(t.opens.begin(), t.opens.end());
  t.opens.erase(std::unique(t.opens.begin(), t.opens.end()), t.opens.end());
  return t;
}

namespace finite_detail {

// Check the open-set axioms plus continuity of addition and of scalar
// multiplication (the scalar field is discrete, so a neighborhood of a
// scalar can always be shrunk to the scalar itself).
inline bool family_is_compatible(std::uint32_t family, const PointSpace& space,
                                 const std::vector<std::uint16_t>& mink,
                                 const std::vector<std::uint32_t>& pair_cover,
                                 const std::vector<std::uint16_t>& need_pairs) {
  const std::size_t m = space.m;
  const std::uint32_t num_subsets = 1u << m;
  const std::uint32_t full = num_subsets - 1;
  if (!(family >> 0 & 1) || !(family >> full & 1)) return false;
  std::vector<std::uint16_t> opens;
  for (std::uint32_t s = 0; s < num_subsets; ++s)
    if (family >> s & 1) opens.push_back(static_cast<std::uint16_t>(s));
  for (std::uint16_t a : opens)
    for (std::uint16_t b : opens) {
      if (!(family >> (a & b) & 1)) return false;
      if (!(family >> (a | b) & 1)) return false;
    }
  // addition: every point pair (x,y) with x+y in U must be covered by a
  // pair of opens whose Minkowski sum stays inside U
  for (std::uint16_t u : opens) {
    std::uint32_t cover = 0;
    for (std::uint16_t v : opens)
      for (std::uint16_t w : opens)
        if ((mink[v * num_subsets + w] | u) == u) cover |= pair_cover[v * num_subsets + w];
    if ((need_pairs[u] & ~cover) != 0) return false;
  }
  // scalar multiplication
  for (std::uint16_t u : opens)
    for (std::uint32_t c = 0; c < space.p; ++c) {
      std::uint32_t need = 0;  // points x with c*x in U
      for (std::size_t x = 0; x < m; ++x)
        if (u >> space.smul[c * m + x] & 1) need |= 1u << x;
      std::uint32_t covered = 0;
      for (std::uint16_t v : opens) {
        std::uint32_t image = 0;
        for (std::size_t x = 0; x < m; ++x)
          if (v >> x & 1) image |= 1u << space.smul[c * m + x];
        if ((image | u) == u) covered |= v;
      }
      if ((need & ~covered) != 0) return false;
    }
  return true;
}

}  // namespace finite_detail

// Exhaustively enumerates every family of subsets of F_p^n and keeps the
// compatible topologies. Restricted to the three instances whose candidate
// space 2^(2^(p^n)) is feasible. Candidate ranges are checked in parallel
// and merged in index order, so the output order is deterministic.
inline std::vector<FiniteTopology> enumerate_compatible_topologies(std::uint32_t p, int n) {
  using namespace finite_detail;
  const bool feasible = (p == 2 && n == 1) || (p == 3 && n == 1) || (p == 2 && n == 2);
  if (!feasible)
    throw error(errc::cap_exceeded,
                "exhaustive topology enumeration is limited to (p,n) in {(2,1),(3,1),(2,2)}");
  const PointSpace space(p, n);
  const std::size_t m = space.m;
  const std::uint32_t num_subsets = 1u << m;

  // Minkowski sums of subsets and, for the continuity check, which point
  // pairs each open pair covers and which pairs each open demands.
  std::vector<std::uint16_t> mink(num_subsets * num_subsets, 0);
  std::vector<std::uint32_t> pair_cover(num_subsets * num_subsets, 0);
  for (std::uint32_t a = 0; a < num_subsets; ++a)
    for (std::uint32_t b = 0; b < num_subsets; ++b) {
      std::uint32_t sum = 0, cover = 0;
      for (std::size_t x = 0; x < m; ++x)
        if (a >> x & 1)
          for (std::size_t y = 0; y < m; ++y)
            if (b >> y & 1) {
              sum |= 1u << space.add[x * m + y];
              cover |= 1u << (x * m + y);
            }
      mink[a * num_subsets + b] = static_cast<std::uint16_t>(sum);
      pair_cover[a * num_subsets + b] = cover;
    }
  std::vector<std::uint16_t> need_pairs(num_subsets, 0);
  for (std::uint32_t u = 0; u < num_subsets; ++u) {
    std::uint32_t need = 0;
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y)
        if (u >> space.add[x * m + y] & 1) need |= 1u << (x * m + y);
    need_pairs[u] = static_cast<std::uint16_t>(need);
  }

  const std::uint64_t num_families = 1ull << num_subsets;
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunk = (num_families + workers - 1) / workers;
  std::vector<std::future<std::vector<std::uint32_t>>> futures;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = w * chunk, hi = std::min(num_families, lo + chunk);
    futures.push_back(std::async(std::launch::async, [&, lo, hi] {
      std::vector<std::uint32_t> found;
      for (std::uint64_t f = lo; f < hi; ++f)
        if (family_is_compatible(static_cast<std::uint32_t>(f), space, mink, pair_cover,
                                 need_pairs))
          found.push_back(static_cast<std::uint32_t>(f));
      return found;
    }));
  }
  std::vector<FiniteTopology> out;
  for (auto& fut : futures)
    for (std::uint32_t f : fut.get()) {
      FiniteTopology t;
      t.point_count = static_cast<std::uint32_t>(m);
      for (std::uint32_t s = 0; s < num_subsets; ++s)
        if (f >> s & 1) t.opens.push_back(s);
      out.push_back(std::move(t));
    }
  return out;
}

}  // namespace tvlat
