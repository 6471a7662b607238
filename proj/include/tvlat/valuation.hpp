#pragma once

#include <algorithm>
#include <string>

#include "tvlat/rational.hpp"

namespace tvlat {

// Certified enclosure of an absolute value: the true |x| lies in
// [lower, upper]. A point enclosure with lower == upper == 0 is produced
// only by the exact-zero path, so [0,0] identifies zero exactly.
struct ValEnclosure {
  Rat lower;
  Rat upper;

  bool is_point() const { return lower == upper; }
  bool is_zero_point() const { return is_point() && lower.is_zero(); }
  Rat width() const { return upper - lower; }

  ValEnclosure operator+(const ValEnclosure& o) const { return {lower + o.lower, upper + o.upper}; }

  std::string str() const { return "[" + lower.str() + "," + upper.str() + "]"; }
};

inline ValEnclosure exact_value(const Rat& v) { return {v, v}; }

// Closed rational interval, used for evaluating polynomials over an
// isolating interval of a real algebraic number.
struct RatInterval {
  Rat lo;
  Rat hi;

  static RatInterval point(const Rat& v) { return {v, v}; }
  Rat width() const { return hi - lo; }

  RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }

  RatInterval operator*(const RatInterval& o) const {
    const Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
  }

  // Enclosure of |t| for t in this interval.
  ValEnclosure abs() const {
    if (lo.sign() >= 0) return {lo, hi};
    if (hi.sign() <= 0) return {-hi, -lo};
    return {Rat(0), std::max(-lo, hi)};
  }
};

}  // namespace tvlat
