#pragma once

#include <stdexcept>
#include <string>

namespace tvlat {

// Machine-readable error codes. The CLI maps these 1:1 onto the `error=`
// field of its output records; keep the strings stable.
enum class errc {
  divide_by_zero,
  zero_divisor,
  invalid_model,
  composite_modulus,
  cap_exceeded,
  dimension_mismatch,
  model_mismatch,
  constant_polynomial,
  undeclared_name,
  syntax,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::divide_by_zero: return "divide-by-zero";
    case errc::zero_divisor: return "zero-divisor";
    case errc::invalid_model: return "invalid-model";
    case errc::composite_modulus: return "composite-modulus";
    case errc::cap_exceeded: return "cap-exceeded";
    case errc::dimension_mismatch: return "dimension-mismatch";
    case errc::model_mismatch: return "model-mismatch";
    case errc::constant_polynomial: return "constant-polynomial";
    case errc::undeclared_name: return "undeclared-name";
    case errc::syntax: return "syntax";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

// Raised when a non-irreducible modulus exposes a zero divisor during
// inversion. `witness` is the offending nontrivial monic gcd, rendered as
// a polynomial in the generator symbol.
class zero_divisor_error : public error {
 public:
  zero_divisor_error(const std::string& what, std::string witness)
      : error(errc::zero_divisor, what), witness_(std::move(witness)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

class parse_error : public error {
 public:
  parse_error(const std::string& what, int line, int col)
      : error(errc::syntax, what), line_(line), col_(col) {}
  parse_error(errc code, const std::string& what, int line, int col)
      : error(code, what), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace tvlat
