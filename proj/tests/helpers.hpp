#pragma once

#include <memory>
#include <random>
#include <vector>

#include "tvlat/matrix.hpp"
#include "tvlat/number_field.hpp"
#include "tvlat/subspace.hpp"

namespace tvlat::testing {

inline std::shared_ptr<const NumberFieldModel> sqrt2_model() {
  return NumberFieldModel::real_embedded(Poly<Rat>({Rat(-2), Rat(0), Rat(1)}), Rat(1), Rat(2));
}

inline Rat random_rat(std::mt19937& rng, long bound = 4, long max_den = 2) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, max_den);
  return Rat(num(rng), den(rng));
}

inline AlgebraicElem random_elem(const std::shared_ptr<const NumberFieldModel>& m,
                                 std::mt19937& rng) {
  std::vector<Rat> coords;
  for (int i = 0; i < m->degree(); ++i) coords.push_back(random_rat(rng));
  return m->element(std::move(coords));
}

inline Matrix<AlgebraicElem> random_matrix(const std::shared_ptr<const NumberFieldModel>& m,
                                           std::mt19937& rng, std::size_t rows,
                                           std::size_t cols) {
  Matrix<AlgebraicElem> out(rows, cols, m->zero());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = random_elem(m, rng);
  return out;
}

inline Subspace<AlgebraicElem> random_subspace(const std::shared_ptr<const NumberFieldModel>& m,
                                               std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> rows(0, n);
  return Subspace<AlgebraicElem>::from_generators(n, random_matrix(m, rng, rows(rng), n));
}

}  // namespace tvlat::testing
