#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tvlat/errors.hpp"
#include "tvlat/matrix.hpp"
#include "tvlat/rational.hpp"
#include "tvlat/subspace.hpp"
#include "tvlat/valuation.hpp"

namespace tvlat {

// A field model binds a base field K to a computable sub-field D of the
// completion of K, with exact arithmetic in D, decomposition over a K-basis
// of D, and certified enclosures of the extended absolute value.
template <class M>
concept FieldModelType = requires(const M& m, const typename M::Elem& e,
                                  const typename M::Base& b, int prec) {
  typename M::Base;
  typename M::Elem;
  { m.degree() } -> std::convertible_to<int>;
  { m.zero() } -> std::same_as<typename M::Elem>;
  { m.one() } -> std::same_as<typename M::Elem>;
  { m.base_zero() } -> std::same_as<typename M::Base>;
  { m.embed(b) } -> std::same_as<typename M::Elem>;
  { m.decompose(e) } -> std::same_as<std::vector<typename M::Base>>;
  { m.valuation(e, prec) } -> std::same_as<ValEnclosure>;
};

// A compatible vector topology on K^n, identified with the subspace S of
// D^n it corresponds to after scalar extension to the completion. The
// finest topology is S = 0, the indiscrete one is S = D^n, and the order
// of topologies is the reverse of subspace inclusion. Open-set families
// are never materialized; membership in basic neighborhoods is decided on
// demand by in_neighborhood.
template <FieldModelType M>
class CompatibleTopology {
 public:
  using Elem = typename M::Elem;
  using Base = typename M::Base;

  static CompatibleTopology from_subspace(std::shared_ptr<const M> model, std::size_t n,
                                          Matrix<Elem> gens) {
    Subspace<Elem> s = Subspace<Elem>::from_generators(n, std::move(gens));
    return CompatibleTopology(std::move(model), n, std::move(s));
  }

  static CompatibleTopology from_subspace(std::shared_ptr<const M> model,
                                          Subspace<Elem> s) {
    const std::size_t n = s.ambient_dim();
    return CompatibleTopology(std::move(model), n, std::move(s));
  }

  // finest compatible topology (S = 0)
  static CompatibleTopology finest(std::shared_ptr<const M> model, std::size_t n) {
    Subspace<Elem> s = Subspace<Elem>::zero(n, model->zero());
    return CompatibleTopology(std::move(model), n, std::move(s));
  }

  static CompatibleTopology indiscrete(std::shared_ptr<const M> model, std::size_t n) {
    Subspace<Elem> s = Subspace<Elem>::full(n, model->zero());
    return CompatibleTopology(std::move(model), n, std::move(s));
  }

  const std::shared_ptr<const M>& model() const { return model_; }
  std::size_t dim() const { return n_; }

  // The corresponding subspace of D^n; inverse of from_subspace at the
  // representation level.
  const Subspace<Elem>& subspace() const { return s_; }

  friend bool operator==(const CompatibleTopology& a, const CompatibleTopology& b) {
    return a.model_.get() == b.model_.get() && a.n_ == b.n_ && a.s_ == b.s_;
  }

 private:
  CompatibleTopology(std::shared_ptr<const M> model, std::size_t n, Subspace<Elem> s)
      : model_(std::move(model)), n_(n), s_(std::move(s)) {}

  std::shared_ptr<const M> model_;
  std::size_t n_;
  Subspace<Elem> s_;
};

namespace detail {

template <FieldModelType M>
void check_same_setting(const CompatibleTopology<M>& a, const CompatibleTopology<M>& b) {
  if (a.model().get() != b.model().get())
    throw error(errc::model_mismatch, "topologies over different field models");
  if (a.dim() != b.dim())
    throw error(errc::dimension_mismatch, "topologies of different ambient dimension");
}

template <FieldModelType M>
Matrix<typename M::Elem> embed_matrix(const M& model, const Matrix<typename M::Base>& m) {
  Matrix<typename M::Elem> out(m.rows(), m.cols(), model.zero());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = model.embed(m.at(i, j));
  return out;
}

}  // namespace detail

// Order reversal: the join of two topologies corresponds to the
// intersection of their subspaces, the meet to the sum.
template <FieldModelType M>
CompatibleTopology<M> topology_join(const CompatibleTopology<M>& a,
                                    const CompatibleTopology<M>& b) {
  detail::check_same_setting(a, b);
  return CompatibleTopology<M>::from_subspace(a.model(), a.subspace().intersect(b.subspace()));
}

template <FieldModelType M>
CompatibleTopology<M> topology_meet(const CompatibleTopology<M>& a,
                                    const CompatibleTopology<M>& b) {
  detail::check_same_setting(a, b);
  return CompatibleTopology<M>::from_subspace(a.model(), a.subspace().sum(b.subspace()));
}

enum class TopologyOrder { equal, finer, coarser, incomparable };

inline const char* to_string(TopologyOrder o) {
  switch (o) {
    case TopologyOrder::equal: return "equal";
    case TopologyOrder::finer: return "finer";
    case TopologyOrder::coarser: return "coarser";
    case TopologyOrder::incomparable: return "incomparable";
  }
  return "unknown";
}

// Describes the first argument relative to the second. `finer` means a has
// strictly more open sets than b, which happens exactly when a's subspace
// is strictly contained in b's.
template <FieldModelType M>
TopologyOrder topology_compare(const CompatibleTopology<M>& a, const CompatibleTopology<M>& b) {
  detail::check_same_setting(a, b);
  const bool a_in_b = b.subspace().contains(a.subspace());
  const bool b_in_a = a.subspace().contains(b.subspace());
  if (a_in_b && b_in_a) return TopologyOrder::equal;
  if (a_in_b) return TopologyOrder::finer;
  if (b_in_a) return TopologyOrder::coarser;
  return TopologyOrder::incomparable;
}

// S intersected with K^n, computed exactly: decompose the RREF basis over
// the power basis of D; because the pivot entries are 1, any combination
// producing a K-rational vector must have K-rational coefficients, namely
// the vector's pivot coordinates. Those coefficients are exactly the left
// kernel of the higher-power coordinate blocks.
template <FieldModelType M>
Subspace<typename M::Base> rational_points(const M& model,
                                           const Subspace<typename M::Elem>& s) {
  using Base = typename M::Base;
  const std::size_t r = s.dim(), n = s.ambient_dim();
  const std::size_t d = static_cast<std::size_t>(model.degree());
  const Base bz = model.base_zero();
  Matrix<Base> b0(r, n, bz);
  Matrix<Base> higher(r, n * (d - 1), bz);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::vector<Base> coords = model.decompose(s.basis().at(i, j));
      b0.at(i, j) = coords[0];
      for (std::size_t k = 1; k < d; ++k) higher.at(i, (k - 1) * n + j) = coords[k];
    }
  const Subspace<Base> combos = left_kernel(higher);
  return Subspace<Base>::from_generators(n, combos.basis() * b0);
}

// cl[{0}] with respect to the topology, always a K-subspace of K^n.
template <FieldModelType M>
Subspace<typename M::Base> closure_of_zero(const CompatibleTopology<M>& t) {
  return rational_points(*t.model(), t.subspace());
}

// Hausdorff iff the corresponding subspace meets K^n only in zero.
template <FieldModelType M>
bool is_hausdorff(const CompatibleTopology<M>& t) {
  return closure_of_zero(t).is_zero();
}

// Quotient by the closure of zero. The complement is spanned by the
// standard coordinates away from the closure's pivot columns, which makes
// the construction canonical; the quotient topology is always Hausdorff.
template <FieldModelType M>
std::pair<std::size_t, CompatibleTopology<M>> separated_quotient(const CompatibleTopology<M>& t) {
  using Elem = typename M::Elem;
  const M& model = *t.model();
  const Subspace<typename M::Base> z = closure_of_zero(t);
  const std::size_t n = t.dim(), q = n - z.dim();
  if (z.dim() == 0) return {n, t};
  const Subspace<Elem> embedded_z =
      Subspace<Elem>::from_generators(n, detail::embed_matrix(model, z.basis()));
  std::vector<bool> drop(n, false);
  for (std::size_t p : embedded_z.pivots()) drop[p] = true;
  std::vector<std::vector<Elem>> rows;
  for (std::size_t i = 0; i < t.subspace().dim(); ++i) {
    const std::vector<Elem> reduced = embedded_z.reduce(t.subspace().basis().row(i));
    std::vector<Elem> img;
    img.reserve(q);
    for (std::size_t j = 0; j < n; ++j)
      if (!drop[j]) img.push_back(reduced[j]);
    rows.push_back(std::move(img));
  }
  Matrix<Elem> gens = Matrix<Elem>::from_rows(rows, model.zero(), q);
  return {q, CompatibleTopology<M>::from_subspace(t.model(), q, std::move(gens))};
}

// K-linear map between K^n_in and K^n_out; the same matrix read over D is
// its extension to the scalar-extended spaces. Row-vector convention:
// v maps to v * transpose(matrix).
template <class Base>
struct LinearMap {
  Matrix<Base> matrix;  // n_out x n_in

  std::size_t domain_dim() const { return matrix.cols(); }
  std::size_t codomain_dim() const { return matrix.rows(); }
};

// Continuity criterion: L is continuous from (K^n, T_X) to (K^m, T_Y) iff
// the extension of L maps the subspace of T_X into the subspace of T_Y.
template <FieldModelType M>
bool is_continuous(const LinearMap<typename M::Base>& map, const CompatibleTopology<M>& tx,
                   const CompatibleTopology<M>& ty) {
  if (tx.model().get() != ty.model().get())
    throw error(errc::model_mismatch, "topologies over different field models");
  if (map.domain_dim() != tx.dim() || map.codomain_dim() != ty.dim())
    throw error(errc::dimension_mismatch, "linear map shape does not match the topologies");
  const M& model = *tx.model();
  const Matrix<typename M::Elem> lt =
      detail::embed_matrix(model, map.matrix.transpose());
  const Matrix<typename M::Elem> image = tx.subspace().basis() * lt;
  for (std::size_t i = 0; i < image.rows(); ++i)
    if (!ty.subspace().contains_vector(image.row(i))) return false;
  return true;
}

enum class Membership { inside, outside, boundary_undecidable };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::inside: return "true";
    case Membership::outside: return "false";
    case Membership::boundary_undecidable: return "boundary-undecidable";
  }
  return "unknown";
}

// Basic-neighborhood membership query: is `point` within distance eps of
// `center` in the quotient seminorm of the topology? Vectors live in K^n.
template <class Base>
struct NeighborhoodQuery {
  std::vector<Base> center;
  std::vector<Base> point;
  Rat eps;
  int precision_cap = 64;
};

// Decides whether point - center lands in the basic eps-neighborhood of
// zero: project away the subspace along its pivot coordinates, then sum
// the coordinate absolute values. Enclosures are refined per round up to
// the cap; the verdict uses strict comparisons only, so an exact tie with
// eps is reported as boundary-undecidable rather than resolved by
// convention.
template <FieldModelType M>
Membership in_neighborhood(const CompatibleTopology<M>& t,
                           const NeighborhoodQuery<typename M::Base>& query) {
  using Elem = typename M::Elem;
  if (query.eps.sign() <= 0)
    throw error(errc::invalid_model, "neighborhood radius must be positive");
  if (query.precision_cap < 1)
    throw error(errc::cap_exceeded, "precision cap must be positive");
  if (query.center.size() != t.dim() || query.point.size() != t.dim())
    throw error(errc::dimension_mismatch, "query vectors do not match the ambient dimension");
  const M& model = *t.model();
  std::vector<typename M::Base> diff(t.dim(), model.base_zero());
  for (std::size_t i = 0; i < t.dim(); ++i) diff[i] = query.point[i] - query.center[i];
  // exact short-circuit: differences inside the closure of zero lie in
  // every neighborhood
  if (rational_points(model, t.subspace()).contains_vector(diff)) return Membership::inside;
  std::vector<Elem> w(t.dim(), model.zero());
  for (std::size_t i = 0; i < t.dim(); ++i) w[i] = model.embed(diff[i]);
  const std::vector<Elem> reduced = t.subspace().reduce(w);
  for (int round = 1; round <= query.precision_cap; ++round) {
    ValEnclosure total = exact_value(Rat(0));
    for (const Elem& c : reduced) total = total + model.valuation(c, round);
    if (total.upper < query.eps) return Membership::inside;
    if (total.lower > query.eps) return Membership::outside;
    // a point enclosure can never move off the boundary
    if (total.is_point()) break;
  }
  return Membership::boundary_undecidable;
}

// Whether the given elements of D are linearly independent over K,
// decided by the rank of their coordinate matrix.
template <FieldModelType M>
bool q_linear_independent(const M& model, const std::vector<typename M::Elem>& elems) {
  using Base = typename M::Base;
  const std::size_t d = static_cast<std::size_t>(model.degree());
  Matrix<Base> coords(elems.size(), d, model.base_zero());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const std::vector<Base> c = model.decompose(elems[i]);
    for (std::size_t j = 0; j < d; ++j) coords.at(i, j) = c[j];
  }
  return Subspace<Base>::from_generators(d, std::move(coords)).dim() == elems.size();
}

}  // namespace tvlat
