#pragma once

// Finite models of partially ordered abelian groups with an order unit and
// a designated state, and checkers for the r-weakened comparison,
// interpolation, cancellation and (FCQ) properties on finite test sets.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ahcert/numeric.hpp"

namespace ahcert::ordered {

using Element = std::vector<Integer>;

enum class Truth { yes, no, unknown };

std::string to_string(Truth t);
std::string format_element(const Element& x);

/// K_0 of C(S^{2m}) (or of M_R(C(S^{2m}))): Z^2 = (rank, Bott coordinate),
/// cone {(x, 0) : x >= 0} u {(x, y) : x >= m}.
struct SphereEven {
  Integer m;
  Element unit;  // (R, 0)
};

/// Z^d with a three-valued cone oracle and optional extras: a linear state
/// functional, the coordinate holding the rank, and a stable-range threshold
/// above which equal classes cancel.
struct FreeWithOracle {
  std::size_t d = 0;
  std::function<Truth(const Element&)> in_cone;
  Element unit;
  std::optional<std::vector<Rational>> state_functional;
  std::optional<std::size_t> rank_coordinate;
  std::optional<Integer> stable_threshold;
  std::string name = "free";
};

class OrderedGroupModel;

/// Direct sum; elements are concatenations of factor elements. The state is
/// the convex combination of factor states with `state_weights`.
struct ProductCone {
  std::vector<OrderedGroupModel> factors;
  std::vector<Rational> state_weights;
};

class OrderedGroupModel {
 public:
  using Variant = std::variant<SphereEven, FreeWithOracle, ProductCone>;

  OrderedGroupModel(SphereEven s);
  OrderedGroupModel(FreeWithOracle f);
  OrderedGroupModel(ProductCone p);

  const Variant& variant() const { return v_; }
  std::size_t dimension() const;
  Element unit() const;

 private:
  Variant v_;
};

/// Membership in the SphereEven cone; exact.
bool sphere_even_cone(const Integer& m, const Element& x);

Truth in_cone(const OrderedGroupModel& model, const Element& x);
/// x <= y iff y - x in the cone.
Truth leq(const OrderedGroupModel& model, const Element& x, const Element& y);

/// Designated state; throws PreconditionError for models without one.
Rational state_eval(const OrderedGroupModel& model, const Element& x);
bool has_state(const OrderedGroupModel& model);

/// Sphere-product block (S^2)^n with unit of rank R: elements are K-classes
/// in the Bott monomial basis (index = subset mask), cone decided by
/// positivity::decide_positive.
OrderedGroupModel sphere_product_block(int n_factors, const Integer& unit_rank);

Element operator+(const Element& a, const Element& b);
Element operator-(const Element& a, const Element& b);
Element operator*(const Integer& k, const Element& a);

// ---------------------------------------------------------------------------

/// Inf/sup state brackets from n x <= l u and k u <= m x with n, m bounded
/// by the search bound and l <= n * bound. `hi` is empty when no inf-witness
/// was found inside the search.
struct StateBounds {
  Rational lo;
  std::optional<Rational> hi;
};
StateBounds state_bounds_infsup(const OrderedGroupModel& model, const Element& x,
                                const Integer& search_bound);

using Pair = std::pair<Element, Element>;

struct ComparisonReport {
  bool holds = true;  // no certified failure among applicable pairs
  std::optional<Pair> failure;
  std::vector<Pair> unknown;  // applicable pairs with an Unknown cone verdict
  std::size_t applicable = 0;
  std::size_t vacuous = 0;
};

/// r-strict comparison on a finite test set: every pair with
/// s(x) + r < s(y) must satisfy x <= y. Unknown pairs are reported, never
/// counted as failures.
ComparisonReport check_r_strict_comparison(const OrderedGroupModel& model, const Rational& r,
                                           std::span<const Pair> pairs);

struct Quadruple {
  Element x1, x2, y1, y2;
};

struct InterpolationResult {
  enum class Kind { interpolant, no_interpolant, inconclusive, not_applicable };
  Kind kind = Kind::not_applicable;
  std::optional<Element> z;
  Integer box;
  std::size_t candidates = 0;
  std::string reason;
};

std::string to_string(InterpolationResult::Kind k);

/// Searches z with x_i <= z <= y_j. The rank candidate (max rank of the x_i
/// plus the stable threshold) is tried first, then every z in [-box, box]^d.
/// A no-interpolant answer speaks about the box only.
InterpolationResult check_r_interpolation(const OrderedGroupModel& model, const Rational& r,
                                          const Quadruple& q, const Integer& box);

struct CancellationReport {
  bool holds = true;
  std::vector<Pair> certified;
  std::vector<Pair> inconclusive;
  std::optional<Pair> failure;
  std::size_t vacuous = 0;
  /// holds and nothing inconclusive.
  bool fully_certified() const { return holds && inconclusive.empty(); }
};

/// Pairs of projection classes (p, q). r-cancellation looks at pairs with
/// p = q and s(p) > r and needs equivalence (equal class within the stable
/// range); pairs with p != q are skipped as not applicable.
CancellationReport check_r_cancellation(const OrderedGroupModel& model, const Rational& r,
                                        std::span<const Pair> pairs);
/// r-(FCQ): pairs with s(p) + r < s(q) need p <= q.
CancellationReport check_r_fcq(const OrderedGroupModel& model, const Rational& r,
                               std::span<const Pair> pairs);

// ---------------------------------------------------------------------------

/// Subsemigroup of N^d generated by finitely many vectors, with the
/// algebraic order. Cancellative and algebraically ordered by construction.
struct ConcreteSemigroup {
  std::size_t d = 0;
  std::vector<Element> generators;
};

/// x is an N-combination of the generators.
bool contains(const ConcreteSemigroup& s, const Element& x);
/// Algebraic order: some z in M with x + z = y, found by enumerating M
/// below y (no subtraction).
bool algebraic_leq(const ConcreteSemigroup& s, const Element& x, const Element& y);

struct Envelope {
  OrderedGroupModel group;
  std::function<Element(const Element&)> iota;
};

/// Grothendieck group of M inside Z^d with cone iota(M). The designated
/// state is w.x / w.unit for positive weights w.
Envelope grothendieck_envelope(const ConcreteSemigroup& s, const Element& unit,
                               const std::vector<Rational>& state_weights);

/// r-strict comparison evaluated inside the semigroup itself.
ComparisonReport check_semigroup_strict_comparison(const ConcreteSemigroup& s, const Element& unit,
                                                   const std::vector<Rational>& state_weights,
                                                   const Rational& r, std::span<const Pair> pairs);

}  // namespace ahcert::ordered
