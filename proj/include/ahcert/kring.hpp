#pragma once

// Exact arithmetic in K^0((S^2)^n) = Z[t_1..t_n]/(t_i^2) and in
// H^even((S^2)^n; Z) = Z[u_1..u_n]/(u_i^2), plus the total Chern class map
// between them.
//
// Monomials are square-free and therefore indexed by subsets of the
// coordinates, stored as bit masks (bit i-1 <-> coordinate i).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ahcert/numeric.hpp"

namespace ahcert::kring {

using Subset = std::uint64_t;

/// Largest factor count a bit-indexed class can carry.
inline constexpr int kMaxBitFactors = 63;

inline int subset_size(Subset s) { return __builtin_popcountll(s); }

/// Sparse element of a square-free ring over n generators. Zero coefficients
/// are never stored, so structural equality is ring equality.
template <class Tag>
class SubsetPolynomial {
 public:
  SubsetPolynomial() = default;
  explicit SubsetPolynomial(int factors);

  int factors() const { return factors_; }
  const std::map<Subset, Integer>& terms() const { return terms_; }
  Integer coeff(Subset s) const;
  bool is_zero() const { return terms_.empty(); }

  /// Union of all monomials with nonzero coefficient.
  Subset support() const;

  /// Adds `c` to the coefficient of `s`; keeps the canonical form.
  SubsetPolynomial& add_term(Subset s, const Integer& c);

  SubsetPolynomial& operator+=(const SubsetPolynomial& o);
  SubsetPolynomial& operator-=(const SubsetPolynomial& o);

  friend bool operator==(const SubsetPolynomial&, const SubsetPolynomial&) = default;

 private:
  int factors_ = 0;
  std::map<Subset, Integer> terms_;
};

struct KTag {};
struct CohTag {};

/// Element of K^0((S^2)^n) in the Bott monomial basis t_S = prod_{i in S} t_i.
using KClass = SubsetPolynomial<KTag>;
/// Element of H^even((S^2)^n; Z); the size-k part is the degree-2k part.
using CohClass = SubsetPolynomial<CohTag>;

template <class Tag>
SubsetPolynomial<Tag> operator+(SubsetPolynomial<Tag> a, const SubsetPolynomial<Tag>& b) {
  a += b;
  return a;
}
template <class Tag>
SubsetPolynomial<Tag> operator-(SubsetPolynomial<Tag> a, const SubsetPolynomial<Tag>& b) {
  a -= b;
  return a;
}
template <class Tag>
SubsetPolynomial<Tag> operator-(const SubsetPolynomial<Tag>& a);
template <class Tag>
SubsetPolynomial<Tag> operator*(const Integer& k, const SubsetPolynomial<Tag>& a);

/// Ring product; t_i^2 = 0 kills every pair of overlapping monomials.
template <class Tag>
SubsetPolynomial<Tag> operator*(const SubsetPolynomial<Tag>& a, const SubsetPolynomial<Tag>& b);

KClass kclass_mul(const KClass& a, const KClass& b);

Subset subset_of(std::initializer_list<int> one_based_coordinates);
std::string render_monomial(Subset s, char var);

/// r * [theta_1].
KClass trivial(int n, const Integer& r);
/// Bott element t_i (1-based i).
KClass bott(int n, int i);
/// [L_S] = prod_{i in S} (1 + t_i), the external tensor product of Hopf lines.
KClass line_bundle(int n, Subset s);
/// r[theta_1] + sum_{i<=m}[L_i] = (r + m) + t_1 + ... + t_m.
KClass line_sum(int n, int m, const Integer& r);

/// Virtual dimension: coefficient of the empty monomial.
Integer rank(const KClass& a);

/// Number of coordinates appearing in the support of `a`.
int effective_factor_count(const KClass& a);

/// Coefficients alpha with a = sum_S alpha_S [L_S] (Moebius inversion over
/// the subset lattice). Zero entries are omitted.
std::map<Subset, Integer> line_basis_decompose(const KClass& a);

/// Total Chern class c(a) = prod_S (1 + u(S))^{alpha_S}.
///
/// Evaluated through its logarithm: log c(a) = sum_{T != {}} (-1)^{|T|-1}
/// (|T|-1)! a_T u_T, which is linear in `a`, followed by the square-free
/// exponential (a sum over set partitions). Cost is 3^k in the number k of
/// support coordinates.
CohClass total_chern(const KClass& a);

/// Largest j with c_j(a) != 0, together with one nonzero degree-2j monomial.
struct TopChern {
  int degree = 0;
  Subset monomial = 0;
  Integer coefficient;
};
TopChern top_chern(const CohClass& c);

/// Pullback along a coordinate projection (S^2)^{target_n} -> (S^2)^{a.n}
/// that reads source coordinate i from target coordinate embedding[i]
/// (both 0-based here).
KClass pullback_coord_projection(const KClass& a, int target_n, std::span<const int> embedding);

// ---------------------------------------------------------------------------
// Symmetric classes

/// Permutation-invariant class: by_size[k] is the common coefficient of all
/// size-k monomials.
struct SymKClass {
  std::size_t n = 0;
  std::vector<Integer> by_size;  // length n + 1

  static SymKClass zero(std::size_t n);
  friend bool operator==(const SymKClass&, const SymKClass&) = default;
};

SymKClass sym_mul(const SymKClass& a, const SymKClass& b);
KClass expand(const SymKClass& s);
/// Inverse of expand; nullopt when `a` is not permutation invariant.
std::optional<SymKClass> compress(const KClass& a);

// ---------------------------------------------------------------------------
// Structured classes

/// offset [theta_1] + sum_{i=1..count} [L_i], i.e. (offset + count) + t_1 + ... + t_count.
struct LineSum {
  Integer count;
  Integer offset;
  friend bool operator==(const LineSum&, const LineSum&) = default;
};

/// Either a dense class or a closed-form line sum that never needs 2^n storage.
using StructuredClass = std::variant<KClass, LineSum>;

Integer rank(const StructuredClass& a);
bool is_zero(const StructuredClass& a);
/// Highest coordinate (1-based) that the class depends on; 0 for constants.
Integer max_coordinate(const StructuredClass& a);

/// Dense form over n factors; throws UnsupportedVariant past kMaxBitFactors.
KClass expand(const StructuredClass& a, int n);

/// Top nonvanishing Chern degree of a LineSum, without expansion:
/// c(LineSum{m, r}) = prod_{i<=m} (1 + u_i), so the answer is m.
Integer chern_of_structured(const StructuredClass& a);

StructuredClass add(const StructuredClass& a, const StructuredClass& b);
StructuredClass subtract(const StructuredClass& a, const StructuredClass& b);
StructuredClass scale(const Integer& k, const StructuredClass& a);

std::string describe(const StructuredClass& a);

}  // namespace ahcert::kring
