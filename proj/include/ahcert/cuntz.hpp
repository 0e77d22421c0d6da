#pragma once

// Finite rank-function model of Cuntz comparison over a homogeneous algebra
// p(C(X) (x) K)p. Positive elements are recorded by their rank on each region
// of a finite partition of X, plus the K_0 class they restrict to on a marked
// region Y = S^{2m}. Comparison a <= b is modeled as regionwise rank
// domination together with b|Y - a|Y in the K_0(S^{2m}) cone.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ahcert/ordered.hpp"

namespace ahcert::cuntz {

using ordered::Element;
using ordered::Truth;

struct RegionPartition {
  std::vector<std::string> regions;
  Integer ambient_dim;
  std::optional<std::size_t> marked_region;
  Integer marked_half_dim;  // m, with Y = S^{2m}
};

void validate(const RegionPartition& p);

struct CuntzElementModel {
  std::vector<Integer> rank_per_region;
  /// (rank, Bott) class on the marked region, when known.
  std::optional<Element> restriction_class;
};

void validate(const RegionPartition& p, const CuntzElementModel& e);

/// Finitely supported probability measure on the regions.
struct MeasureModel {
  std::vector<Rational> weights;
  static MeasureModel point_mass(std::size_t regions, std::size_t at);
};

/// sum_regions weight * rank / unit_rank.
Rational ldf_pairing(const RegionPartition& p, const CuntzElementModel& e, const MeasureModel& mu,
                     const Integer& unit_rank);

CuntzElementModel operator+(const CuntzElementModel& a, const CuntzElementModel& b);
CuntzElementModel operator*(const Integer& k, const CuntzElementModel& a);

/// x <= y in the model. Rank domination failing anywhere gives `no`; on the
/// marked region the cone decides, and missing restriction data there gives
/// `unknown` unless both ranks vanish.
Truth cuntz_leq(const RegionPartition& p, const CuntzElementModel& x, const CuntzElementModel& y);

// ---------------------------------------------------------------------------

struct RcWitness {
  RegionPartition partition;  // {X\V, V\Y, Y}
  Integer m;
  Integer unit_rank;
  CuntzElementModel a_plus_v;
  CuntzElementModel b;
  Rational bound;
  bool degenerate = false;  // m <= 1: the bound is the trivial 0
  std::string note;
};

/// Witness for rc >= (m - 1)/rank(p), m the greatest integer with 2m < n.
RcWitness rc_witness_build(const Integer& ambient_dim, const Integer& unit_rank);

struct RcVerification {
  bool verified = false;
  /// Pairing gap s(a+v) - s(b) at each region's point mass.
  std::vector<Rational> gaps;
  bool gap_certificate = false;
  /// (a+v)|Y - b|Y, certified outside the SphereEven{m} cone.
  Element restriction_difference;
  bool failure_certificate = false;
};

RcVerification rc_witness_verify(const RcWitness& w);

/// Passage to M_k(A): unit rank times k, bound over k.
RcWitness witness_amplify(const RcWitness& w, const Integer& k);

/// Least pairing gap over point masses when x <= y is certified to fail:
/// the model then fails r-comparison for every r below it.
std::optional<Rational> certified_failure_radius(const RegionPartition& p,
                                                 const CuntzElementModel& x,
                                                 const CuntzElementModel& y,
                                                 const Integer& unit_rank);

struct CuntzComparisonReport {
  bool holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> failure;  // indices (x, y)
  std::vector<std::pair<std::size_t, std::size_t>> unknown;
};

/// r-comparison on the given ordered pairs: s(x) + r < s(y) at every point
/// mass must force x <= y.
CuntzComparisonReport check_r_comparison(const RegionPartition& p, const Integer& unit_rank,
                                         const Rational& r, std::span<const CuntzElementModel> elements,
                                         std::span<const std::pair<std::size_t, std::size_t>> pairs);

// ---------------------------------------------------------------------------

struct AupWitness {
  RegionPartition partition;
  Integer unit_rank;
  CuntzElementModel a;  // marked class [xi_2] = (2, 1)
  CuntzElementModel b;  // marked class [theta_1] = (1, 0)
  Integer m_mult = 4;   // 4<b> <= 3<a>
  Integer n_mult = 3;
  Element combined;    // 3a|Y - 4b|Y
  Element difference;  // a|Y - b|Y
  bool verified = false;
};

/// 4<b> <= 3<a> while <b> is not below <a>, over a space of dimension >= 5
/// with a marked S^4.
AupWitness almost_unperforation_witness(const Integer& ambient_dim, const Integer& unit_rank = 1);

struct AupHit {
  std::size_t x;
  std::size_t y;
  Integer m;
  Integer n;
};

/// Exhaustive search over ordered pairs and n < m <= max_mn for m x <= n y
/// certified while x <= y is certified to fail.
std::optional<AupHit> almost_unperforated_check(const RegionPartition& p,
                                                std::span<const CuntzElementModel> elements,
                                                const Integer& max_mn);

}  // namespace ahcert::cuntz
