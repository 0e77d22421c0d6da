#pragma once

// Three-valued positivity, subequivalence and cancellation decisions for
// K-classes over (S^2)^n. Sufficient conditions come from the stable range
// (rank at least half the real dimension of the carrier); necessary
// conditions come from Chern classes above the virtual rank.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ahcert/kring.hpp"

namespace ahcert::positivity {

using kring::KClass;
using kring::StructuredClass;

enum class Sign { positive, not_positive, unknown };

std::string to_string(Sign s);

struct ZeroClass {};
struct ThresholdRule {
  Integer rank;
  Integer threshold;
  /// Set by decide_subequivalence when the smaller class itself sits in the
  /// stable range, so the stable sub-bundle is an honest sub-bundle.
  bool genuine_subbundle = false;
};
struct ChernObstruction {
  Integer degree;
  Integer rank;
  std::string monomial;  // a nonzero degree-2j monomial, e.g. "u1*u2"
  Integer coefficient;
};
struct NegativeRank {
  Integer rank;
};
struct NonzeroRankZero {};
struct NoRuleFired {
  std::string reason;
};

using Certificate =
    std::variant<ZeroClass, ThresholdRule, ChernObstruction, NegativeRank, NonzeroRankZero, NoRuleFired>;

struct Verdict {
  Sign value = Sign::unknown;
  Certificate certificate = NoRuleFired{};
};

std::string certificate_kind(const Certificate& c);
std::string describe(const Verdict& v);

/// Invariant linking value and certificate kind.
bool is_consistent(const Verdict& v);

struct DecisionOptions {
  /// Dense Chern computations are skipped (Unknown) past this many
  /// support coordinates.
  int dense_factor_cap = 16;
};

/// Reads AHCERT_DENSE_MAX_FACTORS, defaulting to 16.
DecisionOptions default_options();

/// Chern obstruction of a dense class: some c_j != 0 with j > rank.
std::optional<ChernObstruction> chern_obstruction(const KClass& a);

/// Rules, in order: zero; negative rank; rank zero but nonzero; rank at
/// least the effective factor count; Chern class above the rank; Unknown.
Verdict decide_positive(const StructuredClass& a, const Integer& n_factors,
                        const DecisionOptions& opts = default_options());
Verdict decide_positive(const KClass& a, const Integer& n_factors,
                        const DecisionOptions& opts = default_options());

/// x precedes y iff y - x is positive.
Verdict decide_subequivalence(const StructuredClass& x, const StructuredClass& y,
                              const Integer& n_factors,
                              const DecisionOptions& opts = default_options());

/// Equal classes with rank >= n_factors are equivalent; equal classes below
/// the threshold are Unknown; distinct classes are NotPositive.
Verdict decide_cancellation(const StructuredClass& p, const StructuredClass& q,
                            const Integer& n_factors);

struct PerforationWitness {
  std::size_t index;  // into the input list
  Integer multiple;
  Verdict class_verdict;
  Verdict multiple_verdict;
};

/// First class (by input order, then smallest multiple 2..max_multiple)
/// that is certified not positive while a multiple is certified positive.
std::optional<PerforationWitness> perforation_witness_search(
    std::span<const StructuredClass> classes, const Integer& n_factors, const Integer& max_multiple,
    const DecisionOptions& opts = default_options());

}  // namespace ahcert::positivity
