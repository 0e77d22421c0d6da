#pragma once

// Semi-homogeneous building blocks, diagonal connecting maps between them,
// the maps they induce on K_0, and block-level dimension-rank ratio and
// stable rank calculators.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ahcert/kring.hpp"

namespace ahcert::ah {

using kring::StructuredClass;

struct SphereProduct {
  Integer factors;
};
/// A finite CW complex known only by its dimension. K_0 operations reject it.
struct AbstractCW {
  Integer dim;
};
using Space = std::variant<SphereProduct, AbstractCW>;

Integer dimension(const Space& s);

/// p(C(X) (x) K)p with rank(p) = unit_rank.
struct Summand {
  Space space;
  Integer unit_rank;
};

class BuildingBlock {
 public:
  explicit BuildingBlock(std::vector<Summand> summands);

  const std::vector<Summand>& summands() const { return summands_; }
  std::size_t size() const { return summands_.size(); }
  const Summand& operator[](std::size_t i) const { return summands_[i]; }

 private:
  std::vector<Summand> summands_;
};

/// f |-> f o pi, with source coordinate i read from target coordinate
/// embedding[i] (0-based).
struct Projection {
  std::size_t source = 0;
  std::vector<int> embedding;
};
/// `count` coordinate projections (X)^count -> X onto consecutive blocks of
/// the target's coordinates: the j-th copy reads source coordinate i from
/// target coordinate j * factors(source) + i.
struct BlockProjections {
  std::size_t source = 0;
  Integer count;
};
/// f |-> f(x) repeated `count` times at an opaque point label.
struct Evaluation {
  std::size_t source = 0;
  std::string point;
  Integer count = 1;
};
using EigenvalueMap = std::variant<Projection, BlockProjections, Evaluation>;

std::size_t source_of(const EigenvalueMap& e);
Integer multiplicity(const EigenvalueMap& e);

/// Diagonal map: for each target summand, the eigenvalue maps feeding it.
struct BlockMap {
  std::vector<std::vector<EigenvalueMap>> targets;
  bool unital = true;
};

/// Checks projection legality and rank bookkeeping (equality when unital,
/// at most the target rank otherwise). Throws PreconditionError.
void validate(const BlockMap& map, const BuildingBlock& source, const BuildingBlock& target);

struct InductiveSystem {
  std::vector<BuildingBlock> blocks;
  std::vector<BlockMap> maps;
  /// Free-form notes carried into reports (e.g. unverified density choices).
  std::vector<std::string> metadata;
};

void validate(const InductiveSystem& s);

// ---------------------------------------------------------------------------

/// max over summands of dim / rank.
Rational drr_of_block(const BuildingBlock& b);

struct SystemDrr {
  std::vector<Rational> stage_ratios;
  /// Max of the stage ratios from `tail_start` on: an upper bound for the
  /// limit invariant, not the invariant itself.
  Rational reported_limsup;
  std::size_t tail_start = 0;
};
SystemDrr drr_of_blocks(std::span<const BuildingBlock> blocks, std::size_t tail_start = 0);
SystemDrr drr_of_system(const InductiveSystem& s, std::size_t tail_start = 0);

BuildingBlock direct_sum(const BuildingBlock& a, const BuildingBlock& b);
BuildingBlock matrix_amplify(const BuildingBlock& b, const Integer& k);
/// All pairs of summands: spaces multiply (dimensions add), ranks multiply.
BuildingBlock tensor_blocks(const BuildingBlock& a, const BuildingBlock& b);
Integer min_rank(const BuildingBlock& b);

/// ceil(floor(dim/2) / rank) + 1, maximized over summands.
Integer nistor_stable_rank(const BuildingBlock& b);

struct DrrSrBound {
  bool holds;
  Rational drr;
  Rational sr_half_minus_one;
};
/// drr(b) >= sr(b)/2 - 1.
DrrSrBound drr_sr_bound_check(const BuildingBlock& b);

// ---------------------------------------------------------------------------

/// K_0 map induced by a diagonal map: projections pull classes back, point
/// evaluations contribute rank * [theta_1].
std::vector<StructuredClass> induced_k0_map(const BlockMap& map, const BuildingBlock& source,
                                            const BuildingBlock& target,
                                            std::span<const StructuredClass> classes);

/// second o first, for maps whose projections are explicit (block
/// projections are expanded first; large counts are rejected).
BlockMap compose(const BlockMap& first, const BlockMap& second, const BuildingBlock& source,
                 const BuildingBlock& middle, const BuildingBlock& target);

/// max_l | rank(class_l) / rank(unit_l) - global_state |.
Rational summand_state_spread(const BuildingBlock& b, std::span<const StructuredClass> classes,
                              const Rational& global_state);

}  // namespace ahcert::ah
