#pragma once

// Villadsen-type inductive systems with a prescribed dimension-rank ratio c:
// B_i = M_{n_i}(C((S^2)^{P_i})), P_i = m_1 ... m_i, connected by m_{i+1}
// coordinate projections and s_{i+1} point evaluations, with
//   c/2 < P_k / n_k < c/2 + 2^-k   at every stage k.

#include <vector>

#include "ahcert/ah.hpp"
#include "ahcert/positivity.hpp"

namespace ahcert::villadsen {

struct Stage {
  Integer m;  // new sphere-power factor m_k
  Integer s;  // point evaluations s_k; 0 at stage 1
  Integer n;  // matrix size n_k
  Integer P;  // m_1 ... m_k
};

struct VilladsenParams {
  Rational c;
  std::vector<Stage> stages;
};

/// Deterministic parameters. Stage 1 takes (n_1, m_1) lexicographically
/// minimal with m_1/n_1 in (c/2, c/2 + 1/2); each later stage takes s minimal,
/// then m minimal, subject to the bracket.
VilladsenParams generate_params(const Rational& c, std::size_t k_stages);

/// Throws PreconditionError naming the first violated invariant.
void validate(const VilladsenParams& p);

ah::InductiveSystem build_system(const VilladsenParams& p);

/// y_i = [xi^{x P_i}] - [theta_1].
struct YClass {
  kring::StructuredClass cls;
  Rational state;
  positivity::Verdict verdict;
};
/// `stage` is 1-based here and below.
YClass track_y_class(const VilladsenParams& p, std::size_t stage);

struct FailureRadius {
  Rational radius;
  kring::StructuredClass x;  // [theta_1]
  kring::StructuredClass y;  // [xi^{x P_i}]
  Rational state_x;
  Rational state_y;
  positivity::Verdict subequivalence;  // of x into y
};
/// Stage-i witness that r-strict comparison fails for every r < (P_i - 1)/n_i.
FailureRadius comparison_failure_radius(const VilladsenParams& p, std::size_t stage);

/// max over the first `stages` stages of the failure radius: a certified
/// lower bound for the radius of comparison of the limit.
Rational rc_lower_bound_drr_half(const VilladsenParams& p, std::size_t stages);

}  // namespace ahcert::villadsen
