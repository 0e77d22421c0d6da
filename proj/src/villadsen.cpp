#include "ahcert/villadsen.hpp"

namespace ahcert::villadsen {

using kring::LineSum;

namespace {

std::string stage_name(std::size_t k) { return "stage " + std::to_string(k); }

}  // namespace

VilladsenParams generate_params(const Rational& c, std::size_t k_stages) {
  if (c <= 0) throw PreconditionError("target c must be positive");
  if (k_stages < 1) throw PreconditionError("at least one stage required");
  const Rational half = c / 2;
  VilladsenParams p{c, {}};

  // Stage 1: the smallest n admitting an integer strictly inside the bracket.
  const Rational upper1 = half + Rational(1, 2);
  for (Integer n = 1;; ++n) {
    const Integer m = floor(half * n) + 1;  // least m with m/n > c/2
    if (make_rational(m, n) < upper1) {
      p.stages.push_back(Stage{m, 0, n, m});
      break;
    }
  }

  for (std::size_t k = 1; k < k_stages; ++k) {
    const Stage& prev = p.stages.back();
    const Rational ratio = make_rational(prev.P, prev.n);
    const Rational upper = half + inverse_power_of_two(k + 1);
    // ratio * m / (m + s) > c/2  <=>  m > s (c/2) / (ratio - c/2); the value
    // increases with m, so the least admissible m decides satisfiability.
    const Rational excess = ratio - half;
    bool placed = false;
    for (Integer s = 1; !placed; ++s) {
      const Integer m = floor(Rational(s) * half / excess) + 1;
      const Rational next = ratio * make_rational(m, m + s);
      if (next > half && next < upper) {
        p.stages.push_back(Stage{m, s, prev.n * (m + s), prev.P * m});
        placed = true;
      }
      if (s > 1'000'000) {
        throw PreconditionError("no admissible (m, s) at " + stage_name(k + 1) + " for interval (" +
                                format_rational(half) + ", " + format_rational(upper) + ")");
      }
    }
  }
  return p;
}

void validate(const VilladsenParams& p) {
  if (p.c <= 0) throw PreconditionError("target c must be positive");
  if (p.stages.empty()) throw PreconditionError("no stages");
  const Rational half = p.c / 2;
  Integer prev_n = 1, prev_P = 1;
  for (std::size_t k = 1; k <= p.stages.size(); ++k) {
    const Stage& st = p.stages[k - 1];
    if (st.m < 1 || st.n < 1) throw PreconditionError(stage_name(k) + ": m and n must be positive");
    if (k >= 2) {
      if (st.s < 1) throw PreconditionError(stage_name(k) + ": s must be at least 1");
      if (st.n != prev_n * (st.m + st.s)) {
        throw PreconditionError(stage_name(k) + ": n_k != n_{k-1} (m_k + s_k)");
      }
    }
    if (st.P != prev_P * st.m) throw PreconditionError(stage_name(k) + ": P_k != P_{k-1} m_k");
    const Rational ratio = make_rational(st.P, st.n);
    if (!(half < ratio && ratio < half + inverse_power_of_two(k))) {
      throw PreconditionError(stage_name(k) + ": P_k/n_k = " + format_rational(ratio) +
                              " outside (c/2, c/2 + 2^-k)");
    }
    prev_n = st.n;
    prev_P = st.P;
  }
}

ah::InductiveSystem build_system(const VilladsenParams& p) {
  validate(p);
  ah::InductiveSystem sys;
  for (const auto& st : p.stages) {
    sys.blocks.emplace_back(std::vector<ah::Summand>{{ah::SphereProduct{st.P}, st.n}});
  }
  for (std::size_t i = 0; i + 1 < p.stages.size(); ++i) {
    const Stage& next = p.stages[i + 1];
    ah::BlockMap map;
    map.targets.push_back({ah::BlockProjections{0, next.m},
                           ah::Evaluation{0, "x_" + std::to_string(i + 1) + "^*", next.s}});
    sys.maps.push_back(std::move(map));
  }
  sys.metadata.push_back(
      "evaluation points are opaque labels; the choice making the limit simple is not verified");
  ah::validate(sys);
  return sys;
}

namespace {

const Stage& stage_at(const VilladsenParams& p, std::size_t stage) {
  if (stage < 1 || stage > p.stages.size()) {
    throw PreconditionError("stage " + std::to_string(stage) + " out of range [1, " +
                            std::to_string(p.stages.size()) + "]");
  }
  return p.stages[stage - 1];
}

}  // namespace

YClass track_y_class(const VilladsenParams& p, std::size_t stage) {
  const Stage& st = stage_at(p, stage);
  kring::StructuredClass y = LineSum{st.P, -1};
  return YClass{y, make_rational(st.P - 1, st.n), positivity::decide_positive(y, st.P)};
}

FailureRadius comparison_failure_radius(const VilladsenParams& p, std::size_t stage) {
  const Stage& st = stage_at(p, stage);
  FailureRadius f;
  f.x = LineSum{0, 1};
  f.y = LineSum{st.P, 0};
  f.state_x = make_rational(1, st.n);
  f.state_y = make_rational(st.P, st.n);
  f.radius = f.state_y - f.state_x;
  f.subequivalence = positivity::decide_subequivalence(f.x, f.y, st.P);
  return f;
}

Rational rc_lower_bound_drr_half(const VilladsenParams& p, std::size_t stages) {
  if (stages < 1 || stages > p.stages.size()) throw PreconditionError("stage count out of range");
  // Only radii whose witness is certified count toward the bound.
  Rational best = 0;
  for (std::size_t i = 1; i <= stages; ++i) {
    const auto f = comparison_failure_radius(p, i);
    if (f.subequivalence.value == positivity::Sign::not_positive) best = std::max(best, f.radius);
  }
  return best;
}

}  // namespace ahcert::villadsen
