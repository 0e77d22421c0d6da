#include "ahcert/positivity.hpp"

#include <cstdlib>

namespace ahcert::positivity {

using kring::LineSum;

std::string to_string(Sign s) {
  switch (s) {
    case Sign::positive:
      return "Positive";
    case Sign::not_positive:
      return "NotPositive";
    case Sign::unknown:
      return "Unknown";
  }
  return "Unknown";
}

std::string certificate_kind(const Certificate& c) {
  static const char* const kNames[] = {"ZeroClass",       "ThresholdRule",   "ChernObstruction",
                                       "NegativeRank",    "NonzeroRankZero", "NoRuleFired"};
  return kNames[c.index()];
}

std::string describe(const Verdict& v) {
  std::string out = to_string(v.value) + " [" + certificate_kind(v.certificate);
  std::visit(
      [&out](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThresholdRule>) {
          out += ": rank " + c.rank.get_str() + " >= " + c.threshold.get_str();
          if (c.genuine_subbundle) out += ", genuine sub-bundle";
        } else if constexpr (std::is_same_v<T, ChernObstruction>) {
          out += ": c_" + c.degree.get_str() + " has coefficient " + c.coefficient.get_str() +
                 " on " + c.monomial + ", above rank " + c.rank.get_str();
        } else if constexpr (std::is_same_v<T, NegativeRank>) {
          out += ": rank " + c.rank.get_str();
        } else if constexpr (std::is_same_v<T, NoRuleFired>) {
          if (!c.reason.empty()) out += ": " + c.reason;
        }
      },
      v.certificate);
  return out + "]";
}

bool is_consistent(const Verdict& v) {
  const auto& c = v.certificate;
  switch (v.value) {
    case Sign::positive:
      return std::holds_alternative<ZeroClass>(c) || std::holds_alternative<ThresholdRule>(c);
    case Sign::not_positive:
      return std::holds_alternative<ChernObstruction>(c) || std::holds_alternative<NegativeRank>(c) ||
             std::holds_alternative<NonzeroRankZero>(c);
    case Sign::unknown:
      return std::holds_alternative<NoRuleFired>(c);
  }
  return false;
}

DecisionOptions default_options() {
  DecisionOptions o;
  if (const char* env = std::getenv("AHCERT_DENSE_MAX_FACTORS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v <= 30) o.dense_factor_cap = static_cast<int>(v);
  }
  return o;
}

std::optional<ChernObstruction> chern_obstruction(const KClass& a) {
  const auto top = kring::top_chern(kring::total_chern(a));
  const Integer r = kring::rank(a);
  if (top.coefficient == 0 || Integer(top.degree) <= r) return std::nullopt;
  return ChernObstruction{top.degree, r, kring::render_monomial(top.monomial, 'u'), top.coefficient};
}

namespace {

Verdict positive(Certificate c) { return Verdict{Sign::positive, std::move(c)}; }
Verdict not_positive(Certificate c) { return Verdict{Sign::not_positive, std::move(c)}; }

void check_fits(const StructuredClass& a, const Integer& n_factors) {
  if (n_factors < 0) throw PreconditionError("negative factor count");
  if (kring::max_coordinate(a) > n_factors) {
    throw PreconditionError("class uses coordinate " + kring::max_coordinate(a).get_str() +
                            " beyond " + n_factors.get_str() + " factors");
  }
}

// Rules 1-3 only depend on rank and zeroness.
std::optional<Verdict> rank_rules(bool zero, const Integer& r) {
  if (zero) return positive(ZeroClass{});
  if (r < 0) return not_positive(NegativeRank{r});
  if (r == 0) return not_positive(NonzeroRankZero{});
  return std::nullopt;
}

}  // namespace

Verdict decide_positive(const StructuredClass& a, const Integer& n_factors,
                        const DecisionOptions& opts) {
  check_fits(a, n_factors);
  if (const auto* dense = std::get_if<KClass>(&a)) {
    const Integer r = kring::rank(*dense);
    if (auto v = rank_rules(dense->is_zero(), r)) return *v;
    const int k = kring::effective_factor_count(*dense);
    if (r >= k) return positive(ThresholdRule{r, k});
    if (k > opts.dense_factor_cap) {
      return Verdict{Sign::unknown,
                     NoRuleFired{"Chern check skipped: " + std::to_string(k) +
                                 " support coordinates exceed dense cap " +
                                 std::to_string(opts.dense_factor_cap)}};
    }
    if (auto obstruction = chern_obstruction(*dense)) return not_positive(*obstruction);
    return Verdict{Sign::unknown, NoRuleFired{"no rule fired"}};
  }

  // c(LineSum{m, r}) = prod_{i<=m}(1 + u_i): top degree m with coefficient 1
  // on u_1...u_m. The effective factor count is m as well.
  const auto& l = std::get<LineSum>(a);
  const Integer r = l.count + l.offset;
  if (auto v = rank_rules(l.count == 0 && l.offset == 0, r)) return *v;
  if (r >= l.count) return positive(ThresholdRule{r, l.count});
  const std::string mono = l.count == 1   ? std::string("u1")
                           : l.count == 2 ? std::string("u1*u2")
                                          : "u1*...*u" + l.count.get_str();
  return not_positive(ChernObstruction{l.count, r, mono, 1});
}

Verdict decide_positive(const KClass& a, const Integer& n_factors, const DecisionOptions& opts) {
  return decide_positive(StructuredClass{a}, n_factors, opts);
}

Verdict decide_subequivalence(const StructuredClass& x, const StructuredClass& y,
                              const Integer& n_factors, const DecisionOptions& opts) {
  const auto* kx = std::get_if<KClass>(&x);
  const auto* ky = std::get_if<KClass>(&y);
  if (kx && ky && kx->factors() != ky->factors()) {
    throw DimensionMismatch("subequivalence operands over different factor counts");
  }
  check_fits(x, n_factors);
  check_fits(y, n_factors);
  Verdict v = decide_positive(kring::subtract(y, x), n_factors, opts);
  if (auto* t = std::get_if<ThresholdRule>(&v.certificate)) {
    t->genuine_subbundle = kring::rank(x) >= n_factors;
  }
  return v;
}

namespace {

bool same_class(const StructuredClass& p, const StructuredClass& q) {
  return kring::is_zero(kring::subtract(p, q));
}

}  // namespace

Verdict decide_cancellation(const StructuredClass& p, const StructuredClass& q,
                            const Integer& n_factors) {
  const auto* kp = std::get_if<KClass>(&p);
  const auto* kq = std::get_if<KClass>(&q);
  if (kp && kq && kp->factors() != kq->factors()) {
    throw DimensionMismatch("cancellation operands over different factor counts");
  }
  check_fits(p, n_factors);
  check_fits(q, n_factors);
  if (!same_class(p, q)) {
    // Distinct K_0 classes can never be equivalent; the rank or a Chern
    // class of the difference separates them.
    const auto diff = kring::subtract(q, p);
    const Integer dr = kring::rank(diff);
    if (dr != 0) return not_positive(NegativeRank{dr < 0 ? dr : Integer(-dr)});
    return not_positive(NonzeroRankZero{});
  }
  const Integer r = kring::rank(p);
  if (r >= n_factors) return positive(ThresholdRule{r, n_factors});
  return Verdict{Sign::unknown, NoRuleFired{"equal classes below the stable range"}};
}

std::optional<PerforationWitness> perforation_witness_search(
    std::span<const StructuredClass> classes, const Integer& n_factors, const Integer& max_multiple,
    const DecisionOptions& opts) {
  if (max_multiple < 2) throw PreconditionError("max_multiple must be at least 2");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Verdict base = decide_positive(classes[i], n_factors, opts);
    if (base.value != Sign::not_positive) continue;
    for (Integer k = 2; k <= max_multiple; ++k) {
      const Verdict mv = decide_positive(kring::scale(k, classes[i]), n_factors, opts);
      if (mv.value == Sign::positive) return PerforationWitness{i, k, base, mv};
    }
  }
  return std::nullopt;
}

}  // namespace ahcert::positivity
