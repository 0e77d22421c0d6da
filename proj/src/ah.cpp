#include "ahcert/ah.hpp"

#include <algorithm>
#include <set>

namespace ahcert::ah {

using kring::KClass;
using kring::LineSum;

Integer dimension(const Space& s) {
  if (const auto* sp = std::get_if<SphereProduct>(&s)) return 2 * sp->factors;
  return std::get<AbstractCW>(s).dim;
}

BuildingBlock::BuildingBlock(std::vector<Summand> summands) : summands_(std::move(summands)) {
  if (summands_.empty()) throw PreconditionError("building block needs at least one summand");
  for (const auto& s : summands_) {
    if (s.unit_rank < 1) throw PreconditionError("unit rank must be at least 1");
    if (dimension(s.space) < 0) throw PreconditionError("negative dimension");
  }
}

std::size_t source_of(const EigenvalueMap& e) {
  return std::visit([](const auto& x) { return x.source; }, e);
}

Integer multiplicity(const EigenvalueMap& e) {
  return std::visit(
      [](const auto& x) -> Integer {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Projection>) {
          return 1;
        } else {
          return x.count;
        }
      },
      e);
}

namespace {

const SphereProduct& sphere_or_throw(const Summand& s, const char* what) {
  const auto* sp = std::get_if<SphereProduct>(&s.space);
  if (sp == nullptr) throw PreconditionError(std::string(what) + ": summand is not a sphere product");
  return *sp;
}

int small_factors(const Summand& s, const char* what) {
  const auto& sp = sphere_or_throw(s, what);
  if (sp.factors > kring::kMaxBitFactors) {
    throw UnsupportedVariant(std::string(what) + ": " + sp.factors.get_str() +
                             " factors have no dense K-class form");
  }
  return static_cast<int>(sp.factors.get_si());
}

void check_embedding(const std::vector<int>& emb, const Integer& source_factors,
                     const Integer& target_factors) {
  if (Integer(static_cast<long>(emb.size())) != source_factors) {
    throw PreconditionError("projection embedding length differs from source factor count");
  }
  std::set<int> seen;
  for (int j : emb) {
    if (j < 0 || Integer(j) >= target_factors) throw PreconditionError("projection embedding out of range");
    if (!seen.insert(j).second) throw PreconditionError("projection embedding is not injective");
  }
}

}  // namespace

void validate(const BlockMap& map, const BuildingBlock& source, const BuildingBlock& target) {
  if (map.targets.size() != target.size()) {
    throw PreconditionError("block map lists " + std::to_string(map.targets.size()) +
                            " target summands, target block has " + std::to_string(target.size()));
  }
  for (std::size_t l = 0; l < target.size(); ++l) {
    Integer ranks = 0;
    for (const auto& e : map.targets[l]) {
      const std::size_t src = source_of(e);
      if (src >= source.size()) throw PreconditionError("eigenvalue map names a missing source summand");
      const Integer mult = multiplicity(e);
      if (mult < 1) throw PreconditionError("eigenvalue multiplicity must be positive");
      if (const auto* p = std::get_if<Projection>(&e)) {
        const auto& s = sphere_or_throw(source[src], "projection");
        const auto& t = sphere_or_throw(target[l], "projection");
        check_embedding(p->embedding, s.factors, t.factors);
      } else if (const auto* b = std::get_if<BlockProjections>(&e)) {
        const auto& s = sphere_or_throw(source[src], "block projections");
        const auto& t = sphere_or_throw(target[l], "block projections");
        if (b->count * s.factors > t.factors) {
          throw PreconditionError("block projections need count * source factors <= target factors");
        }
      }
      ranks += mult * source[src].unit_rank;
    }
    if (map.unital ? ranks != target[l].unit_rank : ranks > target[l].unit_rank) {
      throw PreconditionError("rank bookkeeping fails at target summand " + std::to_string(l) + ": " +
                              ranks.get_str() + " vs unit rank " + target[l].unit_rank.get_str());
    }
  }
}

void validate(const InductiveSystem& s) {
  if (s.blocks.empty()) throw PreconditionError("inductive system without blocks");
  if (s.maps.size() + 1 != s.blocks.size()) {
    throw PreconditionError("an inductive system needs exactly one map between consecutive blocks");
  }
  for (std::size_t i = 0; i < s.maps.size(); ++i) validate(s.maps[i], s.blocks[i], s.blocks[i + 1]);
}

// ---------------------------------------------------------------------------

Rational drr_of_block(const BuildingBlock& b) {
  Rational best = 0;
  bool first = true;
  for (const auto& s : b.summands()) {
    const Rational r = make_rational(dimension(s.space), s.unit_rank);
    if (first || r > best) best = r;
    first = false;
  }
  return best;
}

SystemDrr drr_of_blocks(std::span<const BuildingBlock> blocks, std::size_t tail_start) {
  if (blocks.empty()) throw PreconditionError("no stages");
  if (tail_start >= blocks.size()) throw PreconditionError("tail start beyond the last stage");
  SystemDrr out;
  out.tail_start = tail_start;
  for (const auto& b : blocks) out.stage_ratios.push_back(drr_of_block(b));
  out.reported_limsup = *std::max_element(out.stage_ratios.begin() + static_cast<std::ptrdiff_t>(tail_start),
                                          out.stage_ratios.end());
  return out;
}

SystemDrr drr_of_system(const InductiveSystem& s, std::size_t tail_start) {
  return drr_of_blocks(s.blocks, tail_start);
}

BuildingBlock direct_sum(const BuildingBlock& a, const BuildingBlock& b) {
  std::vector<Summand> all = a.summands();
  all.insert(all.end(), b.summands().begin(), b.summands().end());
  return BuildingBlock(std::move(all));
}

BuildingBlock matrix_amplify(const BuildingBlock& b, const Integer& k) {
  if (k < 1) throw PreconditionError("amplification factor must be at least 1");
  std::vector<Summand> out = b.summands();
  for (auto& s : out) s.unit_rank *= k;
  return BuildingBlock(std::move(out));
}

BuildingBlock tensor_blocks(const BuildingBlock& a, const BuildingBlock& b) {
  std::vector<Summand> out;
  for (const auto& x : a.summands()) {
    for (const auto& y : b.summands()) {
      const auto* sx = std::get_if<SphereProduct>(&x.space);
      const auto* sy = std::get_if<SphereProduct>(&y.space);
      Space space = (sx && sy) ? Space{SphereProduct{sx->factors + sy->factors}}
                               : Space{AbstractCW{dimension(x.space) + dimension(y.space)}};
      out.push_back(Summand{std::move(space), x.unit_rank * y.unit_rank});
    }
  }
  return BuildingBlock(std::move(out));
}

Integer min_rank(const BuildingBlock& b) {
  Integer m = b[0].unit_rank;
  for (const auto& s : b.summands()) m = std::min(m, s.unit_rank);
  return m;
}

Integer nistor_stable_rank(const BuildingBlock& b) {
  Integer best = 0;
  for (const auto& s : b.summands()) {
    const Integer half_dim = floor_div(dimension(s.space), 2);
    best = std::max(best, Integer(ceil_div(half_dim, s.unit_rank) + 1));
  }
  return best;
}

DrrSrBound drr_sr_bound_check(const BuildingBlock& b) {
  const Rational drr = drr_of_block(b);
  const Rational rhs = Rational(nistor_stable_rank(b)) / 2 - 1;
  return DrrSrBound{drr >= rhs, drr, rhs};
}

// ---------------------------------------------------------------------------

namespace {

StructuredClass pull_back_dense(const StructuredClass& cls, const Summand& src, int target_n,
                                const std::vector<int>& embedding) {
  const int n_src = small_factors(src, "pullback");
  const KClass dense = kring::expand(cls, n_src);
  return kring::pullback_coord_projection(dense, target_n, embedding);
}

StructuredClass block_pullback(const StructuredClass& cls, const Summand& src, const Summand& tgt,
                               const Integer& count) {
  const Integer& n_src = sphere_or_throw(src, "block projections").factors;
  if (const auto* l = std::get_if<LineSum>(&cls)) {
    // Copies of t_1..t_p land on consecutive blocks; they tile 1..count*p
    // exactly when p fills the source (or there is a single copy).
    if (l->count == n_src || count == 1 || l->count == 0) {
      return LineSum{count * l->count, count * l->offset};
    }
  }
  const int n_tgt = small_factors(tgt, "block projections");
  if (count > 64) throw UnsupportedVariant("too many block projections for a dense class");
  const int ns = static_cast<int>(n_src.get_si());
  StructuredClass acc = KClass(n_tgt);
  for (int j = 0; j < static_cast<int>(count.get_si()); ++j) {
    std::vector<int> emb(static_cast<std::size_t>(ns));
    for (int i = 0; i < ns; ++i) emb[static_cast<std::size_t>(i)] = j * ns + i;
    acc = kring::add(acc, pull_back_dense(cls, src, n_tgt, emb));
  }
  return acc;
}

}  // namespace

std::vector<StructuredClass> induced_k0_map(const BlockMap& map, const BuildingBlock& source,
                                            const BuildingBlock& target,
                                            std::span<const StructuredClass> classes) {
  validate(map, source, target);
  if (classes.size() != source.size()) throw PreconditionError("one class per source summand expected");
  for (std::size_t i = 0; i < source.size(); ++i) {
    const auto& sp = sphere_or_throw(source[i], "induced K_0 map");
    if (kring::max_coordinate(classes[i]) > sp.factors) {
      throw PreconditionError("class does not live over its source summand");
    }
  }
  std::vector<StructuredClass> out;
  out.reserve(target.size());
  for (std::size_t l = 0; l < target.size(); ++l) {
    sphere_or_throw(target[l], "induced K_0 map");
    StructuredClass acc = LineSum{0, 0};
    for (const auto& e : map.targets[l]) {
      const std::size_t src = source_of(e);
      const auto& cls = classes[src];
      StructuredClass part = std::visit(
          [&](const auto& x) -> StructuredClass {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Projection>) {
              return pull_back_dense(cls, source[src], small_factors(target[l], "projection"), x.embedding);
            } else if constexpr (std::is_same_v<T, BlockProjections>) {
              return block_pullback(cls, source[src], target[l], x.count);
            } else {
              return LineSum{0, x.count * kring::rank(cls)};
            }
          },
          e);
      acc = kring::add(acc, part);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

namespace {

std::vector<EigenvalueMap> explicit_form(const EigenvalueMap& e, const BuildingBlock& source) {
  const auto* b = std::get_if<BlockProjections>(&e);
  if (b == nullptr) return {e};
  if (b->count > 64) throw UnsupportedVariant("too many block projections to expand");
  const int ns = small_factors(source[b->source], "compose");
  std::vector<EigenvalueMap> out;
  for (int j = 0; j < static_cast<int>(b->count.get_si()); ++j) {
    Projection p{b->source, std::vector<int>(static_cast<std::size_t>(ns))};
    for (int i = 0; i < ns; ++i) p.embedding[static_cast<std::size_t>(i)] = j * ns + i;
    out.emplace_back(std::move(p));
  }
  return out;
}

}  // namespace

BlockMap compose(const BlockMap& first, const BlockMap& second, const BuildingBlock& source,
                 const BuildingBlock& middle, const BuildingBlock& target) {
  validate(first, source, middle);
  validate(second, middle, target);
  BlockMap out;
  out.unital = first.unital && second.unital;
  out.targets.resize(target.size());
  for (std::size_t l = 0; l < target.size(); ++l) {
    for (const auto& outer_raw : second.targets[l]) {
      for (const auto& outer : explicit_form(outer_raw, middle)) {
        const std::size_t j = source_of(outer);
        for (const auto& inner_raw : first.targets[j]) {
          for (const auto& inner : explicit_form(inner_raw, source)) {
            const std::size_t i = source_of(inner);
            const auto* po = std::get_if<Projection>(&outer);
            const auto* pi = std::get_if<Projection>(&inner);
            if (po && pi) {
              // t |-> outer(inner(t))
              Projection p{i, std::vector<int>(pi->embedding.size())};
              for (std::size_t t = 0; t < pi->embedding.size(); ++t) {
                p.embedding[t] = po->embedding[static_cast<std::size_t>(pi->embedding[t])];
              }
              out.targets[l].emplace_back(std::move(p));
            } else if (po) {
              out.targets[l].emplace_back(std::get<Evaluation>(inner));
            } else {
              const auto& eo = std::get<Evaluation>(outer);
              std::string label = eo.point;
              Integer count = eo.count;
              if (const auto* ei = std::get_if<Evaluation>(&inner)) {
                label = ei->point;
                count *= ei->count;
              } else {
                label += "@proj";
              }
              out.targets[l].emplace_back(Evaluation{i, label, count});
            }
          }
        }
      }
    }
  }
  validate(out, source, target);
  return out;
}

Rational summand_state_spread(const BuildingBlock& b, std::span<const StructuredClass> classes,
                              const Rational& global_state) {
  if (classes.size() != b.size()) throw PreconditionError("one class per summand expected");
  Rational worst = 0;
  for (std::size_t l = 0; l < b.size(); ++l) {
    const Rational s = make_rational(kring::rank(classes[l]), b[l].unit_rank);
    worst = std::max(worst, Rational(abs(s - global_state)));
  }
  return worst;
}

}  // namespace ahcert::ah
