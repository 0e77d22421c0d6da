#include <gtest/gtest.h>

#include <random>

#include "ahcert/ah.hpp"
#include "oracles.hpp"

using namespace ahcert;
using namespace ahcert::ah;
using kring::KClass;
using kring::LineSum;
using kring::StructuredClass;

namespace {

BuildingBlock cw_block(std::vector<std::pair<long, long>> dims_ranks) {
  std::vector<Summand> s;
  for (const auto& [d, r] : dims_ranks) s.push_back({AbstractCW{d}, r});
  return BuildingBlock(std::move(s));
}

BuildingBlock random_block(std::mt19937_64& rng) {
  std::vector<Summand> s;
  const int count = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < count; ++i) {
    if (rng() % 2) {
      s.push_back({SphereProduct{oracle::random_integer(rng, 0, 6)}, oracle::random_integer(rng, 1, 9)});
    } else {
      s.push_back({AbstractCW{oracle::random_integer(rng, 0, 15)}, oracle::random_integer(rng, 1, 9)});
    }
  }
  return BuildingBlock(std::move(s));
}

// max dim/rank straight from the summand list
Rational max_ratio(const BuildingBlock& b) {
  Rational best = -1;
  for (const auto& s : b.summands()) best = std::max(best, make_rational(dimension(s.space), s.unit_rank));
  return best;
}

}  // namespace

TEST(Ah, Dimensions) {
  EXPECT_EQ(dimension(SphereProduct{3}), 6);
  EXPECT_EQ(dimension(AbstractCW{5}), 5);
  EXPECT_THROW(BuildingBlock({}), PreconditionError);
  EXPECT_THROW(BuildingBlock({{AbstractCW{1}, 0}}), PreconditionError);
}

TEST(Ah, DrrExamples) {
  for (long n = 1; n <= 5; ++n) {
    EXPECT_EQ(drr_of_block(BuildingBlock({{SphereProduct{n}, n}})), 2);
  }
  EXPECT_EQ(drr_of_block(cw_block({{0, 7}})), 0);
  EXPECT_EQ(drr_of_block(cw_block({{6, 2}, {4, 4}})), 3);
}

TEST(Ah, DrrMatchesFormulaOnRandomBlocks) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    const BuildingBlock b = random_block(rng);
    EXPECT_EQ(drr_of_block(b), max_ratio(b));
  }
}

TEST(Ah, StableRankExamples) {
  EXPECT_EQ(nistor_stable_rank(cw_block({{0, 4}})), 1);
  EXPECT_EQ(nistor_stable_rank(BuildingBlock({{SphereProduct{3}, 3}})), 2);
  EXPECT_EQ(nistor_stable_rank(cw_block({{5, 1}})), 3);
  EXPECT_EQ(nistor_stable_rank(cw_block({{7, 2}, {2, 1}})), 3);  // max(ceil(3/2)+1, ceil(1/1)+1)

  const auto b1 = drr_sr_bound_check(BuildingBlock({{SphereProduct{3}, 3}}));
  EXPECT_TRUE(b1.holds);
  EXPECT_EQ(b1.sr_half_minus_one, 0);
  const auto b2 = drr_sr_bound_check(cw_block({{0, 3}}));
  EXPECT_EQ(b2.sr_half_minus_one, make_rational(-1, 2));
  const auto b3 = drr_sr_bound_check(cw_block({{5, 1}}));
  EXPECT_EQ(b3.drr, 5);
  EXPECT_EQ(b3.sr_half_minus_one, make_rational(1, 2));
}

TEST(Ah, DrrAlgebraLaws) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 200; ++t) {
    const BuildingBlock a = random_block(rng), b = random_block(rng);
    EXPECT_EQ(drr_of_block(direct_sum(a, b)), std::max(drr_of_block(a), drr_of_block(b)));
    const Integer k = oracle::random_integer(rng, 1, 7);
    EXPECT_EQ(drr_of_block(matrix_amplify(a, k)), drr_of_block(a) / k);
    const BuildingBlock ab = tensor_blocks(a, b);
    EXPECT_EQ(ab.size(), a.size() * b.size());
    EXPECT_LE(drr_of_block(ab), drr_of_block(a) / min_rank(b) + drr_of_block(b) / min_rank(a));
    EXPECT_TRUE(drr_sr_bound_check(a).holds);
  }
}

TEST(Ah, TensorOfSummands) {
  const BuildingBlock t = tensor_blocks(cw_block({{6, 3}}), cw_block({{4, 2}}));
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(dimension(t[0].space), 10);
  EXPECT_EQ(t[0].unit_rank, 6);
}

TEST(Ah, TensorSystemRatiosDecay) {
  // stages (S^2, rank 2^i) (x) (S^2, rank 3^i): ratio 4 / 6^i
  Rational prev = 100;
  for (long i = 1; i <= 6; ++i) {
    Integer r2, r3;
    mpz_ui_pow_ui(r2.get_mpz_t(), 2, i);
    mpz_ui_pow_ui(r3.get_mpz_t(), 3, i);
    const Rational d = drr_of_block(
        tensor_blocks(BuildingBlock({{SphereProduct{1}, r2}}), BuildingBlock({{SphereProduct{1}, r3}})));
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, make_rational(1, 10000));
}

TEST(Ah, SystemDrrIsStageData) {
  InductiveSystem s;
  s.blocks = {BuildingBlock({{SphereProduct{1}, 1}}), BuildingBlock({{SphereProduct{2}, 3}})};
  BlockMap m;
  m.targets = {{Projection{0, {0}}, Projection{0, {1}}, Evaluation{0, "pt"}}};
  s.maps = {m};
  validate(s);
  const SystemDrr d = drr_of_system(s, 1);
  EXPECT_EQ(d.stage_ratios, (std::vector<Rational>{2, make_rational(4, 3)}));
  EXPECT_EQ(d.reported_limsup, make_rational(4, 3));
  EXPECT_EQ(drr_of_system(s).reported_limsup, 2);
}

TEST(Ah, MapValidation) {
  const BuildingBlock src({{SphereProduct{1}, 1}});
  const BuildingBlock tgt({{SphereProduct{2}, 3}});
  BlockMap ok;
  ok.targets = {{Projection{0, {0}}, Projection{0, {1}}, Evaluation{0, "pt"}}};
  EXPECT_NO_THROW(validate(ok, src, tgt));
  BlockMap short_rank;
  short_rank.targets = {{Projection{0, {0}}, Evaluation{0, "pt"}}};
  EXPECT_THROW(validate(short_rank, src, tgt), PreconditionError);
  short_rank.unital = false;
  EXPECT_NO_THROW(validate(short_rank, src, tgt));
  BlockMap bad_proj;
  bad_proj.targets = {{Projection{0, {2}}, Evaluation{0, "pt", 2}}};
  EXPECT_THROW(validate(bad_proj, src, tgt), PreconditionError);
  const BuildingBlock cw({{AbstractCW{2}, 1}});
  BlockMap from_cw;
  from_cw.targets = {{Projection{0, {0}}, Evaluation{0, "pt", 2}}};
  EXPECT_THROW(validate(from_cw, cw, tgt), PreconditionError);
}

TEST(Ah, InducedMapExamples) {
  const BuildingBlock src({{SphereProduct{1}, 1}});
  const BuildingBlock tgt({{SphereProduct{2}, 3}});
  BlockMap m;
  m.targets = {{Projection{0, {0}}, Projection{0, {1}}, Evaluation{0, "pt"}}};
  const std::vector<StructuredClass> in{kring::line_sum(1, 1, 0)};  // 1 + t
  const auto out = induced_k0_map(m, src, tgt, in);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(kring::expand(out[0], 2), kring::line_sum(2, 2, 1));  // 3 + t1 + t2

  BlockMap id;
  id.targets = {{Projection{0, {0}}}};
  const std::vector<StructuredClass> cls{kring::bott(1, 1)};
  EXPECT_EQ(kring::expand(induced_k0_map(id, src, src, cls)[0], 1), kring::bott(1, 1));
}

TEST(Ah, VilladsenStageMapOnY) {
  // (m, s, n, P): (4, -, 3, 4) -> (4, 1, 15, 16)
  const BuildingBlock b1({{SphereProduct{4}, 3}});
  const BuildingBlock b2({{SphereProduct{16}, 15}});
  BlockMap m;
  m.targets = {{BlockProjections{0, 4}, Evaluation{0, "x", 1}}};
  const std::vector<StructuredClass> y1{LineSum{4, -1}};
  const auto y2 = induced_k0_map(m, b1, b2, y1);
  EXPECT_EQ(std::get<LineSum>(y2[0]), (LineSum{16, -1}));  // offset s P - m - s + 1 = 0
  // dense cross-check over 16 factors
  const std::vector<StructuredClass> dense{kring::expand(StructuredClass{LineSum{4, -1}}, 4)};
  const auto y2d = induced_k0_map(m, b1, b2, dense);
  EXPECT_EQ(kring::expand(y2d[0], 16), kring::line_sum(16, 16, -1));
}

TEST(Ah, InducedMapIsAdditiveAndRankBlind) {
  std::mt19937_64 rng(43);
  const BuildingBlock src({{SphereProduct{2}, 1}, {SphereProduct{1}, 2}});
  const BuildingBlock tgt({{SphereProduct{4}, 5}});
  BlockMap m;
  m.targets = {{Projection{0, {3, 1}}, Projection{1, {0}}, Evaluation{1, "p", 1}}};
  validate(m, src, tgt);
  for (int t = 0; t < 50; ++t) {
    const std::vector<StructuredClass> a{oracle::random_class(rng, 2, 0.6, -3, 3),
                                         oracle::random_class(rng, 1, 0.6, -3, 3)};
    const std::vector<StructuredClass> b{oracle::random_class(rng, 2, 0.6, -3, 3),
                                         oracle::random_class(rng, 1, 0.6, -3, 3)};
    const std::vector<StructuredClass> sum{kring::add(a[0], b[0]), kring::add(a[1], b[1])};
    const auto fa = induced_k0_map(m, src, tgt, a), fb = induced_k0_map(m, src, tgt, b);
    const auto fs = induced_k0_map(m, src, tgt, sum);
    EXPECT_EQ(kring::expand(fs[0], 4), kring::expand(fa[0], 4) + kring::expand(fb[0], 4));
    const Integer k = oracle::random_integer(rng, 2, 4);
    const auto amplified = induced_k0_map(m, matrix_amplify(src, k), matrix_amplify(tgt, k), a);
    EXPECT_EQ(kring::expand(amplified[0], 4), kring::expand(fa[0], 4));
  }
}

TEST(Ah, CompositionMatchesSequentialPushForward) {
  const BuildingBlock a({{SphereProduct{1}, 1}});
  const BuildingBlock b({{SphereProduct{2}, 3}});
  const BuildingBlock c({{SphereProduct{4}, 9}});
  BlockMap f, g;
  f.targets = {{Projection{0, {0}}, Projection{0, {1}}, Evaluation{0, "p"}}};
  g.targets = {{BlockProjections{0, 2}, Evaluation{0, "q", 1}}};
  const BlockMap gf = compose(f, g, a, b, c);
  EXPECT_NO_THROW(validate(gf, a, c));
  std::mt19937_64 rng(44);
  for (int t = 0; t < 20; ++t) {
    const std::vector<StructuredClass> x{oracle::random_class(rng, 1, 0.8, -4, 4)};
    const auto step = induced_k0_map(g, b, c, induced_k0_map(f, a, b, x));
    const auto once = induced_k0_map(gf, a, c, x);
    EXPECT_EQ(kring::expand(step[0], 4), kring::expand(once[0], 4));
  }
}

TEST(Ah, StateSpread) {
  const BuildingBlock one({{SphereProduct{1}, 2}});
  const std::vector<StructuredClass> c1{kring::trivial(1, 1)};
  EXPECT_EQ(summand_state_spread(one, c1, make_rational(1, 2)), 0);
  const BuildingBlock two({{SphereProduct{1}, 2}, {SphereProduct{1}, 4}});
  const std::vector<StructuredClass> c2{kring::trivial(1, 1), kring::trivial(1, 3)};
  EXPECT_EQ(summand_state_spread(two, c2, make_rational(2, 3)), make_rational(1, 6));
}
