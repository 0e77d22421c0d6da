#include <gtest/gtest.h>

#include <random>

#include "ahcert/cuntz.hpp"
#include "oracles.hpp"

using namespace ahcert;
using namespace ahcert::cuntz;

namespace {

MeasureModel point(std::size_t at) { return MeasureModel::point_mass(3, at); }

}  // namespace

TEST(Cuntz, PairingExamples) {
  const RcWitness w = rc_witness_build(5, 3);
  CuntzElementModel constant{{Integer(4), Integer(4), Integer(4)}, ordered::Element{4, 0}};
  const MeasureModel mixed{{make_rational(1, 2), make_rational(1, 3), make_rational(1, 6)}};
  EXPECT_EQ(ldf_pairing(w.partition, constant, mixed, 3), make_rational(4, 3));
  EXPECT_EQ(ldf_pairing(w.partition, w.a_plus_v, point(2), 3), make_rational(2, 3));
  EXPECT_EQ(ldf_pairing(w.partition, w.b, point(0), 3), 0);
  const MeasureModel unnormalized{{Rational(1), Rational(1), Rational(0)}};
  EXPECT_THROW(ldf_pairing(w.partition, constant, unnormalized, 3), PreconditionError);
}

TEST(Cuntz, PairingIsAffineInTheMeasure) {
  std::mt19937_64 rng(51);
  const RcWitness w = rc_witness_build(7, 2);
  for (int t = 0; t < 200; ++t) {
    CuntzElementModel e;
    for (int i = 0; i < 3; ++i) e.rank_per_region.push_back(oracle::random_integer(rng, 0, 9));
    std::vector<Rational> weights(3);
    Rational total = 0;
    for (auto& v : weights) {
      v = Rational(oracle::random_integer(rng, 0, 5));
      total += v;
    }
    if (total == 0) continue;
    Rational convex = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      weights[i] /= total;
      convex += weights[i] * ldf_pairing(w.partition, e, point(i), 2);
    }
    EXPECT_EQ(ldf_pairing(w.partition, e, MeasureModel{weights}, 2), convex);
  }
}

TEST(Cuntz, WitnessExamples) {
  const RcWitness w5 = rc_witness_build(5, 1);
  EXPECT_EQ(w5.m, 2);
  EXPECT_EQ(w5.bound, 1);
  const RcVerification v5 = rc_witness_verify(w5);
  EXPECT_TRUE(v5.verified);
  for (const auto& gap : v5.gaps) EXPECT_GE(gap, 1);
  EXPECT_EQ(v5.restriction_difference, (ordered::Element{1, 1}));

  const RcWitness w9 = rc_witness_build(9, 2);
  EXPECT_EQ(w9.m, 4);
  EXPECT_EQ(w9.bound, make_rational(3, 2));
  EXPECT_TRUE(rc_witness_verify(w9).verified);

  for (long R = 1; R <= 3; ++R) {
    const RcWitness w4 = rc_witness_build(4, R);
    EXPECT_EQ(w4.m, 1);
    EXPECT_EQ(w4.bound, 0);
    EXPECT_TRUE(w4.degenerate);
  }
  EXPECT_THROW(rc_witness_build(0, 1), PreconditionError);
  EXPECT_THROW(rc_witness_build(5, 0), PreconditionError);
}

TEST(Cuntz, NegativeControl) {
  RcWitness w = rc_witness_build(7, 1);
  w.a_plus_v.restriction_class = ordered::Element{w.m, 0};
  const RcVerification v = rc_witness_verify(w);
  EXPECT_FALSE(v.failure_certificate);
  EXPECT_FALSE(v.verified);
}

TEST(Cuntz, WitnessGrid) {
  for (long n = 5; n <= 11; ++n) {
    for (long R = 1; R <= 6; ++R) {
      const RcWitness w = rc_witness_build(n, R);
      const long m = (n - 1) / 2;
      EXPECT_EQ(w.bound, make_rational(m - 1, R));
      EXPECT_TRUE(rc_witness_verify(w).verified) << n << " " << R;
    }
  }
}

TEST(Cuntz, Amplification) {
  const RcWitness w = rc_witness_build(9, 1);
  EXPECT_EQ(w.bound, 3);
  EXPECT_EQ(witness_amplify(w, 3).bound, 1);
  EXPECT_EQ(witness_amplify(w, 1).bound, w.bound);
  EXPECT_EQ(witness_amplify(w, 1).unit_rank, w.unit_rank);
  for (long k = 1; k <= 10; ++k) {
    const RcWitness a = witness_amplify(w, k);
    EXPECT_TRUE(rc_witness_verify(a).verified);
    EXPECT_EQ(a.bound, make_rational(3, k));
  }
  EXPECT_THROW(witness_amplify(w, 0), PreconditionError);
}

TEST(Cuntz, SubequivalenceModel) {
  const RcWitness w = rc_witness_build(5, 1);
  EXPECT_EQ(cuntz_leq(w.partition, w.b, w.a_plus_v), Truth::no);
  EXPECT_EQ(cuntz_leq(w.partition, w.b, w.b), Truth::yes);
  CuntzElementModel missing = w.a_plus_v;
  missing.restriction_class.reset();
  EXPECT_EQ(cuntz_leq(w.partition, w.b, missing), Truth::unknown);
  CuntzElementModel bigger{{Integer(9), Integer(0), Integer(0)}, ordered::Element{0, 0}};
  EXPECT_EQ(cuntz_leq(w.partition, w.b, bigger), Truth::no);  // rank domination fails on V\Y
  CuntzElementModel zero{{Integer(0), Integer(0), Integer(0)}, std::nullopt};
  EXPECT_EQ(cuntz_leq(w.partition, zero, missing), Truth::yes);
}

TEST(Cuntz, FailureRadiusMonotone) {
  const RcWitness w = rc_witness_build(9, 1);
  const auto rho = certified_failure_radius(w.partition, w.b, w.a_plus_v, 1);
  ASSERT_TRUE(rho.has_value());
  EXPECT_EQ(*rho, 3);
  const std::vector<CuntzElementModel> elements{w.b, w.a_plus_v};
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}};
  for (const Rational r : {Rational(0), Rational(1), make_rational(5, 2), make_rational(29, 10)}) {
    const auto rep = check_r_comparison(w.partition, 1, r, elements, pairs);
    EXPECT_FALSE(rep.holds) << r;
  }
  EXPECT_TRUE(check_r_comparison(w.partition, 1, 3, elements, pairs).holds);
}

TEST(Cuntz, AlmostUnperforationWitness) {
  const AupWitness w = almost_unperforation_witness(5);
  EXPECT_TRUE(w.verified);
  EXPECT_EQ(w.combined, (ordered::Element{2, 3}));
  EXPECT_EQ(w.difference, (ordered::Element{1, 1}));
  EXPECT_TRUE(ordered::sphere_even_cone(2, w.combined));
  EXPECT_FALSE(ordered::sphere_even_cone(2, w.difference));
  EXPECT_THROW(almost_unperforation_witness(4), PreconditionError);
  for (long R = 1; R <= 5; ++R) EXPECT_TRUE(almost_unperforation_witness(5, R).verified);
  EXPECT_TRUE(almost_unperforation_witness(8).verified);
}

TEST(Cuntz, AlmostUnperforatedSearch) {
  const AupWitness w = almost_unperforation_witness(5);
  const std::vector<CuntzElementModel> pair{w.a, w.b};
  const auto hit = almost_unperforated_check(w.partition, pair, 4);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->x, 1u);
  EXPECT_EQ(hit->y, 0u);
  EXPECT_EQ(hit->m, 4);
  EXPECT_EQ(hit->n, 3);
  EXPECT_FALSE(almost_unperforated_check(w.partition, pair, 3).has_value());

  const std::vector<CuntzElementModel> constants{
      {{Integer(1), Integer(1), Integer(1)}, ordered::Element{1, 0}},
      {{Integer(3), Integer(3), Integer(3)}, ordered::Element{3, 0}}};
  EXPECT_FALSE(almost_unperforated_check(w.partition, constants, 6).has_value());
  const std::vector<CuntzElementModel> single{w.a};
  EXPECT_FALSE(almost_unperforated_check(w.partition, single, 6).has_value());
}
