#include <gtest/gtest.h>

#include <random>

#include "ahcert/ordered.hpp"
#include "oracles.hpp"

using namespace ahcert;
using namespace ahcert::ordered;

namespace {

OrderedGroupModel sphere(long m, long R) { return OrderedGroupModel(SphereEven{m, {R, 0}}); }

Element el(long a, long b) { return {Integer(a), Integer(b)}; }

Element random_element(std::mt19937_64& rng, std::size_t d, long lo, long hi) {
  Element x(d);
  for (auto& v : x) v = oracle::random_integer(rng, lo, hi);
  return x;
}

bool interpolation_holds(const InterpolationResult& r) {
  return r.kind != InterpolationResult::Kind::no_interpolant;
}

}  // namespace

TEST(Ordered, SphereEvenConeMatchesDefinition) {
  for (long m = 0; m <= 4; ++m) {
    for (long x = -6; x <= 6; ++x) {
      for (long y = -6; y <= 6; ++y) {
        const bool direct = (y == 0 && x >= 0) || x >= m;
        EXPECT_EQ(sphere_even_cone(m, el(x, y)), direct);
        EXPECT_EQ(in_cone(sphere(m, 1), el(x, y)), direct ? Truth::yes : Truth::no);
      }
    }
  }
}

TEST(Ordered, ConeContainsZeroUnitAndIsAdditive) {
  std::mt19937_64 rng(31);
  for (long m = 0; m <= 4; ++m) {
    const auto model = sphere(m, 3);
    EXPECT_EQ(in_cone(model, el(0, 0)), Truth::yes);
    EXPECT_EQ(in_cone(model, model.unit()), Truth::yes);
    for (int t = 0; t < 200; ++t) {
      const Element a = random_element(rng, 2, -3, 8), b = random_element(rng, 2, -3, 8);
      if (in_cone(model, a) == Truth::yes && in_cone(model, b) == Truth::yes) {
        EXPECT_EQ(in_cone(model, a + b), Truth::yes);
      }
    }
  }
}

TEST(Ordered, GeometricState) {
  const auto model = sphere(2, 2);
  EXPECT_EQ(state_eval(model, el(1, 0)), make_rational(1, 2));
  EXPECT_EQ(state_eval(model, model.unit()), 1);
  EXPECT_EQ(state_eval(model, el(0, 1)), 0);
  EXPECT_THROW(state_eval(model, Element{1, 2, 3}), DimensionMismatch);
}

TEST(Ordered, StateBoundsExamples) {
  const auto model = sphere(2, 2);
  const StateBounds u = state_bounds_infsup(model, model.unit(), 4);
  EXPECT_EQ(u.lo, 1);
  EXPECT_EQ(u.hi, Rational(1));
  const StateBounds b = state_bounds_infsup(model, el(1, 0), 8);
  EXPECT_EQ(b.lo, make_rational(1, 2));
  EXPECT_EQ(b.hi, make_rational(1, 2));
  EXPECT_THROW(state_bounds_infsup(model, el(0, 1), 4), PreconditionError);
}

TEST(Ordered, StateBoundsBracketAndShrink) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 40; ++t) {
    const long m = static_cast<long>(rng() % 4), R = 1 + static_cast<long>(rng() % 4);
    const auto model = sphere(m, R);
    Element x = random_element(rng, 2, 0, 9);
    if (in_cone(model, x) != Truth::yes) continue;
    const Rational s = state_eval(model, x);
    std::optional<Rational> prev_width;
    for (long bound = 1; bound <= 6; ++bound) {
      const StateBounds b = state_bounds_infsup(model, x, bound);
      EXPECT_LE(b.lo, s);
      if (!b.hi) continue;
      EXPECT_GE(*b.hi, s);
      const Rational width = *b.hi - b.lo;
      if (prev_width) EXPECT_LE(width, *prev_width);
      prev_width = width;
    }
  }
}

TEST(Ordered, StrictComparisonExamples) {
  const auto model = sphere(2, 2);
  const std::vector<Pair> pairs{{el(1, 0), el(2, 1)}};
  const ComparisonReport fail = check_r_strict_comparison(model, make_rational(1, 4), pairs);
  EXPECT_FALSE(fail.holds);
  ASSERT_TRUE(fail.failure.has_value());
  EXPECT_EQ(fail.failure->second - fail.failure->first, el(1, 1));
  const ComparisonReport vac = check_r_strict_comparison(model, make_rational(3, 4), pairs);
  EXPECT_TRUE(vac.holds);
  EXPECT_EQ(vac.vacuous, 1u);
  EXPECT_TRUE(check_r_strict_comparison(model, 0, std::vector<Pair>{}).holds);
}

TEST(Ordered, InterpolationExamples) {
  for (long n = 2; n <= 4; ++n) {
    const auto model = sphere(n, n);
    const Quadruple q{el(0, 0), el(0, 1), el(n, 0), el(n, 1)};
    const auto res = check_r_interpolation(model, make_rational(1, 2), q, 3 * n);
    EXPECT_EQ(res.kind, InterpolationResult::Kind::no_interpolant);
    EXPECT_EQ(res.candidates, 1u + static_cast<std::size_t>((6 * n + 1) * (6 * n + 1)));
  }
  const auto model = sphere(2, 2);
  const auto found = check_r_interpolation(model, 0, Quadruple{el(0, 0), el(0, 0), el(4, 0), el(4, 0)}, 4);
  EXPECT_EQ(found.kind, InterpolationResult::Kind::interpolant);
  EXPECT_EQ(found.z, el(2, 0));
  const auto degenerate = check_r_interpolation(model, 0, Quadruple{el(1, 0), el(0, 0), el(1, 0), el(3, 0)}, 4);
  EXPECT_EQ(degenerate.kind, InterpolationResult::Kind::not_applicable);
}

TEST(Ordered, CancellationAndFcq) {
  const auto block = sphere_product_block(2, 1);
  Element p(4, Integer(0));
  p[0] = 3;
  p[1] = 1;  // 3 + t_1
  const std::vector<Pair> same{{p, p}};
  const auto rep = check_r_cancellation(block, 1, same);
  EXPECT_TRUE(rep.fully_certified());
  EXPECT_EQ(rep.certified.size(), 1u);

  const auto model = sphere(2, 2);
  const std::vector<Pair> units{{model.unit(), model.unit()}};
  EXPECT_TRUE(check_r_cancellation(model, make_rational(1, 2), units).fully_certified());
  const std::vector<Pair> small{{el(1, 0), el(1, 0)}};
  EXPECT_FALSE(check_r_cancellation(model, 0, small).fully_certified());  // rank below threshold

  const std::vector<Pair> fcq{{el(1, 0), el(2, 1)}, {el(0, 0), el(1, 0)}};
  const auto f = check_r_fcq(model, make_rational(1, 4), fcq);
  EXPECT_FALSE(f.holds);
  EXPECT_EQ(f.failure->first, el(1, 0));
  EXPECT_TRUE(check_r_fcq(model, 1, fcq).holds);
}

TEST(Ordered, AllCheckersAreUpwardClosed) {
  std::mt19937_64 rng(33);
  const std::vector<Rational> radii{0, make_rational(1, 4), make_rational(1, 2), 1, 2};
  for (int t = 0; t < 60; ++t) {
    const long m = 1 + static_cast<long>(rng() % 3);
    const auto model = sphere(m, m);
    std::vector<Pair> pairs;
    for (int k = 0; k < 6; ++k) {
      pairs.emplace_back(random_element(rng, 2, 0, 3 * m), random_element(rng, 2, 0, 3 * m));
    }
    const Quadruple q{random_element(rng, 2, 0, 2), random_element(rng, 2, 0, 2),
                      random_element(rng, 2, m, 3 * m), random_element(rng, 2, m, 3 * m)};
    bool cmp = false, interp = false, canc = false, fcq = false;
    for (const auto& r : radii) {
      const bool c1 = check_r_strict_comparison(model, r, pairs).holds;
      const bool c2 = interpolation_holds(check_r_interpolation(model, r, q, 2 * m));
      const bool c3 = check_r_cancellation(model, r, pairs).fully_certified();
      const bool c4 = check_r_fcq(model, r, pairs).holds;
      if (cmp) EXPECT_TRUE(c1);
      if (interp) EXPECT_TRUE(c2);
      if (canc) EXPECT_TRUE(c3);
      if (fcq) EXPECT_TRUE(c4);
      cmp = cmp || c1;
      interp = interp || c2;
      canc = canc || c3;
      fcq = fcq || c4;
    }
  }
}

TEST(Ordered, SphereBlockModel) {
  const auto block = sphere_product_block(2, 2);
  EXPECT_EQ(block.dimension(), 4u);
  Element y(4, Integer(0));
  y[0] = 1;
  y[1] = 1;
  y[2] = 1;  // 1 + t_1 + t_2: Chern-obstructed
  EXPECT_EQ(in_cone(block, y), Truth::no);
  Element l12(4, Integer(1));  // L_1 (x) L_2
  EXPECT_EQ(in_cone(block, l12), Truth::unknown);
  EXPECT_EQ(state_eval(block, y), make_rational(1, 2));
}

TEST(Ordered, NumericalSemigroup) {
  const ConcreteSemigroup s{1, {{Integer(2)}, {Integer(3)}}};
  for (long x = -2; x <= 12; ++x) {
    const bool expect = x == 0 || x >= 2;
    EXPECT_EQ(contains(s, {Integer(x)}), expect) << x;
  }
  const Envelope env = grothendieck_envelope(s, {Integer(1)}, {Rational(1)});
  EXPECT_EQ(in_cone(env.group, {Integer(1)}), Truth::no);
  EXPECT_EQ(in_cone(env.group, {Integer(5)}), Truth::yes);
  EXPECT_TRUE(algebraic_leq(s, {Integer(2)}, {Integer(4)}));
  EXPECT_FALSE(algebraic_leq(s, {Integer(2)}, {Integer(3)}));
}

TEST(Ordered, FreeSemigroupEnvelope) {
  const ConcreteSemigroup s{2, {{Integer(1), Integer(0)}, {Integer(0), Integer(1)}}};
  const Envelope env = grothendieck_envelope(s, {Integer(1), Integer(1)}, {Rational(1), Rational(1)});
  EXPECT_EQ(in_cone(env.group, el(2, 3)), Truth::yes);
  EXPECT_EQ(in_cone(env.group, el(-1, 3)), Truth::no);
}

TEST(Ordered, GrothendieckTransfer) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + rng() % 3;
    ConcreteSemigroup s{d, {}};
    const int gens = 1 + static_cast<int>(rng() % 4);
    for (int g = 0; g < gens; ++g) s.generators.push_back(random_element(rng, d, 0, 3));
    Element unit(d, Integer(1));
    std::vector<Rational> w(d);
    for (auto& v : w) v = Rational(oracle::random_integer(rng, 1, 3));
    const Envelope env = grothendieck_envelope(s, unit, w);

    // membership against the DP oracle, and the homomorphism law
    std::vector<Element> members;
    for (int k = 0; k < 12; ++k) {
      const Element x = random_element(rng, d, 0, 6);
      EXPECT_EQ(contains(s, x), oracle::semigroup_contains(s.generators, x));
      if (contains(s, x)) members.push_back(x);
    }
    for (const auto& x : members) {
      for (const auto& y : members) {
        EXPECT_EQ(env.iota(x) + env.iota(y), env.iota(x + y));
        EXPECT_TRUE(contains(s, x + y));
        EXPECT_EQ(algebraic_leq(s, x, y), leq(env.group, env.iota(x), env.iota(y)) == Truth::yes);
      }
    }
    std::vector<Pair> pairs, images;
    for (const auto& x : members) {
      for (const auto& y : members) {
        pairs.emplace_back(x, y);
        images.emplace_back(env.iota(x), env.iota(y));
      }
    }
    for (const Rational r : {Rational(0), make_rational(1, 3), Rational(1)}) {
      EXPECT_EQ(check_semigroup_strict_comparison(s, unit, w, r, pairs).holds,
                check_r_strict_comparison(env.group, r, images).holds);
    }
  }
}

TEST(Ordered, ProductCone) {
  ProductCone pc{{sphere(1, 1), sphere(2, 2)}, {make_rational(1, 2), make_rational(1, 2)}};
  const OrderedGroupModel model(pc);
  EXPECT_EQ(model.dimension(), 4u);
  EXPECT_EQ(state_eval(model, model.unit()), 1);
  EXPECT_EQ(in_cone(model, {Integer(1), Integer(5), Integer(0), Integer(0)}), Truth::yes);
  EXPECT_EQ(in_cone(model, {Integer(1), Integer(5), Integer(1), Integer(1)}), Truth::no);
  EXPECT_THROW(OrderedGroupModel(ProductCone{{sphere(1, 1)}, {make_rational(1, 2)}}), PreconditionError);
}
