#include "ahcert/ordered.hpp"

#include <algorithm>
#include <sstream>

#include "ahcert/kring.hpp"
#include "ahcert/positivity.hpp"

namespace ahcert::ordered {

std::string to_string(Truth t) {
  switch (t) {
    case Truth::yes:
      return "yes";
    case Truth::no:
      return "no";
    case Truth::unknown:
      return "unknown";
  }
  return "unknown";
}

std::string format_element(const Element& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i].get_str();
  os << ')';
  return os.str();
}

Element operator+(const Element& a, const Element& b) {
  if (a.size() != b.size()) throw DimensionMismatch("element sizes differ");
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Element operator-(const Element& a, const Element& b) {
  if (a.size() != b.size()) throw DimensionMismatch("element sizes differ");
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Element operator*(const Integer& k, const Element& a) {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
  return r;
}

// ---------------------------------------------------------------------------

OrderedGroupModel::OrderedGroupModel(SphereEven s) : v_(std::move(s)) {
  const auto& se = std::get<SphereEven>(v_);
  if (se.m < 0) throw PreconditionError("negative sphere half-dimension");
  if (se.unit.size() != 2 || se.unit[1] != 0 || se.unit[0] <= 0) {
    throw PreconditionError("SphereEven unit must be (R, 0) with R >= 1");
  }
}

OrderedGroupModel::OrderedGroupModel(FreeWithOracle f) : v_(std::move(f)) {
  const auto& fo = std::get<FreeWithOracle>(v_);
  if (!fo.in_cone) throw PreconditionError("free model without a cone oracle");
  if (fo.unit.size() != fo.d) throw PreconditionError("unit has the wrong length");
  if (fo.state_functional && fo.state_functional->size() != fo.d) {
    throw PreconditionError("state functional has the wrong length");
  }
}

OrderedGroupModel::OrderedGroupModel(ProductCone p) : v_(std::move(p)) {
  const auto& pc = std::get<ProductCone>(v_);
  if (pc.factors.empty()) throw PreconditionError("empty product");
  if (!pc.state_weights.empty()) {
    if (pc.state_weights.size() != pc.factors.size()) {
      throw PreconditionError("one state weight per factor expected");
    }
    Rational total = 0;
    for (const auto& w : pc.state_weights) {
      if (w < 0) throw PreconditionError("negative state weight");
      total += w;
    }
    if (total != 1) throw PreconditionError("state weights must sum to 1");
  }
}

std::size_t OrderedGroupModel::dimension() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SphereEven>) {
          return 2;
        } else if constexpr (std::is_same_v<T, FreeWithOracle>) {
          return m.d;
        } else {
          std::size_t d = 0;
          for (const auto& f : m.factors) d += f.dimension();
          return d;
        }
      },
      v_);
}

Element OrderedGroupModel::unit() const {
  return std::visit(
      [](const auto& m) -> Element {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ProductCone>) {
          Element u;
          for (const auto& f : m.factors) {
            const Element fu = f.unit();
            u.insert(u.end(), fu.begin(), fu.end());
          }
          return u;
        } else {
          return m.unit;
        }
      },
      v_);
}

bool sphere_even_cone(const Integer& m, const Element& x) {
  if (x.size() != 2) throw DimensionMismatch("SphereEven elements live in Z^2");
  return (x[1] == 0 && x[0] >= 0) || x[0] >= m;
}

namespace {

void check_size(const OrderedGroupModel& model, const Element& x) {
  if (x.size() != model.dimension()) {
    throw DimensionMismatch("element of length " + std::to_string(x.size()) +
                            " in a model of rank " + std::to_string(model.dimension()));
  }
}

Truth conjunction(Truth a, Truth b) {
  if (a == Truth::no || b == Truth::no) return Truth::no;
  if (a == Truth::unknown || b == Truth::unknown) return Truth::unknown;
  return Truth::yes;
}

}  // namespace

Truth in_cone(const OrderedGroupModel& model, const Element& x) {
  check_size(model, x);
  return std::visit(
      [&x](const auto& m) -> Truth {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SphereEven>) {
          return sphere_even_cone(m.m, x) ? Truth::yes : Truth::no;
        } else if constexpr (std::is_same_v<T, FreeWithOracle>) {
          return m.in_cone(x);
        } else {
          Truth t = Truth::yes;
          std::size_t offset = 0;
          for (const auto& f : m.factors) {
            const std::size_t d = f.dimension();
            Element part(x.begin() + static_cast<std::ptrdiff_t>(offset),
                         x.begin() + static_cast<std::ptrdiff_t>(offset + d));
            t = conjunction(t, in_cone(f, part));
            offset += d;
          }
          return t;
        }
      },
      model.variant());
}

Truth leq(const OrderedGroupModel& model, const Element& x, const Element& y) {
  return in_cone(model, y - x);
}

bool has_state(const OrderedGroupModel& model) {
  return std::visit(
      [](const auto& m) -> bool {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SphereEven>) {
          return true;
        } else if constexpr (std::is_same_v<T, FreeWithOracle>) {
          return m.state_functional.has_value();
        } else {
          if (m.state_weights.empty()) return false;
          return std::all_of(m.factors.begin(), m.factors.end(),
                             [](const auto& f) { return has_state(f); });
        }
      },
      model.variant());
}

Rational state_eval(const OrderedGroupModel& model, const Element& x) {
  check_size(model, x);
  return std::visit(
      [&x](const auto& m) -> Rational {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SphereEven>) {
          // geometric state: rank over rank of the unit
          return make_rational(x[0], m.unit[0]);
        } else if constexpr (std::is_same_v<T, FreeWithOracle>) {
          if (!m.state_functional) throw PreconditionError("model has no designated state");
          Rational s = 0;
          for (std::size_t i = 0; i < m.d; ++i) s += (*m.state_functional)[i] * x[i];
          return s;
        } else {
          if (m.state_weights.empty()) throw PreconditionError("product without state weights");
          Rational s = 0;
          std::size_t offset = 0;
          for (std::size_t i = 0; i < m.factors.size(); ++i) {
            const std::size_t d = m.factors[i].dimension();
            Element part(x.begin() + static_cast<std::ptrdiff_t>(offset),
                         x.begin() + static_cast<std::ptrdiff_t>(offset + d));
            s += m.state_weights[i] * state_eval(m.factors[i], part);
            offset += d;
          }
          return s;
        }
      },
      model.variant());
}

OrderedGroupModel sphere_product_block(int n_factors, const Integer& unit_rank) {
  if (n_factors < 0 || n_factors > 20) throw PreconditionError("sphere block factor count outside [0, 20]");
  if (unit_rank < 1) throw PreconditionError("unit rank must be positive");
  FreeWithOracle f;
  f.d = std::size_t{1} << n_factors;
  f.in_cone = [n_factors](const Element& x) {
    kring::KClass a(n_factors);
    for (std::size_t s = 0; s < x.size(); ++s) a.add_term(s, x[s]);
    switch (positivity::decide_positive(a, n_factors).value) {
      case positivity::Sign::positive:
        return Truth::yes;
      case positivity::Sign::not_positive:
        return Truth::no;
      case positivity::Sign::unknown:
        return Truth::unknown;
    }
    return Truth::unknown;
  };
  f.unit.assign(f.d, 0);
  f.unit[0] = unit_rank;
  std::vector<Rational> functional(f.d, Rational(0));
  functional[0] = make_rational(1, unit_rank);
  f.state_functional = functional;
  f.rank_coordinate = 0;
  f.stable_threshold = n_factors;
  f.name = "sphere_product_block";
  return OrderedGroupModel(std::move(f));
}

// ---------------------------------------------------------------------------

StateBounds state_bounds_infsup(const OrderedGroupModel& model, const Element& x,
                                const Integer& search_bound) {
  if (in_cone(model, x) != Truth::yes) {
    throw PreconditionError("state brackets need an element certified in the cone");
  }
  if (search_bound < 1) throw PreconditionError("search bound must be positive");
  const Element u = model.unit();
  StateBounds b;
  b.lo = 0;
  for (Integer n = 1; n <= search_bound; ++n) {
    const Element nx = n * x;
    for (Integer l = 0; l <= n * search_bound; ++l) {
      if (leq(model, nx, l * u) == Truth::yes) {
        const Rational cand = make_rational(l, n);
        if (!b.hi || cand < *b.hi) b.hi = cand;
        break;
      }
    }
  }
  for (Integer m = 1; m <= search_bound; ++m) {
    const Element mx = m * x;
    for (Integer k = m * search_bound; k >= 0; --k) {
      if (leq(model, k * u, mx) == Truth::yes) {
        const Rational cand = make_rational(k, m);
        if (cand > b.lo) b.lo = cand;
        break;
      }
    }
  }
  return b;
}

ComparisonReport check_r_strict_comparison(const OrderedGroupModel& model, const Rational& r,
                                           std::span<const Pair> pairs) {
  ComparisonReport rep;
  for (const auto& [x, y] : pairs) {
    if (!(state_eval(model, x) + r < state_eval(model, y))) {
      ++rep.vacuous;
      continue;
    }
    ++rep.applicable;
    switch (leq(model, x, y)) {
      case Truth::yes:
        break;
      case Truth::no:
        rep.holds = false;
        if (!rep.failure) rep.failure = Pair{x, y};
        break;
      case Truth::unknown:
        rep.unknown.emplace_back(x, y);
        break;
    }
  }
  return rep;
}

std::string to_string(InterpolationResult::Kind k) {
  switch (k) {
    case InterpolationResult::Kind::interpolant:
      return "interpolant";
    case InterpolationResult::Kind::no_interpolant:
      return "no_interpolant";
    case InterpolationResult::Kind::inconclusive:
      return "inconclusive";
    case InterpolationResult::Kind::not_applicable:
      return "not_applicable";
  }
  return "not_applicable";
}

namespace {

std::optional<std::size_t> rank_coordinate(const OrderedGroupModel& model) {
  if (std::holds_alternative<SphereEven>(model.variant())) return 0;
  if (const auto* f = std::get_if<FreeWithOracle>(&model.variant())) return f->rank_coordinate;
  return std::nullopt;
}

std::optional<Integer> stable_threshold(const OrderedGroupModel& model) {
  if (const auto* s = std::get_if<SphereEven>(&model.variant())) return s->m;
  if (const auto* f = std::get_if<FreeWithOracle>(&model.variant())) return f->stable_threshold;
  return std::nullopt;
}

// Truth of x_i <= z <= y_j for all i, j.
Truth interpolates(const OrderedGroupModel& model, const Quadruple& q, const Element& z) {
  Truth t = Truth::yes;
  for (const Element* x : {&q.x1, &q.x2}) {
    t = conjunction(t, leq(model, *x, z));
    if (t == Truth::no) return t;
  }
  for (const Element* y : {&q.y1, &q.y2}) {
    t = conjunction(t, leq(model, z, *y));
    if (t == Truth::no) return t;
  }
  return t;
}

}  // namespace

InterpolationResult check_r_interpolation(const OrderedGroupModel& model, const Rational& r,
                                          const Quadruple& q, const Integer& box) {
  InterpolationResult res;
  res.box = box;
  const std::size_t d = model.dimension();
  for (const Element* e : {&q.x1, &q.x2, &q.y1, &q.y2}) check_size(model, *e);
  for (const Element* x : {&q.x1, &q.x2}) {
    for (const Element* y : {&q.y1, &q.y2}) {
      if (leq(model, *x, *y) != Truth::yes) {
        res.reason = "x_i <= y_j not certified for " + format_element(*x) + ", " + format_element(*y);
        return res;
      }
      if (!(state_eval(model, *x) + r < state_eval(model, *y))) {
        res.reason = "state gap at most r for " + format_element(*x) + ", " + format_element(*y);
        return res;
      }
    }
  }

  bool saw_unknown = false;
  auto try_candidate = [&](const Element& z) {
    ++res.candidates;
    const Truth t = interpolates(model, q, z);
    if (t == Truth::yes) {
      res.kind = InterpolationResult::Kind::interpolant;
      res.z = z;
      return true;
    }
    if (t == Truth::unknown) saw_unknown = true;
    return false;
  };

  const auto rc = rank_coordinate(model);
  const auto threshold = stable_threshold(model);
  if (rc && threshold) {
    Element z(d, Integer(0));
    z[*rc] = std::max(q.x1[*rc], q.x2[*rc]) + *threshold;
    if (try_candidate(z)) return res;
  }

  if (box < 0) throw PreconditionError("negative search box");
  const Integer side = 2 * box + 1;
  Integer total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= side;
  if (total > 10'000'000) throw PreconditionError("interpolation search box too large");

  Element z(d, Integer(-box));
  for (Integer idx = 0; idx < total; ++idx) {
    if (try_candidate(z)) return res;
    for (std::size_t i = 0; i < d; ++i) {
      if (z[i] < box) {
        ++z[i];
        break;
      }
      z[i] = -box;
    }
  }
  res.kind = saw_unknown ? InterpolationResult::Kind::inconclusive
                         : InterpolationResult::Kind::no_interpolant;
  res.reason = saw_unknown ? "some candidates undecided" : "no z in the box interpolates";
  return res;
}

CancellationReport check_r_cancellation(const OrderedGroupModel& model, const Rational& r,
                                        std::span<const Pair> pairs) {
  CancellationReport rep;
  const auto rc = rank_coordinate(model);
  const auto threshold = stable_threshold(model);
  for (const auto& [p, q] : pairs) {
    if (p != q || in_cone(model, p) != Truth::yes || !(state_eval(model, p) > r)) {
      ++rep.vacuous;
      continue;
    }
    if (rc && threshold && p[*rc] >= *threshold) {
      rep.certified.emplace_back(p, q);
    } else {
      rep.inconclusive.emplace_back(p, q);
    }
  }
  return rep;
}

CancellationReport check_r_fcq(const OrderedGroupModel& model, const Rational& r,
                               std::span<const Pair> pairs) {
  CancellationReport rep;
  for (const auto& [p, q] : pairs) {
    if (in_cone(model, p) != Truth::yes || in_cone(model, q) != Truth::yes ||
        !(state_eval(model, p) + r < state_eval(model, q))) {
      ++rep.vacuous;
      continue;
    }
    switch (leq(model, p, q)) {
      case Truth::yes:
        rep.certified.emplace_back(p, q);
        break;
      case Truth::no:
        rep.holds = false;
        if (!rep.failure) rep.failure = Pair{p, q};
        break;
      case Truth::unknown:
        rep.inconclusive.emplace_back(p, q);
        break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

bool is_zero_vector(const Element& g) {
  return std::all_of(g.begin(), g.end(), [](const Integer& v) { return v == 0; });
}

bool contains_from(const std::vector<const Element*>& gens, std::size_t idx, const Element& rest) {
  if (is_zero_vector(rest)) return true;
  if (idx == gens.size()) return false;
  const Element& g = *gens[idx];
  // largest multiple of g that still fits under `rest`
  Integer max_mult = -1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] > 0) {
      const Integer q = floor_div(rest[i], g[i]);
      if (max_mult < 0 || q < max_mult) max_mult = q;
    }
  }
  Element cur = rest;
  for (Integer k = 0; k <= max_mult; ++k) {
    if (contains_from(gens, idx + 1, cur)) return true;
    cur = cur - g;
  }
  return false;
}

std::vector<const Element*> nonzero_generators(const ConcreteSemigroup& s) {
  std::vector<const Element*> gens;
  for (const auto& g : s.generators) {
    if (g.size() != s.d) throw DimensionMismatch("generator of the wrong length");
    if (std::any_of(g.begin(), g.end(), [](const Integer& v) { return v < 0; })) {
      throw PreconditionError("generators must lie in N^d");
    }
    if (!is_zero_vector(g)) gens.push_back(&g);
  }
  return gens;
}

// Walk the N-combinations z of the generators with z <= bound componentwise.
bool enumerate_below(const std::vector<const Element*>& gens, std::size_t idx, const Element& z,
                     const Element& bound, const std::function<bool(const Element&)>& visit) {
  if (idx == gens.size()) return visit(z);
  Element cur = z;
  while (true) {
    if (enumerate_below(gens, idx + 1, cur, bound, visit)) return true;
    cur = cur + *gens[idx];
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] > bound[i]) return false;
    }
  }
}

Rational weighted_state(const std::vector<Rational>& w, const Element& unit, const Element& x) {
  Rational num = 0, den = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * x[i];
    den += w[i] * unit[i];
  }
  return num / den;
}

void check_weights(const ConcreteSemigroup& s, const Element& unit, const std::vector<Rational>& w) {
  if (w.size() != s.d || unit.size() != s.d) throw DimensionMismatch("weights/unit of the wrong length");
  for (const auto& v : w) {
    if (v <= 0) throw PreconditionError("state weights must be positive");
  }
  if (is_zero_vector(unit)) throw PreconditionError("zero unit");
}

}  // namespace

bool contains(const ConcreteSemigroup& s, const Element& x) {
  if (x.size() != s.d) throw DimensionMismatch("element of the wrong length");
  if (std::any_of(x.begin(), x.end(), [](const Integer& v) { return v < 0; })) return false;
  return contains_from(nonzero_generators(s), 0, x);
}

bool algebraic_leq(const ConcreteSemigroup& s, const Element& x, const Element& y) {
  if (x.size() != s.d || y.size() != s.d) throw DimensionMismatch("element of the wrong length");
  const auto gens = nonzero_generators(s);
  return enumerate_below(gens, 0, Element(s.d, Integer(0)), y,
                         [&](const Element& z) { return x + z == y; });
}

Envelope grothendieck_envelope(const ConcreteSemigroup& s, const Element& unit,
                               const std::vector<Rational>& state_weights) {
  check_weights(s, unit, state_weights);
  FreeWithOracle f;
  f.d = s.d;
  f.in_cone = [s](const Element& x) { return contains(s, x) ? Truth::yes : Truth::no; };
  f.unit = unit;
  Rational den = 0;
  for (std::size_t i = 0; i < s.d; ++i) den += state_weights[i] * unit[i];
  std::vector<Rational> functional(s.d);
  for (std::size_t i = 0; i < s.d; ++i) functional[i] = state_weights[i] / den;
  f.state_functional = functional;
  f.name = "grothendieck_envelope";
  return Envelope{OrderedGroupModel(std::move(f)), [](const Element& x) { return x; }};
}

ComparisonReport check_semigroup_strict_comparison(const ConcreteSemigroup& s, const Element& unit,
                                                   const std::vector<Rational>& state_weights,
                                                   const Rational& r, std::span<const Pair> pairs) {
  check_weights(s, unit, state_weights);
  ComparisonReport rep;
  for (const auto& [x, y] : pairs) {
    if (!(weighted_state(state_weights, unit, x) + r < weighted_state(state_weights, unit, y))) {
      ++rep.vacuous;
      continue;
    }
    ++rep.applicable;
    if (!algebraic_leq(s, x, y)) {
      rep.holds = false;
      if (!rep.failure) rep.failure = Pair{x, y};
    }
  }
  return rep;
}

}  // namespace ahcert::ordered
