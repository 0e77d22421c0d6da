#include "ahcert/cuntz.hpp"

#include <algorithm>

namespace ahcert::cuntz {

void validate(const RegionPartition& p) {
  if (p.regions.empty()) throw PreconditionError("partition without regions");
  std::vector<std::string> sorted = p.regions;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("region labels must be unique");
  }
  if (p.marked_region) {
    if (*p.marked_region >= p.regions.size()) throw PreconditionError("marked region out of range");
    if (p.marked_half_dim < 0 || !(2 * p.marked_half_dim < p.ambient_dim)) {
      throw PreconditionError("marked sphere S^{2m} needs 0 <= 2m < ambient dimension");
    }
  }
}

void validate(const RegionPartition& p, const CuntzElementModel& e) {
  if (e.rank_per_region.size() != p.regions.size()) {
    throw DimensionMismatch("element ranks do not match the partition");
  }
  for (const auto& r : e.rank_per_region) {
    if (r < 0) throw PreconditionError("negative rank");
  }
  if (e.restriction_class) {
    if (!p.marked_region) throw PreconditionError("restriction class without a marked region");
    if (e.restriction_class->size() != 2) throw DimensionMismatch("restriction classes live in Z^2");
    if ((*e.restriction_class)[0] != e.rank_per_region[*p.marked_region]) {
      throw PreconditionError("restriction class rank differs from the marked-region rank");
    }
  }
}

MeasureModel MeasureModel::point_mass(std::size_t regions, std::size_t at) {
  MeasureModel mu{std::vector<Rational>(regions, Rational(0))};
  mu.weights.at(at) = 1;
  return mu;
}

Rational ldf_pairing(const RegionPartition& p, const CuntzElementModel& e, const MeasureModel& mu,
                     const Integer& unit_rank) {
  validate(p, e);
  if (mu.weights.size() != p.regions.size()) throw DimensionMismatch("measure does not match the partition");
  if (unit_rank < 1) throw PreconditionError("unit rank must be positive");
  Rational total = 0, mass = 0;
  for (std::size_t i = 0; i < mu.weights.size(); ++i) {
    if (mu.weights[i] < 0) throw PreconditionError("negative measure weight");
    mass += mu.weights[i];
    total += mu.weights[i] * e.rank_per_region[i];
  }
  if (mass != 1) throw PreconditionError("measure is not normalized");
  return total / unit_rank;
}

CuntzElementModel operator+(const CuntzElementModel& a, const CuntzElementModel& b) {
  if (a.rank_per_region.size() != b.rank_per_region.size()) throw DimensionMismatch("partition mismatch");
  CuntzElementModel r;
  r.rank_per_region.resize(a.rank_per_region.size());
  for (std::size_t i = 0; i < a.rank_per_region.size(); ++i) {
    r.rank_per_region[i] = a.rank_per_region[i] + b.rank_per_region[i];
  }
  if (a.restriction_class && b.restriction_class) {
    r.restriction_class = ordered::operator+(*a.restriction_class, *b.restriction_class);
  }
  return r;
}

CuntzElementModel operator*(const Integer& k, const CuntzElementModel& a) {
  if (k < 0) throw PreconditionError("negative multiple of a positive element");
  CuntzElementModel r = a;
  for (auto& x : r.rank_per_region) x *= k;
  if (r.restriction_class) r.restriction_class = ordered::operator*(k, *r.restriction_class);
  return r;
}

Truth cuntz_leq(const RegionPartition& p, const CuntzElementModel& x, const CuntzElementModel& y) {
  validate(p, x);
  validate(p, y);
  for (std::size_t i = 0; i < p.regions.size(); ++i) {
    if (x.rank_per_region[i] > y.rank_per_region[i]) return Truth::no;
  }
  if (!p.marked_region) return Truth::yes;
  const std::size_t mark = *p.marked_region;
  if (x.rank_per_region[mark] == 0) return Truth::yes;
  if (!x.restriction_class || !y.restriction_class) return Truth::unknown;
  const Element diff = ordered::operator-(*y.restriction_class, *x.restriction_class);
  return ordered::sphere_even_cone(p.marked_half_dim, diff) ? Truth::yes : Truth::no;
}

// ---------------------------------------------------------------------------

namespace {

RegionPartition three_regions(const Integer& ambient_dim, const Integer& m) {
  RegionPartition p{{"X\\V", "V\\Y", "Y"}, ambient_dim, std::size_t{2}, m};
  validate(p);
  return p;
}

}  // namespace

RcWitness rc_witness_build(const Integer& ambient_dim, const Integer& unit_rank) {
  if (ambient_dim < 1) throw PreconditionError("ambient dimension must be positive");
  if (unit_rank < 1) throw PreconditionError("unit rank must be positive");
  const Integer m = floor_div(ambient_dim - 1, 2);  // greatest m with 2m < n
  RcWitness w;
  w.partition = three_regions(ambient_dim, m);
  w.m = m;
  w.unit_rank = unit_rank;
  // a + v: v = g theta_n is full rank n off V and taken as 0 on V\Y (the
  // proof only uses rank(v) >= 0 there); a = f pi^*(xi_m) has rank m on V.
  w.a_plus_v.rank_per_region = {ambient_dim, m, m};
  w.a_plus_v.restriction_class = Element{m, m == 0 ? Integer(0) : Integer(1)};
  // b = f pi^*(theta_1), supported on O.
  w.b.rank_per_region = {0, 1, 1};
  w.b.restriction_class = Element{1, 0};
  w.degenerate = m <= 1;
  w.bound = w.degenerate ? Rational(0) : make_rational(m - 1, unit_rank);
  if (w.degenerate) w.note = "m <= 1: the bound is the trivial rc >= 0";
  return w;
}

RcVerification rc_witness_verify(const RcWitness& w) {
  validate(w.partition);
  if (!w.partition.marked_region) throw PreconditionError("malformed witness: no marked region");
  if (!w.a_plus_v.restriction_class || !w.b.restriction_class) {
    throw PreconditionError("malformed witness: missing restriction classes");
  }
  RcVerification v;
  v.gap_certificate = true;
  for (std::size_t i = 0; i < w.partition.regions.size(); ++i) {
    const auto mu = MeasureModel::point_mass(w.partition.regions.size(), i);
    const Rational gap = ldf_pairing(w.partition, w.a_plus_v, mu, w.unit_rank) -
                         ldf_pairing(w.partition, w.b, mu, w.unit_rank);
    v.gaps.push_back(gap);
    if (gap < w.bound) v.gap_certificate = false;
  }
  v.restriction_difference = ordered::operator-(*w.a_plus_v.restriction_class, *w.b.restriction_class);
  v.failure_certificate = !ordered::sphere_even_cone(w.partition.marked_half_dim, v.restriction_difference) &&
                          cuntz_leq(w.partition, w.b, w.a_plus_v) == Truth::no;
  v.verified = w.degenerate || (v.gap_certificate && v.failure_certificate);
  return v;
}

RcWitness witness_amplify(const RcWitness& w, const Integer& k) {
  if (k < 1) throw PreconditionError("amplification factor must be at least 1");
  RcWitness out = w;
  out.unit_rank = w.unit_rank * k;
  out.bound = w.bound / k;
  return out;
}

std::optional<Rational> certified_failure_radius(const RegionPartition& p,
                                                 const CuntzElementModel& x,
                                                 const CuntzElementModel& y,
                                                 const Integer& unit_rank) {
  if (cuntz_leq(p, x, y) != Truth::no) return std::nullopt;
  std::optional<Rational> least;
  for (std::size_t i = 0; i < p.regions.size(); ++i) {
    const auto mu = MeasureModel::point_mass(p.regions.size(), i);
    const Rational gap = ldf_pairing(p, y, mu, unit_rank) - ldf_pairing(p, x, mu, unit_rank);
    if (!least || gap < *least) least = gap;
  }
  return least;
}

CuntzComparisonReport check_r_comparison(const RegionPartition& p, const Integer& unit_rank,
                                         const Rational& r, std::span<const CuntzElementModel> elements,
                                         std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  CuntzComparisonReport rep;
  for (const auto& [i, j] : pairs) {
    const auto& x = elements[i];
    const auto& y = elements[j];
    // Pairings are affine in the measure, so the strict gap holds for every
    // measure iff it holds at every point mass.
    bool gap = true;
    for (std::size_t reg = 0; reg < p.regions.size() && gap; ++reg) {
      const auto mu = MeasureModel::point_mass(p.regions.size(), reg);
      gap = ldf_pairing(p, x, mu, unit_rank) + r < ldf_pairing(p, y, mu, unit_rank);
    }
    if (!gap) continue;
    switch (cuntz_leq(p, x, y)) {
      case Truth::yes:
        break;
      case Truth::no:
        rep.holds = false;
        if (!rep.failure) rep.failure = std::make_pair(i, j);
        break;
      case Truth::unknown:
        rep.unknown.emplace_back(i, j);
        break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

AupWitness almost_unperforation_witness(const Integer& ambient_dim, const Integer& unit_rank) {
  if (ambient_dim < 5) throw PreconditionError("almost-unperforation witness needs dimension >= 5");
  if (unit_rank < 1) throw PreconditionError("unit rank must be positive");
  AupWitness w;
  w.partition = three_regions(ambient_dim, 2);
  w.unit_rank = unit_rank;
  w.a.rank_per_region = {0, 2, 2};
  w.a.restriction_class = Element{2, 1};
  w.b.rank_per_region = {0, 1, 1};
  w.b.restriction_class = Element{1, 0};
  w.combined = ordered::operator-(ordered::operator*(w.n_mult, *w.a.restriction_class),
                                  ordered::operator*(w.m_mult, *w.b.restriction_class));
  w.difference = ordered::operator-(*w.a.restriction_class, *w.b.restriction_class);
  w.verified = ordered::sphere_even_cone(2, w.combined) && !ordered::sphere_even_cone(2, w.difference) &&
               cuntz_leq(w.partition, w.m_mult * w.b, w.n_mult * w.a) == Truth::yes &&
               cuntz_leq(w.partition, w.b, w.a) == Truth::no;
  return w;
}

std::optional<AupHit> almost_unperforated_check(const RegionPartition& p,
                                                std::span<const CuntzElementModel> elements,
                                                const Integer& max_mn) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < elements.size(); ++j) {
      if (cuntz_leq(p, elements[i], elements[j]) != Truth::no) continue;
      for (Integer m = 2; m <= max_mn; ++m) {
        for (Integer n = 1; n < m; ++n) {
          if (cuntz_leq(p, m * elements[i], n * elements[j]) == Truth::yes) {
            return AupHit{i, j, m, n};
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace ahcert::cuntz
