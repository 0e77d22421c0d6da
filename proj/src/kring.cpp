#include "ahcert/kring.hpp"

#include <algorithm>
#include <sstream>

namespace ahcert::kring {

namespace {

void check_factors(int n) {
  if (n < 0 || n > kMaxBitFactors) {
    throw PreconditionError("factor count " + std::to_string(n) + " outside [0, " +
                            std::to_string(kMaxBitFactors) + "]");
  }
}

Subset all_coordinates(int n) { return n == 0 ? 0 : (~Subset{0} >> (64 - n)); }

template <class Tag>
void require_same_factors(const SubsetPolynomial<Tag>& a, const SubsetPolynomial<Tag>& b) {
  if (a.factors() != b.factors()) {
    throw DimensionMismatch("operands over " + std::to_string(a.factors()) + " and " +
                            std::to_string(b.factors()) + " factors");
  }
}

}  // namespace

template <class Tag>
SubsetPolynomial<Tag>::SubsetPolynomial(int factors) : factors_(factors) {
  check_factors(factors);
}

template <class Tag>
Integer SubsetPolynomial<Tag>::coeff(Subset s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Integer(0) : it->second;
}

template <class Tag>
Subset SubsetPolynomial<Tag>::support() const {
  Subset u = 0;
  for (const auto& [s, c] : terms_) u |= s;
  return u;
}

template <class Tag>
SubsetPolynomial<Tag>& SubsetPolynomial<Tag>::add_term(Subset s, const Integer& c) {
  if ((s & ~all_coordinates(factors_)) != 0) {
    throw PreconditionError("monomial uses a coordinate beyond factor count " +
                            std::to_string(factors_));
  }
  if (c == 0) return *this;
  auto [it, inserted] = terms_.try_emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

template <class Tag>
SubsetPolynomial<Tag>& SubsetPolynomial<Tag>::operator+=(const SubsetPolynomial& o) {
  require_same_factors(*this, o);
  for (const auto& [s, c] : o.terms_) add_term(s, c);
  return *this;
}

template <class Tag>
SubsetPolynomial<Tag>& SubsetPolynomial<Tag>::operator-=(const SubsetPolynomial& o) {
  require_same_factors(*this, o);
  for (const auto& [s, c] : o.terms_) add_term(s, -c);
  return *this;
}

template <class Tag>
SubsetPolynomial<Tag> operator-(const SubsetPolynomial<Tag>& a) {
  SubsetPolynomial<Tag> r(a.factors());
  for (const auto& [s, c] : a.terms()) r.add_term(s, -c);
  return r;
}

template <class Tag>
SubsetPolynomial<Tag> operator*(const Integer& k, const SubsetPolynomial<Tag>& a) {
  SubsetPolynomial<Tag> r(a.factors());
  if (k == 0) return r;
  for (const auto& [s, c] : a.terms()) r.add_term(s, k * c);
  return r;
}

template <class Tag>
SubsetPolynomial<Tag> operator*(const SubsetPolynomial<Tag>& a, const SubsetPolynomial<Tag>& b) {
  require_same_factors(a, b);
  SubsetPolynomial<Tag> r(a.factors());
  for (const auto& [s, x] : a.terms()) {
    for (const auto& [t, y] : b.terms()) {
      if ((s & t) == 0) r.add_term(s | t, x * y);
    }
  }
  return r;
}

template class SubsetPolynomial<KTag>;
template class SubsetPolynomial<CohTag>;
template KClass operator-(const KClass&);
template CohClass operator-(const CohClass&);
template KClass operator*(const Integer&, const KClass&);
template CohClass operator*(const Integer&, const CohClass&);
template KClass operator*(const KClass&, const KClass&);
template CohClass operator*(const CohClass&, const CohClass&);

KClass kclass_mul(const KClass& a, const KClass& b) { return a * b; }

Subset subset_of(std::initializer_list<int> coords) {
  Subset s = 0;
  for (int i : coords) {
    if (i < 1 || i > kMaxBitFactors) throw PreconditionError("coordinate out of range");
    s |= Subset{1} << (i - 1);
  }
  return s;
}

std::string render_monomial(Subset s, char var) {
  if (s == 0) return "1";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < 64; ++i) {
    if ((s >> i) & 1U) {
      if (!first) os << '*';
      os << var << (i + 1);
      first = false;
    }
  }
  return os.str();
}

KClass trivial(int n, const Integer& r) {
  KClass a(n);
  a.add_term(0, r);
  return a;
}

KClass bott(int n, int i) {
  if (i < 1 || i > n) throw PreconditionError("Bott index out of range");
  KClass a(n);
  a.add_term(Subset{1} << (i - 1), 1);
  return a;
}

KClass line_bundle(int n, Subset s) {
  KClass a(n);
  if ((s & ~all_coordinates(n)) != 0) throw PreconditionError("line bundle outside factor range");
  // prod_{i in S}(1 + t_i) = sum_{T subset S} t_T
  for (Subset t = s;; t = (t - 1) & s) {
    a.add_term(t, 1);
    if (t == 0) break;
  }
  return a;
}

KClass line_sum(int n, int m, const Integer& r) {
  if (m < 0 || m > n) throw PreconditionError("line sum count outside [0, n]");
  KClass a = trivial(n, r + m);
  for (int i = 1; i <= m; ++i) a.add_term(Subset{1} << (i - 1), 1);
  return a;
}

Integer rank(const KClass& a) { return a.coeff(0); }

int effective_factor_count(const KClass& a) { return subset_size(a.support()); }

std::map<Subset, Integer> line_basis_decompose(const KClass& a) {
  // alpha_S = sum_{T superset S} (-1)^{|T \ S|} a_T
  std::map<Subset, Integer> alpha;
  for (const auto& [t, c] : a.terms()) {
    const int tsize = subset_size(t);
    for (Subset s = t;; s = (s - 1) & t) {
      const bool odd = ((tsize - subset_size(s)) & 1) != 0;
      auto& slot = alpha[s];
      slot += odd ? Integer(-c) : c;
      if (s == 0) break;
    }
  }
  std::erase_if(alpha, [](const auto& kv) { return kv.second == 0; });
  return alpha;
}

namespace {

// Scatter the low k bits of `local` onto the coordinates listed in `coords`.
Subset scatter(Subset local, const std::vector<int>& coords) {
  Subset out = 0;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if ((local >> j) & 1U) out |= Subset{1} << coords[j];
  }
  return out;
}

Subset gather(Subset global, const std::vector<int>& coords) {
  Subset out = 0;
  for (std::size_t j = 0; j < coords.size(); ++j) {
    if ((global >> coords[j]) & 1U) out |= Subset{1} << j;
  }
  return out;
}

}  // namespace

CohClass total_chern(const KClass& a) {
  // The empty monomial (rank) does not enter the Chern class.
  const Subset supp = a.support();
  std::vector<int> coords;
  for (int i = 0; i < a.factors(); ++i) {
    if ((supp >> i) & 1U) coords.push_back(i);
  }
  const int k = static_cast<int>(coords.size());
  if (k > 30) throw UnsupportedVariant("dense Chern computation over more than 30 coordinates");
  const std::size_t size = std::size_t{1} << k;

  // log c(a) in local coordinates.
  std::vector<Integer> log_c(size);
  for (const auto& [s, c] : a.terms()) {
    if (s == 0) continue;
    const int sz = subset_size(s);
    Integer w = factorial(static_cast<unsigned long>(sz - 1)) * c;
    if (sz % 2 == 0) w = -w;
    log_c[gather(s, coords)] = w;
  }

  // exp over set partitions: f(U) = sum_{B subset U, min(U) in B} log_c[B] f(U \ B).
  std::vector<Integer> f(size);
  f[0] = 1;
  for (std::size_t u = 1; u < size; ++u) {
    const std::size_t low = u & (~u + 1);
    const std::size_t rest = u ^ low;
    Integer acc = 0;
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t block = sub | low;
      if (log_c[block] != 0 && f[u ^ block] != 0) acc += log_c[block] * f[u ^ block];
      if (sub == 0) break;
    }
    f[u] = acc;
  }

  CohClass c(a.factors());
  for (std::size_t u = 0; u < size; ++u) {
    if (f[u] != 0) c.add_term(scatter(u, coords), f[u]);
  }
  return c;
}

TopChern top_chern(const CohClass& c) {
  TopChern top;
  for (const auto& [s, x] : c.terms()) {
    const int d = subset_size(s);
    if (d > top.degree || (d == top.degree && top.coefficient == 0)) {
      top.degree = d;
      top.monomial = s;
      top.coefficient = x;
    }
  }
  return top;
}

KClass pullback_coord_projection(const KClass& a, int target_n, std::span<const int> embedding) {
  if (static_cast<int>(embedding.size()) != a.factors()) {
    throw PreconditionError("embedding length differs from source factor count");
  }
  check_factors(target_n);
  Subset used = 0;
  for (int j : embedding) {
    if (j < 0 || j >= target_n) throw PreconditionError("embedding index out of range");
    const Subset bit = Subset{1} << j;
    if (used & bit) throw PreconditionError("embedding is not injective");
    used |= bit;
  }
  KClass r(target_n);
  for (const auto& [s, c] : a.terms()) {
    Subset image = 0;
    for (int i = 0; i < a.factors(); ++i) {
      if ((s >> i) & 1U) image |= Subset{1} << embedding[i];
    }
    r.add_term(image, c);
  }
  return r;
}

// ---------------------------------------------------------------------------

SymKClass SymKClass::zero(std::size_t n) { return SymKClass{n, std::vector<Integer>(n + 1)}; }

SymKClass sym_mul(const SymKClass& a, const SymKClass& b) {
  if (a.n != b.n) throw DimensionMismatch("symmetric operands over different factor counts");
  SymKClass r = SymKClass::zero(a.n);
  // A size-k monomial splits as an ordered pair of disjoint size-i and
  // size-(k-i) monomials in C(k, i) ways.
  for (std::size_t k = 0; k <= a.n; ++k) {
    Integer acc = 0;
    for (std::size_t i = 0; i <= k; ++i) {
      if (a.by_size[i] == 0 || b.by_size[k - i] == 0) continue;
      acc += binomial(Integer(static_cast<unsigned long>(k)), i) * a.by_size[i] * b.by_size[k - i];
    }
    r.by_size[k] = acc;
  }
  return r;
}

KClass expand(const SymKClass& s) {
  if (s.by_size.size() != s.n + 1) throw PreconditionError("malformed symmetric class");
  const int n = static_cast<int>(s.n);
  check_factors(n);
  if (n > 30) throw UnsupportedVariant("symmetric expansion beyond 30 factors");
  KClass a(n);
  for (Subset m = 0; m < (Subset{1} << n); ++m) a.add_term(m, s.by_size[subset_size(m)]);
  return a;
}

std::optional<SymKClass> compress(const KClass& a) {
  const int n = a.factors();
  if (n > 30) throw UnsupportedVariant("symmetric compression beyond 30 factors");
  SymKClass s = SymKClass::zero(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (Subset m = 0; m < (Subset{1} << n); ++m) {
    const int k = subset_size(m);
    const Integer c = a.coeff(m);
    if (!seen[k]) {
      s.by_size[k] = c;
      seen[k] = true;
    } else if (s.by_size[k] != c) {
      return std::nullopt;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<Integer> constant_value(const KClass& a) {
  if (a.support() != 0) return std::nullopt;
  return a.coeff(0);
}

int small_count(const Integer& m, const char* what) {
  if (m < 0 || m > kMaxBitFactors) {
    throw UnsupportedVariant(std::string(what) + ": line sum over " + m.get_str() +
                             " factors has no dense form");
  }
  return static_cast<int>(m.get_si());
}

}  // namespace

Integer rank(const StructuredClass& a) {
  return std::visit(
      [](const auto& x) -> Integer {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, KClass>) {
          return rank(x);
        } else {
          return x.count + x.offset;
        }
      },
      a);
}

bool is_zero(const StructuredClass& a) {
  if (const auto* k = std::get_if<KClass>(&a)) return k->is_zero();
  const auto& l = std::get<LineSum>(a);
  return l.count == 0 && l.offset == 0;
}

Integer max_coordinate(const StructuredClass& a) {
  if (const auto* k = std::get_if<KClass>(&a)) {
    const Subset s = k->support();
    return s == 0 ? 0 : 64 - __builtin_clzll(s);
  }
  return std::get<LineSum>(a).count;
}

KClass expand(const StructuredClass& a, int n) {
  if (const auto* k = std::get_if<KClass>(&a)) {
    if (k->factors() == n) return *k;
    if (k->support() != 0 && max_coordinate(a) > n) {
      throw DimensionMismatch("class does not fit into the requested factor count");
    }
    KClass r(n);
    for (const auto& [s, c] : k->terms()) r.add_term(s, c);
    return r;
  }
  const auto& l = std::get<LineSum>(a);
  const int m = small_count(l.count, "expand");
  if (m > n) throw DimensionMismatch("line sum does not fit into the requested factor count");
  return line_sum(n, m, l.offset);
}

Integer chern_of_structured(const StructuredClass& a) {
  const auto* l = std::get_if<LineSum>(&a);
  if (l == nullptr) throw UnsupportedVariant("closed-form Chern degree needs a LineSum");
  return l->count;
}

StructuredClass add(const StructuredClass& a, const StructuredClass& b) {
  const auto* ka = std::get_if<KClass>(&a);
  const auto* kb = std::get_if<KClass>(&b);
  if (ka && kb) return *ka + *kb;
  if (!ka && !kb) {
    const auto& la = std::get<LineSum>(a);
    const auto& lb = std::get<LineSum>(b);
    if (la.count == 0) return LineSum{lb.count, lb.offset + la.offset};
    if (lb.count == 0) return LineSum{la.count, la.offset + lb.offset};
    const int n = small_count(std::max(la.count, lb.count), "add");
    return expand(a, n) + expand(b, n);
  }
  const KClass& dense = ka ? *ka : *kb;
  const LineSum& ls = ka ? std::get<LineSum>(b) : std::get<LineSum>(a);
  if (auto r = constant_value(dense)) return LineSum{ls.count, ls.offset + *r};
  if (ls.count <= dense.factors()) return expand(ls, dense.factors()) + dense;
  throw UnsupportedVariant("sum of a dense class and a line sum wider than it");
}

StructuredClass scale(const Integer& k, const StructuredClass& a) {
  if (const auto* d = std::get_if<KClass>(&a)) return k * *d;
  const auto& l = std::get<LineSum>(a);
  if (k == 0 || l.count == 0) return LineSum{0, k * (l.count + l.offset)};
  if (k == 1) return l;
  // k(r + sum [L_i]) is not a line sum over the same coordinates.
  const int n = small_count(l.count, "scale");
  return k * expand(a, n);
}

StructuredClass subtract(const StructuredClass& a, const StructuredClass& b) {
  if (const auto* kb = std::get_if<KClass>(&b)) return add(a, -*kb);
  const auto& lb = std::get<LineSum>(b);
  if (lb.count == 0) return add(a, LineSum{0, -lb.offset});
  const int n = small_count(std::max(max_coordinate(a), lb.count), "subtract");
  return add(a, -expand(b, n));
}

std::string describe(const StructuredClass& a) {
  if (const auto* l = std::get_if<LineSum>(&a)) {
    return "LineSum{count=" + l->count.get_str() + ", offset=" + l->offset.get_str() + "}";
  }
  const auto& k = std::get<KClass>(a);
  if (k.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : k.terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const Integer mag = c < 0 ? Integer(-c) : c;
    if (s == 0) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << "*";
      os << render_monomial(s, 't');
    }
  }
  return os.str();
}

}  // namespace ahcert::kring
