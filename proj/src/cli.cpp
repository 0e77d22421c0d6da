#include "ahcert/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "ahcert/ah.hpp"
#include "ahcert/cuntz.hpp"
#include "ahcert/ordered.hpp"
#include "ahcert/positivity.hpp"
#include "ahcert/villadsen.hpp"

namespace ahcert::cli {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

namespace {

// ---------------------------------------------------------------------------
// Rendering

json num(const Integer& z) { return format_rational(Rational(z)); }
json num(const Rational& q) { return format_rational(q); }
json num(std::size_t i) { return format_rational(Rational(Integer(static_cast<unsigned long>(i)))); }

json num_vector(const std::vector<Integer>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(num(x));
  return a;
}

json certificate_json(const positivity::Certificate& c) {
  using namespace positivity;
  json j = {{"kind", certificate_kind(c)}};
  std::visit(
      [&](const auto& cert) {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, ThresholdRule>) {
          j["rank"] = num(cert.rank);
          j["threshold"] = num(cert.threshold);
          j["genuine_subbundle"] = cert.genuine_subbundle;
        } else if constexpr (std::is_same_v<T, ChernObstruction>) {
          j["degree"] = num(cert.degree);
          j["rank"] = num(cert.rank);
          j["monomial"] = cert.monomial;
          j["coefficient"] = num(cert.coefficient);
        } else if constexpr (std::is_same_v<T, NegativeRank>) {
          j["rank"] = num(cert.rank);
        } else if constexpr (std::is_same_v<T, NoRuleFired>) {
          j["reason"] = cert.reason;
        }
      },
      c);
  return j;
}

json verdict_json(const positivity::Verdict& v) {
  return {{"value", positivity::to_string(v.value)}, {"certificate", certificate_json(v.certificate)}};
}

json space_json(const ah::Space& s) {
  if (const auto* sp = std::get_if<ah::SphereProduct>(&s)) return {{"sphere_product", num(sp->factors)}};
  return {{"cw", num(std::get<ah::AbstractCW>(s).dim)}};
}

json element_json(const ordered::Element& x) { return num_vector(x); }

json cuntz_element_json(const cuntz::CuntzElementModel& e) {
  json j = {{"rank_per_region", num_vector(e.rank_per_region)}};
  j["restriction_class"] = e.restriction_class ? element_json(*e.restriction_class) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Input reading with JSON-pointer locations

std::string escape_pointer_token(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') out += "~0";
    else if (ch == '/') out += "~1";
    else out += ch;
  }
  return out;
}

class Node {
 public:
  Node(const json& j, std::string ptr) : j_(&j), ptr_(std::move(ptr)) {}

  const std::string& pointer() const { return ptr_; }
  const json& raw() const { return *j_; }
  [[noreturn]] void fail(const std::string& msg) const { throw InputError(ptr_.empty() ? "/" : ptr_, msg); }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  Node at(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) throw InputError(ptr_ + "/" + escape_pointer_token(key), "missing field");
    return Node(*it, ptr_ + "/" + escape_pointer_token(key));
  }
  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }
  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }
  Node operator[](std::size_t i) const {
    return Node((*j_)[i], ptr_ + "/" + std::to_string(i));
  }

  Integer integer() const {
    if (j_->is_number_integer()) return Integer(j_->dump());
    if (j_->is_string()) {
      try {
        return parse_integer(j_->get<std::string>());
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    fail("expected an integer (JSON integer or decimal string)");
  }
  long small_integer(long lo, long hi) const {
    const Integer z = integer();
    if (z < lo || z > hi) fail("value out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return z.get_si();
  }
  Rational rational() const {
    if (!j_->is_string()) fail("expected an exact rational string \"p/q\"");
    try {
      return parse_rational(j_->get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected a boolean");
    return j_->get<bool>();
  }
  std::vector<Integer> integer_vector() const {
    std::vector<Integer> v;
    for (std::size_t i = 0; i < size(); ++i) v.push_back((*this)[i].integer());
    return v;
  }

 private:
  const json* j_;
  std::string ptr_;
};

Rational parse_flag_rational(const std::string& flag, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw InputError("argv:" + flag, e.what());
  }
}

// -- classes ----------------------------------------------------------------

kring::KClass read_dense(const Node& n, int factors) {
  kring::KClass a(factors);
  const Node terms = n.at("terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Node t = terms[i];
    const Node mono = t.at("monomial");
    kring::Subset s = 0;
    for (std::size_t k = 0; k < mono.size(); ++k) {
      const long c = mono[k].small_integer(1, factors);
      const kring::Subset bit = kring::Subset{1} << (c - 1);
      if (s & bit) mono[k].fail("repeated coordinate in a square-free monomial");
      s |= bit;
    }
    a.add_term(s, t.at("coefficient").integer());
  }
  return a;
}

/// {"line_sum": {"count", "offset"}} or {"dense": {"terms": [...]}}.
kring::StructuredClass read_class(const Node& n, const Integer& factors) {
  if (const auto ls = n.find("line_sum")) {
    kring::LineSum l{ls->at("count").integer(), ls->at("offset").integer()};
    if (l.count < 0) ls->at("count").fail("count must be non-negative");
    if (l.count > factors) ls->at("count").fail("count exceeds the factor count");
    return l;
  }
  if (const auto d = n.find("dense")) {
    if (factors > kring::kMaxBitFactors) {
      n.at("dense").fail("dense classes support at most " + std::to_string(kring::kMaxBitFactors) + " factors");
    }
    return read_dense(*d, static_cast<int>(factors.get_si()));
  }
  n.fail("class must have a \"line_sum\" or \"dense\" member");
}

// -- blocks and systems -------------------------------------------------------

ah::BuildingBlock read_block(const Node& n) {
  std::vector<ah::Summand> summands;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node s = n[i];
    const Node sp = s.at("space");
    ah::Space space;
    if (const auto f = sp.find("sphere_product")) {
      space = ah::SphereProduct{f->integer()};
      if (f->integer() < 0) f->fail("factor count must be non-negative");
    } else if (const auto c = sp.find("cw")) {
      space = ah::AbstractCW{c->integer()};
      if (c->integer() < 0) c->fail("dimension must be non-negative");
    } else {
      sp.fail("space must have a \"sphere_product\" or \"cw\" member");
    }
    const Node r = s.at("rank");
    if (r.integer() < 1) r.fail("rank must be at least 1");
    summands.push_back({space, r.integer()});
  }
  if (summands.empty()) n.fail("a building block needs at least one summand");
  return ah::BuildingBlock(std::move(summands));
}

std::size_t read_index(const Node& n, std::size_t count) {
  return static_cast<std::size_t>(n.small_integer(1, static_cast<long>(count))) - 1;
}

ah::BlockMap read_map(const Node& n, const ah::BuildingBlock& source, const ah::BuildingBlock& target) {
  ah::BlockMap map;
  if (const auto u = n.find("unital")) map.unital = u->boolean();
  const Node targets = n.at("targets");
  if (targets.size() != target.size()) targets.fail("one entry per target summand expected");
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::vector<ah::EigenvalueMap> list;
    const Node entries = targets[t];
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const Node e = entries[k];
      if (const auto p = e.find("projection")) {
        ah::Projection proj;
        proj.source = read_index(p->at("source"), source.size());
        const Node emb = p->at("embedding");
        for (std::size_t i = 0; i < emb.size(); ++i) {
          proj.embedding.push_back(static_cast<int>(emb[i].small_integer(1, 1L << 30)) - 1);
        }
        list.push_back(proj);
      } else if (const auto b = e.find("block_projections")) {
        list.push_back(ah::BlockProjections{read_index(b->at("source"), source.size()), b->at("count").integer()});
      } else if (const auto v = e.find("evaluation")) {
        ah::Evaluation ev;
        ev.source = read_index(v->at("source"), source.size());
        ev.point = v->at("point").string();
        if (const auto c = v->find("count")) ev.count = c->integer();
        list.push_back(ev);
      } else {
        e.fail("expected \"projection\", \"block_projections\" or \"evaluation\"");
      }
    }
    map.targets.push_back(std::move(list));
  }
  try {
    ah::validate(map, source, target);
  } catch (const std::invalid_argument& ex) {
    n.fail(ex.what());
  }
  return map;
}

struct LoadedSystem {
  ah::InductiveSystem system;
  std::optional<villadsen::VilladsenParams> params;
};

/// One of {blocks + maps}, {villadsen}, {block}.
LoadedSystem read_algebra_spec(const Node& root) {
  LoadedSystem out;
  if (const auto v = root.find("villadsen")) {
    const Rational c = v->at("c").rational();
    if (c <= 0) v->at("c").fail("c must be positive");
    const long k = v->at("stages").small_integer(1, 64);
    out.params = villadsen::generate_params(c, static_cast<std::size_t>(k));
    out.system = villadsen::build_system(*out.params);
    return out;
  }
  if (const auto b = root.find("block")) {
    out.system.blocks.push_back(read_block(*b));
    return out;
  }
  if (root.has("blocks")) {
    const Node blocks = root.at("blocks");
    for (std::size_t i = 0; i < blocks.size(); ++i) out.system.blocks.push_back(read_block(blocks[i]));
    if (out.system.blocks.empty()) blocks.fail("at least one block expected");
    const Node maps = root.at("maps");
    if (maps.size() + 1 != out.system.blocks.size()) maps.fail("expected one map between consecutive blocks");
    for (std::size_t i = 0; i < maps.size(); ++i) {
      out.system.maps.push_back(read_map(maps[i], out.system.blocks[i], out.system.blocks[i + 1]));
    }
    return out;
  }
  root.fail("expected \"villadsen\", \"block\" or \"blocks\" + \"maps\"");
}

// -- ordered models -----------------------------------------------------------

struct LoadedModel {
  std::optional<ordered::OrderedGroupModel> model;
  std::optional<int> sphere_factors;  // set for sphere_product models
};

LoadedModel read_model(const Node& n) {
  LoadedModel out;
  if (const auto se = n.find("sphere_even")) {
    const Integer m = se->at("m").integer();
    if (m < 0) se->at("m").fail("m must be non-negative");
    ordered::Element unit = se->at("unit").integer_vector();
    if (unit.size() != 2) se->at("unit").fail("unit must have two entries");
    out.model = ordered::OrderedGroupModel(ordered::SphereEven{m, unit});
    return out;
  }
  if (const auto sp = n.find("sphere_product")) {
    const long f = sp->at("factors").small_integer(0, 16);
    const Integer r = sp->at("unit_rank").integer();
    if (r < 1) sp->at("unit_rank").fail("unit rank must be at least 1");
    out.model = ordered::sphere_product_block(static_cast<int>(f), r);
    out.sphere_factors = static_cast<int>(f);
    return out;
  }
  n.fail("model must have a \"sphere_even\" or \"sphere_product\" member");
}

ordered::Element read_element(const Node& n, const LoadedModel& m) {
  if (n.raw().is_object() && m.sphere_factors) {
    const kring::KClass a = kring::expand(read_class(n, *m.sphere_factors), *m.sphere_factors);
    ordered::Element x(std::size_t{1} << *m.sphere_factors, Integer(0));
    for (const auto& [s, c] : a.terms()) x[s] = c;
    return x;
  }
  ordered::Element x = n.integer_vector();
  if (x.size() != m.model->dimension()) {
    n.fail("element has " + std::to_string(x.size()) + " entries, model dimension is " +
           std::to_string(m.model->dimension()));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Commands

struct Outcome {
  json body;
  json certificates = json::array();
  bool unknown = false;
};

void note_verdict(Outcome& o, const std::string& subject, const positivity::Verdict& v) {
  if (v.value == positivity::Sign::unknown) o.unknown = true;
  o.certificates.push_back({{"subject", subject}, {"verdict", verdict_json(v)}});
}

json block_json(const ah::BuildingBlock& b) {
  json summands = json::array();
  for (const auto& s : b.summands()) {
    summands.push_back({{"space", space_json(s.space)},
                        {"dim", num(ah::dimension(s.space))},
                        {"rank", num(s.unit_rank)},
                        {"ratio", num(make_rational(ah::dimension(s.space), s.unit_rank))}});
  }
  return summands;
}

Outcome cmd_drr(const LoadedSystem& ls, std::size_t tail) {
  Outcome o;
  if (tail >= ls.system.blocks.size()) throw InputError("argv:--tail", "tail start beyond the last block");
  const ah::SystemDrr d = ah::drr_of_system(ls.system, tail);
  json stages = json::array();
  for (std::size_t i = 0; i < ls.system.blocks.size(); ++i) {
    stages.push_back({{"stage", num(i + 1)},
                      {"ratio", num(d.stage_ratios[i])},
                      {"summands", block_json(ls.system.blocks[i])}});
  }
  o.body = {{"stages", stages},
            {"tail_start", num(d.tail_start + 1)},
            {"reported_limsup", num(d.reported_limsup)},
            {"reported_limsup_meaning", "max stage ratio over the tail; an upper bound for the limit invariant"},
            {"metadata_notes", ls.system.metadata}};
  return o;
}

Outcome cmd_sr(const LoadedSystem& ls) {
  Outcome o;
  json blocks = json::array();
  for (std::size_t i = 0; i < ls.system.blocks.size(); ++i) {
    const auto& b = ls.system.blocks[i];
    const ah::DrrSrBound bound = ah::drr_sr_bound_check(b);
    blocks.push_back({{"stage", num(i + 1)},
                      {"stable_rank", num(ah::nistor_stable_rank(b))},
                      {"drr", num(bound.drr)},
                      {"sr_half_minus_one", num(bound.sr_half_minus_one)},
                      {"drr_at_least_sr_half_minus_one", bound.holds}});
  }
  o.body = {{"blocks", blocks}};
  return o;
}

Outcome cmd_construct(const Rational& c, std::size_t k) {
  Outcome o;
  const villadsen::VilladsenParams p = villadsen::generate_params(c, k);
  villadsen::validate(p);
  const ah::InductiveSystem sys = villadsen::build_system(p);
  json params = json::array(), blocks = json::array(), maps = json::array(), ys = json::array(),
       radii = json::array();
  for (std::size_t i = 0; i < p.stages.size(); ++i) {
    const auto& st = p.stages[i];
    params.push_back({{"stage", num(i + 1)},
                      {"m", num(st.m)},
                      {"s", i == 0 ? json(nullptr) : num(st.s)},
                      {"n", num(st.n)},
                      {"P", num(st.P)},
                      {"P_over_n", num(make_rational(st.P, st.n))}});
    blocks.push_back({{"stage", num(i + 1)}, {"summands", block_json(sys.blocks[i])}});
    if (i > 0) {
      maps.push_back({{"from_stage", num(i)},
                      {"coordinate_projections", num(st.m)},
                      {"point_evaluations", num(st.s)}});
    }
    const villadsen::YClass y = villadsen::track_y_class(p, i + 1);
    note_verdict(o, "y_" + std::to_string(i + 1) + " positivity", y.verdict);
    ys.push_back({{"stage", num(i + 1)},
                  {"class", kring::describe(y.cls)},
                  {"state", num(y.state)},
                  {"verdict", verdict_json(y.verdict)}});
    const villadsen::FailureRadius fr = villadsen::comparison_failure_radius(p, i + 1);
    note_verdict(o, "stage " + std::to_string(i + 1) + " subequivalence", fr.subequivalence);
    radii.push_back({{"stage", num(i + 1)},
                     {"radius", num(fr.radius)},
                     {"x", kring::describe(fr.x)},
                     {"y", kring::describe(fr.y)},
                     {"state_x", num(fr.state_x)},
                     {"state_y", num(fr.state_y)},
                     {"subequivalence", verdict_json(fr.subequivalence)}});
  }
  o.body = {{"c", num(c)},
            {"c_half", num(c / 2)},
            {"params", params},
            {"system", {{"blocks", blocks}, {"maps", maps}, {"metadata_notes", sys.metadata}}},
            {"y_classes", ys},
            {"failure_radii", radii},
            {"rc_lower_bound", num(villadsen::rc_lower_bound_drr_half(p, p.stages.size()))}};
  return o;
}

Outcome cmd_positivity(const Node& root) {
  Outcome o;
  const Node fnode = root.at("factors");
  const Integer factors = fnode.integer();
  if (factors < 0) fnode.fail("factor count must be non-negative");
  const positivity::DecisionOptions opts = positivity::default_options();
  const Node classes = root.at("classes");
  json results = json::array();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Node cn = classes[i];
    const kring::StructuredClass a = read_class(cn, factors);
    const positivity::Verdict v = positivity::decide_positive(a, factors, opts);
    std::string label = "class " + std::to_string(i + 1);
    if (const auto l = cn.find("label")) label = l->string();
    note_verdict(o, label, v);
    results.push_back({{"index", num(i + 1)},
                       {"label", label},
                       {"class", kring::describe(a)},
                       {"rank", num(kring::rank(a))},
                       {"verdict", verdict_json(v)}});
  }
  o.body = {{"factors", num(factors)},
            {"dense_factor_cap", num(static_cast<std::size_t>(opts.dense_factor_cap))},
            {"results", results}};
  return o;
}

json pair_json(const ordered::Pair& p) { return json::array({element_json(p.first), element_json(p.second)}); }

json pairs_json(const std::vector<ordered::Pair>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(pair_json(p));
  return a;
}

std::vector<ordered::Pair> read_pairs(const Node& n, const LoadedModel& m, const char* a, const char* b) {
  std::vector<ordered::Pair> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    out.emplace_back(read_element(n[i].at(a), m), read_element(n[i].at(b), m));
  }
  return out;
}

json cancellation_json(const ordered::CancellationReport& r) {
  return {{"holds", r.holds},
          {"fully_certified", r.fully_certified()},
          {"failure", r.failure ? pair_json(*r.failure) : json(nullptr)},
          {"certified", pairs_json(r.certified)},
          {"inconclusive", pairs_json(r.inconclusive)},
          {"vacuous", num(r.vacuous)}};
}

Outcome cmd_compare(const Node& root, const Rational& r) {
  Outcome o;
  const LoadedModel m = read_model(root.at("model"));
  const auto& model = *m.model;
  o.body["r"] = num(r);
  o.body["model_dimension"] = num(model.dimension());
  if (const auto n = root.find("pairs")) {
    const auto pairs = read_pairs(*n, m, "x", "y");
    const ordered::ComparisonReport rep = ordered::check_r_strict_comparison(model, r, pairs);
    if (!rep.unknown.empty()) o.unknown = true;
    o.body["strict_comparison"] = {{"holds", rep.holds},
                                   {"failure", rep.failure ? pair_json(*rep.failure) : json(nullptr)},
                                   {"unknown", pairs_json(rep.unknown)},
                                   {"applicable", num(rep.applicable)},
                                   {"vacuous", num(rep.vacuous)}};
  }
  if (const auto n = root.find("quadruples")) {
    Integer box = 3 * static_cast<long>(model.dimension());
    if (const auto b = root.find("box")) box = b->integer();
    json results = json::array();
    for (std::size_t i = 0; i < n->size(); ++i) {
      const Node q = (*n)[i];
      const ordered::Quadruple quad{read_element(q.at("x1"), m), read_element(q.at("x2"), m),
                                    read_element(q.at("y1"), m), read_element(q.at("y2"), m)};
      const ordered::InterpolationResult res = ordered::check_r_interpolation(model, r, quad, box);
      if (res.kind == ordered::InterpolationResult::Kind::inconclusive) o.unknown = true;
      results.push_back({{"index", num(i + 1)},
                         {"kind", ordered::to_string(res.kind)},
                         {"z", res.z ? element_json(*res.z) : json(nullptr)},
                         {"box", num(res.box)},
                         {"candidates", num(res.candidates)},
                         {"reason", res.reason}});
    }
    o.body["interpolation"] = results;
  }
  if (const auto n = root.find("cancellation_pairs")) {
    const auto rep = ordered::check_r_cancellation(model, r, read_pairs(*n, m, "p", "q"));
    if (!rep.inconclusive.empty()) o.unknown = true;
    o.body["cancellation"] = cancellation_json(rep);
  }
  if (const auto n = root.find("fcq_pairs")) {
    const auto rep = ordered::check_r_fcq(model, r, read_pairs(*n, m, "p", "q"));
    if (!rep.inconclusive.empty()) o.unknown = true;
    o.body["fcq"] = cancellation_json(rep);
  }
  return o;
}

json witness_json(const cuntz::RcWitness& w) {
  return {{"regions", w.partition.regions},
          {"ambient_dim", num(w.partition.ambient_dim)},
          {"marked_sphere_half_dim", num(w.m)},
          {"unit_rank", num(w.unit_rank)},
          {"a_plus_v", cuntz_element_json(w.a_plus_v)},
          {"b", cuntz_element_json(w.b)},
          {"bound", num(w.bound)},
          {"degenerate", w.degenerate},
          {"note", w.note}};
}

json verification_json(const cuntz::RcVerification& v) {
  json gaps = json::array();
  for (const auto& g : v.gaps) gaps.push_back(num(g));
  return {{"verified", v.verified},
          {"point_mass_gaps", gaps},
          {"gap_certificate", v.gap_certificate},
          {"restriction_difference", element_json(v.restriction_difference)},
          {"failure_certificate", v.failure_certificate}};
}

Outcome cmd_rc_bound(const Integer& dim, const Integer& rank, const std::vector<Integer>& amplify) {
  Outcome o;
  const cuntz::RcWitness w = cuntz::rc_witness_build(dim, rank);
  const cuntz::RcVerification v = cuntz::rc_witness_verify(w);
  o.body = {{"witness", witness_json(w)}, {"verification", verification_json(v)}, {"bound", num(w.bound)}};
  o.certificates.push_back({{"subject", "rc witness"}, {"verification", verification_json(v)}});
  json amps = json::array();
  for (const auto& k : amplify) {
    const cuntz::RcWitness wk = cuntz::witness_amplify(w, k);
    amps.push_back({{"factor", num(k)}, {"unit_rank", num(wk.unit_rank)}, {"bound", num(wk.bound)}});
  }
  if (!amplify.empty()) o.body["amplified"] = amps;
  return o;
}

Outcome cmd_aup_witness(const Integer& dim, const Integer& rank, const Integer& max_mn) {
  Outcome o;
  const cuntz::AupWitness w = cuntz::almost_unperforation_witness(dim, rank);
  const std::vector<cuntz::CuntzElementModel> elements{w.a, w.b};
  const auto hit = cuntz::almost_unperforated_check(w.partition, elements, max_mn);
  const std::vector<std::string> names{"a", "b"};
  json search = {{"max_mn", num(max_mn)}, {"found", hit.has_value()}};
  if (hit) {
    search["x"] = names[hit->x];
    search["y"] = names[hit->y];
    search["m"] = num(hit->m);
    search["n"] = num(hit->n);
  }
  o.body = {{"regions", w.partition.regions},
            {"ambient_dim", num(w.partition.ambient_dim)},
            {"unit_rank", num(w.unit_rank)},
            {"a", cuntz_element_json(w.a)},
            {"b", cuntz_element_json(w.b)},
            {"m_mult", num(w.m_mult)},
            {"n_mult", num(w.n_mult)},
            {"combined_restriction", element_json(w.combined)},
            {"difference_restriction", element_json(w.difference)},
            {"verified", w.verified},
            {"search", search}};
  o.certificates.push_back({{"subject", "almost unperforation witness"},
                            {"combined_in_cone", ordered::sphere_even_cone(2, w.combined)},
                            {"difference_in_cone", ordered::sphere_even_cone(2, w.difference)}});
  return o;
}

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("file", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("byte " + std::to_string(e.byte), e.what());
  }
}

Integer parse_flag_integer(const std::string& flag, const std::string& text) {
  try {
    return parse_integer(text);
  } catch (const std::invalid_argument& e) {
    throw InputError("argv:" + flag, e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact dimension-rank ratio and radius-of-comparison certificates", kToolName};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "Write certificates to this path");
  app.set_version_flag("--version", kToolVersion);

  std::string spec_path;
  std::size_t tail = 1;
  auto* drr = app.add_subcommand("drr", "Stage dimension-rank ratios of a system");
  drr->add_option("input", spec_path, "Algebra description (JSON)")->required();
  drr->add_option("--tail", tail, "First stage (1-based) of the reported tail")->check(CLI::PositiveNumber);

  auto* sr = app.add_subcommand("sr", "Stable rank of each block");
  sr->add_option("input", spec_path, "Algebra description (JSON)")->required();

  std::string c_text, stages_text, r_text;
  auto* construct = app.add_subcommand("construct", "Villadsen-type system with prescribed ratio c");
  construct->add_option("--c", c_text, "Target ratio p/q")->required();
  construct->add_option("--stages", stages_text, "Number of stages")->required();

  auto* pos = app.add_subcommand("positivity", "Three-valued positivity of listed classes");
  pos->add_option("input", spec_path, "Class list (JSON)")->required();

  auto* compare = app.add_subcommand("compare", "r-comparison checkers on an ordered model");
  compare->add_option("input", spec_path, "Model and test sets (JSON)")->required();
  compare->add_option("--r", r_text, "Slack p/q")->required();

  std::string dim_text, rank_text = "1", max_mn_text = "4";
  std::vector<std::string> amplify_text;
  auto* rc = app.add_subcommand("rc-bound", "Radius-of-comparison lower-bound witness");
  rc->add_option("--dim", dim_text, "Dimension of the space")->required();
  rc->add_option("--rank", rank_text, "Rank of the unit");
  rc->add_option("--amplify", amplify_text, "Matrix amplification factors");

  std::string aup_dim_text = "5";
  auto* aup = app.add_subcommand("aup-witness", "Failure of almost unperforation");
  aup->add_option("--dim", aup_dim_text, "Dimension of the space (>= 5)");
  aup->add_option("--rank", rank_text, "Rank of the unit");
  aup->add_option("--max-mn", max_mn_text, "Search bound for m and n");

  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << json({{"error", e.what()}, {"location", "argv"}}).dump() << "\n";
    return kInputError;
  }

  try {
    Outcome o;
    std::string digest_input;
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "construct" || sub == "rc-bound" || sub == "aup-witness") {
      json params;
      if (sub == "construct") {
        const Rational c = parse_flag_rational("--c", c_text);
        if (c <= 0) throw InputError("argv:--c", "c must be positive");
        const Integer k = parse_flag_integer("--stages", stages_text);
        if (k < 1 || k > 64) throw InputError("argv:--stages", "stages must lie in [1, 64]");
        params = {{"c", num(c)}, {"stages", num(k)}};
        o = cmd_construct(c, k.get_ui());
      } else if (sub == "rc-bound") {
        const Integer dim = parse_flag_integer("--dim", dim_text);
        const Integer rank = parse_flag_integer("--rank", rank_text);
        if (dim < 1) throw InputError("argv:--dim", "dimension must be positive");
        if (rank < 1) throw InputError("argv:--rank", "rank must be positive");
        std::vector<Integer> amplify;
        for (const auto& t : amplify_text) {
          amplify.push_back(parse_flag_integer("--amplify", t));
          if (amplify.back() < 1) throw InputError("argv:--amplify", "factors must be positive");
        }
        params = {{"dim", num(dim)}, {"rank", num(rank)}, {"amplify", num_vector(amplify)}};
        o = cmd_rc_bound(dim, rank, amplify);
      } else {
        const Integer dim = parse_flag_integer("--dim", aup_dim_text);
        const Integer rank = parse_flag_integer("--rank", rank_text);
        const Integer max_mn = parse_flag_integer("--max-mn", max_mn_text);
        if (dim < 5) throw InputError("argv:--dim", "dimension must be at least 5");
        if (rank < 1) throw InputError("argv:--rank", "rank must be positive");
        if (max_mn < 2 || max_mn > 1000) throw InputError("argv:--max-mn", "max-mn must lie in [2, 1000]");
        params = {{"dim", num(dim)}, {"rank", num(rank)}, {"max_mn", num(max_mn)}};
        o = cmd_aup_witness(dim, rank, max_mn);
      }
      digest_input = json({{"subcommand", sub}, {"parameters", params}}).dump();
    } else {
      digest_input = read_file(spec_path);
      const json doc = parse_json(digest_input);
      const Node root(doc, "");
      if (sub == "drr") {
        o = cmd_drr(read_algebra_spec(root), tail - 1);
      } else if (sub == "sr") {
        o = cmd_sr(read_algebra_spec(root));
      } else if (sub == "positivity") {
        o = cmd_positivity(root);
      } else {
        o = cmd_compare(root, parse_flag_rational("--r", r_text));
      }
    }

    const json metadata = {{"tool", kToolName},
                           {"version", kToolVersion},
                           {"subcommand", sub},
                           {"input_sha256", sha256_hex(digest_input)}};
    out << json({{"metadata", metadata}, {"report", o.body}}).dump(2) << "\n";
    if (!out_path.empty()) {
      std::ofstream cert(out_path, std::ios::binary);
      if (!cert) throw InputError("argv:--out", "cannot write " + out_path);
      cert << json({{"metadata", metadata}, {"certificates", o.certificates}}).dump(2) << "\n";
    }
    return o.unknown ? kUnknownPresent : kOk;
  } catch (const InputError& e) {
    err << json({{"error", e.what()}, {"location", e.location()}}).dump() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << json({{"error", e.what()}, {"location", "input"}}).dump() << "\n";
    return kInputError;
  }
}

}  // namespace ahcert::cli
