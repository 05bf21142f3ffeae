#include "twistlab/cli/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/factor/factor.hpp"
#include "twistlab/knots/codes.hpp"
#include "twistlab/obstruct/obstruct.hpp"
#include "twistlab/reps/representation.hpp"
#include "twistlab/twisted/twisted.hpp"
#include "twistlab/util/parallel.hpp"

namespace twistlab::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyEnumeration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- options

struct Options {
  std::string corpus;
  std::string rep = "trivial";
  std::string ring = "Z";
  std::string format = "json";
  std::string cache_dir;
  std::string out;
  unsigned jobs = 0;
  int class_index = -1;
  // links: "total" sends every meridian to t, "split" keeps s on components after the first
  std::string weights = "total";
};

struct RepSelector {
  enum Kind { Trivial, Dihedral, Perm, File } kind = Trivial;
  std::uint32_t p = 0;
  int n = 0;
  RepSymmetry sym = RepSymmetry::Alternating;
  std::string path;
  std::string file_text;

  // what goes into cache keys; files by content
  std::string token() const {
    switch (kind) {
      case Trivial: return "trivial";
      case Dihedral: return "dihedral:" + std::to_string(p);
      case Perm: return "perm:" + std::to_string(n) + (sym == RepSymmetry::Alternating ? ":A" : ":S");
      case File: return "file:" + sha256_hex(file_text);
    }
    return "";
  }
  std::string display() const { return kind == File ? "file:" + path : token(); }
};

std::uint32_t parse_uint(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (...) {
    used = 0;
  }
  if (used != s.size() || s.empty() || v > 0xffffffffUL) throw UsageError("invalid " + what + " '" + s + "'");
  return std::uint32_t(v);
}

RepSelector parse_rep(const std::string& s) {
  RepSelector r;
  if (s == "trivial") return r;
  if (s.starts_with("dihedral:")) {
    r.kind = RepSelector::Dihedral;
    r.p = parse_uint(s.substr(9), "dihedral prime");
    if (r.p < 3 || !is_prime(r.p)) throw UsageError("dihedral:p needs an odd prime, got " + s.substr(9));
    return r;
  }
  if (s.starts_with("perm:")) {
    std::string rest = s.substr(5);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw UsageError("expected perm:<n>:A or perm:<n>:S");
    r.kind = RepSelector::Perm;
    r.n = int(parse_uint(rest.substr(0, colon), "permutation degree"));
    std::string t = rest.substr(colon + 1);
    if (t == "A") r.sym = RepSymmetry::Alternating;
    else if (t == "S") r.sym = RepSymmetry::Symmetric;
    else throw UsageError("permutation target must be A or S, got " + t);
    if (r.n < 2 || r.n > 8) throw UsageError("permutation degree must lie in 2..8");
    return r;
  }
  if (s.starts_with("file:")) {
    r.kind = RepSelector::File;
    r.path = s.substr(5);
    std::ifstream in(r.path);
    if (!in) throw UsageError("cannot read representation file " + r.path);
    std::stringstream buf;
    buf << in.rdbuf();
    r.file_text = buf.str();
    return r;
  }
  throw UsageError("unknown representation selector '" + s + "'");
}

RingSpec parse_ring(const std::string& s) {
  try {
    return RingSpec::parse(s);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- knots

struct KnotInput {
  std::string name;
  Diagram diagram;
};

const std::vector<KnotRecord>& corpus_for(const Options& o) {
  static std::map<std::string, std::vector<KnotRecord>> loaded;
  static std::mutex mu;
  std::string path = o.corpus.empty() ? default_corpus_path() : o.corpus;
  std::lock_guard<std::mutex> lock(mu);
  auto it = loaded.find(path);
  if (it == loaded.end()) {
    try {
      it = loaded.emplace(path, load_corpus(path)).first;
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  return it->second;
}

KnotInput resolve(const std::string& spec, const Options& o) {
  bool inline_code = spec.starts_with("pd:") || spec.starts_with("dt:") || spec.starts_with("braid:");
  const auto* corpus = inline_code ? nullptr : &corpus_for(o);
  if (corpus && !find_record(*corpus, spec)) throw UsageError("unknown knot '" + spec + "'");
  try {
    const KnotRecord* r = corpus ? find_record(*corpus, spec) : nullptr;
    return {r ? r->name : spec, diagram_from_spec(spec, corpus)};
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

Presentation presentation_for(const Diagram& d, const Options& o) {
  Presentation p = wirtinger(d);
  if (o.weights == "total")
    for (auto& l : p.labels) l.epsilon = Weight{1, 0};
  return p;
}

// ---------------------------------------------------------------- representations

struct NamedRep {
  std::string label;
  Representation rep;
};

ScalarMatrix matrix_from_json(const nlohmann::json& j, const RingSpec& ring) {
  if (!j.is_array() || j.empty()) throw UsageError("representation image must be a nonempty array of rows");
  std::size_t n = j.size();
  ScalarMatrix m(n, n, Scalar::zero(ring));
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw UsageError("representation image is not square");
    for (std::size_t c = 0; c < n; ++c) {
      const auto& x = j[r][c];
      if (x.is_number_integer()) {
        m(r, c) = Scalar::from_integer(ring, x.get<long>());
      } else if (x.is_string()) {
        LaurentPoly v = parse_laurent(x.get<std::string>(), ring);
        if (!v.is_constant()) throw UsageError("matrix entry '" + x.get<std::string>() + "' is not a constant");
        m(r, c) = v.coeff(0);
      } else {
        throw UsageError("matrix entries must be integers or strings");
      }
    }
  }
  return m;
}

// {"perms": [[...], ...]} or {"ring": "Z", "images": [matrix, ...]}, one entry per Wirtinger generator
Representation rep_from_file(const RepSelector& sel, const Presentation& pres) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(sel.file_text);
  } catch (const std::exception& e) {
    throw UsageError("representation file " + sel.path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("representation file must hold a JSON object");
  Representation r;
  if (j.contains("perms")) {
    std::vector<Perm> perms = j["perms"].get<std::vector<Perm>>();
    if (perms.size() != std::size_t(pres.generators)) throw UsageError("expected one permutation per generator");
    r = perm_to_matrices(pres, perms);
  } else if (j.contains("images")) {
    RingSpec ring = parse_ring(j.value("ring", "Z"));
    std::vector<ScalarMatrix> images;
    for (const auto& x : j["images"]) images.push_back(matrix_from_json(x, ring));
    if (images.size() != std::size_t(pres.generators)) throw UsageError("expected one matrix per generator");
    r = make_representation(pres, ring, std::move(images));
  } else {
    throw UsageError("representation file needs \"perms\" or \"images\"");
  }
  RepCheck chk = verify(pres, r);
  if (!chk.ok) throw UsageError("representation file does not satisfy the relators: " + chk.reason);
  return r;
}

std::vector<NamedRep> enumerate(const RepSelector& sel, const Diagram& d, const Presentation& pres) {
  std::vector<NamedRep> out;
  switch (sel.kind) {
    case RepSelector::Trivial:
      out.push_back({"trivial", trivial_representation(pres)});
      break;
    case RepSelector::Dihedral:
      for (const auto& rc : enumerate_colorings(d, sel.p)) out.push_back({rc.label(), dihedral_integral_lift(pres, rc)});
      break;
    case RepSelector::Perm:
      for (const auto& rc : enumerate_perm_reps(pres, sel.n, sel.sym)) out.push_back({rc.label(), rc.representative});
      break;
    case RepSelector::File:
      out.push_back({"file", rep_from_file(sel, pres)});
      break;
  }
  return out;
}

std::vector<NamedRep> select(std::vector<NamedRep> reps, const Options& o, const std::string& sel) {
  if (reps.empty()) throw EmptyEnumeration("representation enumeration empty for " + sel);
  if (o.class_index >= 0) {
    if (std::size_t(o.class_index) >= reps.size())
      throw UsageError("--class " + std::to_string(o.class_index) + " out of range (" + std::to_string(reps.size()) + " classes)");
    return {reps[o.class_index]};
  }
  return reps;
}

bool special_linear(const Representation& r) {
  for (const auto& m : r.images)
    if (!determinant(m, r.ring).is_unit()) return false;
  return true;
}

// ---------------------------------------------------------------- json helpers

Json factor_json(const Factorization& f) {
  Json fs = Json::array();
  for (const auto& x : f.factors) fs.push_back(Json{{"poly", pretty(x.poly)}, {"multiplicity", x.multiplicity}});
  return Json{{"unit", pretty(f.unit)}, {"factors", fs}};
}

std::optional<Factorization> try_factor(const LaurentPoly& p) {
  if (p.is_zero()) return std::nullopt;
  try {
    switch (p.ring().kind()) {
      case RingKind::Integers:
      case RingKind::Rationals: return factor_over_Q(p);
      case RingKind::ModP: return factor_mod_p(p);
      case RingKind::Cyclotomic: return factor_over_cyclotomic(p, p.ring().order());
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::string status_of(const Json& verdicts) {
  bool any_obstructed = false, all_consistent = !verdicts.empty();
  for (const auto& v : verdicts) {
    std::string s = v["status"].get<std::string>();
    any_obstructed = any_obstructed || s == "Obstructed";
    all_consistent = all_consistent && s == "Consistent";
  }
  if (any_obstructed) return "Obstructed";
  return all_consistent ? "Consistent" : "Inconclusive";
}

// ---------------------------------------------------------------- cache

class Cache {
 public:
  explicit Cache(std::string dir) : dir_(std::move(dir)) {}
  bool enabled() const { return !dir_.empty(); }

  std::optional<std::string> get(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path(key), std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  void put(const std::string& key, const std::string& value) const {
    if (!enabled()) return;
    fs::path target = path(key);
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    static std::atomic<unsigned long> serial{0};
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(serial++);
    {
      std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
      if (!o) return;
      o << value;
      if (!o.flush()) return;
    }
    fs::rename(tmp, target, ec);
    if (ec) fs::remove(tmp, ec);
  }

 private:
  fs::path path(const std::string& key) const { return fs::path(dir_) / key.substr(0, 2) / (key + ".json"); }
  std::string dir_;
};

std::string cache_key(const Json& job) {
  Json k = job;
  k["tool"] = std::string("twistlab ") + kVersion;
  return sha256_hex(k.dump());
}

// Computes or fetches the report for a job description; `hit` reports which.
Json cached(const Cache& cache, const Json& job, const std::function<Json()>& compute, bool* hit = nullptr) {
  std::string key = cache_key(job);
  if (auto v = cache.get(key)) {
    try {
      Json j = Json::parse(*v);
      if (hit) *hit = true;
      return j;
    } catch (const std::exception&) {
      // unreadable entry: recompute and overwrite
    }
  }
  Json j = compute();
  cache.put(key, j.dump());
  if (hit) *hit = false;
  return j;
}

Json job_base(const std::string& op, const KnotInput& k) {
  return Json{{"op", op}, {"diagram", to_string(k.diagram.pd())}};
}

// ---------------------------------------------------------------- poly / reps / h1

Json poly_report(const KnotInput& k, const Options& o) {
  RepSelector sel = parse_rep(o.rep);
  RingSpec ring = parse_ring(o.ring);
  Presentation pres = presentation_for(k.diagram, o);
  auto reps = select(enumerate(sel, k.diagram, pres), o, sel.display());
  auto results = parallel_map<Json>(reps.size(), [&](std::size_t i) {
    Representation r = reps[i].rep;
    if (!(r.ring == ring)) r = change_ring(r, ring);
    TwistedResult t = twisted_alexander_full(pres, r);
    Json wada = nullptr;
    if (t.wada)
      wada = Json{{"numerator", pretty(t.wada->numerator)},
                  {"denominator", pretty(t.wada->denominator)},
                  {"deleted_generator", t.wada->deleted_generator}};
    LaurentPoly delta = t.delta.is_zero() ? t.delta : normalize(t.delta);
    auto fac = try_factor(delta);
    return Json{{"label", reps[i].label},
                {"dim", r.dim},
                {"delta0", pretty(normalize(t.delta0))},
                {"wada", wada},
                {"torsion", t.torsion},
                {"delta", pretty(delta)},
                {"degree", delta.span()},
                {"factorization", fac ? factor_json(*fac) : Json(nullptr)}};
  }, o.jobs);
  Json cls = Json::array();
  for (auto& r : results) cls.push_back(std::move(r));
  Json j{{"knot", k.name}, {"rep", sel.display()}, {"ring", ring.spec()}};
  if (!k.diagram.is_knot()) j["weights"] = o.weights;
  j["classes"] = cls;
  return j;
}

Json reps_report(const KnotInput& k, const Options& o) {
  RepSelector sel = parse_rep(o.rep);
  Presentation pres = wirtinger(k.diagram);
  auto reps = enumerate(sel, k.diagram, pres);
  Json cls = Json::array();
  for (const auto& r : reps) cls.push_back(Json{{"label", r.label}, {"dim", r.rep.dim}, {"ring", r.rep.ring.spec()}});
  return Json{{"knot", k.name}, {"rep", sel.display()}, {"count", reps.size()}, {"classes", cls}};
}

Json h1_report(const KnotInput& k) {
  auto f = h1_double_branched_cover(k.diagram);
  Integer order(1);
  Json fs = Json::array();
  for (const auto& x : f) {
    fs.push_back(x.get_str());
    order *= x;
  }
  return Json{{"knot", k.name}, {"invariant_factors", fs}, {"order", order.get_str()}};
}

// ---------------------------------------------------------------- period

struct PeriodArgs {
  std::uint32_t q = 0;
  std::string criterion = "all";
  int lambda_max = 0;
};

std::vector<int> witness_lambdas(const Verdict& v) {
  std::set<int> ls;
  if (v.certificate.contains("witnesses"))
    for (const auto& w : v.certificate["witnesses"]) ls.insert(w["lambda"].get<int>());
  return {ls.begin(), ls.end()};
}

std::vector<LaurentPoly> poly_list(const Json& arr) {
  std::vector<LaurentPoly> out;
  for (const auto& x : arr) out.push_back(parse_laurent(x.get<std::string>()));
  return out;
}

// Delta of the quotient knot is forced to be 1 when every survivor of the cyclotomic
// condition other than 1 reduces mod p to something no mod-p witness allows.
bool quotient_delta_forced_one(const Verdict& modp, const std::optional<Verdict>& zeta, std::uint32_t p) {
  if (!zeta || zeta->status == VerdictStatus::Inconclusive || !zeta->certificate.contains("survivors")) return false;
  std::vector<LaurentPoly> allowed;
  RingSpec F = RingSpec::mod_p(p);
  for (const auto& w : modp.certificate["witnesses"]) allowed.push_back(parse_laurent(w["delta_bar"].get<std::string>(), F));
  for (const auto& s : poly_list(zeta->certificate["survivors"])) {
    if (s.is_constant()) continue;
    LaurentPoly sp = s.map_ring(F);
    if (sp.is_zero()) continue;
    for (const auto& a : allowed)
      if (equal_up_to_unit(sp, a.map_ring(F))) return false;
  }
  return true;
}

Json period_report(const KnotInput& k, const Options& o, const PeriodArgs& a, Cache& cache) {
  static const std::set<std::string> known{"all", "modp", "zeta", "twisted", "orbit", "degree"};
  if (!known.count(a.criterion)) throw UsageError("unknown criterion '" + a.criterion + "'");
  if (a.q < 2) throw UsageError("--q must be at least 2");
  auto pp = prime_power(a.q);
  if (!pp) throw UsageError("invalid q = " + std::to_string(a.q) + ": not a prime power");
  bool q_prime = pp->r == 1;
  if ((a.criterion == "zeta" || a.criterion == "orbit") && !q_prime)
    throw UsageError("invalid q = " + std::to_string(a.q) + ": criterion " + a.criterion + " needs a prime");
  if (!k.diagram.is_knot()) throw UsageError("period criteria need a knot, " + k.name + " is a link");
  bool all = a.criterion == "all";

  RepSelector sel = parse_rep(o.rep);
  // orbit counting uses dihedral classes; pick the first odd prime p != q dividing det
  std::vector<Integer> h1 = h1_double_branched_cover(k.diagram);
  if (a.criterion == "orbit" && sel.kind == RepSelector::Trivial) {
    Integer det(1);
    for (const auto& x : h1) det *= x;
    for (std::uint32_t p = 3; p < 1000 && sel.kind == RepSelector::Trivial; p += 2)
      if (is_prime(p) && p != pp->p && det != 0 && mpz_divisible_ui_p(det.get_mpz_t(), p)) {
        sel.kind = RepSelector::Dihedral;
        sel.p = p;
      }
    if (sel.kind == RepSelector::Trivial) throw EmptyEnumeration("no odd prime other than q divides det(" + k.name + ")");
  }

  LaurentPoly delta = classical_alexander(k.diagram);
  std::vector<int> lambdas;
  if (a.lambda_max > 0) lambdas = lambda_candidates(a.q, a.lambda_max);
  Json verdicts = Json::array();
  Json notes = Json::array();

  Verdict modp = murasugi_modp(delta, a.q, lambdas);
  std::optional<Verdict> zeta;
  if (q_prime && (all || a.criterion == "zeta" || a.criterion == "orbit")) zeta = murasugi_zeta(delta, a.q);
  if (all || a.criterion == "modp" || a.criterion == "orbit") verdicts.push_back(modp.to_json());
  if (zeta) verdicts.push_back(zeta->to_json());

  bool wants_twisted = sel.kind != RepSelector::Trivial && (all || a.criterion == "twisted" || a.criterion == "degree");
  bool wants_orbit = a.criterion == "orbit" || (all && sel.kind == RepSelector::Dihedral && q_prime);
  std::vector<int> forced = witness_lambdas(modp);

  Presentation pres = wirtinger(k.diagram);
  std::vector<NamedRep> reps;
  if (wants_twisted || wants_orbit) reps = select(enumerate(sel, k.diagram, pres), o, sel.display());

  if (wants_twisted && reps.size() == 1 && forced.empty()) {
    notes.push_back("classical condition leaves no linking number; twisted conditions skipped");
  } else if (wants_twisted && reps.size() == 1) {
    const Representation& r = reps[0].rep;
    TwistedResult t = twisted_alexander_full(pres, r);
    if (t.delta.is_zero()) throw UsageError("twisted polynomial is zero for " + reps[0].label);
    notes.push_back("single class " + reps[0].label + ": fixed by any period action");
    std::optional<std::vector<LaurentPoly>> candidates;
    if (q_prime && a.criterion != "degree") {
      QuotientSearch qs = twisted_murasugi_rational(t.delta, a.q);
      verdicts.push_back(qs.verdict.to_json());
      if (qs.verdict.status != VerdictStatus::Inconclusive) candidates = qs.survivors;
    }
    if (a.criterion != "degree" && !(candidates && candidates->empty())) {
      TwistedModpInput in;
      in.delta_rho = t.delta;
      in.delta0 = t.delta0;
      in.q = a.q;
      in.n = int(r.dim);
      in.lambdas = forced;
      in.candidates = candidates;
      in.special_linear = special_linear(r);
      verdicts.push_back(twisted_murasugi_modp(in).to_json());
    }
    if (all || a.criterion == "degree") {
      // degrees as they survive reduction mod p
      RingSpec F = RingSpec::mod_p(pp->p);
      LaurentPoly dp = t.delta.map_ring(F), d0 = t.delta0.map_ring(F);
      if (!dp.is_zero() && !d0.is_zero())
        verdicts.push_back(degree_feasibility(dp.span(), d0.span(), int(r.dim), a.q, forced).to_json());
    }
  } else if (wants_twisted && !reps.empty()) {
    notes.push_back(std::to_string(reps.size()) + " classes: twisted conditions need a class fixed by the action");
  }

  if (wants_orbit && !reps.empty()) {
    if (sel.kind != RepSelector::Dihedral) throw UsageError("the orbit criterion counts dihedral classes");
    auto polys = parallel_map<LaurentPoly>(reps.size(), [&](std::size_t i) {
      Json job = job_base("class-poly", k);
      job["rep"] = sel.token();
      job["class"] = reps[i].label;
      Json j = cached(cache, job, [&] {
        return Json{{"delta", pretty(normalize(twisted_alexander(pres, reps[i].rep)))}};
      });
      return parse_laurent(j["delta"].get<std::string>());
    }, o.jobs);
    int m = int(polys.size());
    bool one = modp.status == VerdictStatus::Consistent && quotient_delta_forced_one(modp, zeta, pp->p);
    try {
      int bound = transfer_fixed_bound(h1, sel.p, one, m);
      verdicts.push_back(orbit_criterion(a.q, polys, bound).to_json());
      notes.push_back("fixed-class bound " + std::to_string(bound) + " from the " + std::to_string(sel.p) +
                      "-primary part of H1" + (one ? " with quotient polynomial 1" : ""));
    } catch (const CriterionError& e) {
      notes.push_back(std::string("orbit criterion not applicable: ") + e.what());
    }
  }

  return Json{{"knot", k.name},
              {"q", a.q},
              {"criterion", a.criterion},
              {"rep", sel.display()},
              {"verdicts", verdicts},
              {"notes", notes},
              {"overall", status_of(verdicts)}};
}

// ---------------------------------------------------------------- free period

bool usable_factor(const LaurentPoly& f) {
  if (f.span() < 1) return false;
  LaurentPoly g = normalize(f);
  return g.leading() == Scalar(Integer(1)) && g.coeff(0).is_unit() && !is_product_of_cyclotomics(g);
}

Json free_period(const KnotInput& k, const Options& o, const std::string& factor_text) {
  if (!k.diagram.is_knot()) throw UsageError("free periods are defined for knots, " + k.name + " is a link");
  RepSelector sel = parse_rep(o.rep);
  Presentation pres = wirtinger(k.diagram);
  auto reps = select(enumerate(sel, k.diagram, pres), o, sel.display());
  Json notes = Json::array();
  NamedRep chosen = reps[0];
  if (reps.size() > 1) {
    notes.push_back(std::to_string(reps.size()) + " classes: using the trivial representation");
    chosen = {"trivial", trivial_representation(pres)};
  }
  LaurentPoly delta_k = classical_alexander(k.diagram);
  LaurentPoly tw = normalize(twisted_alexander(pres, chosen.rep));
  if (tw.is_zero()) throw UsageError("twisted polynomial is zero");
  Factorization fac = factor_over_Q(tw);

  std::vector<Factor> cands;
  if (!factor_text.empty()) {
    LaurentPoly f = normalize(parse_laurent(factor_text));
    int mult = 0;
    for (const auto& x : fac.factors)
      if (equal_up_to_unit(x.poly, f)) mult = x.multiplicity;
    if (!mult) throw UsageError("--factor is not an irreducible factor of the twisted polynomial");
    cands.push_back({f, mult});
  } else {
    for (const auto& x : fac.factors)
      if (usable_factor(x.poly)) cands.push_back({normalize(x.poly), x.multiplicity});
    std::stable_sort(cands.begin(), cands.end(), [](const Factor& a, const Factor& b) {
      if (a.poly.span() != b.poly.span()) return a.poly.span() > b.poly.span();
      return a.multiplicity > b.multiplicity;
    });
  }

  Json base{{"knot", k.name},
            {"rep", sel.display()},
            {"class", chosen.label},
            {"delta", pretty(normalize(delta_k))},
            {"twisted", Json{{"delta", pretty(tw)}, {"degree", tw.span()}, {"factorization", factor_json(fac)}}}};
  if (cands.empty()) {
    notes.push_back("no monic non-cyclotomic factor with constant term +-1");
    base["factor"] = nullptr;
    base["report"] = nullptr;
    base["notes"] = notes;
    base["conclusion"] = "undecided";
    return base;
  }
  std::optional<FreePeriodReport> best;
  Factor used;
  for (const auto& c : cands) {
    FreePeriodReport r = free_period_report(delta_k, c.poly);
    if (!best || r.overall == VerdictStatus::Obstructed) {
      best = r;
      used = c;
    }
    if (r.overall == VerdictStatus::Obstructed) break;
  }
  Json rep = best->to_json();
  base["factor"] = Json{{"poly", pretty(used.poly)}, {"multiplicity", used.multiplicity}};
  base["report"] = rep;
  base["notes"] = notes;
  base["conclusion"] = rep["conclusion"];
  return base;
}

// ---------------------------------------------------------------- text views

void text_poly(const Json& j, std::ostream& out) {
  out << "knot " << j["knot"].get<std::string>() << "  rep " << j["rep"].get<std::string>() << "  ring "
      << j["ring"].get<std::string>() << "  classes " << j["classes"].size() << "\n";
  for (const auto& c : j["classes"]) {
    out << c["label"].get<std::string>() << "  (dim " << c["dim"] << ")\n";
    out << "  Delta0 = " << c["delta0"].get<std::string>() << "\n";
    if (!c["wada"].is_null())
      out << "  Wada   = (" << c["wada"]["numerator"].get<std::string>() << ") / ("
          << c["wada"]["denominator"].get<std::string>() << ")\n";
    out << "  Delta  = " << c["delta"].get<std::string>() << "  (degree " << c["degree"] << ")\n";
    if (!c["factorization"].is_null()) {
      out << "  factors:";
      for (const auto& f : c["factorization"]["factors"]) {
        out << " (" << f["poly"].get<std::string>() << ")";
        if (f["multiplicity"] != 1) out << "^" << f["multiplicity"];
      }
      out << "\n";
    }
  }
}

void text_verdicts(const Json& j, std::ostream& out) {
  out << "knot " << j["knot"].get<std::string>() << "  q " << j["q"] << "  rep " << j["rep"].get<std::string>() << "\n";
  for (const auto& v : j["verdicts"]) {
    out << "  " << v["criterion"].get<std::string>() << ": " << v["status"].get<std::string>();
    const Json& c = v["certificate"];
    if (c.contains("distinct")) out << "  (d = " << c["distinct"] << ", m = " << c["classes"] << ")";
    out << "\n";
  }
  for (const auto& n : j["notes"]) out << "  note: " << n.get<std::string>() << "\n";
  out << "overall: " << j["overall"].get<std::string>() << "\n";
}

void text_free(const Json& j, std::ostream& out) {
  out << "knot " << j["knot"].get<std::string>() << "  rep " << j["rep"].get<std::string>() << "\n";
  out << "  twisted degree " << j["twisted"]["degree"] << "\n";
  if (!j["factor"].is_null())
    out << "  factor " << j["factor"]["poly"].get<std::string>() << "  (multiplicity " << j["factor"]["multiplicity"] << ")\n";
  if (!j["report"].is_null())
    for (const auto& [prime, r] : j["report"]["per_prime"].items())
      out << "  q = " << prime << ": " << r["status"].get<std::string>() << "  (" << r["stage"].get<std::string>() << ")\n";
  for (const auto& n : j["notes"]) out << "  note: " << n.get<std::string>() << "\n";
  out << "conclusion: " << j["conclusion"].get<std::string>() << "\n";
}

void text_reps(const Json& j, std::ostream& out) {
  out << "knot " << j["knot"].get<std::string>() << "  rep " << j["rep"].get<std::string>() << "  classes " << j["count"] << "\n";
  for (const auto& c : j["classes"]) out << "  " << c["label"].get<std::string>() << "  (dim " << c["dim"] << ")\n";
}

void text_h1(const Json& j, std::ostream& out) {
  out << "knot " << j["knot"].get<std::string>() << "  H1 =";
  if (j["invariant_factors"].empty()) out << " 0";
  bool first = true;
  for (const auto& f : j["invariant_factors"]) {
    out << (first ? " " : " + ") << (f == "0" ? "Z" : "Z/" + f.get<std::string>());
    first = false;
  }
  out << "  (order " << j["order"].get<std::string>() << ")\n";
}

void emit(const Json& j, const Options& o, std::ostream& out, void (*text)(const Json&, std::ostream&)) {
  std::ostringstream s;
  if (o.format == "text") text(j, s);
  else s << j.dump(2) << "\n";
  if (o.out.empty()) {
    out << s.str();
  } else {
    std::ofstream f(o.out, std::ios::trunc);
    if (!f) throw UsageError("cannot write " + o.out);
    f << s.str();
  }
}

// ---------------------------------------------------------------- batch

struct BatchJob {
  std::string key;
  std::string knot;
  std::optional<KnotRecord> record;
  std::string error;
};

// Per-line parsing so one corrupt record does not sink the rest.
std::vector<BatchJob> read_batch_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open corpus file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::vector<BatchJob> jobs;
  auto add = [&](const nlohmann::json& x, const std::string& where) {
    BatchJob j;
    try {
      j.record = record_from_json(x);
      j.knot = j.record->name;
    } catch (const std::exception& e) {
      j.error = e.what();
      j.knot = x.is_object() && x.contains("name") && x["name"].is_string() ? x["name"].get<std::string>() : "";
    }
    j.key = j.knot.empty() ? where : j.knot;
    jobs.push_back(std::move(j));
  };
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_array()) throw UsageError("corpus must be a JSON array or JSON lines");
    for (std::size_t i = 0; i < j.size(); ++i) add(j[i], "record:" + std::to_string(i));
    return jobs;
  } catch (const nlohmann::json::exception&) {
  }
  std::istringstream lines(text);
  std::string line;
  int no = 0;
  char where[32];
  while (std::getline(lines, line)) {
    ++no;
    std::snprintf(where, sizeof where, "line:%06d", no);
    auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    auto b = line.find_last_not_of(" \t\r,");
    std::string body = line.substr(a, b - a + 1);
    if (body == "[" || body == "]") continue;
    try {
      add(nlohmann::json::parse(body), where);
    } catch (const nlohmann::json::exception& e) {
      jobs.push_back({where, "", std::nullopt, std::string("corrupt corpus line: ") + e.what()});
    }
  }
  return jobs;
}

Json summary_job(const KnotInput& k, const Options& o) {
  // links: the one-variable polynomial of the trivial representation
  Presentation pres = presentation_for(k.diagram, o);
  LaurentPoly delta = normalize(k.diagram.is_knot() ? classical_alexander(k.diagram)
                                                    : twisted_alexander(pres, trivial_representation(pres)));
  Json r{{"knot", k.name},
         {"components", k.diagram.component_count()},
         {"crossings", k.diagram.crossing_count()},
         {"alexander", pretty(delta)},
         {"factorization", factor_json(factor_over_Q(delta))},
         {"h1_dbc", h1_report(k)["invariant_factors"]}};
  if (k.diagram.is_knot()) {
    Json per = Json::object();
    for (std::uint32_t q : {2u, 3u, 5u}) per[std::to_string(q)] = to_string(murasugi_modp(delta, q).status);
    r["murasugi_modp"] = per;
  }
  return r;
}

int run_batch(const std::string& corpus_path, const std::string& task, const Options& o, const PeriodArgs& pa,
              std::ostream& out, std::ostream& err) {
  static const std::set<std::string> tasks{"summary", "poly", "reps", "h1-dbc", "period", "free-period"};
  if (!tasks.count(task)) throw UsageError("unknown batch task '" + task + "'");
  parse_rep(o.rep);
  parse_ring(o.ring);
  std::vector<BatchJob> jobs = read_batch_corpus(corpus_path);
  std::stable_sort(jobs.begin(), jobs.end(), [](const BatchJob& a, const BatchJob& b) { return a.key < b.key; });
  Cache cache(o.cache_dir);
  std::atomic<int> hits{0};
  Options inner = o;
  inner.jobs = 1;  // jobs are the unit of parallelism
  inner.out.clear();
  auto lines = parallel_map<std::pair<bool, std::string>>(jobs.size(), [&](std::size_t i) {
    const BatchJob& b = jobs[i];
    Json line{{"key", b.key}, {"task", task}};
    if (!b.record) {
      line["status"] = "error";
      line["error"] = b.error;
      return std::pair{false, line.dump()};
    }
    try {
      KnotInput k{b.record->name, Diagram::from_pd(b.record->pd)};
      Json job = job_base("batch:" + task, k);
      job["rep"] = parse_rep(o.rep).token();
      job["ring"] = o.ring;
      job["q"] = pa.q;
      job["criterion"] = pa.criterion;
      job["lambda_max"] = pa.lambda_max;
      job["weights"] = o.weights;
      bool hit = false;
      Json result = cached(cache, job, [&]() -> Json {
        if (task == "summary") return summary_job(k, inner);
        if (task == "poly") return poly_report(k, inner);
        if (task == "reps") return reps_report(k, inner);
        if (task == "h1-dbc") return h1_report(k);
        Cache none("");
        if (task == "period") return period_report(k, inner, pa, none);
        return free_period(k, inner, "");
      }, &hit);
      if (hit) ++hits;
      line["status"] = "ok";
      line["result"] = result;
      return std::pair{true, line.dump()};
    } catch (const std::exception& e) {
      line["status"] = "error";
      line["error"] = e.what();
      return std::pair{false, line.dump()};
    }
  }, o.jobs);

  int failed = 0;
  std::ostringstream body;
  for (const auto& [ok, l] : lines) {
    failed += !ok;
    body << l << "\n";
  }
  Json summary{{"jobs", jobs.size()}, {"ok", int(jobs.size()) - failed}, {"failed", failed}, {"cache_hits", hits.load()}};
  if (o.out.empty()) {
    out << body.str();
    err << summary.dump() << "\n";
  } else {
    fs::path target(o.out), tmp(o.out + ".tmp");
    {
      std::ofstream f(tmp, std::ios::trunc);
      if (!f) throw UsageError("cannot write " + o.out);
      f << body.str();
    }
    fs::rename(tmp, target);
    out << summary.dump() << "\n";
  }
  return failed ? kPartial : kOk;
}

}  // namespace

// ---------------------------------------------------------------- entry

std::string pretty(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  bool numeric = p.ring().kind() != RingKind::Cyclotomic;
  std::string s;
  for (int e = p.high(); e >= p.low(); --e) {
    Scalar c = p.coeff(e);
    if (c.is_zero()) continue;
    std::string cs = c.to_string();
    bool neg = numeric && cs.starts_with("-");
    if (neg) cs = cs.substr(1);
    if (!numeric && !cs.starts_with("(")) cs = "(" + cs + ")";
    if (s.empty()) s = neg ? "-" : "";
    else s += neg ? " - " : " + ";
    std::string mono = e == 0 ? "" : e == 1 ? "t" : "t^" + std::to_string(e);
    if (mono.empty()) s += cs;
    else if (numeric && cs == "1") s += mono;
    else s += cs + "*" + mono;
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"twisted Alexander polynomials and period obstructions", "twistlab"};
  app.set_version_flag("--version", std::string("twistlab ") + kVersion);
  app.require_subcommand(1);
  Options o;
  PeriodArgs pa;
  std::string knot, corpus_file, task = "summary", factor_text;

  auto common = [&](CLI::App* c, bool rep, bool ring) {
    if (c->get_name() != "batch") c->add_option("--corpus", o.corpus, "corpus file (JSON array or JSON lines)");
    if (rep) {
      c->add_option("--rep", o.rep, "trivial | dihedral:<p> | perm:<n>:A|S | file:<path>");
      c->add_option("--class", o.class_index, "use only the class with this index");
    }
    if (ring) {
      c->add_option("--ring", o.ring, "Z | Q | Fp:<p> | cyc:<q>");
      c->add_option("--weights", o.weights, "links: total | split")->check(CLI::IsMember({"total", "split"}));
    }
    c->add_option("--jobs", o.jobs, "worker threads (default: CPU count)");
    c->add_option("--cache-dir", o.cache_dir, "on-disk result cache");
    c->add_option("--out", o.out, "write the report to a file");
    c->add_option("--format", o.format, "json | text")->check(CLI::IsMember({"json", "text"}));
  };

  auto* poly = app.add_subcommand("poly", "twisted Alexander polynomial of a knot or link");
  poly->add_option("knot", knot, "corpus name or pd:/dt:/braid: code")->required();
  common(poly, true, true);

  auto* reps = app.add_subcommand("reps", "enumerate representation classes");
  reps->add_option("knot", knot)->required();
  common(reps, true, false);

  auto* h1 = app.add_subcommand("h1-dbc", "first homology of the double branched cover");
  h1->add_option("knot", knot)->required();
  common(h1, false, false);

  auto* obs = app.add_subcommand("obstruct", "period and free-period obstructions");
  obs->require_subcommand(1);
  auto* period = obs->add_subcommand("period", "Murasugi-type conditions for a period q");
  period->add_option("knot", knot)->required();
  period->add_option("--q", pa.q, "the period")->required();
  period->add_option("--criterion", pa.criterion, "all | modp | zeta | twisted | orbit | degree");
  period->add_option("--lambda-max", pa.lambda_max, "largest linking number with the axis");
  common(period, true, false);
  auto* freep = obs->add_subcommand("free-period", "free periods via Hartley's condition");
  freep->add_option("knot", knot)->required();
  freep->add_option("--factor", factor_text, "irreducible factor of the twisted polynomial to use");
  common(freep, true, false);

  auto* batch = app.add_subcommand("batch", "run one task over every record of a corpus");
  batch->add_option("corpus", corpus_file, "corpus file")->required();
  batch->add_option("--task", task, "summary | poly | reps | h1-dbc | period | free-period");
  batch->add_option("--q", pa.q, "period for the period task");
  batch->add_option("--criterion", pa.criterion);
  batch->add_option("--lambda-max", pa.lambda_max);
  common(batch, true, true);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (o.jobs == 0) o.jobs = default_jobs();
    Cache cache(o.cache_dir);
    if (*batch) {
      if (task == "period" && pa.q == 0) throw UsageError("--q is required for the period task");
      return run_batch(corpus_file, task, o, pa, out, err);
    }
    KnotInput k = resolve(knot, o);
    Json job = job_base("", k);
    job["rep"] = o.rep.starts_with("file:") ? parse_rep(o.rep).token() : o.rep;
    job["class"] = o.class_index;
    if (*poly) {
      job["op"] = "poly";
      job["ring"] = o.ring;
      job["weights"] = o.weights;
      emit(cached(cache, job, [&] { return poly_report(k, o); }), o, out, text_poly);
    } else if (*reps) {
      job["op"] = "reps";
      Json j = cached(cache, job, [&] { return reps_report(k, o); });
      emit(j, o, out, text_reps);
      if (j["count"] == 0) {
        err << "representation enumeration empty for " << j["rep"].get<std::string>() << "\n";
        return kEmpty;
      }
    } else if (*h1) {
      job["op"] = "h1-dbc";
      emit(cached(cache, job, [&] { return h1_report(k); }), o, out, text_h1);
    } else if (*period) {
      job["op"] = "period";
      job["q"] = pa.q;
      job["criterion"] = pa.criterion;
      job["lambda_max"] = pa.lambda_max;
      emit(cached(cache, job, [&] { return period_report(k, o, pa, cache); }), o, out, text_verdicts);
    } else if (*freep) {
      job["op"] = "free-period";
      job["factor"] = factor_text;
      emit(cached(cache, job, [&] { return free_period(k, o, factor_text); }), o, out, text_free);
    }
    return kOk;
  } catch (const EmptyEnumeration& e) {
    err << "error: " << e.what() << "\n";
    return kEmpty;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace twistlab::cli
