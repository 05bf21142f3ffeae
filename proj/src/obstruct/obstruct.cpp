#include "twistlab/obstruct/obstruct.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "twistlab/errors.hpp"
#include "twistlab/util/parallel.hpp"

namespace twistlab {

namespace {

Json poly_json(const LaurentPoly& p) { return Json{{"ring", p.ring().spec()}, {"poly", p.to_string()}}; }
LaurentPoly poly_from_json(const Json& j) {
  return parse_laurent(j.at("poly").get<std::string>(), RingSpec::parse(j.at("ring").get<std::string>()));
}
Json poly_list_json(const std::vector<LaurentPoly>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(poly_json(p));
  return a;
}
std::vector<LaurentPoly> poly_list_from_json(const Json& j) {
  std::vector<LaurentPoly> out;
  for (const auto& x : j) out.push_back(poly_from_json(x));
  return out;
}

LaurentPoly as_integer_poly(const LaurentPoly& p) {
  switch (p.ring().kind()) {
    case RingKind::Integers:
      return p;
    case RingKind::Rationals:
      return clear_denominators(p);
    default:
      throw CriterionError("expected integer coefficients, got " + p.ring().name());
  }
}

LaurentPoly one_minus_t_power(const RingSpec& r, int k) {
  return LaurentPoly::constant(r, 1) - LaurentPoly::t_power(r, k);
}

// g with f = t^k g(t^q), lowest exponent of g zero
std::optional<LaurentPoly> frobenius_root(const LaurentPoly& f, std::uint32_t q) {
  return is_power_substitution(f.shifted(-f.low()), int(q));
}

bool is_unit_poly(const LaurentPoly& p) { return p.is_monomial() && p.leading().is_unit(); }

std::vector<LaurentPoly> divisors_over_Q(const LaurentPoly& f) {
  Factorization fac = factor_over_Q(f);
  std::vector<LaurentPoly> out{LaurentPoly::constant(RingSpec::integers(), 1)};
  for (const auto& x : fac.factors) {
    std::vector<LaurentPoly> next;
    for (const auto& d : out) {
      LaurentPoly acc = d;
      for (int e = 0; e <= x.multiplicity; ++e) {
        next.push_back(acc);
        acc *= x.poly;
      }
    }
    out = std::move(next);
  }
  for (auto& d : out) d = normalize(d);
  std::sort(out.begin(), out.end(), [](const LaurentPoly& a, const LaurentPoly& b) {
    if (a.span() != b.span()) return a.span() < b.span();
    return a.to_string() < b.to_string();
  });
  return out;
}

// |c| = a^2 - ab + b^2 for integers a, b
bool is_eisenstein_norm(const Integer& c) {
  Integer n = abs(c);
  if (n == 0) return false;
  Integer r;
  mpz_sqrt(r.get_mpz_t(), Integer(4 * n / 3 + 1).get_mpz_t());
  long R = r.get_si() + 1;
  for (long a = 0; a <= R; ++a)
    for (long b = 0; b <= a; ++b)
      if (Integer(a * a - a * b + b * b) == n) return true;
  return false;
}

struct NormTest {
  enum Outcome { Norm, NotNorm, Undecided } outcome;
  std::string detail;
};

// Is R = prod_{i=1}^{q-1} F(t, zeta^i) for some F over Z[zeta_q], up to units of Z[t, t^-1]?
NormTest norm_test(const LaurentPoly& r, std::uint32_t q) {
  if (is_unit_poly(r)) return {NormTest::Norm, "F = 1"};
  if (q == 2) return {NormTest::Norm, "F = " + r.to_string()};
  if (q != 3) return {NormTest::Undecided, "norm search needs phi(q) <= 2"};
  RingSpec K = RingSpec::cyclotomic(3, true);
  Factorization fac = factor_over_Q(r);
  Integer c = fac.unit.leading().integer();
  if (!is_eisenstein_norm(c)) return {NormTest::NotNorm, "content " + c.get_str() + " is not a norm from Z[zeta_3]"};
  LaurentPoly f = LaurentPoly::constant(K, 1);
  for (const auto& x : fac.factors) {
    Factorization over = factor_over_cyclotomic(x.poly, 3);
    if (over.factors.size() == 2) {
      f *= over.factors[0].poly.pow(unsigned(x.multiplicity));
    } else if (x.multiplicity % 2 == 0) {
      f *= x.poly.map_ring(K).pow(unsigned(x.multiplicity / 2));
    } else {
      return {NormTest::NotNorm, "factor " + x.poly.to_string() + " is irreducible over Q(zeta_3) with odd multiplicity " +
                                     std::to_string(x.multiplicity)};
    }
  }
  if (!equal_up_to_unit(f * f.galois(2), r.map_ring(K))) throw ComputationError("norm witness does not reassemble");
  return {NormTest::Norm, "F = " + f.to_string()};
}

struct ZetaSearch {
  std::vector<LaurentPoly> survivors;
  Json certificate;
  VerdictStatus status;
};

ZetaSearch zeta_search(const LaurentPoly& delta, std::uint32_t q, const std::vector<LaurentPoly>& candidates) {
  ZetaSearch out;
  Json rows = Json::array();
  bool undecided = false;
  for (const auto& cand : candidates) {
    Json row{{"candidate", cand.to_string()}};
    auto r = exact_divide(delta, cand);
    if (!r) {
      row["outcome"] = "does not divide";
    } else {
      NormTest t = norm_test(*r, q);
      row["outcome"] = t.outcome == NormTest::Norm ? "survives" : t.outcome == NormTest::NotNorm ? "eliminated" : "undecided";
      row["detail"] = t.detail;
      if (t.outcome == NormTest::Norm) out.survivors.push_back(cand);
      if (t.outcome == NormTest::Undecided) undecided = true;
    }
    rows.push_back(row);
  }
  out.certificate = Json{{"candidates", rows}};
  Json surv = Json::array();
  for (const auto& s : out.survivors) surv.push_back(s.to_string());
  out.certificate["survivors"] = surv;
  out.status = !out.survivors.empty() ? VerdictStatus::Consistent
               : undecided            ? VerdictStatus::Inconclusive
                                      : VerdictStatus::Obstructed;
  return out;
}

std::vector<std::uint32_t> prime_factors(Integer n) {
  std::vector<std::uint32_t> out;
  n = abs(n);
  for (std::uint32_t p = 2; n > 1 && p < 1000000; ++p) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.push_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) {
    if (!n.fits_ulong_p() || n.get_ui() > 0xffffffffu) throw ComputationError("prime factor out of range");
    out.push_back(std::uint32_t(n.get_ui()));
  }
  return out;
}

std::uint32_t next_prime(std::uint32_t n) {
  for (std::uint32_t k = n + 1;; ++k)
    if (is_prime(k)) return k;
}

Json verdict_cert(const Verdict& v) { return v.to_json(); }

}  // namespace

// ---------------------------------------------------------------- verdict plumbing

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Obstructed:
      return "Obstructed";
    case VerdictStatus::Consistent:
      return "Consistent";
    default:
      return "Inconclusive";
  }
}

VerdictStatus parse_verdict_status(const std::string& s) {
  if (s == "Obstructed") return VerdictStatus::Obstructed;
  if (s == "Consistent") return VerdictStatus::Consistent;
  if (s == "Inconclusive") return VerdictStatus::Inconclusive;
  throw CriterionError("unknown verdict status " + s);
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw ComputationError("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string Verdict::inputs_digest() const { return sha256_hex(inputs.dump()); }

Json Verdict::to_json() const {
  Json cert = certificate;
  cert["inputs"] = inputs;
  return Json{{"criterion", criterion}, {"inputs-digest", inputs_digest()}, {"status", to_string(status)},
              {"certificate", cert}};
}

Verdict Verdict::from_json(const Json& j) {
  Verdict v;
  v.criterion = j.at("criterion").get<std::string>();
  v.status = parse_verdict_status(j.at("status").get<std::string>());
  v.certificate = j.at("certificate");
  v.inputs = v.certificate.at("inputs");
  v.certificate.erase("inputs");
  if (j.contains("inputs-digest") && j.at("inputs-digest").get<std::string>() != v.inputs_digest())
    throw CriterionError("inputs digest mismatch");
  return v;
}

std::optional<PrimePower> prime_power(std::uint32_t q) {
  if (q < 2) return std::nullopt;
  for (std::uint32_t p = 2; p * p <= q; ++p)
    if (q % p == 0) {
      int r = 0;
      while (q % p == 0) {
        q /= p;
        ++r;
      }
      if (q != 1) return std::nullopt;
      return PrimePower{p, r};
    }
  return PrimePower{q, 1};
}

std::vector<int> lambda_candidates(std::uint32_t q, int max) {
  std::vector<int> out;
  for (int l = 1; l <= max; ++l)
    if (std::gcd(long(l), long(q)) == 1) out.push_back(l);
  return out;
}

// ---------------------------------------------------------------- classical Murasugi

Verdict murasugi_modp(const LaurentPoly& delta_k, std::uint32_t q, std::vector<int> lambdas) {
  auto pp = prime_power(q);
  if (!pp) throw CriterionError("q = " + std::to_string(q) + " is not a prime power");
  LaurentPoly delta = as_integer_poly(delta_k);
  RingSpec F = RingSpec::mod_p(pp->p);
  LaurentPoly d = delta.map_ring(F);
  Verdict v;
  v.criterion = "murasugi_modp";
  if (lambdas.empty()) lambdas = lambda_candidates(q, std::max(0, d.span()) / int(q - 1) + 1);
  std::erase_if(lambdas, [&](int l) { return l < 1 || std::gcd(long(l), long(q)) != 1; });
  v.inputs = Json{{"delta", poly_json(delta)}, {"q", q}, {"lambdas", lambdas}};
  if (d.is_zero()) {
    v.status = VerdictStatus::Inconclusive;
    v.certificate = Json{{"reason", "Delta vanishes mod p"}};
    return v;
  }
  LaurentPoly num = d * one_minus_t_power(F, 1).pow(q - 1);
  Json rows = Json::array(), witnesses = Json::array();
  for (int l : lambdas) {
    Json row{{"lambda", l}};
    auto quo = exact_divide(num, one_minus_t_power(F, l).pow(q - 1));
    if (!quo) {
      row["outcome"] = "delta_lambda^(q-1) does not divide";
    } else if (auto g = frobenius_root(*quo, q)) {
      row["outcome"] = "witness";
      row["delta_bar"] = normalize(*g).to_string();
      witnesses.push_back(Json{{"lambda", l}, {"delta_bar", normalize(*g).to_string()}});
    } else {
      row["outcome"] = "quotient is not a polynomial in t^q";
    }
    rows.push_back(row);
  }
  v.certificate = Json{{"p", pp->p}, {"delta_mod_p", normalize(d).to_string()}, {"lambdas", rows}, {"witnesses", witnesses}};
  v.status = witnesses.empty() ? VerdictStatus::Obstructed : VerdictStatus::Consistent;
  return v;
}

Verdict murasugi_zeta(const LaurentPoly& delta_k, std::uint32_t q, std::optional<std::vector<LaurentPoly>> candidates) {
  if (!is_prime(q)) throw CriterionError("q = " + std::to_string(q) + " is not prime");
  LaurentPoly delta = as_integer_poly(delta_k);
  std::vector<LaurentPoly> cands;
  if (candidates) {
    for (const auto& c : *candidates) cands.push_back(normalize(as_integer_poly(c)));
  } else {
    for (const auto& c : divisors_over_Q(delta)) {
      Scalar at1 = c.evaluate(Scalar(Integer(1)));
      if (at1.is_unit()) cands.push_back(c);
    }
  }
  Verdict v;
  v.criterion = "murasugi_zeta";
  v.inputs = Json{{"delta", poly_json(delta)}, {"q", q}, {"candidates", poly_list_json(cands)}};
  ZetaSearch z = zeta_search(delta, q, cands);
  v.status = z.status;
  v.certificate = z.certificate;
  return v;
}

// ---------------------------------------------------------------- twisted conditions

QuotientSearch twisted_murasugi_rational(const LaurentPoly& delta_rho, std::uint32_t q) {
  if (!is_prime(q)) throw CriterionError("q = " + std::to_string(q) + " is not prime");
  LaurentPoly delta = as_integer_poly(delta_rho);
  if (delta.is_zero()) throw CriterionError("twisted polynomial is zero");
  QuotientSearch out;
  out.verdict.criterion = "twisted_murasugi_rational";
  out.verdict.inputs = Json{{"delta", poly_json(delta)}, {"q", q}};
  ZetaSearch z = zeta_search(delta, q, divisors_over_Q(delta));
  out.survivors = z.survivors;
  out.verdict.status = z.status;
  out.verdict.certificate = z.certificate;
  return out;
}

namespace {

struct LambdaOutcome {
  Json row;
  bool witness = false;
  bool undecided = false;
};

LambdaOutcome twisted_lambda(const TwistedModpInput& in, const LaurentPoly& lhs, const std::vector<LaurentPoly>& cands,
                             int lambda, std::uint32_t p, const RingSpec& F, int deg_d, int deg_d0) {
  LambdaOutcome out;
  out.row = Json{{"lambda", lambda}};
  int dd = in.n * lambda;
  std::vector<LaurentPoly> deltas;
  std::uint64_t space = 0;
  bool exact = in.axis_delta.has_value();
  if (!exact) {
    // constant term 1, top coefficient +-1 (special linear) or any unit, nd - 1 free coefficients
    long double s = std::pow((long double)p, (long double)std::max(0, dd - 1)) *
                    (in.special_linear ? (p == 2 ? 1 : 2) : (p - 1));
    space = s > 1e18L ? std::uint64_t(1e18) : std::uint64_t(s);
    out.row["delta_space"] = space;
    if (dd < 1 || space > in.search_bound) {
      Verdict dv = degree_feasibility(deg_d, deg_d0, in.n, in.q, {lambda});
      out.row["outcome"] = "search space above bound; degree feasibility";
      out.row["degree_feasibility"] = dv.certificate;
      out.undecided = dv.status != VerdictStatus::Obstructed;
      return out;
    }
  }
  std::uint64_t searched = 0, divisible = 0, frobenius = 0;
  auto test = [&](const LaurentPoly& delta) -> bool {
    ++searched;
    auto quo = exact_divide(lhs, delta.pow(in.q - 1));
    if (!quo) return false;
    ++divisible;
    auto g = frobenius_root(*quo, in.q);
    if (!g) return false;
    ++frobenius;
    bool match = !in.candidates;
    std::string matched;
    for (const auto& c : cands)
      if (equal_up_to_unit(c, *g)) {
        match = true;
        matched = c.to_string();
        break;
      }
    if (!match) return false;
    out.row["witness"] = Json{{"delta", delta.to_string()}, {"delta_bar", normalize(*g).to_string()}};
    return true;
  };
  bool found = false;
  if (exact) {
    found = test(in.axis_delta->map_ring(F));
  } else {
    std::vector<long> mid(std::size_t(dd - 1), 0);
    std::vector<long> tops;
    if (in.special_linear) {
      tops = {1};
      if (p != 2) tops.push_back(long(p) - 1);
    } else {
      for (long c = 1; c < long(p); ++c) tops.push_back(c);
    }
    for (long top : tops) {
      std::fill(mid.begin(), mid.end(), 0);
      while (!found) {
        std::vector<long> coeffs{1};
        coeffs.insert(coeffs.end(), mid.begin(), mid.end());
        coeffs.push_back(top);
        if (test(LaurentPoly::from_integers(F, 0, coeffs))) {
          found = true;
          break;
        }
        std::size_t k = 0;
        while (k < mid.size() && ++mid[k] == long(p)) mid[k++] = 0;
        if (k == mid.size()) break;
      }
      if (found) break;
    }
  }
  out.row["searched"] = searched;
  out.row["divisible"] = divisible;
  out.row["frobenius"] = frobenius;
  out.row["outcome"] = found ? "witness" : "exhausted";
  out.witness = found;
  return out;
}

}  // namespace

Verdict twisted_murasugi_modp(const TwistedModpInput& in) {
  auto pp = prime_power(in.q);
  if (!pp) throw CriterionError("q = " + std::to_string(in.q) + " is not a prime power");
  std::uint32_t p = pp->p;
  RingSpec F = RingSpec::mod_p(p);
  auto reduce = [&](const LaurentPoly& x) {
    if (x.ring().kind() == RingKind::ModP) {
      if (x.ring().prime() != p) throw CriterionError("coefficients mod " + std::to_string(x.ring().prime()) + " but q is a power of " + std::to_string(p));
      return x;
    }
    return as_integer_poly(x).map_ring(F);
  };
  LaurentPoly d = reduce(in.delta_rho), d0 = reduce(in.delta0);
  if (d.is_zero()) throw CriterionError("twisted polynomial vanishes mod p");
  if (d0.is_zero()) throw CriterionError("Delta^0 vanishes mod p");
  if (in.n < 1) throw CriterionError("representation dimension must be positive");
  LaurentPoly lhs = d * d0.pow(in.q - 1);
  std::vector<int> lambdas = in.lambdas;
  if (in.axis_delta) {
    if (!in.axis_lambda) throw CriterionError("axis mode needs the linking number");
    lambdas = {*in.axis_lambda};
  }
  if (lambdas.empty()) lambdas = lambda_candidates(in.q, std::max(1, lhs.span() / (int(in.q - 1) * in.n)));
  std::erase_if(lambdas, [&](int l) { return l < 1 || std::gcd(long(l), long(in.q)) != 1; });
  std::vector<LaurentPoly> cands;
  if (in.candidates)
    for (const auto& c : *in.candidates) cands.push_back(normalize(reduce(c)));

  Verdict v;
  v.criterion = "twisted_murasugi_modp";
  v.inputs = Json{{"delta", poly_json(d)},  {"delta0", poly_json(d0)},          {"q", in.q},
                  {"n", in.n},              {"lambdas", lambdas},               {"special_linear", in.special_linear},
                  {"search_bound", in.search_bound}};
  if (in.candidates) v.inputs["candidates"] = poly_list_json(cands);
  if (in.axis_delta) {
    v.inputs["axis_delta"] = poly_json(in.axis_delta->map_ring(F));
    v.inputs["axis_lambda"] = *in.axis_lambda;
  }
  int deg_d = d.span(), deg_d0 = d0.span();
  auto outcomes = parallel_map<LambdaOutcome>(lambdas.size(), [&](std::size_t i) {
    return twisted_lambda(in, lhs, cands, lambdas[i], p, F, deg_d, deg_d0);
  });
  Json rows = Json::array();
  bool witness = false, undecided = false;
  for (const auto& o : outcomes) {
    rows.push_back(o.row);
    witness = witness || o.witness;
    undecided = undecided || o.undecided;
  }
  v.certificate = Json{{"p", p}, {"lhs", normalize(lhs).to_string()}, {"lambdas", rows}};
  v.status = witness ? VerdictStatus::Consistent : undecided ? VerdictStatus::Inconclusive : VerdictStatus::Obstructed;
  return v;
}

Verdict degree_feasibility(int deg_delta, int deg_delta0, int n, std::uint32_t q, std::vector<int> lambdas) {
  if (q < 2) throw CriterionError("period must be at least 2");
  Verdict v;
  v.criterion = "degree_feasibility";
  std::erase_if(lambdas, [&](int l) { return l < 1 || std::gcd(long(l), long(q)) != 1; });
  v.inputs = Json{{"deg_delta", deg_delta}, {"deg_delta0", deg_delta0}, {"n", n}, {"q", q}, {"lambdas", lambdas}};
  Json rows = Json::array(), sols = Json::array();
  for (int l : lambdas) {
    long a = long(n) * l - deg_delta0;
    long total = deg_delta + a;  // (k + a) q = deg + a
    Json row{{"lambda", l}, {"equation", "(k + " + std::to_string(a) + ") * " + std::to_string(q) + " = " + std::to_string(total)}};
    if (total % long(q) == 0 && total / long(q) - a >= 0) {
      row["k"] = total / long(q) - a;
      sols.push_back(row);
    }
    rows.push_back(row);
  }
  v.certificate = Json{{"lambdas", rows}, {"solutions", sols}};
  v.status = sols.empty() ? VerdictStatus::Obstructed : VerdictStatus::Consistent;
  return v;
}

Verdict degree_feasibility_all_primes(int deg_delta, int deg_delta0, int n, std::uint32_t min_prime,
                                      std::vector<int> lambdas) {
  Verdict v;
  v.criterion = "degree_feasibility_all_primes";
  std::erase_if(lambdas, [](int l) { return l < 1; });
  v.inputs = Json{{"deg_delta", deg_delta}, {"deg_delta0", deg_delta0}, {"n", n}, {"min_prime", min_prime}, {"lambdas", lambdas}};
  Json rows = Json::array(), sols = Json::array();
  for (int l : lambdas) {
    long a = long(n) * l - deg_delta0;
    long total = deg_delta + a;
    Json row{{"lambda", l}, {"equation", "(k + " + std::to_string(a) + ") * p = " + std::to_string(total)}};
    Json primes = Json::array();
    if (total == 0) {
      if (a <= 0) {
        row["every_prime"] = true;
        sols.push_back(row);
      }
    } else if (total > 0) {
      for (std::uint32_t p : prime_factors(Integer(total))) {
        if (p < min_prime || std::gcd(long(l), long(p)) != 1) continue;
        if (total / long(p) - a >= 0) primes.push_back(Json{{"p", p}, {"k", total / long(p) - a}});
      }
      if (!primes.empty()) sols.push_back(row);
    }
    row["primes"] = primes;
    rows.push_back(row);
  }
  v.certificate = Json{{"lambdas", rows}, {"solutions", sols}};
  v.status = sols.empty() ? VerdictStatus::Obstructed : VerdictStatus::Consistent;
  return v;
}

// ---------------------------------------------------------------- orbits

Verdict orbit_criterion(std::uint32_t q, const std::vector<LaurentPoly>& polys, int fixed_class_bound) {
  if (!is_prime(q)) throw CriterionError("q = " + std::to_string(q) + " is not prime");
  Verdict v;
  v.criterion = "orbit_criterion";
  std::vector<LaurentPoly> norm;
  for (const auto& p : polys) norm.push_back(normalize(p));
  v.inputs = Json{{"q", q}, {"polys", poly_list_json(norm)}, {"fixed_class_bound", fixed_class_bound}};
  std::set<std::string> distinct;
  for (const auto& p : norm) distinct.insert(p.to_string());
  int m = int(norm.size()), d = int(distinct.size());
  int allowed = -1;
  Json options = Json::array();
  for (int f = 0; f <= std::min(fixed_class_bound, m); ++f) {
    if ((m - f) % int(q) != 0) continue;
    int cap = f + (m - f) / int(q);
    options.push_back(Json{{"fixed", f}, {"max_distinct", cap}});
    allowed = std::max(allowed, cap);
  }
  v.certificate = Json{{"classes", m}, {"distinct", d}, {"fixed_options", options}, {"max_distinct", allowed}};
  v.status = d > allowed ? VerdictStatus::Obstructed : VerdictStatus::Consistent;
  return v;
}

int transfer_fixed_bound(const std::vector<Integer>& h1_factors, std::uint32_t p, bool quotient_delta_is_one, int m) {
  bool nontrivial = false;
  for (const auto& x : h1_factors) nontrivial = nontrivial || (x == 0) || mpz_divisible_ui_p(x.get_mpz_t(), p);
  if (!nontrivial) throw CriterionError("the " + std::to_string(p) + "-primary part of H1 is trivial");
  return quotient_delta_is_one ? 0 : m;
}

// ---------------------------------------------------------------- free periods

LaurentPoly hartley_product(const LaurentPoly& delta_bar, std::uint32_t q) {
  LaurentPoly db = as_integer_poly(delta_bar);
  if (q == 1) return db;
  RingSpec K = RingSpec::cyclotomic(q);
  LaurentPoly acc = LaurentPoly::constant(K, 1);
  for (std::uint32_t i = 0; i < q; ++i) acc *= twist_by_root(db, q, long(i));
  std::vector<Scalar> c;
  for (const auto& x : acc.coefficients()) {
    auto r = x.cyclotomic().as_rational();
    if (!r) throw ComputationError("norm product is not rational");
    c.push_back(Scalar(r->get_num()));
  }
  return LaurentPoly(RingSpec::integers(), acc.low(), std::move(c));
}

bool hartley_relation_check(const LaurentPoly& delta, const LaurentPoly& delta_bar, std::uint32_t q) {
  return equal_up_to_unit(hartley_product(delta_bar, q), as_integer_poly(delta).substitute_power(int(q)));
}

Verdict free_period_small_q(const LaurentPoly& f0, std::uint32_t q, std::size_t subset_bound) {
  if (!is_prime(q)) throw CriterionError("q = " + std::to_string(q) + " is not prime");
  LaurentPoly f = normalize(as_integer_poly(f0));
  Verdict v;
  v.criterion = "free_period_small_q";
  v.inputs = Json{{"f", poly_json(f)}, {"q", q}, {"subset_bound", subset_bound}};
  if (f.span() <= 0) {
    v.status = VerdictStatus::Consistent;
    v.certificate = Json{{"witness", "1"}};
    return v;
  }
  Factorization fq = factor_over_Q(f.substitute_power(int(q)));
  std::size_t space = 1;
  for (const auto& x : fq.factors) {
    space *= std::size_t(x.multiplicity + 1);
    if (space > subset_bound) throw ComputationError("too many divisors of f(t^q) to enumerate");
  }
  Json degrees = Json::array();
  for (const auto& x : fq.factors) degrees.push_back(Json{{"degree", x.poly.span()}, {"multiplicity", x.multiplicity}});
  std::vector<int> e(fq.factors.size(), 0);
  std::size_t tested = 0;
  std::optional<LaurentPoly> witness;
  while (true) {
    int deg = 0;
    for (std::size_t i = 0; i < e.size(); ++i) deg += e[i] * fq.factors[i].poly.span();
    if (deg == f.span()) {
      LaurentPoly g = LaurentPoly::constant(RingSpec::integers(), 1);
      for (std::size_t i = 0; i < e.size(); ++i) g *= fq.factors[i].poly.pow(unsigned(e[i]));
      ++tested;
      if (hartley_relation_check(f, g, q)) {
        witness = normalize(g);
        break;
      }
    }
    std::size_t k = 0;
    while (k < e.size() && ++e[k] > fq.factors[k].multiplicity) e[k++] = 0;
    if (k == e.size()) break;
  }
  v.certificate = Json{{"factor_degrees", degrees}, {"candidates_tested", tested}};
  if (witness) v.certificate["witness"] = witness->to_string();
  v.status = witness ? VerdictStatus::Consistent : VerdictStatus::Obstructed;
  return v;
}

std::string TorsionPoint::to_string() const {
  return "zeta_" + std::to_string(order) + "^" + std::to_string(power);
}

std::vector<TorsionPoint> default_torsion_points() {
  return {{1, 0}, {2, 1}, {4, 1}, {4, 3}, {3, 1}, {3, 2}, {6, 1}, {6, 5}};
}

bool is_product_of_cyclotomics(const LaurentPoly& f0) {
  LaurentPoly f = normalize(as_integer_poly(f0));
  if (f.span() <= 0) return true;
  Factorization fac = factor_over_Q(f);
  for (const auto& x : fac.factors) {
    int d = x.poly.span();
    bool found = false;
    // phi(n) >= sqrt(n / 2)
    for (std::uint32_t n = 1; !found && n <= std::uint32_t(2 * d * d + 2); ++n)
      if (int(euler_phi(n)) == d && normalize(cyclotomic_polynomial(n)) == normalize(x.poly)) found = true;
    if (!found) return false;
  }
  return true;
}

Verdict free_period_large_q(const LaurentPoly& f0, const std::vector<TorsionPoint>& points) {
  LaurentPoly f = as_integer_poly(f0);
  f = f.shifted(-f.low());
  if (f.span() < 1) throw CriterionError("factor must be nonconstant");
  if (f.leading() == Scalar(Integer(-1))) f = -f;
  if (!(f.leading() == Scalar(Integer(1)))) throw CriterionError("factor is not monic up to sign");
  if (!f.coeff(0).is_unit()) throw CriterionError("factor must have constant term +-1");
  Verdict v;
  v.criterion = "free_period_large_q";
  Json pts = Json::array();
  for (const auto& p : points) pts.push_back(Json{{"order", p.order}, {"power", p.power}});
  v.inputs = Json{{"f", poly_json(f)}, {"points", pts}};

  // distinct points as reduced (order, power)
  std::set<std::pair<std::uint32_t, long>> seen;
  Json evals = Json::array();
  std::uint32_t largest = 0;
  int forced = 0;
  for (const auto& pt : points) {
    if (pt.order == 0) throw CriterionError("torsion point of order 0");
    long pw = ((pt.power % long(pt.order)) + long(pt.order)) % long(pt.order);
    long g = std::gcd(long(pt.order), pw);
    std::uint32_t k = g == 0 ? 1 : std::uint32_t(long(pt.order) / g);
    long j = g == 0 ? 0 : pw / g;
    if (k == 1) j = 0;
    if (!seen.insert({k, j}).second) continue;
    if (k != 1 && k != 2 && k != 3 && k != 4 && k != 6) throw CriterionError("torsion points must have order 1, 2, 3, 4 or 6");
    CycScalar value;
    std::uint32_t ring = k <= 2 ? 1 : k;
    if (k <= 2) {
      Scalar x = f.evaluate(Scalar(Integer(k == 1 ? 1 : -1)));
      value = CycScalar(1, false, {Rational(x.integer())});
    } else {
      value = cyc_eval(f, k, j);
    }
    Json row{{"point", TorsionPoint{k, j}.to_string()}, {"value", value.to_string()}};
    if (value.is_zero()) {
      row["forced"] = false;
      row["reason"] = "f vanishes here";
      evals.push_back(row);
      continue;
    }
    // g(alpha) divides f(alpha^q), a Galois conjugate of f(alpha)
    std::vector<CycScalar> units;
    for (long i = 0; i < long(ring == 1 ? 1 : ring); ++i) {
      CycScalar z = CycScalar::zeta_power(ring, false, i);
      units.push_back(z);
      units.push_back(-z);
    }
    std::set<std::vector<Rational>> cand_seen;
    std::vector<CycScalar> cands;
    Json divisors = Json::array();
    for (long s = 1; s < long(std::max<std::uint32_t>(k, 2)); ++s) {
      if (std::gcd(s, long(k)) != 1) continue;
      CycScalar conj = ring == 1 ? value : value.galois(s);
      for (const auto& dvs : divisors_up_to_units(conj).divisors) {
        for (const auto& u : units) {
          CycScalar c = dvs * u;
          if (cand_seen.insert(c.coeffs()).second) cands.push_back(c);
        }
      }
      if (s == 1)
        for (const auto& dvs : divisors_up_to_units(conj).divisors) divisors.push_back(dvs.to_string());
    }
    std::uint32_t worst = 0;
    for (const auto& c : cands) {
      CycScalar y = value - c;
      if (y.is_zero()) continue;
      Integer content = 0;
      for (const auto& r : y.coeffs()) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), r.get_num_mpz_t());
      for (auto pr : prime_factors(content)) worst = std::max(worst, pr);
    }
    row["divisors"] = divisors;
    row["candidates"] = cands.size();
    row["largest_prime_dividing_a_difference"] = worst;
    row["forced"] = true;
    largest = std::max(largest, worst);
    ++forced;
    evals.push_back(row);
  }
  std::uint32_t threshold = std::max<std::uint32_t>(11, largest);
  int roots = 1 + forced;  // h(0) = 0 from the constant terms
  v.certificate = Json{{"threshold", threshold}, {"evaluations", evals}, {"roots_of_h", roots}, {"degree_f", f.span()}};
  if (roots < f.span()) {
    v.status = VerdictStatus::Inconclusive;
    v.certificate["reason"] = "not enough roots to force h = 0";
    return v;
  }
  v.certificate["g_equals_f"] = true;
  std::uint32_t sample = next_prime(threshold);
  bool divides = exact_divide(f.substitute_power(int(sample)), f).has_value();
  v.certificate["sample_prime"] = sample;
  v.certificate["f_divides_f_of_t_to_the_sample"] = divides;
  if (divides || is_product_of_cyclotomics(f)) {
    v.status = VerdictStatus::Inconclusive;
    v.certificate["reason"] = "f may divide f(t^q): every root of f lies on the unit circle";
    return v;
  }
  // A root of largest modulus M > 1 would have q-th power of modulus M^q > M, so f never divides f(t^q).
  v.certificate["root_off_unit_circle"] = true;
  v.status = VerdictStatus::Obstructed;
  return v;
}

Verdict hartley_screen(const LaurentPoly& delta_k, std::uint32_t q) {
  if (!is_prime(q)) throw CriterionError("q = " + std::to_string(q) + " is not prime");
  LaurentPoly delta = normalize(as_integer_poly(delta_k));
  Verdict v;
  v.criterion = "hartley_screen";
  v.inputs = Json{{"delta", poly_json(delta)}, {"q", q}};
  Json rows = Json::array();
  bool obstructed = false;
  if (delta.span() > 0) {
    for (const auto& x : factor_over_Q(delta).factors) {
      Verdict sub = free_period_small_q(x.poly, q);
      rows.push_back(Json{{"factor", x.poly.to_string()}, {"status", to_string(sub.status)}, {"certificate", sub.certificate}});
      if (sub.status == VerdictStatus::Obstructed) {
        obstructed = true;
        break;
      }
    }
  }
  v.certificate = Json{{"factors", rows}};
  v.status = obstructed ? VerdictStatus::Obstructed : VerdictStatus::Consistent;
  return v;
}

Json FreePeriodReport::to_json() const {
  std::string conclusion = overall == VerdictStatus::Obstructed   ? "no free periods"
                           : overall == VerdictStatus::Consistent ? "free periods not excluded"
                                                                  : "undecided";
  return Json{{"per_prime", per_prime}, {"threshold", threshold}, {"exceptional", exceptional},
              {"overall", to_string(overall)}, {"conclusion", conclusion}};
}

FreePeriodReport free_period_report(const LaurentPoly& delta_k, const LaurentPoly& twisted_factor,
                                    const std::vector<TorsionPoint>& points) {
  FreePeriodReport rep;
  rep.per_prime = Json::object();
  LaurentPoly f = normalize(as_integer_poly(twisted_factor));
  if (f.span() <= 0) {
    rep.overall = VerdictStatus::Consistent;
    rep.per_prime["all"] = Json{{"status", "Consistent"}, {"stage", "trivial factor"}};
    return rep;
  }
  Verdict large = free_period_large_q(f, points);
  rep.threshold = large.certificate.at("threshold").get<std::uint32_t>();
  std::vector<std::uint32_t> primes;
  for (std::uint32_t q = 2; q <= rep.threshold; ++q)
    if (is_prime(q)) primes.push_back(q);
  rep.exceptional = primes;
  struct Stage {
    std::string name;
    Verdict verdict;
  };
  auto stages = parallel_map<Stage>(primes.size(), [&](std::size_t i) {
    Verdict classical = hartley_screen(delta_k, primes[i]);
    if (classical.status == VerdictStatus::Obstructed) return Stage{"classical", classical};
    return Stage{"twisted-small-q", free_period_small_q(f, primes[i])};
  });
  bool all = large.status == VerdictStatus::Obstructed, any_consistent = false;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    rep.per_prime[std::to_string(primes[i])] =
        Json{{"status", to_string(stages[i].verdict.status)}, {"stage", stages[i].name}, {"verdict", verdict_cert(stages[i].verdict)}};
    all = all && stages[i].verdict.status == VerdictStatus::Obstructed;
    any_consistent = any_consistent || stages[i].verdict.status == VerdictStatus::Consistent;
  }
  rep.per_prime[">" + std::to_string(rep.threshold)] =
      Json{{"status", to_string(large.status)}, {"stage", "twisted-large-q"}, {"verdict", verdict_cert(large)}};
  rep.overall = all ? VerdictStatus::Obstructed : any_consistent ? VerdictStatus::Consistent : VerdictStatus::Inconclusive;
  return rep;
}

// ---------------------------------------------------------------- reverification

bool reverify(const Verdict& v) {
  const Json& in = v.inputs;
  Verdict r;
  const std::string& c = v.criterion;
  if (c == "murasugi_modp") {
    r = murasugi_modp(poly_from_json(in.at("delta")), in.at("q").get<std::uint32_t>(), in.at("lambdas").get<std::vector<int>>());
  } else if (c == "murasugi_zeta") {
    r = murasugi_zeta(poly_from_json(in.at("delta")), in.at("q").get<std::uint32_t>(), poly_list_from_json(in.at("candidates")));
  } else if (c == "twisted_murasugi_rational") {
    r = twisted_murasugi_rational(poly_from_json(in.at("delta")), in.at("q").get<std::uint32_t>()).verdict;
  } else if (c == "twisted_murasugi_modp") {
    TwistedModpInput t;
    t.delta_rho = poly_from_json(in.at("delta"));
    t.delta0 = poly_from_json(in.at("delta0"));
    t.q = in.at("q").get<std::uint32_t>();
    t.n = in.at("n").get<int>();
    t.lambdas = in.at("lambdas").get<std::vector<int>>();
    t.special_linear = in.at("special_linear").get<bool>();
    t.search_bound = in.at("search_bound").get<std::uint64_t>();
    if (in.contains("candidates")) t.candidates = poly_list_from_json(in.at("candidates"));
    if (in.contains("axis_delta")) {
      t.axis_delta = poly_from_json(in.at("axis_delta"));
      t.axis_lambda = in.at("axis_lambda").get<int>();
    }
    r = twisted_murasugi_modp(t);
  } else if (c == "degree_feasibility") {
    r = degree_feasibility(in.at("deg_delta"), in.at("deg_delta0"), in.at("n"), in.at("q").get<std::uint32_t>(),
                           in.at("lambdas").get<std::vector<int>>());
  } else if (c == "degree_feasibility_all_primes") {
    r = degree_feasibility_all_primes(in.at("deg_delta"), in.at("deg_delta0"), in.at("n"),
                                      in.at("min_prime").get<std::uint32_t>(), in.at("lambdas").get<std::vector<int>>());
  } else if (c == "orbit_criterion") {
    r = orbit_criterion(in.at("q").get<std::uint32_t>(), poly_list_from_json(in.at("polys")), in.at("fixed_class_bound"));
  } else if (c == "free_period_small_q") {
    r = free_period_small_q(poly_from_json(in.at("f")), in.at("q").get<std::uint32_t>(), in.at("subset_bound").get<std::size_t>());
  } else if (c == "free_period_large_q") {
    std::vector<TorsionPoint> pts;
    for (const auto& p : in.at("points")) pts.push_back({p.at("order").get<std::uint32_t>(), p.at("power").get<long>()});
    r = free_period_large_q(poly_from_json(in.at("f")), pts);
  } else if (c == "hartley_screen") {
    r = hartley_screen(poly_from_json(in.at("delta")), in.at("q").get<std::uint32_t>());
  } else {
    throw CriterionError("unknown criterion " + c);
  }
  return r.status == v.status && r.certificate == v.certificate && r.inputs == v.inputs;
}

}  // namespace twistlab
