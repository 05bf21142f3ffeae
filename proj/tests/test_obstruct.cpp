#include <set>

#include "doctest.h"
#include "support.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/obstruct/obstruct.hpp"
#include "twistlab/twisted/twisted.hpp"

using namespace twistlab;
using testsupport::P;

namespace {

const std::vector<KnotRecord>& corpus() {
  static const auto c = load_corpus(default_corpus_path());
  return c;
}

LaurentPoly Fp(const LaurentPoly& p, std::uint32_t q) { return p.map_ring(RingSpec::mod_p(q)); }

// Direct search for (lambda, Dbar) with Delta (1-t)^(q-1) = Dbar^q (1-t^lambda)^(q-1) mod p
// over all Dbar of degree <= d; no Frobenius shortcut.
std::set<std::pair<int, std::string>> brute_murasugi(const LaurentPoly& delta, std::uint32_t p, std::uint32_t q, int lmax,
                                                     int d) {
  RingSpec F = RingSpec::mod_p(p);
  std::set<std::pair<int, std::string>> out;
  LaurentPoly lhs = Fp(delta, p) * P("(1 - t)^" + std::to_string(q - 1)).map_ring(F);
  std::vector<long> c(std::size_t(d + 1), 0);
  while (true) {
    LaurentPoly db = LaurentPoly::from_integers(F, 0, c);
    if (!db.is_zero() && !db.coeff(0).is_zero())
      for (int l = 1; l <= lmax; ++l) {
        if (l % int(p) == 0) continue;
        LaurentPoly rhs = db.pow(q) * P("(1 - t^" + std::to_string(l) + ")^" + std::to_string(q - 1)).map_ring(F);
        if (equal_up_to_unit(lhs, rhs)) out.insert({l, normalize(db).to_string()});
      }
    std::size_t k = 0;
    while (k < c.size() && ++c[k] == long(p)) c[k++] = 0;
    if (k == c.size()) break;
  }
  return out;
}

std::set<std::pair<int, std::string>> witnesses(const Verdict& v) {
  std::set<std::pair<int, std::string>> out;
  for (const auto& w : v.certificate["witnesses"]) out.insert({w["lambda"].get<int>(), w["delta_bar"].get<std::string>()});
  return out;
}

std::vector<std::string> survivors(const Verdict& v) { return v.certificate["survivors"].get<std::vector<std::string>>(); }

LaurentPoly twisted_d5(const char* name, std::size_t index = 0) {
  Diagram d = diagram_from_spec(name, &corpus());
  Presentation p = wirtinger(d);
  return twisted_alexander(p, dihedral_integral_lift(p, enumerate_colorings(d, 5).at(index)));
}

}  // namespace

TEST_CASE("prime powers and linking number candidates") {
  CHECK(prime_power(9)->p == 3);
  CHECK(prime_power(9)->r == 2);
  CHECK(!prime_power(6));
  CHECK(!prime_power(1));
  CHECK(lambda_candidates(3, 5) == std::vector<int>{1, 2, 4, 5});
}

TEST_CASE("Frobenius identity over F_p") {
  std::mt19937_64 rng(17);
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 8u, 9u, 25u}) {
    std::uint32_t p = prime_power(q)->p;
    for (int i = 0; i < 10; ++i) {
      LaurentPoly a = testsupport::random_poly(rng, -2, 5, 50, RingSpec::mod_p(p));
      CHECK(a.pow(q) == a.substitute_power(int(q)));
    }
  }
}

TEST_CASE("classical mod p condition") {
  Verdict tre = murasugi_modp(P("t^2 - t + 1"), 3);
  CHECK(tre.status == VerdictStatus::Consistent);
  CHECK(witnesses(tre) == brute_murasugi(P("t^2 - t + 1"), 3, 3, 3, 1));
  CHECK(witnesses(tre) == std::set<std::pair<int, std::string>>{{2, "1*t^0"}});

  LaurentPoly d162 = classical_alexander(diagram_from_spec("10_162", &corpus()));
  Verdict a = murasugi_modp(d162, 3, {1, 2, 4, 5, 7});
  CHECK(a.status == VerdictStatus::Consistent);
  CHECK(witnesses(a) == std::set<std::pair<int, std::string>>{{1, "1*t^0"}});

  LaurentPoly d847 = classical_alexander(diagram_from_spec("12n847", &corpus()));
  CHECK(equal_up_to_unit(Fp(d847, 3), Fp(P("(1 + t + t^2 + t^3)^2"), 3)));
  Verdict b = murasugi_modp(d847, 3);
  CHECK(b.status == VerdictStatus::Consistent);
  CHECK(witnesses(b) == std::set<std::pair<int, std::string>>{{4, "1*t^0"}});
  CHECK(witnesses(b) == brute_murasugi(d847, 3, 3, 4, 1));

  Verdict c = murasugi_modp(P("t^2 - 3 t + 1"), 3);
  CHECK(c.status == VerdictStatus::Obstructed);
  CHECK(brute_murasugi(P("t^2 - 3 t + 1"), 3, 3, 2, 1).empty());
  // mod 2 it is consistent through lambda = 3: (t^2 + t + 1)(1 + t) = 1 + t^3
  CHECK(witnesses(murasugi_modp(P("t^2 - 3 t + 1"), 2)) == brute_murasugi(P("t^2 - 3 t + 1"), 2, 2, 3, 1));
  CHECK_THROWS_AS(murasugi_modp(P("t^2 - t + 1"), 6), CriterionError);
}

TEST_CASE("mod p condition recovers planted quotients") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    std::uint32_t q = std::vector<std::uint32_t>{2, 3, 4, 5, 9}[trial % 5];
    std::uint32_t p = prime_power(q)->p;
    LaurentPoly db = testsupport::random_poly(rng, 0, int(rng() % 3), 5);
    if (db.is_zero() || Fp(db, p).is_zero()) continue;
    auto ls = lambda_candidates(q, 4);
    int l = ls[rng() % ls.size()];
    LaurentPoly dl = *exact_divide(P("1 - t^" + std::to_string(l)), P("1 - t"));
    LaurentPoly delta = db.pow(q) * dl.pow(q - 1);
    CAPTURE(delta.to_string());
    CAPTURE(q);
    Verdict v = murasugi_modp(delta, q);
    CHECK(v.status == VerdictStatus::Consistent);
    CHECK(witnesses(v).count({l, normalize(Fp(db, p)).to_string()}) == 1);
  }
}

TEST_CASE("cyclotomic Murasugi condition") {
  LaurentPoly d162 = classical_alexander(diagram_from_spec("10_162", &corpus()));
  Verdict a = murasugi_zeta(d162, 3);
  CHECK(a.status == VerdictStatus::Consistent);
  CHECK(survivors(a) == std::vector<std::string>{normalize(d162).to_string()});

  CHECK(murasugi_zeta(P("1"), 5).status == VerdictStatus::Consistent);
  Verdict tre = murasugi_zeta(P("t^2 - t + 1"), 3, std::vector<LaurentPoly>{P("1")});
  CHECK(tre.status == VerdictStatus::Consistent);

  // t^2 - t + 1 splits over Q(zeta_3); t^2 - 3t + 1 (discriminant 5) does not
  LaurentPoly d847 = classical_alexander(diagram_from_spec("12n847", &corpus()));
  std::set<std::string> want;
  for (const char* s : {"1", "t^2 - t + 1", "(t^2 - 3 t + 1)^2", "(t^2 - t + 1)(t^2 - 3 t + 1)^2"})
    want.insert(normalize(P(s)).to_string());
  auto got = survivors(murasugi_zeta(d847, 3));
  CHECK(std::set<std::string>(got.begin(), got.end()) == want);

  Verdict c = murasugi_zeta(P("t^2 - 3 t + 1"), 3, std::vector<LaurentPoly>{P("1")});
  CHECK(c.status == VerdictStatus::Obstructed);
  CHECK(murasugi_zeta(P("t^2 - 3 t + 1"), 5, std::vector<LaurentPoly>{P("1")}).status == VerdictStatus::Inconclusive);
  CHECK_THROWS_AS(murasugi_zeta(P("1"), 4), CriterionError);
}

TEST_CASE("rational twisted condition") {
  LaurentPoly dr = twisted_d5("10_162");
  LaurentPoly g = P("11 t^8 - 21 t^6 - 39 t^4 - 21 t^2 + 11");
  QuotientSearch qs = twisted_murasugi_rational(dr, 3);
  REQUIRE(!qs.survivors.empty());
  bool has_full = false;
  for (const auto& s : qs.survivors) {
    CHECK(exact_divide(s, g).has_value());
    has_full = has_full || equal_up_to_unit(s, dr);
  }
  CHECK(has_full);

  // planted norm: Phi_3 * F F^sigma with F = t + 1 + 2 zeta
  RingSpec K = RingSpec::cyclotomic(3);
  LaurentPoly f = parse_laurent("t + 1 + 2 z", K);
  LaurentPoly n = f * f.galois(2);
  std::vector<Scalar> c;
  for (const auto& x : n.coefficients()) c.push_back(Scalar(x.cyclotomic().as_rational()->get_num()));
  LaurentPoly nz(RingSpec::integers(), n.low(), c);
  CHECK(nz == P("t^2 + 3"));
  QuotientSearch planted = twisted_murasugi_rational(P("t^2 + t + 1") * nz, 3);
  auto names = survivors(planted.verdict);
  CHECK(std::count(names.begin(), names.end(), normalize(P("t^2 + t + 1")).to_string()) == 1);

  Verdict sq = murasugi_zeta(P("(t - 1)^2"), 3, std::vector<LaurentPoly>{P("(t - 1)^2"), P("1")});
  CHECK(survivors(sq).size() == 2);
}

TEST_CASE("period three is obstructed for 10_162 by the twisted conditions") {
  Diagram d = diagram_from_spec("10_162", &corpus());
  Presentation p = wirtinger(d);
  auto r = dihedral_integral_lift(p, enumerate_colorings(d, 5)[0]);
  auto res = twisted_alexander_full(p, r);
  auto classical = murasugi_modp(classical_alexander(d), 3);
  std::vector<int> lambdas;
  for (const auto& w : classical.certificate["witnesses"]) lambdas.push_back(w["lambda"].get<int>());
  CHECK(lambdas == std::vector<int>{1});
  QuotientSearch qs = twisted_murasugi_rational(res.delta, 3);
  TwistedModpInput in;
  in.delta_rho = res.delta;
  in.delta0 = res.delta0;
  in.q = 3;
  in.n = 4;
  in.lambdas = lambdas;
  in.candidates = qs.survivors;
  Verdict v = twisted_murasugi_modp(in);
  CHECK(v.status == VerdictStatus::Obstructed);
  CHECK(reverify(v));
}

TEST_CASE("mod p twisted condition on planted data") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    std::uint32_t q = trial % 2 ? 3 : 2, p = q;
    RingSpec F = RingSpec::mod_p(p);
    int n = 1 + trial % 2, l = 1;
    // delta = (1 - t) e(t), e(0) = 1, degree n
    std::vector<long> ec{1};
    for (int i = 1; i + 1 < n; ++i) ec.push_back(long(rng() % p));
    if (n > 1) ec.push_back(1 + long(rng() % (p - 1)));
    LaurentPoly e = LaurentPoly::from_integers(RingSpec::integers(), 0, ec);
    LaurentPoly delta = P("1 - t") * e;
    LaurentPoly db = testsupport::random_poly(rng, 0, 1 + int(rng() % 2), 3);
    if (Fp(db, p).span() < 1 || Fp(db, p).coeff(0).is_zero()) continue;
    LaurentPoly dk = *exact_divide(db.substitute_power(int(q)) * delta.pow(q - 1), P("1 - t").pow(q - 1));
    TwistedModpInput in;
    in.delta_rho = dk;
    in.delta0 = P("1 - t");
    in.q = q;
    in.n = n;
    in.lambdas = {l};
    in.candidates = std::vector<LaurentPoly>{db};
    CAPTURE(dk.to_string());
    Verdict v = twisted_murasugi_modp(in);
    CHECK(v.status == VerdictStatus::Consistent);
    CHECK(reverify(v));
    (void)F;
  }
  TwistedModpInput triv;
  triv.delta_rho = P("1");
  triv.delta0 = P("1 - t");
  triv.q = 3;
  triv.n = 1;
  triv.lambdas = {1};
  CHECK(twisted_murasugi_modp(triv).status == VerdictStatus::Consistent);
  triv.axis_delta = P("1 - t");
  triv.axis_lambda = 1;
  CHECK(twisted_murasugi_modp(triv).status == VerdictStatus::Consistent);
  triv.axis_delta = P("1 + t");
  CHECK(twisted_murasugi_modp(triv).status == VerdictStatus::Obstructed);

  // too many delta candidates: only degree counting runs
  TwistedModpInput big;
  big.delta_rho = P("1 + t^14");
  big.delta0 = P("1 - t");
  big.q = 7;
  big.n = 5;
  big.lambdas = {1};
  big.search_bound = 100;
  Verdict bv = twisted_murasugi_modp(big);
  CHECK(bv.status == VerdictStatus::Obstructed);
  CHECK(bv.certificate["lambdas"][0]["outcome"] == "search space above bound; degree feasibility");
  CHECK_THROWS_AS(twisted_murasugi_modp(TwistedModpInput{P("1"), P("1"), 6}), CriterionError);
}

TEST_CASE("degree feasibility") {
  for (std::uint32_t p : {7u, 11u, 13u, 17u, 19u, 23u}) {
    CHECK(degree_feasibility(14, 1, 5, p, {1}).status == VerdictStatus::Obstructed);
    CHECK(degree_feasibility(12, 1, 5, p, {1}).status == VerdictStatus::Obstructed);
  }
  Verdict a = degree_feasibility_all_primes(14, 1, 5, 7, {1});
  CHECK(a.status == VerdictStatus::Obstructed);
  CHECK(a.certificate["lambdas"][0]["equation"] == "(k + 4) * p = 18");
  Verdict b = degree_feasibility_all_primes(12, 1, 5, 7, {1});
  CHECK(b.status == VerdictStatus::Obstructed);
  CHECK(b.certificate["lambdas"][0]["equation"] == "(k + 4) * p = 16");
  CHECK(degree_feasibility_all_primes(14, 1, 5, 2, {1}).status == VerdictStatus::Consistent);  // p = 2, 3
  CHECK(degree_feasibility(0, 5, 5, 7, {1}).status == VerdictStatus::Consistent);
  // brute force over primes and small k
  for (int deg = 0; deg < 30; ++deg)
    for (int d0 = 0; d0 < 3; ++d0) {
      bool any = false;
      for (std::uint32_t p = 7; p < 80; ++p) {
        if (!is_prime(p)) continue;
        bool direct = false;
        for (int k = 0; k <= 30; ++k) direct = direct || deg == k * int(p) + (5 - d0) * int(p - 1);
        CHECK((degree_feasibility(deg, d0, 5, p, {1}).status == VerdictStatus::Consistent) == direct);
        any = any || direct;
      }
      CHECK((degree_feasibility_all_primes(deg, d0, 5, 7, {1}).status == VerdictStatus::Consistent) == any);
    }
}

TEST_CASE("orbit criterion and transfer bound") {
  auto polys = [](int m, int d) {
    std::vector<LaurentPoly> out;
    for (int i = 0; i < m; ++i) out.push_back(P("1 + t^" + std::to_string(1 + i % d)));
    return out;
  };
  CHECK(orbit_criterion(3, polys(6, 4), 0).status == VerdictStatus::Obstructed);
  CHECK(orbit_criterion(3, polys(6, 2), 0).status == VerdictStatus::Consistent);
  CHECK(orbit_criterion(5, polys(1, 1), 1).status == VerdictStatus::Consistent);
  // raising the bound never creates an obstruction
  for (int m = 1; m < 10; ++m)
    for (int d = 1; d <= m; ++d)
      for (int b = 0; b < m; ++b)
        if (orbit_criterion(3, polys(m, d), b).status == VerdictStatus::Consistent)
          CHECK(orbit_criterion(3, polys(m, d), b + 1).status == VerdictStatus::Consistent);
  std::vector<Integer> h{5, 15};
  CHECK(transfer_fixed_bound(h, 5, true, 6) == 0);
  CHECK(transfer_fixed_bound(h, 5, false, 6) == 6);
  CHECK_THROWS_AS(transfer_fixed_bound(h, 7, true, 6), CriterionError);
}

TEST_CASE("Hartley relation") {
  CHECK(hartley_relation_check(P("1"), P("1"), 5));
  CHECK(!hartley_relation_check(P("t - 2"), P("1"), 3));
  CHECK(hartley_product(P("t - 2"), 2) == P("4 - t^2"));
  CHECK(hartley_relation_check(P("t - 4"), P("t - 2"), 2));
  std::mt19937_64 rng(41);
  for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 4; ++i) {
      LaurentPoly db = testsupport::random_poly(rng, 0, 1 + int(rng() % 3), 6);
      if (db.is_zero()) continue;
      LaurentPoly n = hartley_product(db, q);
      auto delta = is_power_substitution(n.shifted(-n.low()), int(q));
      REQUIRE(delta);
      CHECK(hartley_relation_check(*delta, db, q));
    }
  }
}

TEST_CASE("cyclotomic product identity") {
  for (std::uint32_t q = 1; q <= 30; ++q) {
    LaurentPoly prod = P("1");
    for (std::uint32_t d = 1; d <= q; ++d)
      if (q % d == 0) prod *= cyclotomic_polynomial(d);
    CHECK(prod == P("t^" + std::to_string(q) + " - 1"));
    CHECK(is_product_of_cyclotomics(cyclotomic_polynomial(q)));
  }
  CHECK(!is_product_of_cyclotomics(P("t^2 - 3 t + 1")));
}

TEST_CASE("free periods of 10_62") {
  LaurentPoly tw = twisted_d5("10_62");
  CHECK(tw.span() == 28);
  LaurentPoly f = P("t^8 - 3 t^6 + 3 t^4 - 3 t^2 + 1");
  int mult = 0;
  for (const auto& x : factor_over_Q(tw).factors)
    if (equal_up_to_unit(x.poly, f)) mult = x.multiplicity;
  CHECK(mult == 2);
  CHECK(f.evaluate(Scalar(Integer(1))) == Scalar(Integer(-1)));
  CHECK(f.evaluate(Scalar(Integer(-1))) == Scalar(Integer(-1)));
  CHECK(cyc_eval(f, 4) == CycScalar(4, false, {Rational(11), Rational(0)}));
  CHECK(cyc_eval(f, 3) == CycScalar(3, false, {Rational(0), Rational(5)}));

  for (std::uint32_t q : {7u, 11u}) CHECK(free_period_small_q(f, q).status == VerdictStatus::Obstructed);
  CHECK(free_period_small_q(P("t - 1"), 5).status == VerdictStatus::Consistent);

  Verdict large = free_period_large_q(f);
  CHECK(large.status == VerdictStatus::Obstructed);
  CHECK(large.certificate["roots_of_h"] == 9);
  CHECK(large.certificate["threshold"] == 11);
  CHECK(reverify(large));

  FreePeriodReport rep = free_period_report(classical_alexander(diagram_from_spec("10_62", &corpus())), f);
  CHECK(rep.overall == VerdictStatus::Obstructed);
  CHECK(rep.to_json()["conclusion"] == "no free periods");
  for (const char* q : {"2", "3", "5"}) CHECK(rep.per_prime[q]["stage"] == "classical");
  for (const char* q : {"7", "11"}) {
    CHECK(rep.per_prime[q]["stage"] == "twisted-small-q");
    CHECK(rep.per_prime[q]["status"] == "Obstructed");
  }
  CHECK(rep.per_prime[">11"]["status"] == "Obstructed");
}

TEST_CASE("free period checks never obstruct cyclotomic factors") {
  for (std::uint32_t n = 1; n <= 30; ++n) {
    CAPTURE(n);
    CHECK(free_period_large_q(cyclotomic_polynomial(n)).status != VerdictStatus::Obstructed);
  }
  Verdict phi5 = free_period_large_q(cyclotomic_polynomial(5));
  CHECK(phi5.status == VerdictStatus::Inconclusive);
  CHECK(exact_divide(cyclotomic_polynomial(5).substitute_power(11), cyclotomic_polynomial(5)).has_value());
  FreePeriodReport u = free_period_report(P("1"), P("1"));
  CHECK(u.overall == VerdictStatus::Consistent);
  CHECK(hartley_screen(P("t - 4"), 2).status == VerdictStatus::Consistent);
}

TEST_CASE("verdicts serialize and re-verify") {
  std::vector<Verdict> vs{murasugi_modp(P("t^2 - t + 1"), 3), murasugi_zeta(P("t^2 - t + 1"), 3),
                          degree_feasibility_all_primes(14, 1, 5, 7, {1}), orbit_criterion(3, {P("1"), P("t")}, 0),
                          free_period_small_q(P("t^2 - 3 t + 1"), 3), hartley_screen(P("t^2 - 3 t + 1"), 2)};
  for (const auto& v : vs) {
    CAPTURE(v.criterion);
    Json j = v.to_json();
    CHECK(j.size() == 4);
    CHECK(j["inputs-digest"].get<std::string>().size() == 64);
    Verdict back = Verdict::from_json(j);
    CHECK(back.to_json() == j);
    CHECK(reverify(back));
    Verdict bad = back;
    bad.status = bad.status == VerdictStatus::Obstructed ? VerdictStatus::Consistent : VerdictStatus::Obstructed;
    CHECK(!reverify(bad));
  }
  Json j = vs[0].to_json();
  j["certificate"]["inputs"]["q"] = 5;
  CHECK_THROWS_AS(Verdict::from_json(j), CriterionError);
}
