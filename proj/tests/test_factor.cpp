#include <map>

#include "doctest.h"
#include "support.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/factor/factor.hpp"
#include "twistlab/twisted/twisted.hpp"

using namespace twistlab;
using testsupport::P;

namespace {

const std::vector<KnotRecord>& corpus() {
  static const auto c = load_corpus(default_corpus_path());
  return c;
}

LaurentPoly Pp(const std::string& s, std::uint32_t p) { return P(s).map_ring(RingSpec::mod_p(p)); }

// Monic polynomials over F_p of the given degree.
std::vector<LaurentPoly> monics(std::uint32_t p, int d) {
  RingSpec F = RingSpec::mod_p(p);
  std::vector<LaurentPoly> out;
  std::vector<long> c(std::size_t(d), 0);
  while (true) {
    if (c[0] != 0) {  // t^k is a unit
      std::vector<Scalar> s;
      for (long x : c) s.push_back(Scalar::from_integer(F, x));
      s.push_back(Scalar::one(F));
      out.emplace_back(F, 0, std::move(s));
    }
    std::size_t k = 0;
    while (k < c.size() && ++c[k] == long(p)) c[k++] = 0;
    if (k == c.size()) break;
  }
  return out;
}

// Irreducibility by trial division over all monic divisors of degree <= d/2.
bool trial_irreducible(const LaurentPoly& f, std::uint32_t p) {
  for (int d = 1; 2 * d <= f.span(); ++d)
    for (const auto& g : monics(p, d))
      if (exact_divide(f, g)) return false;
  return true;
}

std::map<std::string, int> as_map(const Factorization& f) {
  std::map<std::string, int> m;
  for (const auto& x : f.factors) m[x.poly.to_string()] += x.multiplicity;
  return m;
}

}  // namespace

TEST_CASE("factorization over F_p agrees with trial division") {
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    RingSpec F = RingSpec::mod_p(p);
    for (int trial = 0; trial < 60; ++trial) {
      LaurentPoly f = testsupport::random_poly(rng, 0, 1 + trial % 7, 20, F);
      if (f.is_zero()) continue;
      CAPTURE(p);
      CAPTURE(f.to_string());
      auto fac = factor_mod_p(f);
      CHECK(fac.expand() == f);
      CHECK(fac.unit.is_monomial());
      for (const auto& x : fac.factors) {
        CHECK(x.poly.span() >= 1);
        CHECK(x.poly.leading().is_one());
        CHECK(trial_irreducible(x.poly, p));
      }
    }
  }
}

TEST_CASE("repeated factors and p-th powers mod p") {
  auto f = factor_mod_p(Pp("(t + 1)^3 * (t^2 + 1)^2", 3));
  CHECK(as_map(f) == std::map<std::string, int>{{Pp("t + 1", 3).to_string(), 3}, {Pp("t^2 + 1", 3).to_string(), 2}});
  auto g = factor_mod_p(Pp("t^4 - 1", 5));
  CHECK(g.factors.size() == 4);
  CHECK(degree_pattern_mod_p(P("t^4 - 1"), 3) == std::vector<int>{1, 1, 2});
  CHECK_THROWS_AS(factor_mod_p(P("t")), RingError);
}

TEST_CASE("factorization over Q reassembles products of known irreducibles") {
  std::vector<std::string> irr{"t - 1", "t + 1", "t^2 - t + 1", "t^2 - 3*t + 1", "t^4 - t^3 + t^2 - t + 1", "2*t - 3",
                               "t^3 - 2", "3*t^2 - 5*t + 3"};
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::map<std::string, int> want;
    LaurentPoly f = P("1");
    for (const auto& s : irr) {
      int m = int(rng() % 3);
      if (m == 0 || rng() % 2) continue;
      want[P(s).to_string()] += m;
      f *= P(s).pow(unsigned(m));
    }
    f = f.shifted(int(rng() % 5) - 2) * P(trial % 2 ? "-6" : "1");
    CAPTURE(f.to_string());
    auto fac = factor_over_Q(f);
    CHECK(fac.expand() == f);
    CHECK(as_map(fac) == want);
  }
}

TEST_CASE("classical polynomials of the fixtures") {
  auto d847 = factor_over_Q(classical_alexander(diagram_from_spec("12n847", &corpus())));
  CHECK(as_map(d847) ==
        std::map<std::string, int>{{P("t^2 - t + 1").to_string(), 1}, {P("t^2 - 3 t + 1").to_string(), 2}});
  auto d1062 = factor_over_Q(classical_alexander(diagram_from_spec("10_62", &corpus())));
  CHECK(as_map(d1062) == std::map<std::string, int>{{P("t^4 - t^3 + t^2 - t + 1").to_string(), 1},
                                                    {P("t^2 - t + 1").to_string(), 2}});
  auto d162 = factor_over_Q(classical_alexander(diagram_from_spec("10_162", &corpus())));
  CHECK(d162.factors.size() == 1);
  CHECK(irreducibility_witness(d162.factors[0].poly).has_value());
}

TEST_CASE("cyclotomic factorization") {
  // t^2 - t + 1 = (t + z)(t + z^2) over Q(zeta_3)
  auto a = factor_over_cyclotomic(P("t^2 - t + 1"), 3);
  CHECK(a.factors.size() == 2);
  CHECK(a.expand() == P("t^2 - t + 1").map_ring(RingSpec::cyclotomic(3, true)));
  auto b = factor_over_cyclotomic(P("t^2 + 1"), 4);
  CHECK(b.factors.size() == 2);
  auto c = factor_over_cyclotomic(P("t^2 + 1"), 3);
  CHECK(c.factors.size() == 1);
  LaurentPoly d847 = classical_alexander(diagram_from_spec("12n847", &corpus()));
  auto e = factor_over_cyclotomic(d847, 6);
  CHECK(e.expand() == d847.map_ring(RingSpec::cyclotomic(6, true)));
  int lin = 0, sq = 0;
  for (const auto& x : e.factors) {
    if (x.poly.span() == 1) ++lin;
    if (x.poly.span() == 2 && x.multiplicity == 2) ++sq;
  }
  CHECK(lin == 2);
  CHECK(sq == 1);
  LaurentPoly d162 = classical_alexander(diagram_from_spec("10_162", &corpus()));
  for (std::uint32_t q : {3u, 4u}) CHECK(factor_over_cyclotomic(d162, q).factors.size() == 1);
  CHECK_THROWS_AS(factor_over_cyclotomic(P("t"), 5), RingError);
}

TEST_CASE("power substitutions") {
  CHECK(is_power_substitution(P("1 + t^4 - 3 t^8"), 4) == P("1 + t - 3 t^2"));
  CHECK(!is_power_substitution(P("1 + t^2 + t^3"), 2));
  CHECK(is_power_substitution(P("t^-2 + 1"), 2) == P("t^-1 + 1"));
}

TEST_CASE("divisors up to units") {
  auto c = [](std::uint32_t q, std::vector<long> v) {
    std::vector<Rational> r;
    for (long x : v) r.push_back(Rational(x));
    return CycScalar(q, false, r);
  };
  CHECK(divisors_up_to_units(c(1, {12})).divisors.size() == 6);
  CHECK(divisors_up_to_units(c(1, {-1})).divisors.size() == 1);
  // 11 is inert in Z[i]; 5 = (2 + i)(2 - i) splits
  CHECK(divisors_up_to_units(c(4, {11})).divisors.size() == 2);
  CHECK(divisors_up_to_units(c(4, {5})).divisors.size() == 4);
  // 5 is inert in Z[zeta_3]; 7 splits
  CHECK(divisors_up_to_units(c(3, {0, 5})).divisors.size() == 2);
  CHECK(divisors_up_to_units(c(3, {7})).divisors.size() == 4);
  CHECK(divisors_up_to_units(c(6, {-1})).divisors.size() == 1);
  // associates collapse to the same representative
  for (long k = 0; k < 6; ++k) {
    CycScalar u = CycScalar::zeta_power(3, false, k);
    CHECK(canonical_associate(u * c(3, {2, 1})) == canonical_associate(c(3, {2, 1})));
    CHECK(canonical_associate(-(u * c(3, {2, 1}))) == canonical_associate(c(3, {2, 1})));
  }
  CHECK_THROWS_AS(divisors_up_to_units(c(5, {1, 0, 0, 0})), RingError);
}

TEST_CASE("many modular factors recombine into cyclotomic factors") {
  auto f = factor_over_Q(P("t^12 - 1"));
  CHECK(f.expand() == P("t^12 - 1"));
  CHECK(as_map(f) == std::map<std::string, int>{{P("t - 1").to_string(), 1},
                                                {P("t + 1").to_string(), 1},
                                                {P("t^2 + 1").to_string(), 1},
                                                {P("t^2 + t + 1").to_string(), 1},
                                                {P("t^2 - t + 1").to_string(), 1},
                                                {P("t^4 - t^2 + 1").to_string(), 1}});
  // x^4 + 1 splits modulo every prime but is irreducible over Q
  auto g = factor_over_Q(P("t^4 + 1"));
  CHECK(g.factors.size() == 1);
  CHECK(!irreducibility_witness(P("t^4 + 1")).has_value());
}

TEST_CASE("twisted polynomials reassemble from their factors") {
  Diagram d = diagram_from_spec("12n847", &corpus());
  Presentation p = wirtinger(d);
  for (const auto& rc : enumerate_colorings(d, 5)) {
    LaurentPoly f = twisted_alexander(p, dihedral_integral_lift(p, rc));
    auto fac = factor_over_Q(f);
    CHECK(fac.expand() == f);
    CHECK(fac.degree() == f.span());
  }
}
