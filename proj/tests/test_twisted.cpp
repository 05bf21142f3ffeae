#include "doctest.h"
#include "support.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/twisted/twisted.hpp"

using namespace twistlab;
using testsupport::P;

namespace {

const std::vector<KnotRecord>& corpus() {
  static const auto c = load_corpus(default_corpus_path());
  return c;
}

Presentation trefoil_pres() {
  Presentation p;
  p.generators = 2;
  p.relators = {parse_word("a b a B A B")};
  p.labels = {{0, {1, 0}}, {0, {1, 0}}};
  return p;
}

struct Fixture {
  std::string name;
  Presentation pres;
  Representation rep;
};

// Small knots paired with a trivial, a dihedral and (when present) a permutation representation.
std::vector<Fixture> fixtures() {
  std::vector<Fixture> out;
  for (const char* name : {"3_1", "4_1", "10_162", "11n34"}) {
    Diagram d = diagram_from_spec(name, &corpus());
    Presentation p = wirtinger(d);
    out.push_back({std::string(name) + "/trivial", p, trivial_representation(p)});
    for (std::uint32_t q : {3u, 5u})
      for (const auto& rc : enumerate_colorings(d, q))
        out.push_back({std::string(name) + "/D" + std::to_string(q), p, dihedral_integral_lift(p, rc)});
  }
  Presentation tre = wirtinger(diagram_from_spec("3_1", &corpus()));
  for (const auto& rc : enumerate_perm_reps(tre, 3, RepSymmetry::Symmetric))
    out.push_back({"3_1/S3", tre, rc.representative});
  return out;
}

// gcd over Q[t] of all maximal minors: an order computation that never uses the Wada quotient
LaurentPoly gcd_of_maximal_minors(const PolyMatrix& m) {
  RingSpec Q = RingSpec::rationals();
  std::size_t r = m.rows(), c = m.cols();
  std::vector<bool> pick(c, false);
  std::fill(pick.begin(), pick.begin() + long(r), true);
  LaurentPoly g(Q);
  do {
    PolyMatrix s(r, r, LaurentPoly(m(0, 0).ring()));
    std::size_t k = 0;
    for (std::size_t j = 0; j < c; ++j)
      if (pick[j]) {
        for (std::size_t i = 0; i < r; ++i) s(i, k) = m(i, j);
        ++k;
      }
    LaurentPoly det = determinant(s, m(0, 0).ring()).map_ring(Q);
    if (!det.is_zero()) g = g.is_zero() ? normalize(det) : gcd(g, det);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return g;
}

}  // namespace

TEST_CASE("twisted substitution of group ring elements") {
  Presentation p = trefoil_pres();
  Representation r = trivial_representation(p);
  CHECK(twist_substitute(GroupRingElement::one(), r)(0, 0) == P("1"));
  CHECK(twist_substitute(GroupRingElement::word(parse_word("a")), r)(0, 0) == P("t"));
  GroupRingElement e = GroupRingElement::one() + GroupRingElement::word(parse_word("a b")) -
                       GroupRingElement::word(parse_word("a b a B A"));
  CHECK(twist_substitute(e, r)(0, 0) == P("1 + t^2 - t"));
  CHECK(twist_substitute(fox_derivative(p.relators[0], 0), r)(0, 0) == P("1 + t^2 - t"));
}

TEST_CASE("Wada invariant of small examples") {
  Presentation p = trefoil_pres();
  auto w = wada(p, trivial_representation(p));
  REQUIRE(w);
  CHECK(equal_up_to_unit(w->numerator, P("t^2 - t + 1")));
  CHECK(equal_up_to_unit(w->denominator, P("1 - t")));
  auto w1 = wada(p, trivial_representation(p), 1);
  REQUIRE(w1);
  CHECK(w1->numerator == w->numerator);
  CHECK(w1->denominator == w->denominator);
  Presentation u = wirtinger(Diagram::unknot());
  auto wu = wada(u, trivial_representation(u));
  REQUIRE(wu);
  CHECK(wu->numerator == P("1"));
  CHECK(equal_up_to_unit(wu->denominator, P("1 - t")));
}

TEST_CASE("hand computed dihedral twisted polynomial of the trefoil") {
  // det(I + t^2 AB - tB) = (1 - t^2)^2 for reflections A, B; divided by det(I - tB) = 1 - t^2
  Diagram d = diagram_from_spec("3_1", &corpus());
  Presentation p = wirtinger(d);
  auto r = dihedral_integral_lift(p, enumerate_colorings(d, 3)[0]);
  auto res = twisted_alexander_full(p, r);
  CHECK(res.delta0 == P("1"));
  CHECK(equal_up_to_unit(res.delta, P("1 - t^2")));
}

TEST_CASE("Delta^0 of trivial representations") {
  Presentation p = wirtinger(diagram_from_spec("4_1", &corpus()));
  CHECK(equal_up_to_unit(delta0(p, trivial_representation(p)), P("1 - t")));
  for (std::size_t n : {2u, 3u}) {
    std::vector<ScalarMatrix> imgs(p.generators, identity_matrix(RingSpec::integers(), n));
    auto r = make_representation(p, RingSpec::integers(), imgs);
    CHECK(equal_up_to_unit(delta0(p, r), P("(1 - t)^" + std::to_string(n))));
  }
}

TEST_CASE("chain condition beta2 * beta1 = 0") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    auto c = twisted_complex(f.pres, f.rep);
    PolyMatrix prod = multiply(c.beta2, c.beta1, LaurentPoly(f.rep.ring));
    bool zero = true;
    for (const auto& x : prod.data()) zero = zero && x.is_zero();
    CHECK(zero);
  }
}

TEST_CASE("Wada invariant does not depend on the deleted generator") {
  for (const auto& f : fixtures()) {
    CAPTURE(f.name);
    auto base = wada(f.pres, f.rep);
    REQUIRE(base);
    RingSpec F = f.rep.ring.fraction_field();
    for (int j = 0; j < f.pres.generators; ++j) {
      auto w = wada(f.pres, f.rep, j);
      if (!w) continue;
      // a/b == c/d  <=>  ad == bc up to units
      LaurentPoly lhs = w->numerator.map_ring(F) * base->denominator.map_ring(F);
      LaurentPoly rhs = base->numerator.map_ring(F) * w->denominator.map_ring(F);
      CHECK(equal_up_to_unit(lhs, rhs));
    }
  }
}

TEST_CASE("twisted polynomial equals the gcd of maximal minors of beta2") {
  for (const char* name : {"3_1", "4_1"}) {
    Diagram d = diagram_from_spec(name, &corpus());
    Presentation p = wirtinger(d);
    std::vector<Representation> reps{trivial_representation(p)};
    for (std::uint32_t q : {3u, 5u})
      for (const auto& rc : enumerate_colorings(d, q)) reps.push_back(dihedral_integral_lift(p, rc));
    for (const auto& r : reps) {
      CAPTURE(name);
      CAPTURE(r.dim);
      auto c = twisted_complex(p, r);
      CHECK(equal_up_to_unit(gcd_of_maximal_minors(c.beta2), twisted_alexander(p, r).map_ring(RingSpec::rationals())));
    }
  }
}

TEST_CASE("twisted polynomials are independent of the diagram") {
  for (const auto& rec : corpus()) {
    if (rec.components != 1 || !rec.braid || rec.pd.crossings.size() > 11) continue;
    CAPTURE(rec.name);
    Diagram a = Diagram::from_pd(rec.pd);
    Diagram b = Diagram::from_pd(pd_from_braid(*rec.braid));
    auto ca = enumerate_colorings(a, 5), cb = enumerate_colorings(b, 5);
    REQUIRE(ca.size() == cb.size());
    if (ca.empty()) continue;
    Presentation pa = wirtinger(a), pb = wirtinger(b);
    CHECK(equal_up_to_unit_and_mirror(twisted_alexander(pa, dihedral_integral_lift(pa, ca[0])),
                                      twisted_alexander(pb, dihedral_integral_lift(pb, cb[0]))));
  }
}

TEST_CASE("mod p and rational coefficients") {
  Diagram d = diagram_from_spec("3_1", &corpus());
  Presentation p = wirtinger(d);
  auto r = dihedral_integral_lift(p, enumerate_colorings(d, 3)[0]);
  LaurentPoly z = twisted_alexander(p, r);
  for (std::uint32_t q : {5u, 7u}) {
    LaurentPoly m = twisted_alexander(p, change_ring(r, RingSpec::mod_p(q)));
    CHECK(equal_up_to_unit(m, z.map_ring(RingSpec::mod_p(q))));
  }
  CHECK(equal_up_to_unit(twisted_alexander(p, change_ring(r, RingSpec::rationals())), z.map_ring(RingSpec::rationals())));
}

TEST_CASE("axis factor") {
  Presentation p = trefoil_pres();
  Representation triv = trivial_representation(p);
  for (int lambda : {1, 2, 5}) CHECK(delta_axis(triv, parse_word("a b"), lambda) == P("1 - t^" + std::to_string(lambda)));
  std::vector<ScalarMatrix> imgs(2, identity_matrix(RingSpec::integers(), 2));
  CHECK(delta_axis(make_representation(p, RingSpec::integers(), imgs), parse_word("a"), 1) == P("(1 - t)^2"));
}

TEST_CASE("two-variable polynomial of the Hopf link") {
  Diagram d = diagram_from_spec("L2a1", &corpus());
  Presentation p = wirtinger(d);
  Representation r = trivial_representation(p);
  int axis = -1;
  for (int g = 0; g < p.generators; ++g)
    if (p.labels[g].component == 1) axis = g;
  REQUIRE(axis >= 0);
  CHECK(twisted_alexander_2var(p, r, axis) == BiLaurentPoly::constant(RingSpec::integers(), 1));
}

TEST_CASE("closed braids with their axes") {
  struct Case {
    const char* braid;
    const char* knot;
  };
  for (const Case& c : {Case{"1 1 1", "t^2 - t + 1"}, Case{"1 -2 1 -2", "t^2 - 3t + 1"}}) {
    CAPTURE(c.braid);
    Braid b = parse_braid(c.braid);
    Presentation kp = artin_presentation(b);
    AxisLink link = braid_axis_link(b);
    CHECK(link.lambda == b.strands);

    std::vector<Representation> reps{trivial_representation(kp)};
    for (const auto& rc : enumerate_perm_reps(kp, 3, RepSymmetry::Symmetric)) reps.push_back(rc.representative);
    for (const auto& rc : enumerate_perm_reps(kp, 4, RepSymmetry::Alternating)) reps.push_back(rc.representative);
    for (const auto& kr : reps) {
      CAPTURE(kr.dim);
      Representation lr = extend_to_axis(kr, link);
      LaurentPoly dk = twisted_alexander(kp, kr);
      LaurentPoly dl = twisted_alexander(link.presentation, lr);
      LaurentPoly da = delta_axis(kr, link.axis_word, link.lambda);
      CHECK(da.coeff(0) == Scalar(Integer(1)));
      CHECK(equal_up_to_unit(delta0(kp, kr), delta0(link.presentation, lr)));
      CHECK(equal_up_to_unit(dl, da * dk));
    }

    // Torres: G(t, 1) = delta_lambda(t) * Delta_K(t) with delta_lambda = (1 - t^lambda)/(1 - t)
    Representation lt = extend_to_axis(trivial_representation(kp), link);
    BiLaurentPoly g = twisted_alexander_2var(link.presentation, lt, link.axis_generator);
    LaurentPoly g1 = g.at_s(Scalar(Integer(1)));
    LaurentPoly dl = *exact_divide(P("1 - t^" + std::to_string(link.lambda)), P("1 - t"));
    CHECK(equal_up_to_unit(g1, dl * P(c.knot)));
  }
}

TEST_CASE("classical polynomial special cases") {
  CHECK_THROWS_AS(classical_alexander(diagram_from_spec("L2a1", &corpus())), DiagramError);
  CHECK(classical_alexander(Diagram::unknot()) == P("1"));
}
