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

Integer abs_at_minus_one(const LaurentPoly& p) {
  Integer v = p.evaluate(Scalar(Integer(-1))).integer();
  return abs(v);
}

Integer product(const std::vector<Integer>& v) {
  Integer r = 1;
  for (const auto& x : v) r *= x;
  return r;
}

}  // namespace

TEST_CASE("PD parsing accepts the common spellings") {
  PDCode a = parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]");
  CHECK(parse_pd("{{1,5,2,4},{3,1,4,6},{5,3,6,2}}") == a);
  CHECK(parse_pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]") == a);
  CHECK(parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]") == a);
  CHECK(parse_pd(to_string(a)) == a);
  CHECK(parse_pd("[]").crossings.empty());
}

TEST_CASE("PD parse errors carry positions") {
  CHECK_THROWS_AS(parse_pd("[[1,5,2],[3,1,4,6]]"), ParseError);
  CHECK_THROWS_AS(parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,7]]"), ParseError);
  try {
    parse_pd("[[1,5,2,4],[3,x,4,6]]");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position() > 0);
  }
}

TEST_CASE("non-planar PD codes are rejected") {
  // Gauss code 1 2 1 2 has no plane realization
  CHECK_THROWS_AS(Diagram::from_pd(parse_pd("[[1,2,3,4],[3,1,4,2]]")), RealizabilityError);
}

TEST_CASE("diagram bookkeeping for the trefoil") {
  Diagram d = diagram_from_spec("3_1", &corpus());
  CHECK(d.crossing_count() == 3);
  CHECK(d.arc_count() == 3);
  CHECK(d.is_knot());
  CHECK(d.faces().size() == 5);
  CHECK(std::abs(d.writhe()) == 3);
  Presentation p = wirtinger(d);
  CHECK(p.generators == 3);
  CHECK(p.relators.size() == 2);
  CHECK(p.deficiency() == 1);
}

TEST_CASE("Hopf link has two components with linking number one") {
  Diagram d = diagram_from_spec("L2a1", &corpus());
  CHECK(d.component_count() == 2);
  CHECK(std::abs(d.linking_number(0, 1)) == 1);
  Presentation p = wirtinger(d);
  CHECK(p.labels[0].epsilon == Weight{1, 0});
  bool has_s = false;
  for (const auto& l : p.labels) has_s = has_s || l.epsilon == Weight{0, 1};
  CHECK(has_s);
}

TEST_CASE("DT, braid and PD routes agree on classical polynomials") {
  for (const auto& rec : corpus()) {
    if (rec.components != 1) continue;
    CAPTURE(rec.name);
    LaurentPoly from_pd = classical_alexander(Diagram::from_pd(rec.pd));
    if (rec.dt) CHECK(equal_up_to_unit_and_mirror(classical_alexander(Diagram::from_pd(pd_from_dt(*rec.dt))), from_pd));
    if (rec.braid) CHECK(equal_up_to_unit_and_mirror(classical_alexander(Diagram::from_pd(pd_from_braid(*rec.braid))), from_pd));
  }
}

TEST_CASE("DT codes round trip through diagrams") {
  for (const auto& rec : corpus()) {
    if (!rec.dt) continue;
    CAPTURE(rec.name);
    Diagram d = Diagram::from_pd(pd_from_dt(*rec.dt));
    std::vector<int> again = dt_from_diagram(d);
    Diagram d2 = Diagram::from_pd(pd_from_dt(again));
    CHECK(d2.crossing_count() == d.crossing_count());
    CHECK(equal_up_to_unit_and_mirror(classical_alexander(d2), classical_alexander(d)));
  }
  CHECK(parse_dt("4 6 2") == std::vector<int>{4, 6, 2});
  CHECK(parse_dt(dt_to_string({4, -8, 2, 6})) == std::vector<int>{4, -8, 2, 6});
}

TEST_CASE("classical polynomials of small knots") {
  // hand Fox calculus on the two-generator presentations
  CHECK(equal_up_to_unit(classical_alexander(diagram_from_spec("3_1", &corpus())), P("t^2 - t + 1")));
  CHECK(equal_up_to_unit(classical_alexander(diagram_from_spec("4_1", &corpus())), P("t^2 - 3t + 1")));
  CHECK(classical_alexander(Diagram::unknot()) == P("1"));
}

TEST_CASE("classical polynomials evaluate to a unit at 1") {
  for (const auto& rec : corpus()) {
    if (rec.components != 1) continue;
    CAPTURE(rec.name);
    Integer v = classical_alexander(Diagram::from_pd(rec.pd)).evaluate(Scalar(Integer(1))).integer();
    CHECK(abs(v) == 1);
  }
}

TEST_CASE("H1 of the double branched cover has order |Delta(-1)|") {
  for (const auto& rec : corpus()) {
    if (rec.components != 1) continue;
    CAPTURE(rec.name);
    Diagram d = Diagram::from_pd(rec.pd);
    auto h = h1_double_branched_cover(d);
    for (const auto& x : h) CHECK(x != 0);
    CHECK(product(h) == abs_at_minus_one(classical_alexander(d)));
  }
  CHECK(h1_double_branched_cover(Diagram::unknot()).empty());
  CHECK(h1_double_branched_cover(diagram_from_spec("3_1", &corpus())) == std::vector<Integer>{3});
  // Hopf link: the double branched cover is RP^3
  CHECK(h1_double_branched_cover(diagram_from_spec("L2a1", &corpus())) == std::vector<Integer>{2});
}

TEST_CASE("braid parsing and closure") {
  Braid b = parse_braid("s1 s2^-1 s1");
  CHECK(b.strands == 3);
  CHECK(b.word == std::vector<int>{1, -2, 1});
  CHECK(parse_braid("[1,-2,1]") == b);
  CHECK(parse_braid("1 -2 1") == b);
  CHECK(parse_braid("S1").word == std::vector<int>{-1});
  CHECK(parse_braid(to_string(b)) == b);
  CHECK(braid_components(parse_braid("1 1 1")) == std::vector<int>{0, 0});
  CHECK(braid_components(parse_braid("1 1")) == std::vector<int>{0, 1});
  // a strand without crossings is not a diagram
  CHECK_THROWS(pd_from_braid(parse_braid("1 1 1", 3)));
}

TEST_CASE("Artin presentation of a closed braid is a knot group presentation") {
  Braid b = parse_braid("1 1 1");
  Presentation p = artin_presentation(b);
  CHECK(p.generators == 2);
  LaurentPoly d = twisted_alexander(p, trivial_representation(p));
  CHECK(equal_up_to_unit(d, P("t^2 - t + 1")));
  Braid e = parse_braid("1 -2 1 -2");
  CHECK(equal_up_to_unit(twisted_alexander(artin_presentation(e), trivial_representation(artin_presentation(e))),
                         P("t^2 - 3t + 1")));
}

TEST_CASE("corpus lookup") {
  CHECK(find_record(corpus(), "trefoil") != nullptr);
  CHECK(find_record(corpus(), "nosuch") == nullptr);
  CHECK_THROWS(diagram_from_spec("nosuch", &corpus()));
  CHECK(diagram_from_spec("dt:4 6 2").crossing_count() == 3);
  CHECK(diagram_from_spec("braid:1 1 1").crossing_count() == 3);
  CHECK(diagram_from_spec("pd:[[1,5,2,4],[3,1,4,6],[5,3,6,2]]").crossing_count() == 3);
}
