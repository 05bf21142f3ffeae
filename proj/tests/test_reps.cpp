#include <set>

#include "doctest.h"
#include "support.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/reps/representation.hpp"
#include "twistlab/twisted/twisted.hpp"

using namespace twistlab;

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

Perm cycle(int n, std::vector<int> c) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = 0; i < c.size(); ++i) p[c[i]] = c[(i + 1) % c.size()];
  return p;
}

std::vector<Perm> all_perms(int n) {
  Perm a(n);
  for (int i = 0; i < n; ++i) a[i] = i;
  std::vector<Perm> out;
  do out.push_back(a);
  while (std::next_permutation(a.begin(), a.end()));
  return out;
}

// Exhaustive count of surjections up to S_n conjugation.
std::size_t brute_force_classes(const Presentation& p, int n, bool alternating) {
  auto group = all_perms(n);
  std::vector<Perm> pool;
  for (const auto& g : group)
    if (!alternating || perm_is_even(g)) pool.push_back(g);
  std::size_t order = pool.size();
  std::set<std::vector<Perm>> seen;
  std::size_t classes = 0;
  std::vector<std::size_t> idx(p.generators, 0);
  Perm id = group[0];
  while (true) {
    std::vector<Perm> imgs;
    for (auto i : idx) imgs.push_back(pool[i]);
    bool ok = true;
    for (const auto& r : p.relators)
      if (perm_of_word(r, imgs) != id) {
        ok = false;
        break;
      }
    if (ok && generated_group_order(imgs) == order && !seen.count(imgs)) {
      ++classes;
      for (const auto& z : group) {
        std::vector<Perm> c;
        for (const auto& g : imgs) c.push_back(perm_compose(perm_compose(z, g), perm_inverse(z)));
        seen.insert(c);
      }
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == pool.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return classes;
}

std::size_t p_rank(const std::vector<Integer>& h, unsigned long p) {
  std::size_t k = 0;
  for (const auto& x : h)
    if (mpz_divisible_ui_p(x.get_mpz_t(), p)) ++k;
  return k;
}

}  // namespace

TEST_CASE("verification of explicit permutation representations") {
  Presentation p = trefoil_pres();
  // x -> (1 2), y -> (1 3): xyx and yxy are both (2 3)
  auto good = perm_to_matrices(p, {cycle(3, {0, 1}), cycle(3, {0, 2})});
  CHECK(verify(p, good).ok);
  auto bad = perm_to_matrices(p, {cycle(3, {0, 1}), cycle(3, {})});
  auto chk = verify(p, bad);
  CHECK(!chk.ok);
  CHECK(chk.failing_relators == std::vector<int>{0});
  CHECK(verify(p, trivial_representation(p)).ok);
  CHECK_THROWS_AS(make_representation(p, RingSpec::integers(), {identity_matrix(RingSpec::integers(), 2)}),
                  RepresentationError);
}

TEST_CASE("permutation matrices") {
  Presentation p;
  p.generators = 1;
  p.labels = {{0, {1, 0}}};
  auto r = perm_to_matrices(p, {cycle(5, {0, 1})});
  CHECK(determinant(r.images[0], RingSpec::integers()) == Scalar(Integer(-1)));
  auto id = perm_to_matrices(p, {cycle(5, {})});
  CHECK(is_identity(id.images[0]));
  CHECK(perm_compose(cycle(3, {0, 1}), cycle(3, {1, 2})) == cycle(3, {0, 1, 2}));
  CHECK(generated_group_order({cycle(5, {0, 1, 2, 3, 4}), cycle(5, {0, 1})}) == 120);
  CHECK(!perm_is_even(cycle(4, {0, 1})));
}

TEST_CASE("trefoil three-colourings") {
  Diagram d = diagram_from_spec("3_1", &corpus());
  CHECK(count_colorings(d, 3) == 9);
  auto cls = enumerate_colorings(d, 3);
  CHECK(cls.size() == 1);
  CHECK(enumerate_colorings(diagram_from_spec("4_1", &corpus()), 3).empty());
}

TEST_CASE("colouring counts match the p-rank of H1 of the double branched cover") {
  for (const auto& rec : corpus()) {
    if (rec.components != 1) continue;
    Diagram d = Diagram::from_pd(rec.pd);
    auto h = h1_double_branched_cover(d);
    for (unsigned long p : {3ul, 5ul, 7ul}) {
      CAPTURE(rec.name);
      CAPTURE(p);
      Integer expect;
      mpz_ui_pow_ui(expect.get_mpz_t(), p, 1 + p_rank(h, p));
      CHECK(count_colorings(d, std::uint32_t(p)) == expect);
    }
  }
}

TEST_CASE("dihedral classes of the fixtures") {
  CHECK(enumerate_colorings(diagram_from_spec("10_162", &corpus()), 5).size() == 1);
  CHECK(enumerate_colorings(diagram_from_spec("12n847", &corpus()), 5).size() == 6);
}

TEST_CASE("dihedral integral lift") {
  Diagram d = diagram_from_spec("10_162", &corpus());
  Presentation p = wirtinger(d);
  auto cls = enumerate_colorings(d, 5);
  REQUIRE(cls.size() == 1);
  Representation r = dihedral_integral_lift(p, cls[0]);
  CHECK(r.dim == 4);
  CHECK(verify(p, r).ok);
  std::size_t a = 0, b = 0;
  for (std::size_t i = 0; i < r.images.size(); ++i) {
    Scalar det = determinant(r.images[i], r.ring);
    CHECK((det == Scalar(Integer(1)) || det == Scalar(Integer(-1))));
    CHECK(is_identity(r.images[i] * r.images[i]));
    if (cls[0].coloring->colors[i] != cls[0].coloring->colors[a]) b = i;
  }
  REQUIRE(b != a);
  // product of two distinct reflections is a rotation of order 5
  ScalarMatrix rot = r.images[a] * r.images[b];
  PolyMatrix m(4, 4, LaurentPoly());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      m(i, j) = LaurentPoly::monomial(-rot(i, j), 1);
      if (i == j) m(i, j) += LaurentPoly::constant(RingSpec::integers(), 1);
    }
  CHECK(determinant(m, RingSpec::integers()) == testsupport::P("1 + t + t^2 + t^3 + t^4"));
}

TEST_CASE("ring changes") {
  Diagram d = diagram_from_spec("3_1", &corpus());
  Presentation p = wirtinger(d);
  Representation r = dihedral_integral_lift(p, enumerate_colorings(d, 3)[0]);
  CHECK(verify(p, change_ring(r, RingSpec::mod_p(3))).ok);
  CHECK(verify(p, change_ring(r, RingSpec::cyclotomic(3, true))).ok);
  Representation q = change_ring(r, RingSpec::rationals());
  CHECK_THROWS_AS(change_ring(q, RingSpec::integers()), RepresentationError);
  // entrywise maps commute with products
  ScalarMatrix ab = r.images[0] * r.images[1];
  CHECK(map_ring(ab, RingSpec::mod_p(3)) ==
        map_ring(r.images[0], RingSpec::mod_p(3)) * map_ring(r.images[1], RingSpec::mod_p(3)));
}

TEST_CASE("permutation searches agree with brute force") {
  Presentation tre = wirtinger(diagram_from_spec("3_1", &corpus()));
  CHECK(enumerate_perm_reps(tre, 3, RepSymmetry::Symmetric).size() == 1);
  CHECK(brute_force_classes(tre, 3, false) == 1);
  Presentation fig = wirtinger(diagram_from_spec("4_1", &corpus()));
  CHECK(enumerate_perm_reps(fig, 4, RepSymmetry::Alternating).size() == brute_force_classes(fig, 4, true));
  CHECK(enumerate_perm_reps(fig, 4, RepSymmetry::Symmetric).size() == brute_force_classes(fig, 4, false));
  CHECK(enumerate_perm_reps(tre, 4, RepSymmetry::Symmetric).size() == brute_force_classes(tre, 4, false));
  for (const auto& rc : enumerate_perm_reps(fig, 4, RepSymmetry::Alternating)) CHECK(verify(fig, rc.representative).ok);
}

TEST_CASE("surjections onto A5 for the Alexander polynomial one knots") {
  for (const char* name : {"11n34", "11n42"}) {
    CAPTURE(name);
    Presentation p = wirtinger(diagram_from_spec(name, &corpus()));
    auto cls = enumerate_perm_reps(p, 5, RepSymmetry::Alternating);
    CHECK(cls.size() == 1);
    for (const auto& rc : cls) CHECK(verify(p, rc.representative).ok);
  }
}
