#include "doctest.h"
#include "support.hpp"
#include "twistlab/fox/fox.hpp"

using namespace twistlab;

namespace {

FreeWord random_word(std::mt19937_64& rng, int gens, int len) {
  std::uniform_int_distribution<int> g(0, gens - 1), e(0, 1);
  std::vector<Letter> ls;
  for (int i = 0; i < len; ++i) ls.push_back({g(rng), e(rng) ? 1 : -1});
  return FreeWord(ls);
}

GroupRingElement W(const std::string& s) { return GroupRingElement::word(parse_word(s)); }

}  // namespace

TEST_CASE("words reduce freely and print") {
  CHECK(parse_word("a b B A").empty());
  CHECK(parse_word("a b A").to_string() == "a b A");
  CHECK(parse_word("x0 x1^-1") == parse_word("a B"));
  CHECK(parse_word("a^-1") == FreeWord::generator(0, -1));
  CHECK(parse_word("1").empty());
  CHECK(parse_word("a b").inverse() == parse_word("B A"));
  CHECK(parse_word("a b").pow(2) == parse_word("a b a b"));
  CHECK(parse_word("a b a").exponent_sum(0) == 2);
  // substitution is a homomorphism
  std::vector<FreeWord> img{parse_word("a b"), parse_word("b")};
  CHECK(parse_word("a B a").substitute(img) == parse_word("a a b"));
}

TEST_CASE("Fox derivatives of the trefoil relator") {
  FreeWord r = parse_word("a b a B A B");
  GroupRingElement dx = fox_derivative(r, 0);
  CHECK(dx == W("1") + W("a b") - W("a b a B A"));
  GroupRingElement dy = fox_derivative(r, 1);
  CHECK(dy == W("a") - W("a b a B") - W("a b a B A B"));
}

TEST_CASE("Leibniz rule") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    FreeWord u = random_word(rng, 3, 6), v = random_word(rng, 3, 6);
    for (int j = 0; j < 3; ++j)
      CHECK(fox_derivative(u * v, j) == fox_derivative(u, j) + GroupRingElement::word(u) * fox_derivative(v, j));
  }
}

TEST_CASE("fundamental identity on random words") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int gens = 1 + trial % 4;
    FreeWord w = random_word(rng, gens, trial % 13);
    GroupRingElement sum;
    for (int j = 0; j < gens; ++j)
      sum += fox_derivative(w, j) * (GroupRingElement::word(FreeWord::generator(j)) - GroupRingElement::one());
    CHECK(sum == GroupRingElement::word(w) - GroupRingElement::one());
  }
}

TEST_CASE("Fox matrix shape") {
  Presentation p;
  p.generators = 2;
  p.relators = {parse_word("a b a B A B")};
  p.labels = {{0, {1, 0}}, {0, {1, 0}}};
  auto m = fox_matrix(p);
  CHECK(m.rows() == 1);
  CHECK(m.cols() == 2);
  CHECK(p.deficiency() == 1);
  CHECK(p.weight(parse_word("a b A")) == Weight{1, 0});
}
