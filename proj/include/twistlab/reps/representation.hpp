#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistlab/fox/words.hpp"
#include "twistlab/knots/diagram.hpp"
#include "twistlab/rings/linalg.hpp"

namespace twistlab {

// rho: generators -> GL_n(ring), together with the abelian weights of the generators.
struct Representation {
  RingSpec ring;
  std::size_t dim = 0;
  std::vector<ScalarMatrix> images;
  std::vector<ScalarMatrix> inverses;
  std::vector<Weight> epsilon;

  ScalarMatrix image(const FreeWord& w) const;
};

// Builds a representation, inverting the images (RepresentationError if one is singular).
Representation make_representation(const Presentation& p, const RingSpec& ring,
                                   std::vector<ScalarMatrix> images);
Representation trivial_representation(const Presentation& p, const RingSpec& ring = RingSpec::integers());

struct RepCheck {
  bool ok = true;
  std::vector<int> failing_relators;
  std::string reason;
};
RepCheck verify(const Presentation& p, const Representation& r);

// Z -> F_p, Z -> Q, Q -> Q(z_q), Z[z_q] -> Q(z_q), ...; RepresentationError otherwise.
Representation change_ring(const Representation& r, const RingSpec& target);
// Replaces the weights, e.g. to kill the axis meridian.
Representation with_weights(const Representation& r, const Presentation& p);

using Perm = std::vector<int>;
enum class RepSymmetry { Dihedral, Alternating, Symmetric };

struct Coloring {
  std::uint32_t p = 0;
  std::vector<std::uint32_t> colors;  // one per Wirtinger generator (arc)
  bool operator==(const Coloring&) const = default;
};

struct RepClass {
  RepSymmetry symmetry = RepSymmetry::Dihedral;
  int degree = 0;             // p for D_p acting on Z/p, n for S_n or A_n
  std::vector<Perm> perms;    // image of each generator as a permutation
  std::optional<Coloring> coloring;
  Representation representative;  // permutation matrices over Z
  std::string label() const;
};

// Fox p-colourings modulo the affine group of F_p, trivial ones excluded.
std::vector<RepClass> enumerate_colorings(const Diagram& d, std::uint32_t p);
// Total number of colourings (p^k), trivial ones included.
Integer count_colorings(const Diagram& d, std::uint32_t p);
// Meridian with colour c -> (conjugation) o (multiplication by z^(2c)) on Z[z_p], basis 1..z^(p-2).
Representation dihedral_integral_lift(const Presentation& p, const RepClass& rc);

// Surjections onto S_n or A_n (n <= 8) up to conjugation in S_n, all meridians in one class.
std::vector<RepClass> enumerate_perm_reps(const Presentation& p, int n, RepSymmetry target);
Representation perm_to_matrices(const Presentation& p, const std::vector<Perm>& perms,
                                const RingSpec& ring = RingSpec::integers());

// permutation helpers; (a * b)(i) = a(b(i))
Perm perm_compose(const Perm& a, const Perm& b);
Perm perm_inverse(const Perm& a);
bool perm_is_even(const Perm& a);
std::size_t generated_group_order(const std::vector<Perm>& gens, std::size_t stop_at = 0);
Perm perm_of_word(const FreeWord& w, const std::vector<Perm>& images);

}  // namespace twistlab
