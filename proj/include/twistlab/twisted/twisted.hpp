#pragma once

#include <optional>
#include <string>

#include "twistlab/fox/fox.hpp"
#include "twistlab/knots/codes.hpp"
#include "twistlab/reps/representation.hpp"

namespace twistlab {

// rho*(g) = t^eps(g) rho(g). beta2 has one n-row block per relator and one n-column
// block per generator; beta1 stacks the blocks I - rho*(x_j).
struct TwistedComplexData {
  PolyMatrix beta2;
  PolyMatrix beta1;
  RingSpec ring;
  std::size_t n = 0;
  std::size_t g = 0;
};

TwistedComplexData twisted_complex(const Presentation& p, const Representation& r);
// Same with both weights: the s-weight of each generator enters as s^eps_s.
BiPolyMatrix twisted_fox_2var(const Presentation& p, const Representation& r);

PolyMatrix twist_substitute(const GroupRingElement& e, const Representation& r);

// Order of R^n[t^+-1] / Im(I - rho*). Over Z the result is made primitive.
LaurentPoly delta0(const Presentation& p, const Representation& r);

struct WadaValue {
  LaurentPoly numerator;
  LaurentPoly denominator;
  int deleted_generator = -1;
  std::string to_string() const;
};

// deleted < 0 picks the first generator with det(I - rho*(x_j)) != 0;
// nullopt when the chosen block is singular.
std::optional<WadaValue> wada(const Presentation& p, const Representation& r, int deleted = -1,
                              const DeterminantOptions& opt = {});

struct TwistedResult {
  LaurentPoly delta0;
  std::optional<WadaValue> wada;
  LaurentPoly delta;    // zero when A_1 is not torsion
  bool torsion = true;
};

TwistedResult twisted_alexander_full(const Presentation& p, const Representation& r,
                                     const DeterminantOptions& opt = {});
LaurentPoly twisted_alexander(const Presentation& p, const Representation& r,
                              const DeterminantOptions& opt = {});

// G(t,s) = det B(t,s) / (1-s)^n with the axis meridian's column block removed.
BiLaurentPoly twisted_alexander_2var(const Presentation& p, const Representation& r, int axis_generator);

// det(I - rho(A) t^lambda)
LaurentPoly delta_axis(const Representation& r, const FreeWord& axis_word, int lambda);

LaurentPoly classical_alexander(const Diagram& d);

// Knot representation on the Artin presentation of a closed braid, extended to the
// braid-plus-axis presentation with the axis meridian acting trivially.
Representation extend_to_axis(const Representation& knot_rep, const AxisLink& link);

}  // namespace twistlab
