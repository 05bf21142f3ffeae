#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistlab/rings/laurent.hpp"

namespace twistlab {

struct Factor {
  LaurentPoly poly;
  int multiplicity = 1;
  bool operator==(const Factor&) const = default;
};

// unit * prod factor^multiplicity == input; the unit is a monomial c t^k.
struct Factorization {
  LaurentPoly unit;
  std::vector<Factor> factors;

  LaurentPoly expand() const;
  int degree() const;  // total span of the non-unit part
  std::string to_string() const;
};

Factorization factor_mod_p(const LaurentPoly& f);
// Integer primitive factors with positive leading coefficient; accepts Z or Q input.
Factorization factor_over_Q(const LaurentPoly& f);
// Factors over Q(zeta_q), q in {3, 4, 6}, monic.
Factorization factor_over_cyclotomic(const LaurentPoly& f, std::uint32_t q);

// Degrees of the irreducible factors mod p (with repetition).
std::vector<int> degree_pattern_mod_p(const LaurentPoly& f, std::uint32_t p);
// A prime p <= bound where f is square-free mod p with a single irreducible factor.
std::optional<std::uint32_t> irreducibility_witness(const LaurentPoly& f, std::uint32_t bound = 100);

// f(t) = g(t^q)
std::optional<LaurentPoly> is_power_substitution(const LaurentPoly& f, int q);

struct CycDivisorSet {
  CycScalar element;
  std::vector<CycScalar> divisors;  // one per associate class
};
// Divisors of v in Z (q = 1), Z[i] (q = 4) or Z[zeta_3] (q = 3, 6), up to units.
CycDivisorSet divisors_up_to_units(const CycScalar& v);
// The associate of x picked as class representative.
CycScalar canonical_associate(const CycScalar& x);

}  // namespace twistlab
