#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twistlab/rings/scalar.hpp"

namespace twistlab {

// Laurent polynomial in t over a RingSpec. Stored densely from the lowest
// exponent; the first and last stored coefficients are nonzero.
class LaurentPoly {
 public:
  explicit LaurentPoly(RingSpec ring = RingSpec::integers()) : ring_(ring) {}
  LaurentPoly(RingSpec ring, int low, std::vector<Scalar> coeffs);

  static LaurentPoly constant(const Scalar& c);
  static LaurentPoly constant(const RingSpec& r, long c);
  static LaurentPoly monomial(const Scalar& c, int e);
  static LaurentPoly t_power(const RingSpec& r, int e);
  // coefficients of t^low, t^(low+1), ...
  static LaurentPoly from_integers(const RingSpec& r, int low, const std::vector<long>& c);

  const RingSpec& ring() const { return ring_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1 && (c_.empty() || low_ == 0); }
  bool is_monomial() const { return c_.size() == 1; }
  int low() const { return low_; }
  int high() const { return low_ + int(c_.size()) - 1; }
  int span() const { return c_.empty() ? -1 : int(c_.size()) - 1; }
  Scalar coeff(int e) const;
  const std::vector<Scalar>& coefficients() const { return c_; }
  Scalar leading() const;
  Scalar trailing() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Scalar& s);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const Scalar& s) { return a *= s; }
  friend LaurentPoly operator*(const Scalar& s, LaurentPoly a) { return a *= s; }
  bool operator==(const LaurentPoly& o) const;

  // this += a * b
  void add_product(const LaurentPoly& a, const LaurentPoly& b);
  void sub_product(const LaurentPoly& a, const LaurentPoly& b);

  LaurentPoly pow(unsigned k) const;
  LaurentPoly shifted(int k) const;
  // t -> t^k
  LaurentPoly substitute_power(int k) const;
  LaurentPoly mirrored() const { return substitute_power(-1); }
  Scalar evaluate(const Scalar& x) const;
  LaurentPoly map_ring(const RingSpec& target) const;
  LaurentPoly derivative() const;
  // coefficientwise zeta -> zeta^k
  LaurentPoly galois(long k) const;

  std::string to_string() const;

 private:
  void trim();
  RingSpec ring_;
  int low_ = 0;
  std::vector<Scalar> c_;
};

struct DivMod {
  LaurentPoly quotient;
  LaurentPoly remainder;
};

// a = q * b exactly in R[t, t^-1]
std::optional<LaurentPoly> exact_divide(const LaurentPoly& a, const LaurentPoly& b);
// Euclidean division of the polynomial parts (b's leading coefficient must be a unit);
// both arguments are first shifted so their lowest exponent is 0.
DivMod divmod(const LaurentPoly& a, const LaurentPoly& b);
// gcd over a field (monic) or over Z (positive leading coefficient), lowest exponent 0
LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b);

Integer content(const LaurentPoly& p);
LaurentPoly primitive_part(const LaurentPoly& p);
// Multiply a polynomial over Q (or Q(z_q)) by the positive rational that makes it primitive
// and integral; the ring becomes Z (or Z[z_q]).
LaurentPoly clear_denominators(const LaurentPoly& p);

LaurentPoly cyclotomic_polynomial(std::uint32_t q);
// p evaluated at zeta_q^power as an element of Z[z_q] (or Q(z_q) for rational input)
CycScalar cyc_eval(const LaurentPoly& p, std::uint32_t q, long power = 1);
// substitute t -> zeta_q^power * t
LaurentPoly twist_by_root(const LaurentPoly& p, std::uint32_t q, long power);

struct UnitNormalForm {
  LaurentPoly poly;
  std::string unit_class;
};
UnitNormalForm normalize_up_to_unit(const LaurentPoly& p);
LaurentPoly normalize(const LaurentPoly& p);
bool equal_up_to_unit(const LaurentPoly& a, const LaurentPoly& b);
bool equal_up_to_unit_and_mirror(const LaurentPoly& a, const LaurentPoly& b);

// Expressions in t (and z for zeta) with + - * ^ and parentheses,
// e.g. "(t-1)^2*(t^2-t+1)" or "1*t^0 + -3*t^1 + 1*t^2".
LaurentPoly parse_laurent(std::string_view text, const RingSpec& ring = RingSpec::integers());

}  // namespace twistlab
