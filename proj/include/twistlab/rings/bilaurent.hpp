#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "twistlab/rings/laurent.hpp"

namespace twistlab {

// Laurent polynomial in t and s; keys are (t-exponent, s-exponent).
class BiLaurentPoly {
 public:
  using Key = std::pair<int, int>;

  explicit BiLaurentPoly(RingSpec ring = RingSpec::integers()) : ring_(ring) {}
  static BiLaurentPoly monomial(const Scalar& c, int et, int es);
  static BiLaurentPoly constant(const RingSpec& r, long c);
  static BiLaurentPoly from_t(const LaurentPoly& p);
  static BiLaurentPoly from_s(const LaurentPoly& p);

  const RingSpec& ring() const { return ring_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, Scalar>& terms() const { return terms_; }
  Scalar coeff(int et, int es) const;

  BiLaurentPoly operator-() const;
  BiLaurentPoly& operator+=(const BiLaurentPoly& o);
  BiLaurentPoly& operator-=(const BiLaurentPoly& o);
  friend BiLaurentPoly operator+(BiLaurentPoly a, const BiLaurentPoly& b) { return a += b; }
  friend BiLaurentPoly operator-(BiLaurentPoly a, const BiLaurentPoly& b) { return a -= b; }
  friend BiLaurentPoly operator*(const BiLaurentPoly& a, const BiLaurentPoly& b);
  friend BiLaurentPoly operator*(BiLaurentPoly a, const Scalar& c);
  bool operator==(const BiLaurentPoly& o) const { return ring_ == o.ring_ && terms_ == o.terms_; }

  BiLaurentPoly shifted(int dt, int ds) const;
  // s -> x (x may live in an extension ring such as Q(z_q))
  LaurentPoly at_s(const Scalar& x) const;
  // s -> zeta_q^power
  LaurentPoly at_s_root(std::uint32_t q, long power) const;

  std::string to_string() const;

 private:
  void add_term(const Key& k, const Scalar& c);
  RingSpec ring_;
  std::map<Key, Scalar> terms_;
};

std::optional<BiLaurentPoly> exact_divide(const BiLaurentPoly& a, const BiLaurentPoly& b);
// lowest t- and s-exponents moved to 0, leading coefficient (lex in t then s) normalized
BiLaurentPoly normalize(const BiLaurentPoly& p);

}  // namespace twistlab
