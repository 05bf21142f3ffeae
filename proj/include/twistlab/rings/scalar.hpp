#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twistlab/rings/ring_spec.hpp"

namespace twistlab {

using Integer = mpz_class;
using Rational = mpq_class;

struct ModInt {
  std::uint64_t value = 0;
  std::uint32_t p = 2;
  bool operator==(const ModInt&) const = default;
};

// Dense coefficients of Phi_q, ascending, cached.
const std::vector<long>& cyclotomic_coefficients(std::uint32_t q);

// Element of Z[zeta_q] or Q(zeta_q) in the power basis 1, z, ..., z^(phi(q)-1).
class CycScalar {
 public:
  CycScalar() = default;
  CycScalar(std::uint32_t q, bool rational_base, std::vector<Rational> coeffs);

  static CycScalar from_rational(std::uint32_t q, bool rational_base, const Rational& r);
  static CycScalar zeta_power(std::uint32_t q, bool rational_base, long k);

  std::uint32_t order() const { return q_; }
  bool rational_base() const { return rational_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_integral() const;
  std::optional<Rational> as_rational() const;

  CycScalar operator-() const;
  CycScalar& operator+=(const CycScalar& o);
  CycScalar& operator-=(const CycScalar& o);
  friend CycScalar operator+(CycScalar a, const CycScalar& b) { return a += b; }
  friend CycScalar operator-(CycScalar a, const CycScalar& b) { return a -= b; }
  friend CycScalar operator*(const CycScalar& a, const CycScalar& b);
  bool operator==(const CycScalar& o) const { return q_ == o.q_ && c_ == o.c_; }

  // zeta -> zeta^k, k coprime to q
  CycScalar galois(long k) const;
  Rational norm() const;
  std::optional<CycScalar> divide_exact(const CycScalar& d) const;
  CycScalar with_base(bool rational_base) const;

  std::string to_string() const;

 private:
  void reduce(std::vector<Rational>& poly) const;
  std::uint32_t q_ = 1;
  bool rational_ = false;
  std::vector<Rational> c_;
};

// Element of one of the rings described by RingSpec.
class Scalar {
 public:
  Scalar() : v_(Integer(0)) {}
  explicit Scalar(Integer v) : v_(std::move(v)) {}
  explicit Scalar(Rational v) : v_(std::move(v)) {}
  explicit Scalar(ModInt v) : v_(v) {}
  explicit Scalar(CycScalar v) : v_(std::move(v)) {}

  static Scalar zero(const RingSpec& r);
  static Scalar one(const RingSpec& r);
  static Scalar from_integer(const RingSpec& r, const Integer& n);
  static Scalar from_integer(const RingSpec& r, long n) { return from_integer(r, Integer(n)); }
  static Scalar from_rational(const RingSpec& r, const Rational& x);
  static Scalar zeta(const RingSpec& r, long k = 1);

  RingSpec ring() const;
  bool is_zero() const;
  bool is_one() const;

  bool is_integer() const { return std::holds_alternative<Integer>(v_); }
  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  bool is_modint() const { return std::holds_alternative<ModInt>(v_); }
  bool is_cyclotomic() const { return std::holds_alternative<CycScalar>(v_); }
  const Integer& integer() const { return std::get<Integer>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const ModInt& modint() const { return std::get<ModInt>(v_); }
  const CycScalar& cyclotomic() const { return std::get<CycScalar>(v_); }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  // this += a * b
  void add_product(const Scalar& a, const Scalar& b);
  void sub_product(const Scalar& a, const Scalar& b);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  bool operator==(const Scalar& o) const { return v_ == o.v_; }

  std::optional<Scalar> divide_exact(const Scalar& d) const;
  bool is_unit() const;
  Scalar inverse() const;
  // Unit u such that u * (*this) is the chosen associate.
  Scalar normalizing_unit() const;
  Scalar galois(long k) const;

  Scalar map_to(const RingSpec& target) const;
  std::string to_string() const;

 private:
  std::variant<Integer, Rational, ModInt, CycScalar> v_;
};

}  // namespace twistlab
