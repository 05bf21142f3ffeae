#include "twistlab/rings/scalar.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace twistlab {

namespace {

std::vector<long> compute_cyclotomic(std::uint32_t q) {
  // Phi_q = (t^q - 1) / prod_{d | q, d < q} Phi_d
  std::vector<long> num(q + 1, 0);
  num[0] = -1;
  num[q] = 1;
  for (std::uint32_t d = 1; d < q; ++d) {
    if (q % d) continue;
    const auto& den = cyclotomic_coefficients(d);
    std::size_t dn = den.size() - 1;
    std::vector<long> quo(num.size() - dn, 0);
    for (std::size_t k = num.size() - 1; k + 1 > dn; --k) {
      long c = num[k];
      quo[k - dn] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
      if (k == dn) break;
    }
    num = quo;
  }
  return num;
}

}  // namespace

const std::vector<long>& cyclotomic_coefficients(std::uint32_t q) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::unique_ptr<std::vector<long>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return *it->second;
  }
  if (q == 0) throw RingError("Phi_0 is undefined");
  auto v = std::make_unique<std::vector<long>>(q == 1 ? std::vector<long>{-1, 1}
                                                      : compute_cyclotomic(q));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, fresh] = cache.emplace(q, std::move(v));
  return *it->second;
}

// ---------------------------------------------------------------- CycScalar

CycScalar::CycScalar(std::uint32_t q, bool rational_base, std::vector<Rational> coeffs)
    : q_(q), rational_(rational_base) {
  reduce(coeffs);
  c_ = std::move(coeffs);
}

void CycScalar::reduce(std::vector<Rational>& a) const {
  const auto& phi = cyclotomic_coefficients(q_);
  std::size_t d = phi.size() - 1;
  for (std::size_t k = a.size(); k-- > d;) {
    if (a[k] == 0) continue;
    Rational c = a[k];
    for (std::size_t j = 0; j < d; ++j)
      if (phi[j] != 0) a[k - d + j] -= c * phi[j];
    a[k] = 0;
  }
  a.resize(d, Rational(0));
}

CycScalar CycScalar::from_rational(std::uint32_t q, bool rational_base, const Rational& r) {
  return CycScalar(q, rational_base, {r});
}

CycScalar CycScalar::zeta_power(std::uint32_t q, bool rational_base, long k) {
  long e = ((k % long(q)) + long(q)) % long(q);
  std::vector<Rational> c(e + 1, Rational(0));
  c[e] = 1;
  return CycScalar(q, rational_base, std::move(c));
}

bool CycScalar::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool CycScalar::is_integral() const {
  for (const auto& x : c_)
    if (x.get_den() != 1) return false;
  return true;
}

std::optional<Rational> CycScalar::as_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return std::nullopt;
  return c_.empty() ? Rational(0) : c_[0];
}

CycScalar CycScalar::operator-() const {
  CycScalar r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

static void check_same(const CycScalar& a, const CycScalar& b) {
  if (a.order() != b.order())
    throw RingError("cyclotomic orders differ: " + std::to_string(a.order()) + " vs " +
                    std::to_string(b.order()));
}

CycScalar& CycScalar::operator+=(const CycScalar& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CycScalar& CycScalar::operator-=(const CycScalar& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

CycScalar operator*(const CycScalar& a, const CycScalar& b) {
  check_same(a, b);
  std::vector<Rational> prod(a.c_.size() + b.c_.size(), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
  }
  CycScalar r;
  r.q_ = a.q_;
  r.rational_ = a.rational_ || b.rational_;
  r.reduce(prod);
  r.c_ = std::move(prod);
  return r;
}

CycScalar CycScalar::galois(long k) const {
  long q = long(q_);
  long kk = ((k % q) + q) % q;
  if (std::gcd(kk, q) != 1 && q > 1) throw RingError("galois exponent not coprime to order");
  std::vector<Rational> a(q_, Rational(0));
  for (std::size_t j = 0; j < c_.size(); ++j) a[(long(j) * kk) % q] += c_[j];
  return CycScalar(q_, rational_, std::move(a));
}

Rational CycScalar::norm() const {
  CycScalar acc = from_rational(q_, true, Rational(1));
  for (long k = 1; k < long(std::max<std::uint32_t>(q_, 2)); ++k) {
    if (std::gcd(k, long(q_)) != 1) continue;
    acc = acc * galois(k).with_base(true);
  }
  auto r = acc.as_rational();
  if (!r) throw RingError("norm is not rational");
  return *r;
}

std::optional<CycScalar> CycScalar::divide_exact(const CycScalar& d) const {
  check_same(*this, d);
  if (d.is_zero()) return std::nullopt;
  CycScalar num = with_base(true);
  for (long k = 2; k < long(q_); ++k) {
    if (std::gcd(k, long(q_)) != 1) continue;
    num = num * d.galois(k).with_base(true);
  }
  Rational n = d.norm();
  for (auto& x : num.c_) x /= n;
  num.rational_ = rational_;
  if (!rational_ && !num.is_integral()) return std::nullopt;
  return num;
}

CycScalar CycScalar::with_base(bool rational_base) const {
  CycScalar r = *this;
  r.rational_ = rational_base;
  return r;
}

std::string CycScalar::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) os << " + ";
    os << c_[i].get_str();
    if (i == 1) os << "*z";
    if (i > 1) os << "*z^" << i;
  }
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::zero(const RingSpec& r) { return from_integer(r, Integer(0)); }
Scalar Scalar::one(const RingSpec& r) { return from_integer(r, Integer(1)); }

Scalar Scalar::from_integer(const RingSpec& r, const Integer& n) {
  switch (r.kind()) {
    case RingKind::Integers: return Scalar(n);
    case RingKind::Rationals: return Scalar(Rational(n));
    case RingKind::ModP: {
      Integer m = n % r.prime();
      if (m < 0) m += r.prime();
      return Scalar(ModInt{m.get_ui(), r.prime()});
    }
    case RingKind::Cyclotomic:
      return Scalar(CycScalar::from_rational(r.order(), r.rational_base(), Rational(n)));
  }
  throw RingError("bad ring");
}

Scalar Scalar::from_rational(const RingSpec& r, const Rational& x) {
  switch (r.kind()) {
    case RingKind::Integers:
      if (x.get_den() != 1) throw RingError("non-integral rational " + x.get_str() + " in Z");
      return Scalar(Integer(x.get_num()));
    case RingKind::Rationals: return Scalar(x);
    case RingKind::ModP: {
      Scalar num = from_integer(r, x.get_num());
      Scalar den = from_integer(r, x.get_den());
      if (den.is_zero()) throw RingError("denominator vanishes mod " + std::to_string(r.prime()));
      return num * den.inverse();
    }
    case RingKind::Cyclotomic:
      if (!r.rational_base() && x.get_den() != 1)
        throw RingError("non-integral rational " + x.get_str() + " in " + r.name());
      return Scalar(CycScalar::from_rational(r.order(), r.rational_base(), x));
  }
  throw RingError("bad ring");
}

Scalar Scalar::zeta(const RingSpec& r, long k) {
  if (r.kind() != RingKind::Cyclotomic) throw RingError("zeta requires a cyclotomic ring");
  return Scalar(CycScalar::zeta_power(r.order(), r.rational_base(), k));
}

RingSpec Scalar::ring() const {
  switch (v_.index()) {
    case 0: return RingSpec::integers();
    case 1: return RingSpec::rationals();
    case 2: return RingSpec::mod_p(std::get<ModInt>(v_).p);
    default: {
      const auto& c = std::get<CycScalar>(v_);
      return RingSpec::cyclotomic(c.order(), c.rational_base());
    }
  }
}

bool Scalar::is_zero() const {
  switch (v_.index()) {
    case 0: return sgn(std::get<Integer>(v_)) == 0;
    case 1: return sgn(std::get<Rational>(v_)) == 0;
    case 2: return std::get<ModInt>(v_).value == 0;
    default: return std::get<CycScalar>(v_).is_zero();
  }
}

bool Scalar::is_one() const {
  switch (v_.index()) {
    case 0: return std::get<Integer>(v_) == 1;
    case 1: return std::get<Rational>(v_) == 1;
    case 2: return std::get<ModInt>(v_).value == 1;
    default: {
      auto r = std::get<CycScalar>(v_).as_rational();
      return r && *r == 1;
    }
  }
}

[[noreturn]] static void mismatch() { throw RingError("scalar ring mismatch"); }

Scalar Scalar::operator-() const {
  switch (v_.index()) {
    case 0: return Scalar(Integer(-std::get<Integer>(v_)));
    case 1: return Scalar(Rational(-std::get<Rational>(v_)));
    case 2: {
      ModInt m = std::get<ModInt>(v_);
      m.value = m.value ? m.p - m.value : 0;
      return Scalar(m);
    }
    default: return Scalar(-std::get<CycScalar>(v_));
  }
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (v_.index() != o.v_.index()) mismatch();
  switch (v_.index()) {
    case 0: std::get<Integer>(v_) += std::get<Integer>(o.v_); break;
    case 1: std::get<Rational>(v_) += std::get<Rational>(o.v_); break;
    case 2: {
      auto& a = std::get<ModInt>(v_);
      const auto& b = std::get<ModInt>(o.v_);
      if (a.p != b.p) mismatch();
      a.value = (a.value + b.value) % a.p;
      break;
    }
    default: std::get<CycScalar>(v_) += std::get<CycScalar>(o.v_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  if (v_.index() != o.v_.index()) mismatch();
  switch (v_.index()) {
    case 0: std::get<Integer>(v_) -= std::get<Integer>(o.v_); break;
    case 1: std::get<Rational>(v_) -= std::get<Rational>(o.v_); break;
    case 2: {
      auto& a = std::get<ModInt>(v_);
      const auto& b = std::get<ModInt>(o.v_);
      if (a.p != b.p) mismatch();
      a.value = (a.value + a.p - b.value) % a.p;
      break;
    }
    default: std::get<CycScalar>(v_) -= std::get<CycScalar>(o.v_);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (v_.index() != o.v_.index()) mismatch();
  switch (v_.index()) {
    case 0: std::get<Integer>(v_) *= std::get<Integer>(o.v_); break;
    case 1: std::get<Rational>(v_) *= std::get<Rational>(o.v_); break;
    case 2: {
      auto& a = std::get<ModInt>(v_);
      const auto& b = std::get<ModInt>(o.v_);
      if (a.p != b.p) mismatch();
      a.value = (a.value * b.value) % a.p;
      break;
    }
    default: {
      auto& a = std::get<CycScalar>(v_);
      a = a * std::get<CycScalar>(o.v_);
    }
  }
  return *this;
}

void Scalar::add_product(const Scalar& a, const Scalar& b) {
  if (v_.index() == 0 && a.v_.index() == 0 && b.v_.index() == 0) {
    mpz_addmul(std::get<Integer>(v_).get_mpz_t(), std::get<Integer>(a.v_).get_mpz_t(),
               std::get<Integer>(b.v_).get_mpz_t());
    return;
  }
  *this += a * b;
}

void Scalar::sub_product(const Scalar& a, const Scalar& b) {
  if (v_.index() == 0 && a.v_.index() == 0 && b.v_.index() == 0) {
    mpz_submul(std::get<Integer>(v_).get_mpz_t(), std::get<Integer>(a.v_).get_mpz_t(),
               std::get<Integer>(b.v_).get_mpz_t());
    return;
  }
  *this -= a * b;
}

std::optional<Scalar> Scalar::divide_exact(const Scalar& d) const {
  if (v_.index() != d.v_.index()) mismatch();
  if (d.is_zero()) return std::nullopt;
  switch (v_.index()) {
    case 0: {
      const auto& a = std::get<Integer>(v_);
      const auto& b = std::get<Integer>(d.v_);
      if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t())) return std::nullopt;
      Integer q;
      mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      return Scalar(std::move(q));
    }
    case 1: return Scalar(Rational(std::get<Rational>(v_) / std::get<Rational>(d.v_)));
    case 2: return *this * d.inverse();
    default: {
      auto r = std::get<CycScalar>(v_).divide_exact(std::get<CycScalar>(d.v_));
      if (!r) return std::nullopt;
      return Scalar(std::move(*r));
    }
  }
}

bool Scalar::is_unit() const {
  if (is_zero()) return false;
  switch (v_.index()) {
    case 0: return abs(std::get<Integer>(v_)) == 1;
    case 1:
    case 2: return true;
    default: {
      const auto& c = std::get<CycScalar>(v_);
      if (c.rational_base()) return true;
      return abs(c.norm()) == 1;
    }
  }
}

static std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

Scalar Scalar::inverse() const {
  if (!is_unit()) throw RingError("element " + to_string() + " is not invertible");
  switch (v_.index()) {
    case 0: return *this;
    case 1: return Scalar(Rational(1 / std::get<Rational>(v_)));
    case 2: {
      ModInt m = std::get<ModInt>(v_);
      m.value = powmod(m.value, m.p - 2, m.p);
      return Scalar(m);
    }
    default: {
      const auto& c = std::get<CycScalar>(v_);
      return Scalar(*CycScalar::from_rational(c.order(), c.rational_base(), 1).divide_exact(c));
    }
  }
}

Scalar Scalar::normalizing_unit() const {
  RingSpec r = ring();
  if (is_zero()) return one(r);
  switch (v_.index()) {
    case 0: return Scalar(Integer(sgn(std::get<Integer>(v_)) < 0 ? -1 : 1));
    case 1:
    case 2: return inverse();
    default: {
      const auto& c = std::get<CycScalar>(v_);
      if (c.rational_base()) return inverse();
      // associate with lexicographically greatest coefficient vector
      std::optional<CycScalar> best;
      CycScalar best_unit;
      std::uint32_t q = c.order();
      long nunits = (q % 2 == 0) ? long(q) : 2 * long(q);
      for (long j = 0; j < nunits; ++j) {
        CycScalar u = CycScalar::zeta_power(q, false, j);
        if (j >= long(q)) u = -CycScalar::zeta_power(q, false, j - q);
        CycScalar cand = u * c;
        if (!best || best->coeffs() < cand.coeffs()) {
          best = cand;
          best_unit = u;
        }
      }
      return Scalar(best_unit);
    }
  }
}

Scalar Scalar::galois(long k) const {
  if (v_.index() != 3) return *this;
  return Scalar(std::get<CycScalar>(v_).galois(k));
}

Scalar Scalar::map_to(const RingSpec& t) const {
  RingSpec s = ring();
  if (s == t) return *this;
  switch (v_.index()) {
    case 0: return from_integer(t, std::get<Integer>(v_));
    case 1:
      if (t.kind() == RingKind::Integers || (t.kind() == RingKind::Cyclotomic && !t.rational_base())) {
        const auto& x = std::get<Rational>(v_);
        if (x.get_den() != 1) throw RingError("cannot map " + x.get_str() + " into " + t.name());
      }
      return from_rational(t, std::get<Rational>(v_));
    case 2: throw RingError("cannot map " + s.name() + " into " + t.name());
    default: {
      const auto& c = std::get<CycScalar>(v_);
      if (t.kind() == RingKind::Cyclotomic && t.order() == c.order()) {
        if (!t.rational_base() && !c.is_integral())
          throw RingError("non-integral element cannot be mapped into " + t.name());
        return Scalar(c.with_base(t.rational_base()));
      }
      if (auto r = c.as_rational()) return Scalar(*r).map_to(t);
      throw RingError("cannot map " + s.name() + " into " + t.name());
    }
  }
}

std::string Scalar::to_string() const {
  switch (v_.index()) {
    case 0: return std::get<Integer>(v_).get_str();
    case 1: return std::get<Rational>(v_).get_str();
    case 2: return std::to_string(std::get<ModInt>(v_).value);
    default: return std::get<CycScalar>(v_).to_string();
  }
}

}  // namespace twistlab
