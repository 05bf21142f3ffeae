#include "twistlab/rings/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace twistlab {

static void check_ring(const RingSpec& a, const RingSpec& b) {
  if (!(a == b)) throw RingError("polynomial ring mismatch: " + a.name() + " vs " + b.name());
}

LaurentPoly::LaurentPoly(RingSpec ring, int low, std::vector<Scalar> coeffs)
    : ring_(ring), low_(low), c_(std::move(coeffs)) {
  for (auto& c : c_)
    if (!(c.ring() == ring_)) c = c.map_to(ring_);
  trim();
}

LaurentPoly LaurentPoly::constant(const Scalar& c) { return LaurentPoly(c.ring(), 0, {c}); }

LaurentPoly LaurentPoly::constant(const RingSpec& r, long c) {
  return LaurentPoly(r, 0, {Scalar::from_integer(r, c)});
}

LaurentPoly LaurentPoly::monomial(const Scalar& c, int e) { return LaurentPoly(c.ring(), e, {c}); }

LaurentPoly LaurentPoly::t_power(const RingSpec& r, int e) { return monomial(Scalar::one(r), e); }

LaurentPoly LaurentPoly::from_integers(const RingSpec& r, int low, const std::vector<long>& c) {
  std::vector<Scalar> v;
  v.reserve(c.size());
  for (long x : c) v.push_back(Scalar::from_integer(r, x));
  return LaurentPoly(r, low, std::move(v));
}

void LaurentPoly::trim() {
  std::size_t b = 0, e = c_.size();
  while (b < e && c_[b].is_zero()) ++b;
  while (e > b && c_[e - 1].is_zero()) --e;
  if (b == e) {
    c_.clear();
    low_ = 0;
    return;
  }
  if (b > 0 || e < c_.size()) {
    c_ = std::vector<Scalar>(std::make_move_iterator(c_.begin() + b),
                             std::make_move_iterator(c_.begin() + e));
    low_ += int(b);
  }
}

Scalar LaurentPoly::coeff(int e) const {
  if (c_.empty() || e < low_ || e > high()) return Scalar::zero(ring_);
  return c_[e - low_];
}

Scalar LaurentPoly::leading() const { return c_.empty() ? Scalar::zero(ring_) : c_.back(); }
Scalar LaurentPoly::trailing() const { return c_.empty() ? Scalar::zero(ring_) : c_.front(); }

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_ring(ring_, o.ring_);
  if (o.c_.empty()) return *this;
  if (c_.empty()) return *this = o;
  int lo = std::min(low_, o.low_);
  int hi = std::max(high(), o.high());
  if (lo < low_) c_.insert(c_.begin(), std::size_t(low_ - lo), Scalar::zero(ring_));
  low_ = lo;
  c_.resize(std::size_t(hi - lo + 1), Scalar::zero(ring_));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[o.low_ - lo + i] += o.c_[i];
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  check_ring(ring_, o.ring_);
  if (o.c_.empty()) return *this;
  if (c_.empty()) return *this = -o;
  int lo = std::min(low_, o.low_);
  int hi = std::max(high(), o.high());
  if (lo < low_) c_.insert(c_.begin(), std::size_t(low_ - lo), Scalar::zero(ring_));
  low_ = lo;
  c_.resize(std::size_t(hi - lo + 1), Scalar::zero(ring_));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[o.low_ - lo + i] -= o.c_[i];
  trim();
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r(a.ring_);
  r.add_product(a, b);
  return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly& LaurentPoly::operator*=(const Scalar& s) {
  Scalar x = s.ring() == ring_ ? s : s.map_to(ring_);
  for (auto& c : c_) c *= x;
  trim();
  return *this;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  return ring_ == o.ring_ && low_ == o.low_ && c_ == o.c_;
}

static void accumulate_product(LaurentPoly& self, const LaurentPoly& a, const LaurentPoly& b,
                               bool subtract, std::vector<Scalar>& c, int& low,
                               const RingSpec& ring) {
  // growing c would invalidate an aliased operand
  if (&a == &self || &b == &self) {
    LaurentPoly ca = a, cb = b;
    accumulate_product(self, ca, cb, subtract, c, low, ring);
    return;
  }
  int lo = a.low() + b.low();
  int hi = a.high() + b.high();
  if (c.empty()) {
    low = lo;
    c.assign(std::size_t(hi - lo + 1), Scalar::zero(ring));
  } else {
    int nlo = std::min(low, lo), nhi = std::max(low + int(c.size()) - 1, hi);
    if (nlo < low) c.insert(c.begin(), std::size_t(low - nlo), Scalar::zero(ring));
    low = nlo;
    c.resize(std::size_t(nhi - nlo + 1), Scalar::zero(ring));
  }
  const auto& ac = a.coefficients();
  const auto& bc = b.coefficients();
  std::size_t off = std::size_t(lo - low);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i].is_zero()) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) {
      if (subtract)
        c[off + i + j].sub_product(ac[i], bc[j]);
      else
        c[off + i + j].add_product(ac[i], bc[j]);
    }
  }
}

void LaurentPoly::add_product(const LaurentPoly& a, const LaurentPoly& b) {
  check_ring(a.ring_, b.ring_);
  check_ring(ring_, a.ring_);
  if (a.is_zero() || b.is_zero()) return;
  accumulate_product(*this, a, b, false, c_, low_, ring_);
  trim();
}

void LaurentPoly::sub_product(const LaurentPoly& a, const LaurentPoly& b) {
  check_ring(a.ring_, b.ring_);
  check_ring(ring_, a.ring_);
  if (a.is_zero() || b.is_zero()) return;
  accumulate_product(*this, a, b, true, c_, low_, ring_);
  trim();
}

LaurentPoly LaurentPoly::pow(unsigned k) const {
  LaurentPoly result = constant(ring_, 1), base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly r = *this;
  if (!r.is_zero()) r.low_ += k;
  return r;
}

LaurentPoly LaurentPoly::substitute_power(int k) const {
  if (is_zero()) return *this;
  if (k == 0) return constant(evaluate(Scalar::one(ring_)));
  int ak = k < 0 ? -k : k;
  std::vector<Scalar> v(std::size_t(span()) * ak + 1, Scalar::zero(ring_));
  int lo = k > 0 ? low_ * k : high() * k;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    int e = (low_ + int(i)) * k;
    v[std::size_t(e - lo)] = c_[i];
  }
  return LaurentPoly(ring_, lo, std::move(v));
}

Scalar LaurentPoly::evaluate(const Scalar& x) const {
  RingSpec r = x.ring();
  if (is_zero()) return Scalar::zero(r);
  Scalar acc = Scalar::zero(r);
  for (std::size_t i = c_.size(); i-- > 0;) {
    acc *= x;
    acc += c_[i].ring() == r ? c_[i] : c_[i].map_to(r);
  }
  Scalar base = low_ < 0 ? x.inverse() : x;
  int e = low_ < 0 ? -low_ : low_;
  Scalar p = Scalar::one(r);
  for (int i = 0; i < e; ++i) p *= base;
  return acc * p;
}

LaurentPoly LaurentPoly::map_ring(const RingSpec& target) const {
  std::vector<Scalar> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.push_back(c.map_to(target));
  return LaurentPoly(target, low_, std::move(v));
}

LaurentPoly LaurentPoly::derivative() const {
  if (is_zero()) return *this;
  std::vector<Scalar> v;
  v.reserve(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i)
    v.push_back(c_[i] * Scalar::from_integer(ring_, long(low_ + int(i))));
  return LaurentPoly(ring_, low_ - 1, std::move(v));
}

LaurentPoly LaurentPoly::galois(long k) const {
  LaurentPoly r = *this;
  for (auto& c : r.c_) c = c.galois(k);
  return r;
}

std::string LaurentPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].to_string() << "*t^" << (low_ + int(i));
  }
  return os.str();
}

// ---------------------------------------------------------------- division

std::optional<LaurentPoly> exact_divide(const LaurentPoly& a, const LaurentPoly& b) {
  check_ring(a.ring(), b.ring());
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return a;
  std::vector<Scalar> A = a.coefficients();
  const auto& B = b.coefficients();
  std::size_t na = A.size(), nb = B.size();
  if (na < nb) return std::nullopt;
  std::vector<Scalar> Q(na - nb + 1, Scalar::zero(a.ring()));
  const Scalar& lb = B.back();
  bool unit_lead = lb.is_one();
  for (std::size_t i = na; i-- > nb - 1;) {
    if (A[i].is_zero()) continue;
    Scalar qc;
    if (unit_lead) {
      qc = A[i];
    } else {
      auto d = A[i].divide_exact(lb);
      if (!d) return std::nullopt;
      qc = std::move(*d);
    }
    for (std::size_t j = 0; j < nb; ++j) A[i - nb + 1 + j].sub_product(qc, B[j]);
    Q[i - nb + 1] = std::move(qc);
  }
  for (std::size_t i = 0; i + 1 < nb; ++i)
    if (!A[i].is_zero()) return std::nullopt;
  return LaurentPoly(a.ring(), a.low() - b.low(), std::move(Q));
}

DivMod divmod(const LaurentPoly& a0, const LaurentPoly& b0) {
  check_ring(a0.ring(), b0.ring());
  if (b0.is_zero()) throw RingError("division by zero polynomial");
  LaurentPoly a = a0.shifted(-a0.low()), b = b0.shifted(-b0.low());
  const RingSpec& r = a.ring();
  Scalar inv = b.leading().inverse();
  std::vector<Scalar> A = a.coefficients();
  const auto& B = b.coefficients();
  if (a.is_zero() || A.size() < B.size()) return {LaurentPoly(r), a};
  std::size_t na = A.size(), nb = B.size();
  std::vector<Scalar> Q(na - nb + 1, Scalar::zero(r));
  for (std::size_t i = na; i-- > nb - 1;) {
    if (A[i].is_zero()) continue;
    Scalar qc = A[i] * inv;
    for (std::size_t j = 0; j < nb; ++j) A[i - nb + 1 + j].sub_product(qc, B[j]);
    Q[i - nb + 1] = std::move(qc);
  }
  A.resize(nb - 1);
  return {LaurentPoly(r, 0, std::move(Q)), LaurentPoly(r, 0, std::move(A))};
}

Integer content(const LaurentPoly& p) {
  if (p.ring().kind() != RingKind::Integers) throw RingError("content requires integer coefficients");
  Integer g = 0;
  for (const auto& c : p.coefficients()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.integer().get_mpz_t());
  return g;
}

LaurentPoly primitive_part(const LaurentPoly& p) {
  if (p.is_zero()) return p;
  Integer g = content(p);
  if (sgn(p.leading().integer()) < 0) g = -g;
  std::vector<Scalar> v;
  for (const auto& c : p.coefficients()) v.push_back(*c.divide_exact(Scalar(g)));
  return LaurentPoly(p.ring(), p.low(), std::move(v));
}

LaurentPoly clear_denominators(const LaurentPoly& p) {
  const RingSpec& r = p.ring();
  if (r.kind() == RingKind::Integers) return primitive_part(p);
  if (r.kind() == RingKind::Rationals) {
    Integer l = 1, g = 0;
    for (const auto& c : p.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.rational().get_den_mpz_t());
    for (const auto& c : p.coefficients()) {
      Integer n = Rational(c.rational() * l).get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    std::vector<Scalar> v;
    for (const auto& c : p.coefficients()) {
      Rational x = c.rational() * l / g;
      v.push_back(Scalar(Integer(x.get_num())));
    }
    return LaurentPoly(RingSpec::integers(), p.low(), std::move(v));
  }
  if (r.kind() == RingKind::Cyclotomic) {
    Integer l = 1, g = 0;
    for (const auto& c : p.coefficients())
      for (const auto& x : c.cyclotomic().coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (const auto& c : p.coefficients())
      for (const auto& x : c.cyclotomic().coeffs()) {
        Integer n = Rational(x * l).get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
      }
    RingSpec zr = RingSpec::cyclotomic(r.order(), false);
    std::vector<Scalar> v;
    for (const auto& c : p.coefficients()) {
      std::vector<Rational> xs = c.cyclotomic().coeffs();
      for (auto& x : xs) x = x * l / g;
      v.push_back(Scalar(CycScalar(r.order(), false, xs)));
    }
    return LaurentPoly(zr, p.low(), std::move(v));
  }
  return p;
}

static LaurentPoly integer_gcd(LaurentPoly a, LaurentPoly b) {
  Integer ca = content(a), cb = content(b), cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  a = primitive_part(a);
  b = primitive_part(b);
  if (a.span() < b.span()) std::swap(a, b);
  while (!b.is_zero()) {
    // pseudo-remainder of a by b
    std::vector<Scalar> A = a.coefficients();
    const auto& B = b.coefficients();
    std::size_t na = A.size(), nb = B.size();
    const Scalar& lb = B.back();
    for (std::size_t i = na; i-- > nb - 1;) {
      Scalar lead = A[i];
      for (auto& x : A) x *= lb;
      if (!lead.is_zero())
        for (std::size_t j = 0; j < nb; ++j) A[i - nb + 1 + j].sub_product(lead, B[j]);
    }
    A.resize(nb - 1);
    LaurentPoly r(RingSpec::integers(), 0, std::move(A));
    if (!r.is_zero()) r = primitive_part(r.shifted(-r.low()));
    a = std::move(b);
    b = std::move(r);
  }
  return a * Scalar(cg);
}

LaurentPoly gcd(const LaurentPoly& a0, const LaurentPoly& b0) {
  check_ring(a0.ring(), b0.ring());
  const RingSpec& r = a0.ring();
  if (a0.is_zero()) return normalize(b0);
  if (b0.is_zero()) return normalize(a0);
  LaurentPoly a = a0.shifted(-a0.low()), b = b0.shifted(-b0.low());
  if (r.kind() == RingKind::Integers) return normalize(integer_gcd(a, b));
  if (!r.is_field()) {
    LaurentPoly g = gcd(a.map_ring(r.fraction_field()), b.map_ring(r.fraction_field()));
    return normalize(clear_denominators(g).map_ring(r));
  }
  while (!b.is_zero()) {
    LaurentPoly rem = divmod(a, b).remainder;
    a = std::move(b);
    b = std::move(rem);
  }
  return normalize(a);
}

// ---------------------------------------------------------------- cyclotomic

LaurentPoly cyclotomic_polynomial(std::uint32_t q) {
  return LaurentPoly::from_integers(RingSpec::integers(), 0, cyclotomic_coefficients(q));
}

CycScalar cyc_eval(const LaurentPoly& p, std::uint32_t q, long power) {
  const RingSpec& r = p.ring();
  bool rational = r.is_field();
  if (r.kind() == RingKind::ModP) throw RingError("cyc_eval needs characteristic zero");
  if (r.kind() == RingKind::Cyclotomic) {
    if (r.order() != q) throw RingError("cyc_eval order mismatch");
    CycScalar acc = CycScalar::from_rational(q, rational, 0);
    for (int e = p.low(); e <= p.high(); ++e) {
      Scalar c = p.coeff(e);
      if (!c.is_zero()) acc += c.cyclotomic() * CycScalar::zeta_power(q, rational, long(e) * power);
    }
    return acc;
  }
  std::vector<Rational> v(q, Rational(0));
  long lq = long(q);
  for (int e = p.low(); e <= p.high(); ++e) {
    Scalar c = p.coeff(e);
    if (c.is_zero()) continue;
    long k = ((long(e) * power) % lq + lq) % lq;
    v[k] += r.kind() == RingKind::Integers ? Rational(c.integer()) : c.rational();
  }
  return CycScalar(q, rational, std::move(v));
}

LaurentPoly twist_by_root(const LaurentPoly& p, std::uint32_t q, long power) {
  const RingSpec& r = p.ring();
  RingSpec target = r.kind() == RingKind::Cyclotomic ? r : RingSpec::cyclotomic(q, r.is_field());
  std::vector<Scalar> v;
  for (int e = p.low(); e <= p.high(); ++e) {
    Scalar c = p.coeff(e).map_to(target);
    v.push_back(c * Scalar::zeta(target, long(e) * power));
  }
  return LaurentPoly(target, p.low(), std::move(v));
}

// ---------------------------------------------------------------- normal forms

UnitNormalForm normalize_up_to_unit(const LaurentPoly& p) {
  if (p.is_zero()) return {p, "1"};
  int shift = p.low();
  Scalar u = p.leading().normalizing_unit();
  LaurentPoly q = p.shifted(-shift) * u;
  Scalar inv = u.inverse();
  return {q, inv.to_string() + "*t^" + std::to_string(shift)};
}

LaurentPoly normalize(const LaurentPoly& p) { return normalize_up_to_unit(p).poly; }

bool equal_up_to_unit(const LaurentPoly& a, const LaurentPoly& b) {
  return normalize(a) == normalize(b);
}

bool equal_up_to_unit_and_mirror(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly na = normalize(a);
  return na == normalize(b) || na == normalize(b.mirrored());
}

// ---------------------------------------------------------------- parsing

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view s, const RingSpec& r) : s_(s), r_(r) {}

  LaurentPoly parse() {
    LaurentPoly v = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw RingError("polynomial parse error at position " + std::to_string(i_) + ": " + msg);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  LaurentPoly expr() {
    LaurentPoly v = term();
    while (true) {
      if (peek('+')) {
        ++i_;
        v += term();
      } else if (peek('-')) {
        ++i_;
        v -= term();
      } else {
        return v;
      }
    }
  }
  bool starts_factor() {
    skip();
    if (i_ >= s_.size()) return false;
    char c = s_[i_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == 't' || c == 'z' || c == '(';
  }
  LaurentPoly term() {
    LaurentPoly v = unary();
    while (true) {
      if (peek('*')) {
        ++i_;
        v = v * unary();
      } else if (peek('/')) {
        ++i_;
        LaurentPoly d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
        auto q = d.leading().is_unit() ? std::optional<LaurentPoly>(v * d.leading().inverse())
                                       : exact_divide(v, d);
        if (!q) fail("inexact division");
        v = *q;
      } else if (starts_factor()) {
        v = v * unary();
      } else {
        return v;
      }
    }
  }
  LaurentPoly unary() {
    if (peek('-')) {
      ++i_;
      return -unary();
    }
    if (peek('+')) {
      ++i_;
      return unary();
    }
    return power();
  }
  LaurentPoly power() {
    LaurentPoly base = primary();
    if (!peek('^')) return base;
    ++i_;
    skip();
    bool neg = false;
    if (peek('-')) {
      neg = true;
      ++i_;
    }
    skip();
    std::size_t st = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (st == i_) fail("expected exponent");
    unsigned e = unsigned(std::stoul(std::string(s_.substr(st, i_ - st))));
    if (!neg) return base.pow(e);
    if (!base.is_monomial() || !base.leading().is_unit()) fail("negative power of a non-unit");
    LaurentPoly inv = LaurentPoly::monomial(base.leading().inverse(), -base.low());
    return inv.pow(e);
  }
  LaurentPoly primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      LaurentPoly v = expr();
      if (!peek(')')) fail("expected ')'");
      ++i_;
      return v;
    }
    if (c == 't') {
      ++i_;
      return LaurentPoly::t_power(r_, 1);
    }
    if (c == 'z') {
      ++i_;
      if (r_.kind() != RingKind::Cyclotomic) fail("z requires a cyclotomic ring");
      return LaurentPoly::constant(Scalar::zeta(r_, 1));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      return LaurentPoly::constant(Scalar::from_integer(r_, Integer(std::string(s_.substr(st, i_ - st)))));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  RingSpec r_;
  std::size_t i_ = 0;
};

}  // namespace

LaurentPoly parse_laurent(std::string_view text, const RingSpec& ring) {
  return ExprParser(text, ring).parse();
}

}  // namespace twistlab
