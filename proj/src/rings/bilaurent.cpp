#include "twistlab/rings/bilaurent.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace twistlab {

BiLaurentPoly BiLaurentPoly::monomial(const Scalar& c, int et, int es) {
  BiLaurentPoly p(c.ring());
  p.add_term({et, es}, c);
  return p;
}

BiLaurentPoly BiLaurentPoly::constant(const RingSpec& r, long c) {
  return monomial(Scalar::from_integer(r, c), 0, 0);
}

BiLaurentPoly BiLaurentPoly::from_t(const LaurentPoly& p) {
  BiLaurentPoly r(p.ring());
  for (int e = p.low(); !p.is_zero() && e <= p.high(); ++e) r.add_term({e, 0}, p.coeff(e));
  return r;
}

BiLaurentPoly BiLaurentPoly::from_s(const LaurentPoly& p) {
  BiLaurentPoly r(p.ring());
  for (int e = p.low(); !p.is_zero() && e <= p.high(); ++e) r.add_term({0, e}, p.coeff(e));
  return r;
}

Scalar BiLaurentPoly::coeff(int et, int es) const {
  auto it = terms_.find({et, es});
  return it == terms_.end() ? Scalar::zero(ring_) : it->second;
}

void BiLaurentPoly::add_term(const Key& k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(k, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

BiLaurentPoly BiLaurentPoly::operator-() const {
  BiLaurentPoly r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

BiLaurentPoly& BiLaurentPoly::operator+=(const BiLaurentPoly& o) {
  if (!(ring_ == o.ring_)) throw RingError("bivariate ring mismatch");
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

BiLaurentPoly& BiLaurentPoly::operator-=(const BiLaurentPoly& o) {
  if (!(ring_ == o.ring_)) throw RingError("bivariate ring mismatch");
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

BiLaurentPoly operator*(const BiLaurentPoly& a, const BiLaurentPoly& b) {
  if (!(a.ring_ == b.ring_)) throw RingError("bivariate ring mismatch");
  BiLaurentPoly r(a.ring_);
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
  return r;
}

BiLaurentPoly operator*(BiLaurentPoly a, const Scalar& c) {
  BiLaurentPoly r(a.ring_);
  for (const auto& [k, x] : a.terms_) r.add_term(k, x * c);
  return r;
}

BiLaurentPoly BiLaurentPoly::shifted(int dt, int ds) const {
  BiLaurentPoly r(ring_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(Key{k.first + dt, k.second + ds}, c);
  return r;
}

LaurentPoly BiLaurentPoly::at_s(const Scalar& x) const {
  RingSpec target = x.ring();
  LaurentPoly r(target);
  for (const auto& [k, c] : terms_) {
    Scalar v = c.map_to(target);
    Scalar base = k.second < 0 ? x.inverse() : x;
    for (int i = 0; i < std::abs(k.second); ++i) v *= base;
    r += LaurentPoly::monomial(v, k.first);
  }
  return r;
}

LaurentPoly BiLaurentPoly::at_s_root(std::uint32_t q, long power) const {
  bool rational = ring_.is_field();
  return at_s(Scalar::zeta(RingSpec::cyclotomic(q, rational), power));
}

std::string BiLaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.to_string() << "*t^" << k.first << "*s^" << k.second;
  }
  return os.str();
}

namespace {

struct Box {
  int tmin = INT_MAX, tmax = INT_MIN, smin = INT_MAX, smax = INT_MIN;
};

Box box_of(const BiLaurentPoly& p) {
  Box b;
  for (const auto& [k, c] : p.terms()) {
    b.tmin = std::min(b.tmin, k.first);
    b.tmax = std::max(b.tmax, k.first);
    b.smin = std::min(b.smin, k.second);
    b.smax = std::max(b.smax, k.second);
  }
  return b;
}

}  // namespace

std::optional<BiLaurentPoly> exact_divide(const BiLaurentPoly& a, const BiLaurentPoly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return a;
  Box ba = box_of(a), bb = box_of(b);
  Box bq{ba.tmin - bb.tmin, ba.tmax - bb.tmax, ba.smin - bb.smin, ba.smax - bb.smax};
  if (bq.tmin > bq.tmax || bq.smin > bq.smax) return std::nullopt;
  const auto& [lk, lc] = *b.terms().rbegin();
  BiLaurentPoly rem = a, quo(a.ring());
  while (!rem.is_zero()) {
    const auto& [rk, rc] = *rem.terms().rbegin();
    int qt = rk.first - lk.first, qs = rk.second - lk.second;
    if (qt < bq.tmin || qt > bq.tmax || qs < bq.smin || qs > bq.smax) return std::nullopt;
    auto qc = rc.divide_exact(lc);
    if (!qc) return std::nullopt;
    BiLaurentPoly m = BiLaurentPoly::monomial(*qc, qt, qs);
    quo += m;
    rem -= m * b;
  }
  return quo;
}

BiLaurentPoly normalize(const BiLaurentPoly& p) {
  if (p.is_zero()) return p;
  Box b = box_of(p);
  BiLaurentPoly r = p.shifted(-b.tmin, -b.smin);
  Scalar u = r.terms().rbegin()->second.normalizing_unit();
  return r * u;
}

}  // namespace twistlab
