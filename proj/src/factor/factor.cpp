#include "twistlab/factor/factor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "twistlab/errors.hpp"

namespace twistlab {

// ---------------------------------------------------------------- dense F_p[t]

namespace {

using u64 = std::uint64_t;
using Fp = std::vector<u64>;  // ascending coefficients, trimmed

void trim(Fp& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
int deg(const Fp& a) { return int(a.size()) - 1; }

u64 powmod(u64 b, u64 e, u64 p) {
  u64 r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}
u64 inv(u64 a, u64 p) { return powmod(a, p - 2, p); }

Fp add(const Fp& a, const Fp& b, u64 p) {
  Fp r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
  trim(r);
  return r;
}
Fp sub(const Fp& a, const Fp& b, u64 p) {
  Fp r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
  trim(r);
  return r;
}
Fp mul(const Fp& a, const Fp& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Fp r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}
void divmod(Fp a, const Fp& b, u64 p, Fp* q, Fp* r) {
  u64 li = inv(b.back(), p);
  Fp quo(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  for (int i = deg(a); i >= deg(b); --i) {
    u64 c = a[i] * li % p;
    if (!c) continue;
    quo[i - deg(b)] = c;
    for (int j = 0; j <= deg(b); ++j) a[i - deg(b) + j] = (a[i - deg(b) + j] + p - c * b[j] % p) % p;
  }
  trim(a);
  trim(quo);
  if (q) *q = std::move(quo);
  if (r) *r = std::move(a);
}
Fp mod(const Fp& a, const Fp& b, u64 p) {
  Fp r;
  divmod(a, b, p, nullptr, &r);
  return r;
}
Fp quot(const Fp& a, const Fp& b, u64 p) {
  Fp q;
  divmod(a, b, p, &q, nullptr);
  return q;
}
Fp monic(Fp a, u64 p) {
  if (a.empty()) return a;
  u64 li = inv(a.back(), p);
  for (auto& c : a) c = c * li % p;
  return a;
}
Fp gcd(Fp a, Fp b, u64 p) {
  while (!b.empty()) {
    Fp r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}
Fp derivative(const Fp& a, u64 p) {
  Fp r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * (i % p) % p);
  trim(r);
  return r;
}
Fp mulmod(const Fp& a, const Fp& b, const Fp& m, u64 p) { return mod(mul(a, b, p), m, p); }
Fp powmod(Fp b, const Integer& e, const Fp& m, u64 p) {
  Fp r{1};
  b = mod(b, m, p);
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(r, r, m, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(r, b, m, p);
  }
  return r;
}
bool is_one(const Fp& a) { return a.size() == 1 && a[0] == 1; }

// Square-free decomposition of a monic polynomial: (factor, multiplicity).
std::vector<std::pair<Fp, int>> squarefree(const Fp& f, u64 p) {
  std::vector<std::pair<Fp, int>> out;
  Fp c = gcd(f, derivative(f, p), p);
  Fp w = quot(f, c, p);
  int i = 1;
  while (!is_one(w)) {
    Fp y = gcd(w, c, p);
    Fp fac = quot(w, y, p);
    if (deg(fac) > 0) out.push_back({monic(fac, p), i});
    w = y;
    c = quot(c, y, p);
    ++i;
  }
  if (deg(c) > 0) {
    Fp root;
    for (std::size_t k = 0; k < c.size(); k += p) root.push_back(c[k]);
    for (auto& [fac, m] : squarefree(monic(root, p), p)) out.push_back({fac, m * int(p)});
  }
  return out;
}

// Distinct-degree split of a square-free monic polynomial.
std::vector<std::pair<Fp, int>> distinct_degree(Fp f, u64 p) {
  std::vector<std::pair<Fp, int>> out;
  Fp x{0, 1};
  Fp h = mod(x, f, p);
  Integer P(static_cast<unsigned long>(p));
  for (int d = 1; 2 * d <= deg(f); ++d) {
    h = powmod(h, P, f, p);
    Fp g = gcd(f, sub(h, x, p), p);
    if (deg(g) > 0) {
      out.push_back({g, d});
      f = quot(f, g, p);
      h = mod(h, f, p);
    }
  }
  if (deg(f) > 0) out.push_back({f, deg(f)});
  return out;
}

void equal_degree(const Fp& f, int d, u64 p, std::mt19937_64& rng, std::vector<Fp>& out) {
  if (deg(f) == d) {
    out.push_back(f);
    return;
  }
  Integer e;
  mpz_ui_pow_ui(e.get_mpz_t(), p, unsigned(d));
  if (p != 2) e = (e - 1) / 2;
  std::uniform_int_distribution<u64> dist(0, p - 1);
  while (true) {
    Fp a(std::size_t(deg(f)), 0);
    for (auto& c : a) c = dist(rng);
    trim(a);
    if (deg(a) < 1) continue;
    Fp g = gcd(a, f, p);
    if (deg(g) > 0 && deg(g) < deg(f)) {
      equal_degree(g, d, p, rng, out);
      equal_degree(quot(f, g, p), d, p, rng, out);
      return;
    }
    Fp b;
    if (p == 2) {
      // trace map a + a^2 + ... + a^(2^(md-1)) with md = d
      Fp s = mod(a, f, p), cur = s;
      for (int i = 1; i < d; ++i) {
        cur = mulmod(cur, cur, f, p);
        s = add(s, cur, p);
      }
      b = s;
    } else {
      b = sub(powmod(a, e, f, p), Fp{1}, p);
    }
    g = gcd(b, f, p);
    if (deg(g) > 0 && deg(g) < deg(f)) {
      equal_degree(g, d, p, rng, out);
      equal_degree(quot(f, g, p), d, p, rng, out);
      return;
    }
  }
}

// Complete factorization of a monic polynomial over F_p.
std::vector<std::pair<Fp, int>> factor_fp(const Fp& f, u64 p) {
  std::vector<std::pair<Fp, int>> out;
  std::mt19937_64 rng(0x5eed + p);
  for (auto& [sf, m] : squarefree(f, p))
    for (auto& [g, d] : distinct_degree(sf, p)) {
      std::vector<Fp> parts;
      equal_degree(g, d, p, rng, parts);
      for (auto& x : parts) out.push_back({x, m});
    }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  return out;
}

Fp to_fp(const std::vector<Integer>& a, u64 p) {
  Fp r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Integer m = a[i] % Integer(static_cast<unsigned long>(p));
    if (m < 0) m += p;
    r[i] = m.get_ui();
  }
  trim(r);
  return r;
}

std::vector<u64> small_primes(u64 bound) {
  std::vector<u64> out;
  for (u64 n = 2; n <= bound; ++n) {
    bool pr = true;
    for (u64 d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        pr = false;
        break;
      }
    if (pr) out.push_back(n);
  }
  return out;
}

// ---------------------------------------------------------------- dense Z[t]

using Zp = std::vector<Integer>;

void trim(Zp& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
Zp zmul(const Zp& a, const Zp& b) {
  if (a.empty() || b.empty()) return {};
  Zp r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  trim(r);
  return r;
}
Zp zsub(const Zp& a, const Zp& b) {
  Zp r(std::max(a.size(), b.size()), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}
Zp zadd(const Zp& a, const Zp& b) {
  Zp r(std::max(a.size(), b.size()), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}
Zp zmod(Zp a, const Integer& m) {
  for (auto& c : a) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  }
  trim(a);
  return a;
}
Zp symmetric(Zp a, const Integer& m) {
  Integer half = m / 2;
  for (auto& c : a) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c > half) c -= m;
  }
  trim(a);
  return a;
}
// division by a monic polynomial modulo m
void zdivmod(Zp a, const Zp& b, const Integer& m, Zp* q, Zp* r) {
  a = zmod(a, m);
  int db = int(b.size()) - 1;
  Zp quo(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Integer(0));
  for (int i = int(a.size()) - 1; i >= db; --i) {
    Integer c = a[i];
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c == 0) continue;
    quo[i - db] = c;
    for (int j = 0; j <= db; ++j) {
      mpz_submul(a[i - db + j].get_mpz_t(), c.get_mpz_t(), b[j].get_mpz_t());
      mpz_fdiv_r(a[i - db + j].get_mpz_t(), a[i - db + j].get_mpz_t(), m.get_mpz_t());
    }
  }
  trim(quo);
  if (q) *q = zmod(quo, m);
  if (r) *r = zmod(a, m);
}

Zp from_fp(const Fp& a) {
  Zp r;
  for (auto c : a) r.push_back(Integer(static_cast<unsigned long>(c)));
  return r;
}

// extended gcd over F_p of coprime a, b: s a + t b = 1
void xgcd_fp(const Fp& a, const Fp& b, u64 p, Fp& s, Fp& t) {
  Fp r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    Fp q, r;
    divmod(r0, r1, p, &q, &r);
    Fp s2 = sub(s0, mul(q, s1, p), p), t2 = sub(t0, mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  u64 li = inv(r0[0], p);
  for (auto& c : s0) c = c * li % p;
  for (auto& c : t0) c = c * li % p;
  s = s0;
  t = t0;
}

// Lifts f = g h (mod p), h monic, to f = g h (mod p^2^k >= bound).
void hensel_lift(const Zp& f, Zp& g, Zp& h, u64 p, const Integer& bound, Integer& modulus) {
  Fp sf, tf;
  xgcd_fp(to_fp(g, p), to_fp(h, p), p, sf, tf);
  Zp s = from_fp(sf), t = from_fp(tf);
  Integer m(static_cast<unsigned long>(p));
  while (m < bound) {
    Integer m2 = m * m;
    Zp e = zmod(zsub(f, zmul(g, h)), m2);
    Zp q, r;
    zdivmod(zmul(s, e), h, m2, &q, &r);
    Zp g2 = zmod(zadd(g, zadd(zmul(t, e), zmul(q, g))), m2);
    Zp h2 = zmod(zadd(h, r), m2);
    Zp b = zmod(zsub(zadd(zmul(s, g2), zmul(t, h2)), Zp{Integer(1)}), m2);
    Zp c, d;
    zdivmod(zmul(s, b), h2, m2, &c, &d);
    s = zmod(zsub(s, d), m2);
    t = zmod(zsub(t, zadd(zmul(t, b), zmul(c, g2))), m2);
    g = g2;
    h = h2;
    m = m2;
  }
  modulus = m;
}

// Lifts the monic modular factors of f (lc(f) carried separately) to modulus >= bound.
std::vector<Zp> multifactor_lift(const Zp& f, const std::vector<Fp>& factors, u64 p, const Integer& bound,
                                 Integer& modulus) {
  if (factors.size() == 1) {
    // f / lc(f) mod bound-level modulus
    Integer m(static_cast<unsigned long>(p));
    while (m < bound) m *= m;
    modulus = m;
    Integer li;
    Integer lc = f.back();
    mpz_invert(li.get_mpz_t(), lc.get_mpz_t(), m.get_mpz_t());
    Zp r = f;
    for (auto& c : r) c *= li;
    return {zmod(r, m)};
  }
  std::size_t half = factors.size() / 2;
  std::vector<Fp> left(factors.begin(), factors.begin() + long(half)), right(factors.begin() + long(half), factors.end());
  Fp g = to_fp(Zp{f.back()}, p), h{1};
  for (const auto& x : left) g = mul(g, x, p);
  for (const auto& x : right) h = mul(h, x, p);
  Zp G = from_fp(g), H = from_fp(h);
  Integer m;
  hensel_lift(f, G, H, p, bound, m);
  Integer m1, m2;
  auto a = multifactor_lift(G, left, p, bound, m1);
  auto b = multifactor_lift(H, right, p, bound, m2);
  modulus = m;
  for (auto& x : b) a.push_back(std::move(x));
  for (auto& x : a) x = zmod(x, m);
  return a;
}

Zp to_zp(const LaurentPoly& f) {
  Zp r;
  for (const auto& c : f.coefficients()) r.push_back(c.integer());
  return r;
}
LaurentPoly from_zp(const Zp& a) {
  std::vector<Scalar> c;
  for (const auto& x : a) c.push_back(Scalar(x));
  return LaurentPoly(RingSpec::integers(), 0, std::move(c));
}

Zp zprimitive(Zp a) {
  Integer g = 0;
  for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g != 0 && a.back() < 0) g = -g;
  if (g != 0 && g != 1)
    for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return a;
}

std::optional<Zp> zexact_div(const Zp& a, const Zp& b) {
  auto q = exact_divide(from_zp(a), from_zp(b));
  if (!q) return std::nullopt;
  LaurentPoly x = *q;
  if (x.low() != 0 && !x.is_zero()) return std::nullopt;
  return to_zp(x);
}

// degree sets realizable as sums of subsets of a pattern
std::vector<bool> subset_degrees(const std::vector<int>& pattern, int n) {
  std::vector<bool> ok(std::size_t(n) + 1, false);
  ok[0] = true;
  for (int d : pattern)
    for (int s = n; s >= d; --s)
      if (ok[std::size_t(s - d)]) ok[std::size_t(s)] = true;
  return ok;
}

// Factors a square-free primitive f (lowest exponent 0, positive leading coefficient) over Z.
std::vector<Zp> zassenhaus(const Zp& f) {
  int n = int(f.size()) - 1;
  if (n <= 1) return {f};
  const Integer& lc = f.back();
  std::vector<u64> primes = small_primes(2000);
  std::vector<bool> allowed(std::size_t(n) + 1, true);
  std::optional<u64> best_p;
  std::vector<Fp> best;
  int tried = 0;
  for (u64 p : primes) {
    if (mpz_divisible_ui_p(lc.get_mpz_t(), p)) continue;
    Fp fp = monic(to_fp(f, p), p);
    if (deg(fp) != n) continue;
    if (deg(gcd(fp, derivative(fp, p), p)) > 0) continue;
    auto fac = factor_fp(fp, p);
    std::vector<int> pat;
    for (auto& [g, m] : fac) pat.push_back(deg(g));
    auto sd = subset_degrees(pat, n);
    for (int d = 0; d <= n; ++d) allowed[d] = allowed[d] && sd[d];
    if (!best_p || fac.size() < best.size()) {
      best_p = p;
      best.clear();
      for (auto& [g, m] : fac) best.push_back(g);
    }
    if (best.size() == 1) return {f};
    bool irreducible = true;
    for (int d = 1; d < n; ++d) irreducible = irreducible && !allowed[d];
    if (irreducible) return {f};
    if (++tried >= 8) break;
  }
  if (!best_p) throw ComputationError("no suitable prime for factorization");
  u64 p = *best_p;
  // coefficient bound for factors: sqrt(n+1) 2^n ||f||_inf |lc|
  Integer norm = 0;
  for (const auto& c : f) norm = std::max(norm, Integer(abs(c)));
  Integer bound = norm * abs(lc) * 2;
  bound <<= unsigned(n);
  bound *= Integer(long(std::ceil(std::sqrt(double(n + 1)))));
  Integer modulus;
  auto lifted = multifactor_lift(f, best, p, bound, modulus);

  std::vector<Zp> result;
  Zp rest = f;
  std::vector<Zp> pool = lifted;
  std::size_t s = 1;
  while (2 * s <= pool.size()) {
    bool found = false;
    std::vector<int> pick(pool.size(), 0);
    std::fill(pick.begin(), pick.begin() + long(s), 1);
    int nrest = int(rest.size()) - 1;
    do {
      int d = 0;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (pick[i]) d += int(pool[i].size()) - 1;
      if (nrest == n && !allowed[std::size_t(d)]) continue;
      Zp g{rest.back()};
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (pick[i]) g = zmod(zmul(g, pool[i]), modulus);
      g = zprimitive(symmetric(g, modulus));
      auto q = zexact_div(rest, g);
      if (!q) continue;
      result.push_back(g);
      rest = zprimitive(*q);
      std::vector<Zp> keep;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (!pick[i]) keep.push_back(pool[i]);
      pool = std::move(keep);
      found = true;
      break;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    if (!found) ++s;
  }
  if (rest.size() > 1) result.push_back(rest);
  return result;
}

bool factor_less(const Factor& a, const Factor& b) {
  if (a.poly.span() != b.poly.span()) return a.poly.span() < b.poly.span();
  if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
  return a.poly.to_string() < b.poly.to_string();
}

}  // namespace

// ---------------------------------------------------------------- public API

LaurentPoly Factorization::expand() const {
  LaurentPoly r = unit;
  for (const auto& f : factors) r *= f.poly.pow(unsigned(f.multiplicity));
  return r;
}

int Factorization::degree() const {
  int d = 0;
  for (const auto& f : factors) d += f.poly.span() * f.multiplicity;
  return d;
}

std::string Factorization::to_string() const {
  std::string s = "[" + unit.to_string() + "]";
  for (const auto& f : factors) {
    s += " (" + f.poly.to_string() + ")";
    if (f.multiplicity != 1) s += "^" + std::to_string(f.multiplicity);
  }
  return s;
}

Factorization factor_mod_p(const LaurentPoly& f) {
  if (f.ring().kind() != RingKind::ModP) throw RingError("factor_mod_p needs F_p coefficients");
  if (f.is_zero()) throw RingError("cannot factor zero");
  u64 p = f.ring().prime();
  Fp a;
  for (const auto& c : f.coefficients()) a.push_back(c.modint().value);
  Factorization out;
  out.unit = LaurentPoly::monomial(f.leading(), f.low());
  for (auto& [g, m] : factor_fp(monic(a, p), p)) {
    std::vector<Scalar> c;
    for (auto x : g) c.push_back(Scalar::from_integer(f.ring(), long(x)));
    out.factors.push_back({LaurentPoly(f.ring(), 0, std::move(c)), m});
  }
  return out;
}

std::vector<int> degree_pattern_mod_p(const LaurentPoly& f, std::uint32_t p) {
  LaurentPoly g = f.map_ring(RingSpec::mod_p(p));
  std::vector<int> out;
  if (g.is_zero()) return out;
  for (const auto& fac : factor_mod_p(g).factors)
    for (int i = 0; i < fac.multiplicity; ++i) out.push_back(fac.poly.span());
  return out;
}

std::optional<std::uint32_t> irreducibility_witness(const LaurentPoly& f, std::uint32_t bound) {
  for (u64 p : small_primes(bound)) {
    LaurentPoly g = f.map_ring(RingSpec::mod_p(std::uint32_t(p)));
    if (g.span() != f.span()) continue;
    auto fac = factor_mod_p(g);
    if (fac.factors.size() == 1 && fac.factors[0].multiplicity == 1) return std::uint32_t(p);
  }
  return std::nullopt;
}

Factorization factor_over_Q(const LaurentPoly& f0) {
  if (f0.is_zero()) throw RingError("cannot factor zero");
  RingSpec Z = RingSpec::integers(), Q = RingSpec::rationals();
  if (f0.ring().kind() != RingKind::Integers && f0.ring().kind() != RingKind::Rationals)
    throw RingError("factor_over_Q needs integer or rational coefficients");
  LaurentPoly fz = f0.ring().kind() == RingKind::Integers ? f0 : clear_denominators(f0);
  LaurentPoly prim = primitive_part(fz).shifted(-fz.low());
  if (sgn(prim.leading().integer()) < 0) prim = -prim;

  // square-free decomposition over Q
  std::vector<std::pair<LaurentPoly, int>> sqf;
  {
    LaurentPoly fq = prim.map_ring(Q);
    LaurentPoly g = gcd(fq, fq.derivative());
    LaurentPoly w = *exact_divide(fq, g);
    int i = 1;
    while (w.span() > 0) {
      LaurentPoly y = gcd(w, g);
      LaurentPoly a = *exact_divide(w, y);
      if (a.span() > 0) sqf.push_back({a, i});
      g = *exact_divide(g, y);
      w = y;
      ++i;
    }
  }
  std::vector<Factor> factors;
  for (auto& [a, m] : sqf) {
    LaurentPoly az = primitive_part(clear_denominators(a));
    az = az.shifted(-az.low());
    if (sgn(az.leading().integer()) < 0) az = -az;
    for (auto& g : zassenhaus(to_zp(az))) factors.push_back({from_zp(g), m});
  }
  std::sort(factors.begin(), factors.end(), factor_less);
  Factorization out;
  out.factors = factors;
  LaurentPoly prod = LaurentPoly::constant(Z, 1);
  for (const auto& x : factors) prod *= x.poly.pow(unsigned(x.multiplicity));
  // unit = f0 / prod, a monomial in the input ring
  LaurentPoly base = f0.ring().kind() == RingKind::Integers ? prod : prod.map_ring(f0.ring());
  auto u = exact_divide(f0, base);
  if (!u || !u->is_monomial()) throw ComputationError("factorization does not reassemble");
  out.unit = *u;
  return out;
}

Factorization factor_over_cyclotomic(const LaurentPoly& f, std::uint32_t q) {
  if (q != 3 && q != 4 && q != 6) throw RingError("cyclotomic factorization supports q in {3, 4, 6}");
  RingSpec K = RingSpec::cyclotomic(q, true);
  Factorization rational = factor_over_Q(f);
  Factorization out;
  out.unit = rational.unit.map_ring(K);
  Scalar zeta = Scalar::zeta(K, 1);
  for (const auto& fac : rational.factors) {
    LaurentPoly h = fac.poly.map_ring(K);
    if (h.span() <= 1) {
      LaurentPoly m = normalize(h);
      out.unit *= LaurentPoly::constant(*exact_divide(h, m)->coefficients().begin()).pow(unsigned(fac.multiplicity));
      out.factors.push_back({m, fac.multiplicity});
      continue;
    }
    // Trager: the norm of h(t - k zeta) is square-free for some k; its rational factors
    // correspond to the factors of h over K.
    for (long k = 1;; ++k) {
      Scalar shift = zeta * Scalar::from_integer(K, k);
      LaurentPoly lin(K, 0, {-shift, Scalar::one(K)});  // t - k zeta
      LaurentPoly hs(K);
      LaurentPoly pw = LaurentPoly::constant(K, 1);
      for (int e = 0; e <= h.high(); ++e) {
        if (!h.coeff(e).is_zero()) hs += pw * h.coeff(e);
        pw = pw * lin;
      }
      // t is a unit here, so a root at 0 would vanish from the norm
      if (hs.coeff(0).is_zero()) continue;
      // norm = hs * conjugate(hs)
      LaurentPoly norm = hs * hs.galois(long(q) - 1);
      std::vector<Scalar> rc;
      for (const auto& c : norm.coefficients()) rc.push_back(Scalar(*c.cyclotomic().as_rational()));
      LaurentPoly nq(RingSpec::rationals(), norm.low(), rc);
      if (gcd(nq, nq.derivative()).span() > 0) continue;
      Factorization nf = factor_over_Q(nq);
      LaurentPoly back(K, 0, {shift, Scalar::one(K)});  // t + k zeta
      LaurentPoly remaining = h;
      for (const auto& g : nf.factors) {
        LaurentPoly gk(K);
        LaurentPoly pw2 = LaurentPoly::constant(K, 1);
        for (int e = 0; e <= g.poly.high(); ++e) {
          if (!g.poly.coeff(e).is_zero()) gk += pw2 * g.poly.coeff(e).map_to(K);
          pw2 = pw2 * back;
        }
        LaurentPoly d = gcd(remaining, gk);
        if (d.span() <= 0) continue;
        out.factors.push_back({normalize(d), fac.multiplicity});
        remaining = *exact_divide(remaining, d);
      }
      // remaining is now a constant; fold it into the unit
      out.unit *= remaining.pow(unsigned(fac.multiplicity));
      break;
    }
  }
  std::sort(out.factors.begin(), out.factors.end(), factor_less);
  return out;
}

std::optional<LaurentPoly> is_power_substitution(const LaurentPoly& f, int q) {
  if (q == 0) throw RingError("substitution power must be nonzero");
  if (f.is_zero()) return f;
  int aq = std::abs(q);
  std::vector<Scalar> c;
  for (int e = f.low(); e <= f.high(); ++e)
    if (!f.coeff(e).is_zero() && e % aq != 0) return std::nullopt;
  int lo = f.low() / aq;
  for (int e = f.low(); e <= f.high(); e += aq) c.push_back(f.coeff(e));
  LaurentPoly g(f.ring(), lo, std::move(c));
  return q > 0 ? g : g.mirrored();
}

CycScalar canonical_associate(const CycScalar& x) {
  Scalar s(x);
  return (s * s.normalizing_unit()).cyclotomic();
}

CycDivisorSet divisors_up_to_units(const CycScalar& v) {
  std::uint32_t q = v.order();
  if (q != 1 && q != 3 && q != 4 && q != 6) throw RingError("divisor enumeration supports q in {1, 3, 4, 6}");
  if (!v.is_integral() || v.rational_base()) throw RingError("divisor enumeration needs an integral element");
  if (v.is_zero()) throw RingError("zero has every element as a divisor");
  CycDivisorSet out;
  out.element = v;
  Integer N = abs(Integer(v.norm()));
  std::set<std::vector<Rational>> seen;
  auto consider = [&](const CycScalar& x) {
    if (x.is_zero()) return;
    if (!mpz_divisible_p(N.get_mpz_t(), Integer(abs(Integer(x.norm()))).get_mpz_t())) return;
    auto qd = v.divide_exact(x);
    if (!qd || !qd->is_integral()) return;
    CycScalar c = canonical_associate(x);
    if (seen.insert(c.coeffs()).second) out.divisors.push_back(c);
  };
  if (q == 1) {
    Integer a = abs(Integer(v.coeffs()[0]));
    for (Integer d = 1; d * d <= a; ++d)
      if (a % d == 0) {
        consider(CycScalar(1, false, {Rational(d)}));
        consider(CycScalar(1, false, {Rational(a / d)}));
      }
  } else {
    // norm form a^2 + b^2 (q = 4) or a^2 - ab + b^2 / a^2 + ab + b^2 (q = 3, 6): |a|, |b| <= 2 sqrt(N / 3) + 1
    Integer r;
    mpz_sqrt(r.get_mpz_t(), Integer(4 * N / 3 + 1).get_mpz_t());
    r += 1;
    long R = r.get_si();
    if (R > 5000) throw ComputationError("norm too large for lattice divisor search");
    for (long a = -R; a <= R; ++a)
      for (long b = -R; b <= R; ++b) consider(CycScalar(q, false, {Rational(a), Rational(b)}));
  }
  std::sort(out.divisors.begin(), out.divisors.end(),
            [](const CycScalar& a, const CycScalar& b) {
              Rational na = a.norm(), nb = b.norm();
              if (na != nb) return na < nb;
              return a.coeffs() < b.coeffs();
            });
  return out;
}

}  // namespace twistlab
