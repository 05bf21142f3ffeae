#include "twistlab/rings/ring_spec.hpp"

#include <charconv>
#include <numeric>

namespace twistlab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t euler_phi(std::uint32_t n) {
  std::uint32_t result = n;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    while (n % d == 0) n /= d;
    result -= result / d;
  }
  if (n > 1) result -= result / n;
  return result;
}

RingSpec RingSpec::integers() { return RingSpec{}; }

RingSpec RingSpec::rationals() {
  RingSpec r;
  r.kind_ = RingKind::Rationals;
  return r;
}

RingSpec RingSpec::mod_p(std::uint32_t p) {
  if (!is_prime(p)) throw RingError("modulus " + std::to_string(p) + " is not prime");
  RingSpec r;
  r.kind_ = RingKind::ModP;
  r.p_ = p;
  return r;
}

RingSpec RingSpec::cyclotomic(std::uint32_t q, bool rational_base) {
  if (q == 0 || q > 4096) throw RingError("unsupported cyclotomic order " + std::to_string(q));
  RingSpec r;
  r.kind_ = RingKind::Cyclotomic;
  r.q_ = q;
  r.rational_ = rational_base;
  return r;
}

static std::uint32_t parse_uint(std::string_view s, std::string_view whole) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw RingError("cannot parse ring '" + std::string(whole) + "'");
  return v;
}

RingSpec RingSpec::parse(std::string_view text) {
  if (text == "Z") return integers();
  if (text == "Q") return rationals();
  if (text.starts_with("Fp:")) return mod_p(parse_uint(text.substr(3), text));
  if (text.starts_with("cycQ:")) return cyclotomic(parse_uint(text.substr(5), text), true);
  if (text.starts_with("cyc:")) return cyclotomic(parse_uint(text.substr(4), text), false);
  if (text.size() > 1 && text[0] == 'F') return mod_p(parse_uint(text.substr(1), text));
  throw RingError("cannot parse ring '" + std::string(text) + "'");
}

bool RingSpec::is_field() const {
  switch (kind_) {
    case RingKind::Integers: return false;
    case RingKind::Rationals:
    case RingKind::ModP: return true;
    case RingKind::Cyclotomic: return rational_;
  }
  return false;
}

RingSpec RingSpec::fraction_field() const {
  switch (kind_) {
    case RingKind::Integers: return rationals();
    case RingKind::Cyclotomic: return cyclotomic(q_, true);
    default: return *this;
  }
}

std::string RingSpec::name() const {
  switch (kind_) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::ModP: return "F_" + std::to_string(p_);
    case RingKind::Cyclotomic:
      return rational_ ? "Q(z_" + std::to_string(q_) + ")" : "Z[z_" + std::to_string(q_) + "]";
  }
  return "?";
}

std::string RingSpec::spec() const {
  switch (kind_) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::ModP: return "Fp:" + std::to_string(p_);
    case RingKind::Cyclotomic: return (rational_ ? "cycQ:" : "cyc:") + std::to_string(q_);
  }
  return "?";
}

}  // namespace twistlab
