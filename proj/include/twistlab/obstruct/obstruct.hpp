#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistlab/factor/factor.hpp"
#include "twistlab/rings/laurent.hpp"

namespace twistlab {

using Json = nlohmann::ordered_json;

enum class VerdictStatus { Obstructed, Consistent, Inconclusive };
std::string to_string(VerdictStatus s);
VerdictStatus parse_verdict_status(const std::string& s);

// A criterion outcome. `inputs` holds everything needed to rerun the criterion;
// the digest is the SHA-256 of its compact serialization.
struct Verdict {
  std::string criterion;
  Json inputs;
  VerdictStatus status = VerdictStatus::Inconclusive;
  Json certificate;

  std::string inputs_digest() const;
  Json to_json() const;
  static Verdict from_json(const Json& j);
};

// Reruns the criterion from the stored inputs and compares status and certificate.
bool reverify(const Verdict& v);

struct PrimePower {
  std::uint32_t p = 0;
  int r = 0;
};
std::optional<PrimePower> prime_power(std::uint32_t q);

// Candidate linking numbers 1..max with gcd(lambda, q) = 1.
std::vector<int> lambda_candidates(std::uint32_t q, int max);

// ---- classical Murasugi conditions

// Delta = Dbar^q * delta_lambda^(q-1) mod p, with Dbar read off by the Frobenius identity.
// An empty lambda list means 1 <= lambda <= deg / (q - 1) + 1.
Verdict murasugi_modp(const LaurentPoly& delta_k, std::uint32_t q, std::vector<int> lambdas = {});

// Delta = Dbar * prod_i F(t, zeta^i). Candidates default to the divisors of Delta over Q
// with Dbar(1) = +-1; the full search needs phi(q) <= 2.
Verdict murasugi_zeta(const LaurentPoly& delta_k, std::uint32_t q,
                      std::optional<std::vector<LaurentPoly>> candidates = std::nullopt);

// ---- twisted conditions

struct QuotientSearch {
  std::vector<LaurentPoly> survivors;
  Verdict verdict;
};
// The cyclotomic condition on a twisted polynomial; survivors feed twisted_murasugi_modp.
QuotientSearch twisted_murasugi_rational(const LaurentPoly& delta_rho, std::uint32_t q);

struct TwistedModpInput {
  LaurentPoly delta_rho;  // over Z or F_p
  LaurentPoly delta0;
  std::uint32_t q = 0;
  int n = 1;
  std::vector<int> lambdas;  // empty: degree bound
  std::optional<std::vector<LaurentPoly>> candidates;
  bool special_linear = false;  // top coefficient of delta is +-1
  std::uint64_t search_bound = 100000;
  // Exact axis factor delta_{L,rho}, when a periodic diagram supplies the axis.
  std::optional<LaurentPoly> axis_delta;
  std::optional<int> axis_lambda;
};
Verdict twisted_murasugi_modp(const TwistedModpInput& in);

// deg = k q + (n lambda - deg0)(q - 1) with k >= 0.
Verdict degree_feasibility(int deg_delta, int deg_delta0, int n, std::uint32_t q, std::vector<int> lambdas);
// The same equation for every prime q >= min_prime at once.
Verdict degree_feasibility_all_primes(int deg_delta, int deg_delta0, int n, std::uint32_t min_prime,
                                      std::vector<int> lambdas);

// ---- representation orbits

// Maximum number of distinct polynomials allowed is f + (m - f)/q over fixed-class counts
// f <= fixed_class_bound with q | m - f.
Verdict orbit_criterion(std::uint32_t q, const std::vector<LaurentPoly>& polys, int fixed_class_bound);
// 0 when the quotient has trivial polynomial, otherwise m (no constraint).
int transfer_fixed_bound(const std::vector<Integer>& h1_factors, std::uint32_t p, bool quotient_delta_is_one, int m);

// ---- free periods

// Delta(t^q) == prod_{i<q} Dbar(zeta^i t) up to units.
bool hartley_relation_check(const LaurentPoly& delta, const LaurentPoly& delta_bar, std::uint32_t q);
LaurentPoly hartley_product(const LaurentPoly& delta_bar, std::uint32_t q);

// Looks for g | f(t^q) of degree deg f with f(t^q) = prod g(zeta^i t).
Verdict free_period_small_q(const LaurentPoly& f, std::uint32_t q, std::size_t subset_bound = 1u << 20);

// zeta_order^power
struct TorsionPoint {
  std::uint32_t order = 1;
  long power = 0;
  std::string to_string() const;
  bool operator==(const TorsionPoint&) const = default;
};
std::vector<TorsionPoint> default_torsion_points();

struct FreePeriodReport {
  Json per_prime;  // prime -> {status, stage, certificate}
  std::uint32_t threshold = 0;  // every prime above it is covered uniformly
  std::vector<std::uint32_t> exceptional;  // primes checked individually
  VerdictStatus overall = VerdictStatus::Inconclusive;
  Json to_json() const;
};

// The uniform argument for large primes; `threshold` in the returned verdict's certificate.
Verdict free_period_large_q(const LaurentPoly& f, const std::vector<TorsionPoint>& points = default_torsion_points());

// Classical Hartley screen, direct checks below the threshold and the uniform argument above it.
FreePeriodReport free_period_report(const LaurentPoly& delta_k, const LaurentPoly& twisted_factor,
                                    const std::vector<TorsionPoint>& points = default_torsion_points());

// Hartley screen for every Q-irreducible factor of Delta.
Verdict hartley_screen(const LaurentPoly& delta_k, std::uint32_t q);

// Kronecker: a monic integer polynomial with f(0) = +-1 and all roots on the unit circle
// is a product of cyclotomic polynomials.
bool is_product_of_cyclotomics(const LaurentPoly& f);

std::string sha256_hex(const std::string& data);

}  // namespace twistlab
