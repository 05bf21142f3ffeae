#include "twistlab/reps/representation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "twistlab/errors.hpp"

namespace twistlab {

ScalarMatrix Representation::image(const FreeWord& w) const {
  ScalarMatrix m = identity_matrix(ring, dim);
  for (const auto& l : w.letters()) m = m * (l.exp > 0 ? images[l.gen] : inverses[l.gen]);
  return m;
}

Representation make_representation(const Presentation& p, const RingSpec& ring, std::vector<ScalarMatrix> images) {
  if (int(images.size()) != p.generators)
    throw RepresentationError("expected " + std::to_string(p.generators) + " generator images, got " +
                              std::to_string(images.size()));
  Representation r;
  r.ring = ring;
  r.dim = images.empty() ? 0 : images[0].rows();
  for (std::size_t g = 0; g < images.size(); ++g) {
    const auto& m = images[g];
    if (!m.is_square() || m.rows() != r.dim)
      throw RepresentationError("image of generator " + std::to_string(g) + " has the wrong shape");
    for (const auto& x : m.data())
      if (!(x.ring() == ring)) throw RepresentationError("image entries must lie in " + ring.name());
    auto inv = inverse(m);
    if (!inv) throw RepresentationError("image of generator " + std::to_string(g) + " is not invertible over " + ring.name());
    r.inverses.push_back(std::move(*inv));
  }
  r.images = std::move(images);
  for (const auto& l : p.labels) r.epsilon.push_back(l.epsilon);
  return r;
}

Representation trivial_representation(const Presentation& p, const RingSpec& ring) {
  std::vector<ScalarMatrix> images(p.generators, identity_matrix(ring, 1));
  return make_representation(p, ring, std::move(images));
}

RepCheck verify(const Presentation& p, const Representation& r) {
  RepCheck res;
  if (int(r.images.size()) != p.generators) {
    res.ok = false;
    res.reason = "generator count mismatch";
    return res;
  }
  for (std::size_t i = 0; i < r.images.size(); ++i) {
    if (!r.images[i].is_square() || r.images[i].rows() != r.dim) {
      res.ok = false;
      res.reason = "image " + std::to_string(i) + " has the wrong shape";
      return res;
    }
    if (i >= r.inverses.size() || !is_identity(r.images[i] * r.inverses[i])) {
      res.ok = false;
      res.reason = "image " + std::to_string(i) + " is not invertible";
      return res;
    }
  }
  for (std::size_t k = 0; k < p.relators.size(); ++k)
    if (!is_identity(r.image(p.relators[k]))) res.failing_relators.push_back(int(k));
  if (!res.failing_relators.empty()) {
    res.ok = false;
    res.reason = "relators not satisfied";
  }
  return res;
}

static bool compatible(const RingSpec& s, const RingSpec& t) {
  if (s == t) return true;
  switch (s.kind()) {
    case RingKind::Integers: return true;
    case RingKind::Rationals:
      return t.kind() == RingKind::ModP || (t.kind() == RingKind::Cyclotomic && t.rational_base());
    case RingKind::ModP: return false;
    case RingKind::Cyclotomic:
      return t.kind() == RingKind::Cyclotomic && t.order() == s.order() && t.rational_base();
  }
  return false;
}

Representation change_ring(const Representation& r, const RingSpec& target) {
  if (!compatible(r.ring, target))
    throw RepresentationError("cannot change ring from " + r.ring.name() + " to " + target.name());
  Representation out;
  out.ring = target;
  out.dim = r.dim;
  out.epsilon = r.epsilon;
  try {
    for (const auto& m : r.images) out.images.push_back(map_ring(m, target));
    for (const auto& m : r.inverses) out.inverses.push_back(map_ring(m, target));
  } catch (const RingError& e) {
    throw RepresentationError(std::string("ring change failed: ") + e.what());
  }
  return out;
}

Representation with_weights(const Representation& r, const Presentation& p) {
  Representation out = r;
  out.epsilon.clear();
  for (const auto& l : p.labels) out.epsilon.push_back(l.epsilon);
  return out;
}

// ---------------------------------------------------------------- permutations

Perm perm_compose(const Perm& a, const Perm& b) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

Perm perm_inverse(const Perm& a) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = int(i);
  return c;
}

bool perm_is_even(const Perm& a) {
  std::vector<bool> seen(a.size(), false);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = std::size_t(a[j])) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

static std::uint64_t perm_code(const Perm& a) {
  std::uint64_t c = 0;
  for (int x : a) c = (c << 4) | std::uint64_t(x);
  return c;
}

std::size_t generated_group_order(const std::vector<Perm>& gens, std::size_t stop_at) {
  if (gens.empty()) return 1;
  std::size_t n = gens[0].size();
  Perm id(n);
  std::iota(id.begin(), id.end(), 0);
  std::unordered_set<std::uint64_t> seen{perm_code(id)};
  std::vector<Perm> frontier{id};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        Perm h = perm_compose(g, s);
        if (seen.insert(perm_code(h)).second) {
          if (stop_at && seen.size() >= stop_at) return seen.size();
          next.push_back(std::move(h));
        }
      }
    frontier = std::move(next);
  }
  return seen.size();
}

Perm perm_of_word(const FreeWord& w, const std::vector<Perm>& images) {
  std::size_t n = images.empty() ? 0 : images[0].size();
  Perm r(n);
  std::iota(r.begin(), r.end(), 0);
  for (const auto& l : w.letters()) r = perm_compose(r, l.exp > 0 ? images[l.gen] : perm_inverse(images[l.gen]));
  return r;
}

Representation perm_to_matrices(const Presentation& p, const std::vector<Perm>& perms, const RingSpec& ring) {
  std::vector<ScalarMatrix> images;
  for (const auto& s : perms) {
    ScalarMatrix m = zero_matrix(ring, s.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) m(std::size_t(s[i]), i) = Scalar::one(ring);
    images.push_back(std::move(m));
  }
  return make_representation(p, ring, std::move(images));
}

std::string RepClass::label() const {
  if (coloring) {
    std::string s = "D" + std::to_string(coloring->p) + "[";
    for (std::size_t i = 0; i < coloring->colors.size(); ++i) s += (i ? "," : "") + std::to_string(coloring->colors[i]);
    return s + "]";
  }
  std::string s = (symmetry == RepSymmetry::Alternating ? "A" : "S") + std::to_string(degree) + "[";
  for (std::size_t g = 0; g < perms.size(); ++g) {
    if (g) s += ";";
    for (std::size_t i = 0; i < perms[g].size(); ++i) s += std::to_string(perms[g][i]);
  }
  return s + "]";
}

// ---------------------------------------------------------------- colourings

namespace {

ScalarMatrix coloring_system(const Diagram& d, std::uint32_t p) {
  RingSpec F = RingSpec::mod_p(p);
  std::size_t rows = d.crossing_count();
  ScalarMatrix m = zero_matrix(F, rows, std::size_t(d.arc_count()));
  for (std::size_t c = 0; c < rows; ++c) {
    const auto& x = d.crossings()[c];
    m(c, x.over_arc) += Scalar::from_integer(F, 2);
    m(c, x.under_in_arc) -= Scalar::one(F);
    m(c, x.under_out_arc) -= Scalar::one(F);
  }
  return m;
}

}  // namespace

Integer count_colorings(const Diagram& d, std::uint32_t p) {
  auto basis = nullspace(coloring_system(d, p), RingSpec::mod_p(p));
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, basis.size());
  return r;
}

std::vector<RepClass> enumerate_colorings(const Diagram& d, std::uint32_t p) {
  if (!is_prime(p) || p < 3) throw RepresentationError("dihedral colourings need an odd prime");
  RingSpec F = RingSpec::mod_p(p);
  auto basis = nullspace(coloring_system(d, p), F);
  std::size_t k = basis.size();
  double space = std::pow(double(p), double(k));
  if (space > 2e7) throw RepresentationError("colouring space too large to enumerate");
  std::size_t arcs = std::size_t(d.arc_count());
  std::set<std::vector<std::uint32_t>> classes;
  std::vector<std::uint32_t> coef(k, 0);
  std::vector<std::uint32_t> inv(p, 0);
  for (std::uint32_t a = 1; a < p; ++a)
    for (std::uint32_t b = 1; b < p; ++b)
      if (a * b % p == 1) inv[a] = b;
  while (true) {
    std::vector<std::uint32_t> col(arcs, 0);
    for (std::size_t b = 0; b < k; ++b)
      if (coef[b])
        for (std::size_t a = 0; a < arcs; ++a) col[a] = std::uint32_t((col[a] + coef[b] * basis[b][a].modint().value) % p);
    // canonical affine representative: colour of arc 0 is 0, first nonzero colour is 1
    std::uint32_t shift = col[0];
    for (auto& c : col) c = (c + p - shift) % p;
    std::uint32_t lead = 0;
    for (auto c : col)
      if (c) {
        lead = c;
        break;
      }
    if (lead) {
      for (auto& c : col) c = c * inv[lead] % p;
      classes.insert(col);
    }
    std::size_t i = 0;
    while (i < k && ++coef[i] == p) coef[i++] = 0;
    if (i == k) break;
  }
  Presentation pres = wirtinger(d);
  std::vector<RepClass> out;
  for (const auto& col : classes) {
    RepClass rc;
    rc.symmetry = RepSymmetry::Dihedral;
    rc.degree = int(p);
    rc.coloring = Coloring{p, col};
    for (auto c : col) {
      Perm s(p);
      for (std::uint32_t i = 0; i < p; ++i) s[i] = int((2 * c + 2 * p - i) % p);
      rc.perms.push_back(s);
    }
    rc.representative = perm_to_matrices(pres, rc.perms);
    out.push_back(std::move(rc));
  }
  return out;
}

Representation dihedral_integral_lift(const Presentation& pres, const RepClass& rc) {
  if (!rc.coloring) throw RepresentationError("dihedral lift needs a colouring");
  std::uint32_t p = rc.coloring->p;
  RingSpec Z = RingSpec::integers();
  std::size_t n = p - 1;
  std::vector<ScalarMatrix> images;
  for (auto c : rc.coloring->colors) {
    ScalarMatrix m = zero_matrix(Z, n, n);
    for (std::size_t j = 0; j < n; ++j) {
      // basis vector z^j -> z^(-2c) * z^(-j)
      CycScalar v = CycScalar::zeta_power(p, false, -2 * long(c) - long(j));
      for (std::size_t i = 0; i < n; ++i) m(i, j) = Scalar(Integer(v.coeffs()[i].get_num()));
    }
    images.push_back(std::move(m));
  }
  if (int(images.size()) != pres.generators) throw RepresentationError("colouring does not match the presentation");
  return make_representation(pres, Z, std::move(images));
}

// ---------------------------------------------------------------- S_n / A_n

namespace {

std::vector<Perm> all_perms(int n) {
  Perm a(n);
  std::iota(a.begin(), a.end(), 0);
  std::vector<Perm> out;
  do out.push_back(a);
  while (std::next_permutation(a.begin(), a.end()));
  return out;
}

std::vector<int> cycle_type(const Perm& a) {
  std::vector<bool> seen(a.size(), false);
  std::vector<int> t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = std::size_t(a[j])) {
      seen[j] = true;
      ++len;
    }
    t.push_back(len);
  }
  std::sort(t.rbegin(), t.rend());
  return t;
}

struct Search {
  const Presentation& pres;
  std::vector<Perm> cls;  // candidates for component-0 generators
  std::vector<Perm> any;  // candidates for other generators
  std::vector<std::optional<Perm>> value;
  std::vector<std::vector<Perm>> solutions;
  std::size_t n;

  bool in_class(const Perm& x) const { return std::find(cls.begin(), cls.end(), x) != cls.end(); }

  Perm eval(const std::vector<Letter>& ls, std::size_t b, std::size_t e) const {
    Perm r(n);
    std::iota(r.begin(), r.end(), 0);
    for (std::size_t i = b; i < e; ++i) {
      const Perm& v = *value[ls[i].gen];
      r = perm_compose(r, ls[i].exp > 0 ? v : perm_inverse(v));
    }
    return r;
  }

  // false on contradiction
  bool propagate(std::vector<int>& assigned_now) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& rel : pres.relators) {
        const auto& ls = rel.letters();
        int unknown = -1, count = 0;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < ls.size(); ++i)
          if (!value[ls[i].gen]) {
            if (unknown != ls[i].gen) {
              if (unknown >= 0) {
                count = 99;
                break;
              }
              unknown = ls[i].gen;
            }
            ++count;
            pos = i;
          }
        if (unknown < 0) {
          Perm r = eval(ls, 0, ls.size());
          for (std::size_t i = 0; i < n; ++i)
            if (r[i] != int(i)) return false;
          continue;
        }
        if (count != 1) continue;
        // u x^e v = 1  =>  x^e = u^-1 v^-1
        Perm u = eval(ls, 0, pos), v = eval(ls, pos + 1, ls.size());
        Perm xe = perm_inverse(perm_compose(v, u));
        Perm x = ls[pos].exp > 0 ? xe : perm_inverse(xe);
        if (pres.labels[unknown].component == pres.labels[0].component && !in_class(x)) return false;
        value[unknown] = x;
        assigned_now.push_back(unknown);
        progress = true;
      }
    }
    return true;
  }

  void run() {
    std::vector<int> assigned;
    bool ok = propagate(assigned);
    if (ok) {
      int next = -1;
      for (int g = 0; g < pres.generators; ++g)
        if (!value[g]) {
          next = g;
          break;
        }
      if (next < 0) {
        std::vector<Perm> sol;
        for (auto& v : value) sol.push_back(*v);
        solutions.push_back(std::move(sol));
      } else {
        const auto& cands = pres.labels[next].component == pres.labels[0].component ? cls : any;
        for (const auto& c : cands) {
          value[next] = c;
          run();
        }
        value[next].reset();
      }
    }
    for (int g : assigned) value[g].reset();
  }
};

}  // namespace

std::vector<RepClass> enumerate_perm_reps(const Presentation& pres, int n, RepSymmetry target) {
  if (n < 2 || n > 8) throw RepresentationError("permutation degree must lie in 2..8");
  if (target == RepSymmetry::Dihedral) throw RepresentationError("use enumerate_colorings for dihedral groups");
  if (pres.generators == 0) return {};
  std::vector<Perm> group = all_perms(n);
  std::size_t order = group.size();
  if (target == RepSymmetry::Alternating) order /= 2;
  std::map<std::vector<int>, std::vector<Perm>> classes;
  for (const auto& g : group) {
    auto t = cycle_type(g);
    if (t.size() == std::size_t(n)) continue;  // identity
    bool even = perm_is_even(g);
    if (target == RepSymmetry::Alternating && !even) continue;
    if (target == RepSymmetry::Symmetric && even) continue;
    classes[t].push_back(g);
  }
  std::vector<Perm> nontrivial;
  for (const auto& g : group)
    if (target == RepSymmetry::Symmetric || perm_is_even(g)) nontrivial.push_back(g);
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<RepClass> out;
  for (const auto& [type, members] : classes) {
    Perm x0;
    {
      // consecutive cycles of the given lengths
      x0.assign(n, 0);
      int at = 0;
      for (int len : type) {
        for (int i = 0; i < len; ++i) x0[at + i] = at + (i + 1) % len;
        at += len;
      }
    }
    std::vector<Perm> centralizer;
    for (const auto& g : group)
      if (perm_compose(g, x0) == perm_compose(x0, g)) centralizer.push_back(g);
    Search s{pres, members, nontrivial, {}, {}, std::size_t(n)};
    s.value.assign(pres.generators, std::nullopt);
    s.value[0] = x0;
    s.run();
    for (const auto& sol : s.solutions) {
      if (generated_group_order(sol, order) < order) continue;
      std::vector<std::uint64_t> best;
      for (const auto& z : centralizer) {
        Perm zi = perm_inverse(z);
        std::vector<std::uint64_t> codes;
        for (const auto& g : sol) codes.push_back(perm_code(perm_compose(perm_compose(z, g), zi)));
        if (best.empty() || codes < best) best = codes;
      }
      if (!seen.insert(best).second) continue;
      RepClass rc;
      rc.symmetry = target;
      rc.degree = n;
      for (auto code : best) {
        Perm g(n);
        for (int i = n - 1; i >= 0; --i) {
          g[i] = int(code & 15);
          code >>= 4;
        }
        rc.perms.push_back(g);
      }
      rc.representative = perm_to_matrices(pres, rc.perms);
      out.push_back(std::move(rc));
    }
  }
  std::sort(out.begin(), out.end(), [](const RepClass& a, const RepClass& b) { return a.perms < b.perms; });
  return out;
}

}  // namespace twistlab
