#include "twistlab/twisted/twisted.hpp"

#include <functional>

#include "twistlab/errors.hpp"

namespace twistlab {

namespace {

// Signed contributions of one Fox derivative: sign * t^a s^b * M.
struct FoxTerm {
  int gen;
  int sign;
  Weight w;
  ScalarMatrix m;
};

std::vector<FoxTerm> fox_terms(const FreeWord& rel, const Representation& r) {
  std::vector<FoxTerm> out;
  ScalarMatrix prefix = identity_matrix(r.ring, r.dim);
  Weight w;
  for (const auto& l : rel.letters()) {
    const Weight& e = r.epsilon[l.gen];
    if (l.exp > 0) {
      out.push_back({l.gen, 1, w, prefix});
      prefix = prefix * r.images[l.gen];
      w.t += e.t;
      w.s += e.s;
    } else {
      prefix = prefix * r.inverses[l.gen];
      w.t -= e.t;
      w.s -= e.s;
      out.push_back({l.gen, -1, w, prefix});
    }
  }
  return out;
}

void check(const Presentation& p, const Representation& r) {
  if (int(r.images.size()) != p.generators || int(r.epsilon.size()) != p.generators)
    throw RepresentationError("representation does not match the presentation");
}

LaurentPoly mono(const Scalar& c, int e) { return LaurentPoly::monomial(c, e); }

// Phi(w) = t^eps(w) rho(w) as a polynomial matrix (one variable)
PolyMatrix phi(const Representation& r, std::size_t g) {
  PolyMatrix m(r.dim, r.dim, LaurentPoly(r.ring));
  for (std::size_t a = 0; a < r.dim; ++a)
    for (std::size_t b = 0; b < r.dim; ++b)
      if (!r.images[g](a, b).is_zero()) m(a, b) = mono(r.images[g](a, b), r.epsilon[g].t);
  return m;
}

LaurentPoly to_field_poly(const LaurentPoly& p, const RingSpec& field) {
  LaurentPoly q = p.ring() == field ? p : p.map_ring(field);
  return q;
}

// Base-ring representative of an element of the fraction field, up to a constant.
LaurentPoly back_to_ring(const LaurentPoly& p, const RingSpec& ring) {
  if (p.ring() == ring || p.is_zero()) return p.is_zero() ? LaurentPoly(ring) : p;
  if (ring.kind() == RingKind::Integers || (ring.kind() == RingKind::Cyclotomic && !ring.rational_base()))
    return clear_denominators(p);
  return p.map_ring(ring);
}

}  // namespace

PolyMatrix twist_substitute(const GroupRingElement& e, const Representation& r) {
  PolyMatrix out(r.dim, r.dim, LaurentPoly(r.ring));
  for (const auto& [w, c] : e.terms()) {
    ScalarMatrix m = r.image(w);
    int et = 0;
    for (const auto& l : w.letters()) et += l.exp * r.epsilon[l.gen].t;
    Scalar sc = Scalar::from_integer(r.ring, c);
    for (std::size_t a = 0; a < r.dim; ++a)
      for (std::size_t b = 0; b < r.dim; ++b)
        if (!m(a, b).is_zero()) out(a, b) += mono(m(a, b) * sc, et);
  }
  return out;
}

TwistedComplexData twisted_complex(const Presentation& p, const Representation& r) {
  check(p, r);
  TwistedComplexData d;
  d.ring = r.ring;
  d.n = r.dim;
  d.g = std::size_t(p.generators);
  std::size_t n = r.dim;
  d.beta2 = PolyMatrix(n * p.relators.size(), n * d.g, LaurentPoly(r.ring));
  for (std::size_t k = 0; k < p.relators.size(); ++k)
    for (const auto& ft : fox_terms(p.relators[k], r))
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          const Scalar& x = ft.m(a, b);
          if (x.is_zero()) continue;
          d.beta2(k * n + a, std::size_t(ft.gen) * n + b) += mono(ft.sign > 0 ? x : -x, ft.w.t);
        }
  d.beta1 = PolyMatrix(n * d.g, n, LaurentPoly(r.ring));
  for (std::size_t j = 0; j < d.g; ++j) {
    PolyMatrix ph = phi(r, j);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        d.beta1(j * n + a, b) = (a == b ? LaurentPoly::constant(r.ring, 1) : LaurentPoly(r.ring)) - ph(a, b);
  }
  return d;
}

BiPolyMatrix twisted_fox_2var(const Presentation& p, const Representation& r) {
  check(p, r);
  std::size_t n = r.dim;
  BiPolyMatrix m(n * p.relators.size(), n * std::size_t(p.generators), BiLaurentPoly(r.ring));
  for (std::size_t k = 0; k < p.relators.size(); ++k)
    for (const auto& ft : fox_terms(p.relators[k], r))
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          const Scalar& x = ft.m(a, b);
          if (x.is_zero()) continue;
          m(k * n + a, std::size_t(ft.gen) * n + b) += BiLaurentPoly::monomial(ft.sign > 0 ? x : -x, ft.w.t, ft.w.s);
        }
  return m;
}

LaurentPoly delta0(const Presentation& p, const Representation& r) {
  check(p, r);
  std::size_t n = r.dim;
  RingSpec F = r.ring.fraction_field();
  if (n == 0) return LaurentPoly::constant(r.ring, 1);
  // Row-by-row Euclidean reduction over F[t^+-1] into an upper triangular basis;
  // unimodular row operations keep the ideal of maximal minors.
  std::vector<std::vector<LaurentPoly>> basis(n);
  auto row_op = [&](std::vector<LaurentPoly>& dst, const LaurentPoly& q, const std::vector<LaurentPoly>& src) {
    for (std::size_t c = 0; c < n; ++c)
      if (!src[c].is_zero()) dst[c].sub_product(q, src[c]);
  };
  for (std::size_t j = 0; j < std::size_t(p.generators); ++j) {
    PolyMatrix ph = phi(r, j);
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<LaurentPoly> v(n, LaurentPoly(F));
      for (std::size_t b = 0; b < n; ++b)
        v[b] = to_field_poly((a == b ? LaurentPoly::constant(r.ring, 1) : LaurentPoly(r.ring)) - ph(a, b), F);
      for (std::size_t i = 0; i < n; ++i) {
        if (v[i].is_zero()) continue;
        if (basis[i].empty()) {
          basis[i] = std::move(v);
          break;
        }
        auto& b = basis[i];
        while (!v[i].is_zero()) {
          DivMod dm = divmod(b[i], v[i]);
          LaurentPoly q = dm.quotient.shifted(b[i].low() - v[i].low());
          row_op(b, q, v);
          std::swap(b, v);
        }
      }
    }
  }
  LaurentPoly prod = LaurentPoly::constant(F, 1);
  for (const auto& b : basis) {
    if (b.empty()) return LaurentPoly(r.ring);
    prod *= b[&b - &basis[0]];
  }
  return normalize(back_to_ring(prod, r.ring));
}

std::string WadaValue::to_string() const {
  return "(" + numerator.to_string() + ") / (" + denominator.to_string() + ")";
}

std::optional<WadaValue> wada(const Presentation& p, const Representation& r, int deleted,
                              const DeterminantOptions& opt) {
  check(p, r);
  std::size_t n = r.dim;
  auto block_det = [&](std::size_t j) {
    PolyMatrix ph = phi(r, j);
    PolyMatrix c(n, n, LaurentPoly(r.ring));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        c(a, b) = (a == b ? LaurentPoly::constant(r.ring, 1) : LaurentPoly(r.ring)) - ph(a, b);
    return determinant(c, r.ring);
  };
  if (p.generators == 0) return std::nullopt;
  WadaValue w;
  if (deleted >= 0) {
    if (deleted >= p.generators) throw PresentationError("deleted generator out of range");
    w.denominator = block_det(std::size_t(deleted));
    if (w.denominator.is_zero()) return std::nullopt;
    w.deleted_generator = deleted;
  } else {
    for (int j = 0; j < p.generators; ++j) {
      w.denominator = block_det(std::size_t(j));
      if (!w.denominator.is_zero()) {
        w.deleted_generator = j;
        break;
      }
    }
    if (w.deleted_generator < 0) return std::nullopt;
  }
  if (p.relators.size() + 1 != std::size_t(p.generators))
    throw PresentationError("the Wada invariant needs a deficiency one presentation");
  TwistedComplexData d = twisted_complex(p, r);
  PolyMatrix b = d.beta2.without_column_block(std::size_t(w.deleted_generator) * n, n);
  w.numerator = normalize(determinant(b, r.ring, opt));
  w.denominator = normalize(w.denominator);
  return w;
}

TwistedResult twisted_alexander_full(const Presentation& p, const Representation& r, const DeterminantOptions& opt) {
  TwistedResult res;
  res.delta0 = delta0(p, r);
  res.delta = LaurentPoly(r.ring);
  res.wada = wada(p, r, -1, opt);
  if (!res.wada || res.delta0.is_zero() || res.wada->numerator.is_zero()) {
    res.torsion = false;
    return res;
  }
  RingSpec F = r.ring.fraction_field();
  LaurentPoly top = to_field_poly(res.wada->numerator, F) * to_field_poly(res.delta0, F);
  auto q = exact_divide(top, to_field_poly(res.wada->denominator, F));
  if (!q) {
    res.torsion = false;
    return res;
  }
  res.delta = normalize(back_to_ring(*q, r.ring));
  return res;
}

LaurentPoly twisted_alexander(const Presentation& p, const Representation& r, const DeterminantOptions& opt) {
  return twisted_alexander_full(p, r, opt).delta;
}

BiLaurentPoly twisted_alexander_2var(const Presentation& p, const Representation& r, int axis_generator) {
  check(p, r);
  if (axis_generator < 0 || axis_generator >= p.generators) throw PresentationError("axis generator out of range");
  if (p.relators.size() + 1 != std::size_t(p.generators))
    throw PresentationError("two-variable polynomial needs a deficiency one presentation");
  std::size_t n = r.dim;
  if (!is_identity(r.images[axis_generator]))
    throw RepresentationError("the axis meridian must act trivially");
  BiPolyMatrix b = twisted_fox_2var(p, r).without_column_block(std::size_t(axis_generator) * n, n);
  BiLaurentPoly det = determinant(b, r.ring);
  int es = r.epsilon[axis_generator].s;
  BiLaurentPoly one_minus_s = BiLaurentPoly::constant(r.ring, 1) - BiLaurentPoly::monomial(Scalar::one(r.ring), r.epsilon[axis_generator].t, es);
  BiLaurentPoly c = BiLaurentPoly::constant(r.ring, 1);
  for (std::size_t i = 0; i < n; ++i) c = c * one_minus_s;
  auto g = exact_divide(det, c);
  if (!g) throw ComputationError("(1 - s)^n does not divide det B(t,s)");
  return normalize(*g);
}

LaurentPoly delta_axis(const Representation& r, const FreeWord& axis_word, int lambda) {
  ScalarMatrix a = r.image(axis_word);
  PolyMatrix m(r.dim, r.dim, LaurentPoly(r.ring));
  for (std::size_t i = 0; i < r.dim; ++i)
    for (std::size_t j = 0; j < r.dim; ++j) {
      LaurentPoly e = i == j ? LaurentPoly::constant(r.ring, 1) : LaurentPoly(r.ring);
      if (!a(i, j).is_zero()) e -= mono(a(i, j), lambda);
      m(i, j) = std::move(e);
    }
  return determinant(m, r.ring);
}

LaurentPoly classical_alexander(const Diagram& d) {
  if (!d.is_knot()) throw DiagramError("classical_alexander expects a knot diagram");
  Presentation p = wirtinger(d);
  return twisted_alexander(p, trivial_representation(p));
}

Representation extend_to_axis(const Representation& knot_rep, const AxisLink& link) {
  const Presentation& p = link.presentation;
  std::vector<ScalarMatrix> images;
  for (int g = 0; g < p.generators; ++g) {
    if (g == link.axis_generator) {
      images.push_back(identity_matrix(knot_rep.ring, knot_rep.dim));
      continue;
    }
    int src = g < link.axis_generator ? g : g - 1;
    if (src >= int(knot_rep.images.size())) throw RepresentationError("knot representation has too few generators");
    images.push_back(knot_rep.images[src]);
  }
  Representation r = make_representation(p, knot_rep.ring, std::move(images));
  auto chk = verify(p, r);
  if (!chk.ok) throw RepresentationError("extended representation fails: " + chk.reason);
  return r;
}

}  // namespace twistlab
