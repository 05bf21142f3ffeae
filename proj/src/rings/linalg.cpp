#include "twistlab/rings/linalg.hpp"

#include <algorithm>
#include <thread>

namespace twistlab {

ScalarMatrix identity_matrix(const RingSpec& r, std::size_t n) {
  ScalarMatrix m(n, n, Scalar::zero(r));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(r);
  return m;
}

ScalarMatrix zero_matrix(const RingSpec& r, std::size_t rows, std::size_t cols) {
  return ScalarMatrix(rows, cols, Scalar::zero(r));
}

ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
  if (a.cols() != b.rows()) throw RingError("matrix shapes do not match");
  RingSpec r = a.rows() && a.cols() ? a(0, 0).ring() : (b.rows() && b.cols() ? b(0, 0).ring() : RingSpec());
  ScalarMatrix m(a.rows(), b.cols(), Scalar::zero(r));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Scalar& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j).add_product(x, b(k, j));
    }
  return m;
}

ScalarMatrix map_ring(const ScalarMatrix& m, const RingSpec& target) {
  ScalarMatrix out(m.rows(), m.cols(), Scalar::zero(target));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).map_to(target);
  return out;
}

bool is_identity(const ScalarMatrix& m) {
  if (!m.is_square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i == j ? !m(i, j).is_one() : !m(i, j).is_zero()) return false;
  return true;
}

std::optional<ScalarMatrix> inverse(const ScalarMatrix& m0) {
  if (!m0.is_square()) return std::nullopt;
  std::size_t n = m0.rows();
  if (n == 0) return m0;
  RingSpec ring = m0(0, 0).ring();
  RingSpec field = ring.fraction_field();
  ScalarMatrix a = map_ring(m0, field);
  ScalarMatrix inv = identity_matrix(field, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return std::nullopt;
    a.swap_rows(p, c);
    inv.swap_rows(p, c);
    Scalar s = a(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) *= s;
      inv(c, j) *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      Scalar f = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j).sub_product(f, a(c, j));
        inv(r, j).sub_product(f, inv(c, j));
      }
    }
  }
  if (field == ring) return inv;
  try {
    return map_ring(inv, ring);
  } catch (const RingError&) {
    return std::nullopt;
  }
}

std::vector<std::vector<Scalar>> nullspace(const ScalarMatrix& m0, const RingSpec& field) {
  ScalarMatrix a = map_ring(m0, field);
  std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a(p, c).is_zero()) ++p;
    if (p == rows) continue;
    a.swap_rows(p, r);
    Scalar s = a(r, c).inverse();
    for (std::size_t j = 0; j < cols; ++j) a(r, j) *= s;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      Scalar f = a(i, c);
      for (std::size_t j = 0; j < cols; ++j) a(i, j).sub_product(f, a(r, j));
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> v(cols, Scalar::zero(field));
    v[f] = Scalar::one(field);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------- Bareiss

namespace {

template <class T, class IsZero, class Size, class Step>
T bareiss(Matrix<T> m, const T& one, const T& zero, IsZero is_zero, Size size, Step step) {
  std::size_t n = m.rows();
  if (n == 0) return one;
  bool negate = false;
  T prev = one;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (!is_zero(m(i, k)) && (piv == n || size(m(i, k)) < size(m(piv, k)))) piv = i;
    if (piv == n) return zero;
    if (piv != k) {
      m.swap_rows(piv, k);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) step(m(i, j), m(k, k), m(i, k), m(k, j), prev);
    prev = m(k, k);
  }
  T d = m(n - 1, n - 1);
  if (negate) d = zero - d;
  return d;
}

}  // namespace

Scalar determinant(const ScalarMatrix& m, const RingSpec& r) {
  if (!m.is_square()) throw RingError("determinant of a non-square matrix");
  return bareiss(
      m, Scalar::one(r), Scalar::zero(r), [](const Scalar& x) { return x.is_zero(); },
      [](const Scalar&) { return 0; },
      [](Scalar& x, const Scalar& pkk, const Scalar& pik, const Scalar& pkj, const Scalar& prev) {
        Scalar v = pkk * x;
        v.sub_product(pik, pkj);
        auto q = v.divide_exact(prev);
        if (!q) throw RingError("Bareiss division failed");
        x = std::move(*q);
      });
}

Integer determinant(const IntMatrix& m) {
  if (!m.is_square()) throw RingError("determinant of a non-square matrix");
  return bareiss(
      m, Integer(1), Integer(0), [](const Integer& x) { return sgn(x) == 0; },
      [](const Integer& x) { return mpz_sizeinbase(x.get_mpz_t(), 2); },
      [](Integer& x, const Integer& pkk, const Integer& pik, const Integer& pkj, const Integer& prev) {
        mpz_mul(x.get_mpz_t(), x.get_mpz_t(), pkk.get_mpz_t());
        mpz_submul(x.get_mpz_t(), pik.get_mpz_t(), pkj.get_mpz_t());
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      });
}

LaurentPoly determinant_bareiss(const PolyMatrix& m, const RingSpec& r) {
  if (!m.is_square()) throw RingError("determinant of a non-square matrix");
  return bareiss(
      m, LaurentPoly::constant(r, 1), LaurentPoly(r), [](const LaurentPoly& x) { return x.is_zero(); },
      [](const LaurentPoly& x) { return x.span(); },
      [](LaurentPoly& x, const LaurentPoly& pkk, const LaurentPoly& pik, const LaurentPoly& pkj,
         const LaurentPoly& prev) {
        LaurentPoly v = pkk * x;
        v.sub_product(pik, pkj);
        if (prev.is_monomial() && prev.leading().is_one()) {
          x = v.shifted(-prev.low());
          return;
        }
        auto q = exact_divide(v, prev);
        if (!q) throw RingError("Bareiss division failed");
        x = std::move(*q);
      });
}

BiLaurentPoly determinant(const BiPolyMatrix& m, const RingSpec& r) {
  if (!m.is_square()) throw RingError("determinant of a non-square matrix");
  return bareiss(
      m, BiLaurentPoly::constant(r, 1), BiLaurentPoly(r), [](const BiLaurentPoly& x) { return x.is_zero(); },
      [](const BiLaurentPoly& x) { return x.terms().size(); },
      [](BiLaurentPoly& x, const BiLaurentPoly& pkk, const BiLaurentPoly& pik, const BiLaurentPoly& pkj,
         const BiLaurentPoly& prev) {
        BiLaurentPoly v = pkk * x - pik * pkj;
        auto q = exact_divide(v, prev);
        if (!q) throw RingError("Bareiss division failed");
        x = std::move(*q);
      });
}

// ---------------------------------------------------------------- interpolation

LaurentPoly determinant_interpolation(const PolyMatrix& m0, unsigned threads) {
  if (!m0.is_square()) throw RingError("determinant of a non-square matrix");
  std::size_t n = m0.rows();
  RingSpec Z = RingSpec::integers();
  if (n == 0) return LaurentPoly::constant(Z, 1);
  PolyMatrix m = m0;
  int total_shift = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int lo = INT32_MAX;
    for (std::size_t j = 0; j < n; ++j)
      if (!m(i, j).is_zero()) lo = std::min(lo, m(i, j).low());
    if (lo == INT32_MAX) return LaurentPoly(Z);
    for (std::size_t j = 0; j < n; ++j) m(i, j) = m(i, j).shifted(-lo);
    total_shift += lo;
  }
  for (std::size_t j = 0; j < n; ++j) {
    int lo = INT32_MAX;
    for (std::size_t i = 0; i < n; ++i)
      if (!m(i, j).is_zero()) lo = std::min(lo, m(i, j).low());
    if (lo == INT32_MAX) return LaurentPoly(Z);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = m(i, j).shifted(-lo);
    total_shift += lo;
  }
  long row_bound = 0, col_bound = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int d = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (!m(i, j).is_zero()) d = std::max(d, m(i, j).high());
    row_bound += d;
  }
  for (std::size_t j = 0; j < n; ++j) {
    int d = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (!m(i, j).is_zero()) d = std::max(d, m(i, j).high());
    col_bound += d;
  }
  long D = std::min(row_bound, col_bound);
  long x0 = -(D / 2);
  std::size_t npts = std::size_t(D + 1);

  // integer coefficient tables
  std::vector<std::vector<Integer>> entry(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    const LaurentPoly& p = m(k / n, k % n);
    if (p.ring().kind() != RingKind::Integers) throw RingError("interpolation needs integer entries");
    for (int e = 0; !p.is_zero() && e <= p.high(); ++e) entry[k].push_back(p.coeff(e).integer());
  }
  std::vector<Integer> values(npts);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t k = begin; k < npts; k += stride) {
      Integer x = x0 + long(k);
      IntMatrix a(n, n, Integer(0));
      for (std::size_t idx = 0; idx < n * n; ++idx) {
        const auto& c = entry[idx];
        Integer acc = 0;
        for (std::size_t e = c.size(); e-- > 0;) {
          acc *= x;
          acc += c[e];
        }
        a(idx / n, idx % n) = acc;
      }
      values[k] = determinant(a);
    }
  };
  unsigned nt = std::max(1u, std::min<unsigned>(threads, unsigned(npts)));
  if (nt == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) pool.emplace_back(work, w, nt);
    for (auto& th : pool) th.join();
  }
  // forward differences: c_k = Delta^k f(x0) / k!
  std::vector<Integer> diff = values, c(npts);
  Integer fact = 1;
  for (std::size_t k = 0; k < npts; ++k) {
    if (k > 0) fact *= long(k);
    if (!mpz_divisible_p(diff[0].get_mpz_t(), fact.get_mpz_t()))
      throw RingError("interpolation produced a non-integral coefficient");
    mpz_divexact(c[k].get_mpz_t(), diff[0].get_mpz_t(), fact.get_mpz_t());
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
    diff.pop_back();
  }
  // P(x) = sum c_k (x - x0)(x - x0 - 1)...(x - x0 - k + 1), expanded Horner-style
  std::vector<Integer> poly{c[npts - 1]};
  for (std::size_t k = npts - 1; k-- > 0;) {
    Integer root = x0 + long(k);
    std::vector<Integer> next(poly.size() + 1, Integer(0));
    for (std::size_t e = 0; e < poly.size(); ++e) {
      next[e + 1] += poly[e];
      next[e] -= root * poly[e];
    }
    next[0] += c[k];
    poly = std::move(next);
  }
  std::vector<Scalar> coeffs;
  coeffs.reserve(poly.size());
  for (auto& x : poly) coeffs.push_back(Scalar(std::move(x)));
  return LaurentPoly(Z, total_shift, std::move(coeffs));
}

LaurentPoly determinant(const PolyMatrix& m, const RingSpec& r, const DeterminantOptions& opt) {
  if (!m.is_square()) throw RingError("determinant of a non-square matrix");
  if (m.rows() > opt.interpolation_threshold) {
    if (r.kind() == RingKind::Integers) return determinant_interpolation(m, opt.threads);
    if (r.kind() == RingKind::Rationals) {
      // scale each row to integers, interpolate, undo the scaling
      PolyMatrix zm(m.rows(), m.cols(), LaurentPoly(RingSpec::integers()));
      Rational scale = 1;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        Integer l = 1;
        for (std::size_t j = 0; j < m.cols(); ++j)
          for (const auto& c : m(i, j).coefficients())
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.rational().get_den_mpz_t());
        scale *= l;
        for (std::size_t j = 0; j < m.cols(); ++j)
          zm(i, j) = (m(i, j) * Scalar(Rational(l))).map_ring(RingSpec::integers());
      }
      LaurentPoly d = determinant_interpolation(zm, opt.threads).map_ring(r);
      return d * Scalar(Rational(1 / scale));
    }
  }
  return determinant_bareiss(m, r);
}

PolyMatrix to_poly_matrix(const ScalarMatrix& m) {
  RingSpec r = m.rows() && m.cols() ? m(0, 0).ring() : RingSpec();
  PolyMatrix out(m.rows(), m.cols(), LaurentPoly(r));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = LaurentPoly::constant(m(i, j));
  return out;
}

// ---------------------------------------------------------------- Smith

std::vector<Integer> smith_diagonal(IntMatrix a) {
  std::size_t rows = a.rows(), cols = a.cols();
  std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // smallest nonzero entry of the remaining block becomes the pivot
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (sgn(a(i, j)) != 0 && (pr == rows || abs(a(i, j)) < abs(a(pr, pc)))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) {
        std::vector<Integer> d;
        for (std::size_t k = 0; k < n; ++k) d.push_back(k < t ? Integer(abs(a(k, k))) : Integer(0));
        return d;
      }
      a.swap_rows(pr, t);
      for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, pc), a(i, t));
      bool clean = true;
      const Integer piv = a(t, t);
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(a(i, t)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), piv.get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) a(i, j) -= q * a(t, j);
        if (sgn(a(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(a(t, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), piv.get_mpz_t());
        for (std::size_t i = t; i < rows; ++i) a(i, j) -= q * a(i, t);
        if (sgn(a(t, j)) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility condition for the rest of the block
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), piv.get_mpz_t())) {
            for (std::size_t c = t; c < cols; ++c) a(t, c) += a(i, c);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
  }
  std::vector<Integer> d;
  for (std::size_t k = 0; k < n; ++k) d.push_back(abs(a(k, k)));
  return d;
}

std::vector<Integer> invariant_factors(const IntMatrix& m) {
  std::vector<Integer> d = smith_diagonal(m);
  std::vector<Integer> out;
  for (auto& x : d)
    if (x != 1) out.push_back(x);
  for (std::size_t k = d.size(); k < m.cols(); ++k) out.push_back(Integer(0));
  return out;
}

}  // namespace twistlab
