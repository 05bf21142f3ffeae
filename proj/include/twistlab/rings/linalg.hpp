#pragma once

#include <optional>
#include <vector>

#include "twistlab/rings/bilaurent.hpp"
#include "twistlab/rings/laurent.hpp"
#include "twistlab/rings/matrix.hpp"

namespace twistlab {

using ScalarMatrix = Matrix<Scalar>;
using PolyMatrix = Matrix<LaurentPoly>;
using BiPolyMatrix = Matrix<BiLaurentPoly>;
using IntMatrix = Matrix<Integer>;

ScalarMatrix identity_matrix(const RingSpec& r, std::size_t n);
ScalarMatrix zero_matrix(const RingSpec& r, std::size_t rows, std::size_t cols);
ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b);
ScalarMatrix map_ring(const ScalarMatrix& m, const RingSpec& target);
bool is_identity(const ScalarMatrix& m);
// Inverse with entries in the ring of m, if it exists there.
std::optional<ScalarMatrix> inverse(const ScalarMatrix& m);
// Row-reduced basis of the right null space over a field.
std::vector<std::vector<Scalar>> nullspace(const ScalarMatrix& m, const RingSpec& field);

Scalar determinant(const ScalarMatrix& m, const RingSpec& r);
Integer determinant(const IntMatrix& m);

struct DeterminantOptions {
  // square sizes above this use evaluation/interpolation (integer coefficients only)
  std::size_t interpolation_threshold = 40;
  unsigned threads = 1;
};

LaurentPoly determinant(const PolyMatrix& m, const RingSpec& r, const DeterminantOptions& opt = {});
LaurentPoly determinant_bareiss(const PolyMatrix& m, const RingSpec& r);
LaurentPoly determinant_interpolation(const PolyMatrix& m, unsigned threads = 1);
BiLaurentPoly determinant(const BiPolyMatrix& m, const RingSpec& r);

PolyMatrix to_poly_matrix(const ScalarMatrix& m);

// Full diagonal of the Smith normal form (nonnegative, d1 | d2 | ...).
std::vector<Integer> smith_diagonal(IntMatrix m);
// Diagonal entries other than 1, i.e. the cyclic factors; zeros denote free summands.
std::vector<Integer> invariant_factors(const IntMatrix& m);

}  // namespace twistlab
