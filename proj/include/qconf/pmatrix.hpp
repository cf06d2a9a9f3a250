#pragma once

#include "qconf/matrix.hpp"
#include "qconf/padic.hpp"

namespace qconf {

using PMatrix = Matrix<PAdic>;

PMatrix identity_pmatrix(const Field& F, std::size_t n);
// Gauss-Jordan with a largest-norm pivot; std::domain_error when singular at
// working precision.
PMatrix inverse(const PMatrix& m);
// min over entries of valuation bounds (+inf for an exactly zero matrix).
Ext min_valuation(const PMatrix& m);

}  // namespace qconf
