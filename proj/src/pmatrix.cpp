#include "qconf/pmatrix.hpp"

namespace qconf {

PMatrix identity_pmatrix(const Field& F, std::size_t n) {
  PMatrix r(n, n, PAdic::zero(F));
  for (std::size_t i = 0; i < n; ++i) r(i, i) = PAdic::one(F);
  return r;
}

PMatrix inverse(const PMatrix& m) {
  if (!m.square() || m.rows() == 0) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const Field& F = *m(0, 0).field();
  PMatrix a = m;
  PMatrix r = identity_pmatrix(F, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t i = col; i < n; ++i) {
      if (a(i, col).is_zero()) continue;
      if (piv == n || a(i, col).valuation() < a(piv, col).valuation()) piv = i;
    }
    if (piv == n) throw std::domain_error("matrix is singular at working precision");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(col, j), a(piv, j));
      std::swap(r(col, j), r(piv, j));
    }
    const PAdic inv = a(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * inv;
      r(col, j) = r(col, j) * inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col).is_exact_zero()) continue;
      const PAdic f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        r(i, j) -= f * r(col, j);
      }
    }
  }
  return r;
}

Ext min_valuation(const PMatrix& m) {
  Ext v = Ext::inf();
  for (const auto& x : m.data()) v = min(v, x.valuation_bound());
  return v;
}

}  // namespace qconf
