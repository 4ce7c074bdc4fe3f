#pragma once

#include "twm/arith.hpp"
#include "twm/hecke.hpp"
#include "twm/special.hpp"

namespace twm::test {

// Built once per process; every suite reads them.
inline const CoefficientTable& delta() {
  static const CoefficientTable table = build_delta_coefficients(100000);
  return table;
}
inline const MultiplicativeTables& tables() {
  static const MultiplicativeTables t = build_tables(400000);
  return t;
}
inline const SymSquareL& sym2() {
  static const SymSquareL s(delta(), tables());
  return s;
}

inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace twm::test
