#pragma once

namespace qrand {

/// Numerical tolerances shared by every validation and measure routine.
/// The defaults are the library-wide contract; individual calls accept an
/// override so test suites can tighten or loosen them uniformly.
struct Tolerances {
  double hermiticity = 1e-9;      ///< max |m(i,j) - conj(m(j,i))|
  double trace = 1e-9;            ///< |Tr(rho) - 1|
  double psd = 1e-9;              ///< most negative eigenvalue allowed
  double norm = 1e-9;             ///< pure-state / probability normalization
  double orthonormality = 1e-9;   ///< basis Gram-matrix deviation from identity
  double zero_eigenvalue = 1e-12; ///< spectra below this are exact zeros (0 log 0 = 0)
  double support = 1e-9;          ///< weight outside support tolerated by relative entropy
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace qrand
