#pragma once

#include <vector>

#include "starksic/bigcomplex.hpp"

namespace starksic {

/// All complex roots of a polynomial by Aberth-Ehrlich simultaneous
/// iteration. Coefficients in ascending degree order; the leading
/// coefficient must be nonzero. Residuals are checked against a
/// derivative-scaled certificate; throws on non-convergence.
std::vector<Complex> all_roots(const std::vector<Complex>& coeffs_ascending, Prec bits);

Complex poly_eval(const std::vector<Complex>& coeffs_ascending, const Complex& x);

/// One Newton polish pass sequence at the precision of x0 (coefficients are
/// promoted as needed); stops when the step is below 2^-(bits-8).
Complex newton_polish(const std::vector<Complex>& coeffs_ascending, Complex x0, Prec bits);

}  // namespace starksic
