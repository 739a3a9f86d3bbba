#pragma once

#include <gmpxx.h>

#include <vector>

namespace starksic {

/// In-place LLL reduction (delta = 99/100) with exact rational Gram-Schmidt.
/// Intended for the small, few-row lattices used in number recognition.
void lll_reduce(std::vector<std::vector<mpz_class>>& basis);

}  // namespace starksic
