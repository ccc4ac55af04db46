#pragma once

#include <complex>

namespace ztk {

// Leading Laurent data of a meromorphic function at `center`:
// f(z) = residue/(z - center) + finite_part + O(z - center).
struct LaurentData {
    std::complex<double> residue{0.0, 0.0};
    std::complex<double> finite_part{0.0, 0.0};
    std::complex<double> center{0.0, 0.0};
};

} // namespace ztk
