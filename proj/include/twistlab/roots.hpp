#ifndef TWISTLAB_ROOTS_HPP
#define TWISTLAB_ROOTS_HPP

#include <complex>
#include <vector>

namespace twistlab {

using cld = std::complex<long double>;

// All complex roots of sum_k c[k] u^k (ascending, c.back() != 0) by Aberth
// iteration followed by Newton polishing. Throws RootFinderNonConvergence.
std::vector<cld> poly_roots(const std::vector<cld>& coeffs);

// Synthetic division of an ascending polynomial by (u - r); returns the
// quotient and writes the remainder to *rem when non-null.
std::vector<cld> deflate(const std::vector<cld>& coeffs, cld r, cld* rem = nullptr);

}  // namespace twistlab

#endif  // TWISTLAB_ROOTS_HPP
