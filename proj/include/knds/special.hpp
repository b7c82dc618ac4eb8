#pragma once

#include <complex>

namespace knds {

using cplx = std::complex<double>;

// Complex Gamma and log-Gamma (Lanczos, with reflection for Re z < 1/2).
cplx cgamma(cplx z);
cplx clgamma(cplx z);

// Modified Bessel function I_alpha(w) for complex order; principal branch, |arg w| < pi.
// Power series for |w| <= 20, large-argument expansion beyond.
cplx bessel_i(cplx alpha, cplx w);
cplx bessel_i_series(cplx alpha, cplx w, int max_terms = 400);
cplx bessel_i_asymptotic(cplx alpha, cplx w);

}  // namespace knds
