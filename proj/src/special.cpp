#include "knds/special.hpp"

#include <array>
#include <cmath>

namespace knds {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos_lgamma(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx clgamma(cplx z) {
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(M_PI) - std::log(std::sin(M_PI * z)) - lanczos_lgamma(1.0 - z);
    }
    return lanczos_lgamma(z);
}

cplx cgamma(cplx z) {
    if (z.real() < 0.5) return M_PI / (std::sin(M_PI * z) * std::exp(lanczos_lgamma(1.0 - z)));
    return std::exp(lanczos_lgamma(z));
}

cplx bessel_i_series(cplx alpha, cplx w, int max_terms) {
    const cplx h = 0.5 * w;
    const cplx h2 = h * h;
    // First term (w/2)^alpha / Gamma(alpha + 1); 1/Gamma vanishes at non-positive integers.
    const cplx ap1 = alpha + 1.0;
    cplx rg;
    if (std::abs(ap1.imag()) < 1e-300 && ap1.real() <= 0 && ap1.real() == std::round(ap1.real()))
        rg = 0.0;
    else
        rg = 1.0 / cgamma(ap1);
    cplx term = std::exp(alpha * std::log(h)) * rg;
    cplx sum = term;
    for (int m = 1; m < max_terms; ++m) {
        term *= h2 / (static_cast<double>(m) * (static_cast<double>(m) + alpha));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum) && m > std::abs(h)) break;
    }
    return sum;
}

cplx bessel_i_asymptotic(cplx alpha, cplx w) {
    const cplx m4 = 4.0 * alpha * alpha;
    cplx term = 1.0, sum = 1.0;
    double last = 1e300;
    for (int k = 1; k < 60; ++k) {
        term *= -(m4 - static_cast<double>((2 * k - 1) * (2 * k - 1))) / (static_cast<double>(k) * 8.0 * w);
        const double at = std::abs(term);
        if (at > last) break;  // asymptotic series starts diverging
        sum += term;
        last = at;
        if (at < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(w) / std::sqrt(2.0 * M_PI * w) * sum;
}

cplx bessel_i(cplx alpha, cplx w) {
    if (std::abs(w) <= 20.0) return bessel_i_series(alpha, w);
    return bessel_i_asymptotic(alpha, w);
}

}  // namespace knds
