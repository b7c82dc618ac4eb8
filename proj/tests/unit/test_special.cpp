#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "doctest.h"
#include "knds/special.hpp"

using namespace knds;

TEST_CASE("complex Gamma: real axis, reflection and the critical line") {
    for (double x : {0.3, 1.0, 2.5, 7.2, -0.4, -2.7}) CHECK(cgamma(x).real() == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    for (cplx z : {cplx(0.3, 1.2), cplx(-1.7, 0.4), cplx(2.2, -5.0)}) {
        const cplx lhs = cgamma(z) * cgamma(1.0 - z), rhs = M_PI / std::sin(M_PI * z);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
    }
    for (double y : {0.5, 2.0, 4.4}) {
        CHECK(std::norm(cgamma(cplx(0.5, y))) == doctest::Approx(M_PI / std::cosh(M_PI * y)).epsilon(1e-12));
    }
    const cplx z(3.3, 2.1);
    CHECK(std::abs(cgamma(z + 1.0) - z * cgamma(z)) < 1e-12 * std::abs(cgamma(z + 1.0)));
    CHECK(std::abs(std::exp(clgamma(cplx(40.0, 3.0))) - cgamma(cplx(40.0, 3.0))) <
          1e-10 * std::abs(cgamma(cplx(40.0, 3.0))));
}

TEST_CASE("modified Bessel I for real order agrees with Boost") {
    for (double nu : {-0.5, 0.0, 0.5, 2.3})
        for (double w : {0.1, 1.0, 5.0, 18.0, 30.0, 60.0}) {
            const double ref = boost::math::cyl_bessel_i(nu, w);
            CHECK(bessel_i(nu, w).real() == doctest::Approx(ref).epsilon(1e-11));
        }
}

TEST_CASE("modified Bessel I for complex order satisfies the recurrence") {
    for (cplx al : {cplx(0.5, 1.0), cplx(-0.5, 4.4), cplx(1.5, -2.0)})
        for (cplx w : {cplx(0.7, 0.0), cplx(6.0, 0.3), cplx(25.0, 0.0), cplx(45.0, -2.0)}) {
            const cplx lhs = bessel_i(al - 1.0, w) - bessel_i(al + 1.0, w);
            const cplx rhs = 2.0 * al / w * bessel_i(al, w);
            CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
        }
}

TEST_CASE("series and large-argument branches agree where both hold") {
    for (cplx al : {cplx(0.5, 1.0), cplx(-0.5, -4.4)}) {
        const cplx w(20.0, 0.0);
        const cplx s = bessel_i_series(al, w), a = bessel_i_asymptotic(al, w);
        CHECK(std::abs(s - a) < 1e-9 * std::abs(s));
    }
}
