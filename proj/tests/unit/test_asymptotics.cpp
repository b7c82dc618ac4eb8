#include <cmath>

#include "doctest.h"
#include "knds/asymptotics.hpp"
#include "knds/errors.hpp"
#include "knds/radial.hpp"

using namespace knds;

namespace {

const Geometry& ref_geometry() {
    static const Geometry g(reference_params());
    return g;
}

}  // namespace

TEST_CASE("horizon exponents of the model") {
    const Geometry& g = ref_geometry();
    const AsymptoticModel m = asymptotic_model(g, 0.3, 0.5);
    CHECK(m.rho_minus == doctest::Approx((0.3 - g.omega_minus(0.5)) / g.horizons().kappa_minus));
    CHECK(m.rho_plus == doctest::Approx((0.3 - g.omega_plus(0.5)) / g.horizons().kappa_plus));
    CHECK(m.rho_minus == doctest::Approx(1.0257).epsilon(1e-4));
    CHECK(m.rho_plus == doctest::Approx(-4.4068).epsilon(1e-4));
}

TEST_CASE("prefactor moduli") {
    const Geometry& g = ref_geometry();
    for (double k : {0.5, 1.5, -2.5}) {
        const AsymptoticModel m = asymptotic_model(g, 0.3, k);
        CHECK(std::abs(m.pref_R) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(m.pref_L) == doctest::Approx(1.0).epsilon(1e-12));
        const double t = 2 * std::sqrt(std::cosh(M_PI * m.rho_minus) * std::cosh(M_PI * m.rho_plus));
        CHECK(std::abs(m.pref_T) == doctest::Approx(t).epsilon(1e-11));
        CHECK(m.abs_T_pref == doctest::Approx(t).epsilon(1e-12));
    }
    CHECK(asymptotic_model(g, 0.3, 0.5).abs_T_pref == doctest::Approx(5085.297).epsilon(1e-6));
}

TEST_CASE("predicted matrix has unit determinant to leading order") {
    const AsymptoticModel m = asymptotic_model(ref_geometry(), 0.3, 0.5);
    const TransferMatrix al = predict_al_asymptotics(m, 12.0);
    // a1 a4 and a2 a3 agree to leading order, so the mantissas nearly cancel.
    CHECK(std::abs(al.mant[0] * al.mant[3]) == doctest::Approx(std::abs(al.mant[1] * al.mant[2])).epsilon(1e-10));
}

TEST_CASE("Sturm potential has the inverse-square horizon limits") {
    const Geometry& g = ref_geometry();
    const AsymptoticModel m = asymptotic_model(g, 0.3, 0.5);
    const RadialPoint lo = g.point_from_x(-45), hi = g.point_from_x(120);
    const double X = g.liouville_X(lo), AX = g.liouville_A_minus_X(hi);
    CHECK(X < 1e-3);
    CHECK(AX < 1e-3);
    const cplx wm = sturm_potential(g, 0.3, 0.5, lo) * X * X;
    const cplx wp = sturm_potential(g, 0.3, 0.5, hi) * AX * AX;
    CHECK(std::abs(wm - omega_minus_coeff(m)) < 1e-3 * std::abs(omega_minus_coeff(m)));
    CHECK(std::abs(wp - omega_plus_coeff(m)) < 1e-3 * std::abs(omega_plus_coeff(m)));
}

TEST_CASE("h_+ and h_- invert the Liouville variable near the horizons") {
    const Geometry& g = ref_geometry();
    const AsymptoticModel m = asymptotic_model(g, 0.3, 0.5);
    for (double x : {-35.0, -45.0}) {
        const RadialPoint pt = g.point_from_x(x);
        CHECK(h_minus(m, g.liouville_X(pt)) == doctest::Approx(x).epsilon(1e-6));
    }
    for (double x : {90.0, 130.0}) {
        const RadialPoint pt = g.point_from_x(x);
        CHECK(h_plus(m, g.liouville_A_minus_X(pt)) == doctest::Approx(x).epsilon(1e-6));
    }
}

TEST_CASE("Liouville table is increasing and inverts X") {
    const Geometry& g = ref_geometry();
    const auto xr = default_x_range(g, 1e-12);
    const RadialProfile pr = build_radial_profile(g, 0.5, xr[0], xr[1], 4001);
    const LiouvilleTable t = liouville_transform(pr);
    for (std::size_t i = 1; i < t.X.size(); ++i) CHECK(t.X[i] > t.X[i - 1]);
    for (std::size_t i = 100; i < pr.x.size(); i += 700) CHECK(t.h_of_X(pr.X[i]) == doctest::Approx(pr.x[i]).epsilon(1e-9));
}

TEST_CASE("large-z amplitude converges with the first-order coefficient") {
    const Geometry& g = ref_geometry();
    const double A = g.A_total(), lam = 0.3, k = 0.5;
    const AsymptoticModel m = asymptotic_model(g, lam, k);
    const cplx c1 = first_order_coefficient(g, lam, k);
    CHECK(c1.real() == doctest::Approx(6.515).epsilon(2e-3));
    for (double zA : {60.0, 90.0}) {
        const double z = zA / A;
        const ScatteringRecord r = scatter(g, k, lam, z);
        const double ratio = std::abs(r.phys.T) * std::exp(zA) / m.abs_T_pref;
        // -ln(ratio) z tends to Re c1.
        CHECK(-std::log(ratio) * z == doctest::Approx(c1.real()).epsilon(0.05));
        CHECK(std::abs(ratio / std::abs(std::exp(-c1 / z)) - 1) < 3e-3);
    }
}

TEST_CASE("reflection phases follow the horizon exponents") {
    const Geometry& g = ref_geometry();
    const double A = g.A_total(), lam = 0.3;
    const AsymptoticModel m = asymptotic_model(g, lam, 1.5);
    const double z1 = 150 / A, z2 = 200 / A;
    const ScatteringRecord a = scatter(g, 1.5, lam, z1), b = scatter(g, 1.5, lam, z2);
    const double dl = std::log(z2 / z1);
    // arg increments are small enough here that no unwrapping is needed.
    const double sR = std::arg(b.phys.R / a.phys.R) / dl, sL = std::arg(b.phys.L / a.phys.L) / dl;
    CHECK(sR == doctest::Approx(2 * m.rho_plus).epsilon(5e-3));
    CHECK(sL == doctest::Approx(-2 * m.rho_minus).epsilon(5e-3));
}

TEST_CASE("monotonicity from synthetic values") {
    const std::vector<double> z{1, 2, 3, 4, 5};
    const MonotonicityResult inc = monotonicity_from_values(z, {0.1, 0.2, 0.4, 0.7, 1.0});
    CHECK(inc.increasing);
    const MonotonicityResult late = monotonicity_from_values(z, {0.5, 0.4, 0.6, 0.9, 1.1});
    CHECK_FALSE(late.increasing);
    CHECK(late.turnover == doctest::Approx(2.0));
}

TEST_CASE("Bessel approximants are finite across the domain") {
    const Geometry& g = ref_geometry();
    const AsymptoticModel m = asymptotic_model(g, 0.3, 0.5);
    const double A = g.A_total();
    for (double X : {1e-6, 0.5, 2.0, A - 1e-6}) {
        const BesselApproximants b = bessel_approximants(m, 10.0, X, A - X);
        CHECK(std::isfinite(std::abs(b.f1p)));
        CHECK(std::isfinite(std::abs(b.g1m)));
    }
}
