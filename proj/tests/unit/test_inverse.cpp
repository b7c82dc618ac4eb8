#include <cmath>

#include "doctest.h"
#include "knds/angular.hpp"
#include "knds/errors.hpp"
#include "knds/inverse.hpp"

using namespace knds;

namespace {

AsymptoticDataset synthetic(double A, double rho_p, double rho_m) {
    AsymptoticDataset d;
    for (int i = 0; i < 40; ++i) {
        const double z = 20.0 * std::pow(10.0, i / 39.0);
        AsymptoticSample s;
        s.z = z;
        s.log_abs_T = -A * z + 0.8 - 1.3 / z + 0.2 / (z * z);
        s.arg_T = 0;
        s.R = std::polar(1.0, 2 * rho_p * std::log(z) + 0.4 + 0.9 / z);
        s.L = std::polar(1.0, -2 * rho_m * std::log(z) - 1.1 + 0.3 / (z * z));
        d.samples.push_back(s);
    }
    return d;
}

}  // namespace

TEST_CASE("fits recover synthetic exponents") {
    const AsymptoticDataset d = synthetic(3.0, 0.7, -1.2);
    const FitResult f = fit_A_from_T(d);
    CHECK(f.value == doctest::Approx(3.0).epsilon(1e-10));
    const HorizonExponents h = fit_horizon_exponents(d);
    CHECK(h.rho_plus == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(h.rho_minus == doctest::Approx(-1.2).epsilon(1e-9));
}

TEST_CASE("phase unwrapping") {
    std::vector<double> raw, truth;
    for (int i = 0; i < 50; ++i) {
        truth.push_back(0.4 * i);
        raw.push_back(std::remainder(0.4 * i, 2 * M_PI));
    }
    const auto u = unwrap_phase(raw);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] - u[0] == doctest::Approx(truth[i] - truth[0]));
    CHECK_THROWS_AS(unwrap_phase({0.0, 2.9, 5.9 - 2 * M_PI}), DomainError);
}

TEST_CASE("rotation and cosmological constant from two Frobenius observations") {
    const BlackHoleParams p = reference_params();
    std::vector<FrobeniusObservation> obs;
    for (double k : {0.5, 1.5}) {
        const AngularProblem pb = angular_problem(p, 0.3, k);
        const double mu = angular_eigenvalue(pb, 1);
        AngularEigenpair ev = angular_eigenfunction(pb, 1, mu, 2001);
        ev.lambda = 0.3;
        obs.push_back(frobenius_observation(ev));
    }
    const RotationEstimate r = recover_a_lambda(obs[0], obs[1]);
    CHECK(r.a == doctest::Approx(p.a).epsilon(1e-9));
    CHECK(r.Lambda == doctest::Approx(p.Lambda).epsilon(1e-8));
    CHECK_THROWS(recover_a_lambda(obs[0], obs[0]));
}

TEST_CASE("mass and charge from exact horizon ratios") {
    const BlackHoleParams p = reference_params();
    const Geometry g(p);
    HorizonRatios h;
    h.lambda = {0.15, 0.3};
    h.k = {0.5, 1.5};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            h.rho_plus[i][j] = (h.lambda[i] - g.omega_plus(h.k[j])) / g.horizons().kappa_plus;
            h.rho_minus[i][j] = (h.lambda[i] - g.omega_minus(h.k[j])) / g.horizons().kappa_minus;
        }
    const ParameterEstimate e = recover_parameters(h, p.a, p.Lambda, p.q);
    CHECK(e.r_minus == doctest::Approx(g.horizons().r_minus).epsilon(1e-10));
    CHECK(e.r_plus == doctest::Approx(g.horizons().r_plus).epsilon(1e-10));
    CHECK(e.M == doctest::Approx(p.M).epsilon(1e-9));
    CHECK(e.Qsq == doctest::Approx(p.Q * p.Q).epsilon(1e-8));
}

TEST_CASE("Born coefficient from a_L2 against an independent quadrature") {
    const Geometry g(reference_params());
    const auto xr = default_x_range(g, 1e-13);
    const RadialProfile pr = build_radial_profile(g, 0.5, xr[0], xr[1], 20001);
    for (double lam : {-0.8, 0.45}) {
        // trapezoid of a(x) e^{2iC(x)} e^{-2i lam x} straight from the geometry
        const int n = 1200;
        const double h = (xr[1] - xr[0]) / n;
        cplx s = 0;
        for (int i = 0; i <= n; ++i) {
            const double x = xr[0] + i * h;
            const RadialPoint pt = g.point_from_x(x);
            const cplx f = g.a_of(pt) * std::polar(1.0, 2 * g.C_of(pt, 0.5) - 2 * lam * x);
            s += (i == 0 || i == n ? 0.5 : 1.0) * f;
        }
        s *= h;
        CHECK(std::abs(recover_qhat(pr, lam) - s) < 1e-8 * std::max(1.0, std::abs(s)));
    }
    CHECK_THROWS_AS(qhat_direct(build_radial_profile(g, 0.5, xr[0], xr[1], 100), 0.1), DomainError);
}

TEST_CASE("Richardson derivative of a synthetic odd function") {
    const cplx qh(0.3, -1.1);
    auto al2 = [&](double z) { return -cplx(0, 1) * qh * z + cplx(0.2, 0.5) * z * z * z; };
    CHECK(std::abs(recover_qhat(al2) - qh) < 1e-12);
}

TEST_CASE("gauge shift estimate") {
    BlackHoleParams p = reference_params(), q = p;
    q.c0 = 0.7;
    const Geometry g(p), gq(q);
    const auto xr = default_x_range(g, 1e-13);
    const RadialProfile model = build_radial_profile(g, 0.5, xr[0] - 2, xr[1] + 2, 8001);
    const RadialProfile data = build_radial_profile(gq, 0.5, xr[0] - 2, xr[1] + 2, 8001);
    CHECK(estimate_gauge_shift(data, model) == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("comparison of black holes") {
    const BlackHoleParams p = reference_params();
    BlackHoleParams shifted = p;
    shifted.c0 = -1.5;
    const CompareResult same = compare_blackholes(p, shifted, 0.3, {0.5}, {1}, 1e-10);
    CHECK_FALSE(same.distinguishable);
    CHECK(same.c_align == doctest::Approx(1.5).epsilon(1e-8));
    BlackHoleParams other = p;
    other.M *= 1.02;
    CHECK(compare_blackholes(p, other, 0.3, {0.5}, {1}, 1e-4).distinguishable);
}

TEST_CASE("inverse report serialization") {
    InverseReport r;
    r.rows.push_back({"A", 3.9, 3.9, 0.0, 1e-9});
    const std::string csv = r.to_csv();
    CHECK(csv.rfind("quantity,estimate,truth,rel_error,residual\n", 0) == 0);
    CHECK(r.to_json().find("\"A_est\"") != std::string::npos);
}
