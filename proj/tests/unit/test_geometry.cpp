#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "knds/errors.hpp"
#include "knds/geometry.hpp"

using namespace knds;

namespace {

// Real roots of -L/3 r^4 + (1 - L a^2/3) r^2 - 2 M r + a^2 + Q^2 from the companion matrix.
std::vector<double> companion_roots(const BlackHoleParams& p) {
    const double c4 = -p.Lambda / 3.0, c2 = 1.0 - p.Lambda * p.a * p.a / 3.0, c1 = -2.0 * p.M,
                 c0 = p.a * p.a + p.Q * p.Q;
    Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
    C(1, 0) = C(2, 1) = C(3, 2) = 1.0;
    C(0, 3) = -c0 / c4;
    C(1, 3) = -c1 / c4;
    C(2, 3) = -c2 / c4;
    C(3, 3) = 0.0;
    const Eigen::Vector4cd ev = C.eigenvalues();
    std::vector<double> out;
    for (int i = 0; i < 4; ++i) out.push_back(ev[i].real());
    std::sort(out.begin(), out.end());
    return out;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("horizon roots match companion-matrix eigenvalues") {
    for (const BlackHoleParams& p :
         {reference_params(), BlackHoleParams{0.9, 0.1, 0.3, 0.025, -0.4}, BlackHoleParams{1.2, 0.05, 0.1, 0.01, 0.0}}) {
        const HorizonData h = horizon_roots(p);
        const auto r = companion_roots(p);
        CHECK(h.r_n == doctest::Approx(r[0]).epsilon(1e-10));
        CHECK(h.r_c == doctest::Approx(r[1]).epsilon(1e-10));
        CHECK(h.r_minus == doctest::Approx(r[2]).epsilon(1e-10));
        CHECK(h.r_plus == doctest::Approx(r[3]).epsilon(1e-10));
        CHECK(std::abs(h.r_n + h.r_c + h.r_minus + h.r_plus) < 1e-10);
        CHECK(h.kappa_minus > 0);
        CHECK(h.kappa_plus < 0);
    }
}

TEST_CASE("reference horizons") {
    const Geometry g(reference_params());
    CHECK(g.horizons().r_minus == doctest::Approx(2.015419949).epsilon(1e-9));
    CHECK(g.horizons().r_plus == doctest::Approx(11.09091464).epsilon(1e-9));
    CHECK(g.horizons().E == doctest::Approx(1 + 0.04 * 0.02 / 3));
}

TEST_CASE("surface gravities agree with a finite-difference derivative of Delta_r") {
    const BlackHoleParams p = reference_params();
    const Geometry g(p);
    const auto& h = g.horizons();
    auto D = [&](double r) {
        return -p.Lambda / 3 * std::pow(r, 4) + (1 - p.Lambda * p.a * p.a / 3) * r * r - 2 * p.M * r + p.a * p.a +
               p.Q * p.Q;
    };
    for (auto [r, kap] : {std::pair{h.r_minus, h.kappa_minus}, {h.r_plus, h.kappa_plus}}) {
        const double e = 1e-5;
        const double d1 = (D(r + e) - D(r - e)) / (2 * e);
        CHECK(kap == doctest::Approx(d1 / (2 * (r * r + p.a * p.a))).epsilon(1e-8));
    }
}

TEST_CASE("A_total by a cosine substitution") {
    for (const BlackHoleParams& p : {reference_params(), BlackHoleParams{0.9, 0.1, 0.3, 0.025, -0.4}}) {
        const Geometry g(p);
        const auto& h = g.horizons();
        // int dr / sqrt(Delta_r) with r = r_- + (r_+ - r_-)(1 - cos phi)/2
        auto f = [&](double phi) {
            const double r = h.r_minus + (h.r_plus - h.r_minus) * (1 - std::cos(phi)) / 2;
            return 1.0 / std::sqrt(p.Lambda / 3 * (r - h.r_n) * (r - h.r_c));
        };
        CHECK(g.A_total() == doctest::Approx(simpson(f, 0, M_PI, 4000)).epsilon(1e-11));
    }
    CHECK(Geometry(reference_params()).A_total() == doctest::Approx(3.96844294815).epsilon(1e-10));
}

TEST_CASE("tortoise coordinate round trip and derivative") {
    const Geometry g(reference_params());
    for (double x : {-60.0, -20.0, -3.0, 0.0, 1.5, 12.0, 40.0, 90.0}) {
        const RadialPoint pt = g.point_from_x(x);
        CHECK(std::abs(g.x_of_point(pt) - x) < 1e-10 * std::max(1.0, std::abs(x)));
    }
    for (double r : {2.5, 4.0, 7.0, 10.5}) {
        const double e = 1e-5;
        const double fd = (g.x_of_r(r + e) - g.x_of_r(r - e)) / (2 * e);
        CHECK(g.dx_dr(g.point_from_r(r)) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("potential tails decay at the surface-gravity rates") {
    const Geometry g(reference_params());
    const auto& h = g.horizons();
    const double xm = -40, xp = 200;
    CHECK(g.a_of(g.point_from_x(xm)) / (g.tail_amp_minus() * std::exp(h.kappa_minus * xm)) ==
          doctest::Approx(1).epsilon(1e-6));
    CHECK(g.a_of(g.point_from_x(xp)) / (g.tail_amp_plus() * std::exp(h.kappa_plus * xp)) ==
          doctest::Approx(1).epsilon(1e-6));
    for (double k : {0.5, -1.5}) {
        CHECK(g.c_of(g.point_from_x(-80), k) == doctest::Approx(g.omega_minus(k)).epsilon(1e-6));
        CHECK(g.c_of(g.point_from_x(200), k) == doctest::Approx(g.omega_plus(k)).epsilon(1e-6));
    }
}

TEST_CASE("admissibility verdicts carry a reason") {
    CHECK(validate_params(reference_params()).accepted);
    BlackHoleParams p = reference_params();
    p.Lambda = -0.01;
    CHECK(validate_params(p).reason == "Lambda > 0 violated");
    p = reference_params();
    p.M = -1;
    CHECK(validate_params(p).reason == "M > 0 violated");
    p = reference_params();
    p.a = 2.0;
    CHECK_FALSE(validate_params(p).accepted);
    p = reference_params();
    p.a = 3.5;  // a^2 Lambda / 3 above 7 - 4 sqrt 3
    CHECK(validate_params(p).reason == "rotation bound not strict");
    p = reference_params();
    p.M = 5.0;
    CHECK(validate_params(p).reason == "M not below upper critical mass");
    p = reference_params();
    p.M = 0.1;
    CHECK(validate_params(p).reason == "M not above lower critical mass");
    p = reference_params();
    p.Q = std::nan("");
    CHECK_FALSE(validate_params(p).accepted);
    p.Q = 0.2;
    p.M = 5.0;
    CHECK_THROWS_AS(Geometry{p}, InadmissibleError);
}

TEST_CASE("critical masses reduce to the Schwarzschild-de Sitter value") {
    BlackHoleParams p;
    p.Q = p.a = 0;
    p.Lambda = 0.02;
    const auto mc = critical_masses(p);
    CHECK(mc[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mc[1] == doctest::Approx(1 / (3 * std::sqrt(p.Lambda))).epsilon(1e-12));
}

TEST_CASE("coupling supremum below one") {
    const Geometry g(reference_params());
    const double s = coupling_sup(g);
    CHECK(s > 0);
    CHECK(s < 1);
}

TEST_CASE("radial profile is consistent with the geometry") {
    const Geometry g(reference_params());
    const auto xr = default_x_range(g, 1e-12);
    const RadialProfile pr = build_radial_profile(g, 0.5, xr[0], xr[1], 4001);
    CHECK(pr.a.front() < 2e-12);
    CHECK(pr.a.back() < 2e-12);
    CHECK(pr.X.back() == doctest::Approx(g.A_total()).epsilon(1e-9));
    double worst = 0;
    for (std::size_t i = 0; i < pr.x.size(); i += 97) {
        const RadialPoint pt = g.point_from_x(pr.x[i]);
        worst = std::max(worst, std::abs(pr.C[i] - g.C_of(pt, 0.5)) / std::max(1.0, std::abs(pr.C[i])));
        CHECK(std::abs(pr.q[i]) == doctest::Approx(pr.a[i]));
    }
    CHECK(worst < 1e-9);
    CHECK_THROWS_AS(build_radial_profile(g, 0.5, 1.0, 0.0, 10), ConfigError);
}
