#include <cmath>

#include "doctest.h"
#include "knds/angular.hpp"
#include "knds/errors.hpp"
#include "knds/inverse.hpp"

using namespace knds;

TEST_CASE("flat spectrum is |k| - 1/2 + l") {
    for (double k : {0.5, -0.5, 1.5, -2.5, 3.5}) {
        const auto mu = angular_eigenvalues({k, 0.0, 0.0}, 8);
        for (int l = 1; l <= 8; ++l) CHECK(mu[l - 1] == doctest::Approx(std::abs(k) - 0.5 + l).epsilon(1e-10));
    }
}

TEST_CASE("eigenvalues increase and sit in the growth window") {
    const BlackHoleParams p = reference_params();
    for (double lam : {-1.0, 0.3, 2.0})
        for (double k : {0.5, -1.5}) {
            const AngularProblem pb = angular_problem(p, lam, k);
            CHECK(pb.xi == doctest::Approx(p.a * lam));
            const auto mu = angular_eigenvalues(pb, 12);
            for (int l = 1; l <= 12; ++l) {
                if (l > 1) CHECK(mu[l - 1] > mu[l - 2]);
                const auto w = growth_window(k, l, pb.xi);
                CHECK(mu[l - 1] >= w.lo);
                CHECK(mu[l - 1] <= w.hi);
            }
        }
}

TEST_CASE("eigenfunctions solve the operator equation and are orthonormal") {
    const AngularProblem pb = angular_problem(reference_params(), 0.8, 1.5);
    const auto mu = angular_eigenvalues(pb, 3);
    std::vector<AngularEigenpair> ev;
    for (int l = 1; l <= 3; ++l) ev.push_back(angular_eigenfunction(pb, l, mu[l - 1], 2001));
    for (const auto& e : ev) {
        CHECK(operator_residual(pb, e.theta, e.u1, e.u2, e.mu) < 1e-6);
        CHECK(std::abs(angular_inner(e.theta, e.u1, e.u2, e.u1, e.u2) - 1.0) < 1e-10);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK(std::abs(angular_inner(ev[i].theta, ev[i].u1, ev[i].u2, ev[j].u1, ev[j].u2)) < 1e-8);
}

TEST_CASE("Frobenius series solves the system near the pole") {
    const AngularProblem pb = angular_problem(reference_params(), 0.3, 0.5);
    const double mu = angular_eigenvalue(pb, 2);
    const FrobeniusSeries s = frobenius_series(pb, mu, 8);
    CHECK(series_ode_residual(s, pb, 0.1) < 1e-7);
    // Leading coefficient: (2k+1)|v1| = mu / sqrt(1 + zeta).
    const AngularEigenpair ev = angular_eigenfunction(pb, 2, mu, 2001);
    const FrobeniusObservation o = frobenius_observation(ev);
    CHECK(o.m == doctest::Approx(mu / std::sqrt(1 + pb.zeta)).epsilon(1e-10));
}

TEST_CASE("flat harmonic partial sums") {
    const MuntzCertificate c = muntz_certificate({0.5, 0.0, 0.0}, 100);
    double H = 0;
    for (int l = 1; l <= 100; ++l) H += 1.0 / l;
    CHECK(c.partial_sums.back() == doctest::Approx(H).epsilon(1e-10));
    CHECK(H == doctest::Approx(5.187377517639621));
    CHECK(c.log_slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(c.bracket_lo <= c.partial_sums.back());
    CHECK(c.bracket_hi >= c.partial_sums.back());
}

TEST_CASE("rotation perturbs eigenvalues by at most |xi|") {
    const BlackHoleParams p = reference_params();
    for (double lam : {0.5, 3.0}) {
        const AngularProblem pb = angular_problem(p, lam, 0.5);
        const auto mu = angular_eigenvalues(pb, 10), mu0 = angular_eigenvalues({0.5, pb.zeta, 0.0}, 10);
        for (int l = 0; l < 10; ++l) CHECK(std::abs(mu[l] - mu0[l]) <= std::abs(pb.xi));
    }
}

TEST_CASE("angular input validation") {
    CHECK_THROWS_AS(angular_eigenvalues({0.3, 0.0, 0.0}, 3), DomainError);
    CHECK_THROWS_AS(muntz_certificate({0.5, 0.0, 0.0}, 5), DomainError);
}
