#pragma once

#include <array>
#include <complex>
#include <vector>

#include "knds/geometry.hpp"

namespace knds {

// The angular operator depends on (k, zeta, xi) only, with xi = a * lambda.
struct AngularProblem {
    double k = 0.5;
    double zeta = 0.0;
    double xi = 0.0;
};

AngularProblem angular_problem(const BlackHoleParams& p, double lambda, double k);

struct AngularOptions {
    double eps = 1e-4;     // offset from the poles where shooting starts
    int order = 8;         // Frobenius order used for the initial data
    double rtol = 1e-12;
    double mu_tol = 1e-13; // relative tolerance on eigenvalues
};

// Prufer mismatch D(mu); eigenvalue number l solves D(mu) = (l - 1) pi.
double prufer_mismatch(const AngularProblem& pb, double mu, const AngularOptions& opt = {});

// The l_max smallest positive eigenvalues, increasing.
std::vector<double> angular_eigenvalues(const AngularProblem& pb, int l_max,
                                        const AngularOptions& opt = {});
std::vector<double> angular_eigenvalues(double lambda, double k, int l_max,
                                        const BlackHoleParams& p, const AngularOptions& opt = {});
double angular_eigenvalue(const AngularProblem& pb, int l, const AngularOptions& opt = {});

using Vec2c = std::array<cplx, 2>;

// u(theta) = theta^|k| sum_n v[n] theta^n near theta = 0.
struct FrobeniusSeries {
    double k = 0.5, mu = 0, zeta = 0, xi = 0;
    std::vector<Vec2c> v;
    Vec2c eval(double theta) const;
    Vec2c eval_derivative(double theta) const;
};

FrobeniusSeries frobenius_series(const AngularProblem& pb, double mu, int N);

// A(theta) of the first-order system du/dtheta = A(theta) u.
std::array<cplx, 4> angular_system_matrix(const AngularProblem& pb, double mu, double theta);

// sup over theta in [theta_max/100, theta_max] of theta |u_N' - A u_N| / |u_N|.
double series_ode_residual(const FrobeniusSeries& s, const AngularProblem& pb, double theta_max);

struct AngularEigenpair {
    double k = 0.5;
    int l = 1;
    double lambda = 0, mu = 0, zeta = 0, xi = 0;
    std::vector<double> theta;   // uniform grid on [0, pi]
    std::vector<cplx> u1, u2;    // L2(0, pi)-normalized
    std::array<Vec2c, 3> frobenius{};
    double residual = 0;
};

// Shooting eigenfunction on a uniform grid of n_theta points (odd).
AngularEigenpair angular_eigenfunction(const AngularProblem& pb, int l, double mu,
                                       int n_theta = 2001, const AngularOptions& opt = {});

// max |A_k u - mu u| over grid points with theta in [theta_lo, pi - theta_lo],
// derivative by sixth-order central differences.
double operator_residual(const AngularProblem& pb, const std::vector<double>& theta,
                         const std::vector<cplx>& u1, const std::vector<cplx>& u2, double mu,
                         double theta_lo = 0.05);

// Trapezoid/Simpson inner product on the uniform grid.
cplx angular_inner(const std::vector<double>& theta, const std::vector<cplx>& u1,
                   const std::vector<cplx>& u2, const std::vector<cplx>& v1,
                   const std::vector<cplx>& v2);

struct GrowthWindow {
    double lo = 0, hi = 0;
};

// Constants of the eigenvalue growth window, continuous in the rotation bound.
double growth_C1();
double growth_C2();
GrowthWindow growth_window(double k, int l, double xi);

struct MuntzCertificate {
    std::vector<double> mu;            // mu_1 .. mu_L
    std::vector<double> partial_sums;  // sum_{l <= L'} 1/mu_l
    double bracket_lo = 0, bracket_hi = 0;  // bounds on the full partial sum from the window
    double log_slope = 0;              // least-squares slope of S(L) vs ln L over [L/4, L]
};

MuntzCertificate muntz_certificate(const AngularProblem& pb, int L, const AngularOptions& opt = {});

}  // namespace knds
