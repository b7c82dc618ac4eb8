#pragma once

#include <vector>

#include "knds/geometry.hpp"
#include "knds/radial.hpp"
#include "knds/special.hpp"

namespace knds {

struct AsymptoticModel {
    double lambda = 0, k = 0.5;
    double A_total = 0;
    double kappa_minus = 0, kappa_plus = 0;
    double a_minus = 0, a_plus = 0;      // tail amplitudes of a(x)
    double lam_minus = 0, lam_plus = 0;  // lambda - Omega_-(k), lambda - Omega_+(k)
    double rho_minus = 0, rho_plus = 0;  // lam_minus / kappa_minus, lam_plus / kappa_plus
    double beta = 0, K = 0;
    // Leading z-independent factors; a_Lj ~ pref_al[j] (z/2)^{i e_j} e^{zA}.
    std::array<cplx, 4> pref_al{};
    std::array<double, 4> exp_al{};
    cplx pref_T, pref_R, pref_L;  // T ~ pref_T (z/2)^{-i(rho_- - rho_+)} e^{-zA}, etc.
    double abs_T_pref = 0;        // 2 sqrt(cosh(pi rho_-) cosh(pi rho_+))
};

AsymptoticModel asymptotic_model(const Geometry& g, double lambda, double k);

// Predicted transfer matrix at real z, stored with log_scale = z A.
TransferMatrix predict_al_asymptotics(const AsymptoticModel& m, double z);
ScatteringPhys predict_scattering_asymptotics(const AsymptoticModel& m, double z);

// Liouville variable on a profile and the Sturm-Liouville potential Q(X, k).
struct LiouvilleTable {
    std::vector<double> X, x;  // X = g(x) increasing, x = h(X)
    double A_total = 0;
    double h_of_X(double Xv) const;  // monotone linear interpolation
};

LiouvilleTable liouville_transform(const RadialProfile& prof);

cplx sturm_potential(const Geometry& g, double lambda, double k, const RadialPoint& pt);
inline cplx omega_plus_coeff(const AsymptoticModel& m) { return cplx(m.rho_plus * m.rho_plus, m.rho_plus); }
inline cplx omega_minus_coeff(const AsymptoticModel& m) { return cplx(m.rho_minus * m.rho_minus, m.rho_minus); }

// First-order coefficient c1 with a_Lj(z) ~ prediction * exp(c1 / z):
// c1 = -1/2 times the finite part of the integral of Q over (0, A).
cplx first_order_coefficient(const Geometry& g, double lambda, double k, std::size_t n = 4001);

// h_+(X) = ln(A - X)/kappa_+ + C_+, h_-(X) = ln(X)/kappa_- + C_-.
double h_plus(const AsymptoticModel& m, double A_minus_X);
double h_minus(const AsymptoticModel& m, double X);

struct BesselApproximants {
    cplx f1p, f2p, g1m, g2m;
};

// Closed-form approximants at Liouville position X; A - X passed separately for accuracy.
BesselApproximants bessel_approximants(const AsymptoticModel& m, double z, double X, double A_minus_X);

// Components of the first row of H_L and H_R (the C-gauge Jost matrices) at x.
struct JostRows {
    cplx f1, f2, g1, g2;
};
JostRows jost_rows(const Geometry& g, const JostSample& s, double k);

struct MonotonicityResult {
    bool increasing = false;
    double turnover = 0;               // first z after which the sequence is strictly increasing
    std::vector<double> log_abs;       // ln |a_Lj(z)|
};

MonotonicityResult monotonicity_check(const Geometry& g, double lambda, double k,
                                      const std::vector<double>& z_grid, int j = 1);
MonotonicityResult monotonicity_from_values(const std::vector<double>& z_grid,
                                            const std::vector<double>& log_abs);

}  // namespace knds
