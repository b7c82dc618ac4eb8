#pragma once

#include <array>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace knds {

using cplx = std::complex<double>;

struct BlackHoleParams {
    double M = 1.0;
    double Q = 0.2;
    double a = 0.2;
    double Lambda = 0.02;
    double q = 0.5;
    double c0 = 0.0;  // additive constant of the tortoise coordinate
    double K = 0.0;   // additive constant of the phase C(x,k)
};

// Reference parameter set used throughout the tests and examples.
inline BlackHoleParams reference_params() { return {}; }

struct Verdict {
    bool accepted = false;
    std::string reason;
};

Verdict validate_params(const BlackHoleParams& p);

// Critical masses bounding the sub-extremal window; NaN when no window exists.
std::array<double, 2> critical_masses(const BlackHoleParams& p);

struct HorizonData {
    double r_n = 0, r_c = 0, r_minus = 0, r_plus = 0;
    double kappa_n = 0, kappa_c = 0, kappa_minus = 0, kappa_plus = 0;
    double E = 1;
    double A_total = std::numeric_limits<double>::quiet_NaN();
};

HorizonData horizon_roots(const BlackHoleParams& p);

// A radius in the exterior together with accurate distances to both horizons.
struct RadialPoint {
    double r;
    double dm;  // r - r_-
    double dp;  // r_+ - r
};

// Which horizon chart a point or ODE segment lives in.
enum class Side { minus, plus };

class Geometry {
public:
    explicit Geometry(const BlackHoleParams& p);

    const BlackHoleParams& params() const { return p_; }
    const HorizonData& horizons() const { return h_; }

    double zeta() const { return p_.a * p_.a * p_.Lambda / 3.0; }
    double delta(double r) const;          // polynomial form of Δ_r
    double delta_prime(double r) const;
    double delta_at(const RadialPoint& pt) const;  // factored, accurate near horizons

    double omega_minus(double k) const;
    double omega_plus(double k) const;

    // Tortoise coordinate and its inverse.
    double x_of_r(double r) const;
    double x_of_point(const RadialPoint& pt) const;
    RadialPoint point_from_x(double x) const;
    double r_of_x(double x) const { return point_from_x(x).r; }
    RadialPoint point_from_r(double r) const;

    // Split radius where both horizon distances are equal, and its x value.
    double r_split() const { return r_s_; }
    double x_split() const { return x_s_; }

    // Potentials at an exterior point.
    double a_of(const RadialPoint& pt) const;
    double c_of(const RadialPoint& pt, double k) const;
    double c_minus_omega_minus(const RadialPoint& pt, double k) const;
    double c_minus_omega_plus(const RadialPoint& pt, double k) const;
    double dx_dr(const RadialPoint& pt) const;

    // a(x) ~ tail_amp_minus * exp(kappa_minus x) as x -> -inf, similarly at +inf.
    double tail_amp_minus() const;
    double tail_amp_plus() const;
    // x values beyond which a(x) < eps.
    double x_tail_minus(double eps) const;
    double x_tail_plus(double eps) const;

    // X(x) = int_{-inf}^x a and A - X(x), both by r-coordinate quadrature.
    double liouville_X(const RadialPoint& pt) const;
    double liouville_A_minus_X(const RadialPoint& pt) const;

    // int_{-inf}^x (c - Omega_-) and int_x^{+inf} (c - Omega_+).
    double J_minus(const RadialPoint& pt, double k) const;
    double J_plus(const RadialPoint& pt, double k) const;
    double beta(double k) const;
    // Phase primitive C(x,k) including the constant K.
    double C_of(const RadialPoint& pt, double k) const;

    double A_total() const { return h_.A_total; }

    // Chart maps used by the radial integrator: t = ln(r - r_-) on the minus side,
    // t = -ln(r_+ - r) on the plus side.
    RadialPoint point_from_chart(Side s, double t) const;
    double chart_of_point(Side s, const RadialPoint& pt) const;
    double dx_dt(Side s, const RadialPoint& pt) const;

private:
    double G_minus(double r) const;  // Δ_r / (r - r_-)
    double G_plus(double r) const;   // Δ_r / (r_+ - r)
    double x0_minus() const;
    double x0_plus() const;

    BlackHoleParams p_;
    HorizonData h_;
    double r_s_ = 0, x_s_ = 0;
};

double capital_A(const HorizonData& h, const BlackHoleParams& p);

struct RadialProfile {
    double k = 0.5;
    std::vector<double> x, r, a, c, C, X;
    std::vector<cplx> q;
    double omega_minus = 0, omega_plus = 0, beta = 0, A_total = 0;
    double c0 = 0, K = 0;
};

RadialProfile build_radial_profile(const Geometry& g, double k, double x_min, double x_max,
                                   std::size_t n);

// Grid bounds where a(x) drops below eps at both ends.
std::array<double, 2> default_x_range(const Geometry& g, double eps = 1e-12);

// sup over x and theta of a(x) * b(theta), b = a sin(theta)/sqrt(Delta_theta).
double coupling_sup(const Geometry& g, int nx = 200, int ntheta = 200);

}  // namespace knds
