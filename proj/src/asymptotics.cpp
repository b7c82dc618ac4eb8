#include "knds/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "knds/errors.hpp"

namespace knds {

namespace {

const cplx I(0.0, 1.0);

// b^{i t} for b > 0
cplx ipow(double b, double t) { return std::polar(1.0, t * std::log(b)); }

}  // namespace

AsymptoticModel asymptotic_model(const Geometry& g, double lambda, double k) {
    AsymptoticModel m;
    const auto& h = g.horizons();
    m.lambda = lambda;
    m.k = k;
    m.A_total = g.A_total();
    m.kappa_minus = h.kappa_minus;
    m.kappa_plus = h.kappa_plus;
    m.a_minus = g.tail_amp_minus();
    m.a_plus = g.tail_amp_plus();
    m.lam_minus = lambda - g.omega_minus(k);
    m.lam_plus = lambda - g.omega_plus(k);
    m.rho_minus = m.lam_minus / m.kappa_minus;
    m.rho_plus = m.lam_plus / m.kappa_plus;
    m.beta = g.beta(k);
    m.K = g.params().K;

    const double P = -m.kappa_plus / m.a_plus, Mn = m.kappa_minus / m.a_minus;
    const double rm = m.rho_minus, rp = m.rho_plus;
    const cplx Gm_m = cgamma(cplx(0.5, -rm)), Gm_p = cgamma(cplx(0.5, rm));
    const cplx Gp_m = cgamma(cplx(0.5, -rp)), Gp_p = cgamma(cplx(0.5, rp));
    const cplx eb = std::polar(1.0, m.beta), eK2 = std::polar(1.0, 2.0 * m.K);
    const double tp = 2.0 * M_PI;
    m.pref_al[0] = std::conj(eb) / tp * ipow(P, rp) * ipow(Mn, -rm) * Gm_m * Gp_p;
    m.pref_al[1] = -I * eb / tp * ipow(P, -rp) * ipow(Mn, -rm) * Gm_m * Gp_m * eK2;
    m.pref_al[2] = I * std::conj(eb) / tp * ipow(P, rp) * ipow(Mn, rm) * Gm_p * Gp_p * std::conj(eK2);
    m.pref_al[3] = eb / tp * ipow(P, -rp) * ipow(Mn, rm) * Gm_p * Gp_m;
    m.exp_al = {rm - rp, rm + rp, -(rm + rp), -(rm - rp)};

    m.pref_T = tp * ipow(P, -rp) * ipow(Mn, rm) / (Gm_m * Gp_p);
    m.pref_R = I * ipow(P, -2.0 * rp) * Gp_m / Gp_p;
    m.pref_L = I * ipow(Mn, 2.0 * rm) * Gm_p / Gm_m;
    m.abs_T_pref = 2.0 * std::sqrt(std::cosh(M_PI * rm) * std::cosh(M_PI * rp));
    return m;
}

TransferMatrix predict_al_asymptotics(const AsymptoticModel& m, double z) {
    TransferMatrix t;
    for (int j = 0; j < 4; ++j) t.mant[j] = m.pref_al[j] * ipow(0.5 * z, m.exp_al[j]);
    t.log_scale = z * m.A_total;
    return t;
}

ScatteringPhys predict_scattering_asymptotics(const AsymptoticModel& m, double z) {
    ScatteringPhys s;
    s.T = m.pref_T * ipow(0.5 * z, -(m.rho_minus - m.rho_plus)) * std::exp(-z * m.A_total);
    s.R = m.pref_R * ipow(0.5 * z, 2.0 * m.rho_plus);
    s.L = m.pref_L * ipow(0.5 * z, -2.0 * m.rho_minus);
    return s;
}

double LiouvilleTable::h_of_X(double Xv) const {
    if (X.empty()) throw DomainError("empty Liouville table");
    if (Xv <= X.front()) return x.front();
    if (Xv >= X.back()) return x.back();
    const auto it = std::upper_bound(X.begin(), X.end(), Xv);
    const std::size_t i = static_cast<std::size_t>(it - X.begin());
    const double t = (Xv - X[i - 1]) / (X[i] - X[i - 1]);
    return x[i - 1] + t * (x[i] - x[i - 1]);
}

LiouvilleTable liouville_transform(const RadialProfile& prof) {
    LiouvilleTable t;
    t.X = prof.X;
    t.x = prof.x;
    t.A_total = prof.A_total;
    for (std::size_t i = 1; i < t.X.size(); ++i)
        if (!(t.X[i] > t.X[i - 1])) throw NumericalError("Liouville variable not increasing");
    return t;
}

cplx sturm_potential(const Geometry& g, double lambda, double k, const RadialPoint& pt) {
    const auto& p = g.params();
    const double r = pt.r, a2 = p.a * p.a, ra = r * r + a2;
    const double D = g.delta_at(pt), Dp = g.delta_prime(r), sD = std::sqrt(D);
    const double a = sD / ra;
    const double ap = sD * (0.5 * Dp * ra - 2.0 * r * D) / (ra * ra * ra);
    const double E = g.horizons().E;
    const double num = p.a * E * k + p.q * p.Q * r;
    const double c = num / ra;
    const double cp = (p.q * p.Q * ra - 2.0 * r * num) / (ra * ra) * D / ra;
    const double w = (lambda - c) / a;
    return cplx(w * w, (a * cp + ap * (lambda - c)) / (a * a * a));
}

cplx first_order_coefficient(const Geometry& g, double lambda, double k, std::size_t n) {
    if (n % 2 == 0) ++n;
    const AsymptoticModel m = asymptotic_model(g, lambda, k);
    const cplx wm = omega_minus_coeff(m), wp = omega_plus_coeff(m);
    const double A = m.A_total;
    const double x0 = g.x_tail_minus(1e-8), x1 = g.x_tail_plus(1e-8);
    const RadialProfile prof = build_radial_profile(g, k, x0, x1, n);
    const RadialPoint p0 = g.point_from_x(x0), p1 = g.point_from_x(x1);
    const double X0 = g.liouville_X(p0), AX1 = g.liouville_A_minus_X(p1);
    const double xs = g.x_split(), hx = (x1 - x0) / static_cast<double>(n - 1);
    cplx S = 0, R_lo = 0, R_hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const RadialPoint pt = g.point_from_x(prof.x[i]);
        double X, AX;
        if (prof.x[i] <= xs) {
            X = X0 + (prof.X[i] - prof.X[0]);
            AX = A - X;
        } else {
            AX = AX1 + (prof.X[n - 1] - prof.X[i]);
            X = A - AX;
        }
        const cplx reg = sturm_potential(g, lambda, k, pt) - wm / (X * X) - wp / (AX * AX);
        if (i == 0) R_lo = reg;
        if (i == n - 1) R_hi = reg;
        const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        S += w * reg * prof.a[i];
    }
    S *= hx / 3.0;
    S += R_lo * X0 + R_hi * AX1;
    return -0.5 * (S - (wm + wp) / A);
}

double h_plus(const AsymptoticModel& m, double A_minus_X) {
    return (std::log(A_minus_X) + std::log(-m.kappa_plus / m.a_plus)) / m.kappa_plus;
}

double h_minus(const AsymptoticModel& m, double X) {
    return (std::log(X) + std::log(m.kappa_minus / m.a_minus)) / m.kappa_minus;
}

BesselApproximants bessel_approximants(const AsymptoticModel& m, double z, double X, double A_minus_X) {
    const double P = -m.kappa_plus / m.a_plus, Mn = m.kappa_minus / m.a_minus;
    const double rp = m.rho_plus, rm = m.rho_minus;
    const cplx nup(0.5, -rp), mup(0.5, rp), num(0.5, -rm), mum(0.5, rm);
    const cplx hz = 0.5 * z;
    const double wp = z * A_minus_X, wm = z * X;
    BesselApproximants b;
    const cplx ebK = std::polar(1.0, m.beta + m.K), eK = std::polar(1.0, m.K);
    b.f1p = std::conj(ebK) * ipow(P, rp) * cgamma(1.0 - nup) * std::sqrt(A_minus_X) *
            std::pow(hz, nup) * bessel_i(-nup, wp);
    b.f2p = -I * ebK * ipow(P, -rp) * cgamma(1.0 - mup) * std::sqrt(A_minus_X) * std::pow(hz, mup) *
            bessel_i(1.0 - mup, wp);
    b.g1m = std::conj(eK) * ipow(Mn, rm) * std::sqrt(X) * cgamma(1.0 - num) * std::pow(hz, num) *
            bessel_i(-num, wm);
    b.g2m = I * eK * ipow(Mn, -rm) * std::sqrt(X) * cgamma(1.0 - mum) * std::pow(hz, mum) *
            bessel_i(1.0 - mum, wm);
    return b;
}

JostRows jost_rows(const Geometry& g, const JostSample& s, double k) {
    const cplx e = std::polar(1.0, -g.C_of(g.point_from_x(s.x), k));
    return {e * s.FL[0], e * s.FL[1], e * s.FR[0], e * s.FR[1]};
}

MonotonicityResult monotonicity_from_values(const std::vector<double>& z_grid,
                                            const std::vector<double>& log_abs) {
    MonotonicityResult res;
    res.log_abs = log_abs;
    std::size_t last_bad = 0;
    bool bad = false;
    for (std::size_t i = 1; i < log_abs.size(); ++i)
        if (!(log_abs[i] > log_abs[i - 1])) {
            last_bad = i;
            bad = true;
        }
    res.increasing = !bad;
    res.turnover = z_grid.empty() ? 0 : z_grid[bad ? last_bad : 0];
    return res;
}

MonotonicityResult monotonicity_check(const Geometry& g, double lambda, double k,
                                      const std::vector<double>& z_grid, int j) {
    for (std::size_t i = 1; i < z_grid.size(); ++i)
        if (!(z_grid[i] > z_grid[i - 1])) throw DomainError("z grid must be increasing");
    const OdeOptions o = default_ode_options(g);
    std::vector<double> la;
    for (double z : z_grid) la.push_back(jost_from_ode(g, k, lambda, z, o).AL.log_abs(j));
    return monotonicity_from_values(z_grid, la);
}

}  // namespace knds
