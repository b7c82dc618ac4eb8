#include "knds/angular.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "knds/errors.hpp"

namespace knds {

namespace {

const cplx I(0.0, 1.0);

struct Coef {
    double s, P, mut;  // sin(theta), P(theta), mu / sqrt(Delta_theta)
};

inline double delta_theta(double zeta, double th) {
    const double c = std::cos(th);
    return 1.0 + zeta * c * c;
}

inline double P_of(const AngularProblem& pb, double th) {
    const double s = std::sin(th);
    return pb.k / s + (pb.zeta * pb.k - pb.xi) * s / delta_theta(pb.zeta, th);
}

// Truncated power series helpers.
using Series = std::vector<double>;

Series mul(const Series& a, const Series& b) {
    Series c(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Series inv(const Series& a) {
    Series b(a.size(), 0.0);
    b[0] = 1.0 / a[0];
    for (std::size_t n = 1; n < a.size(); ++n) {
        double s = 0;
        for (std::size_t j = 1; j <= n; ++j) s += a[j] * b[n - j];
        b[n] = -s / a[0];
    }
    return b;
}

Series power(const Series& f, double alpha) {
    Series g(f.size(), 0.0);
    g[0] = std::pow(f[0], alpha);
    for (std::size_t n = 1; n < f.size(); ++n) {
        double s = 0;
        for (std::size_t j = 1; j <= n; ++j)
            s += ((alpha + 1.0) * static_cast<double>(j) - static_cast<double>(n)) * f[j] * g[n - j];
        g[n] = s / (static_cast<double>(n) * f[0]);
    }
    return g;
}

Series shift(const Series& a) {
    Series b(a.size(), 0.0);
    for (std::size_t i = 0; i + 1 < a.size(); ++i) b[i + 1] = a[i];
    return b;
}

Series sin_series(double w, std::size_t n) {
    Series s(n, 0.0);
    double t = w, f = 1.0;
    for (std::size_t m = 1; m < n; m += 2) {
        s[m] = t / f * ((m / 2) % 2 ? -1.0 : 1.0);
        t *= w * w;
        f *= static_cast<double>((m + 1) * (m + 2));
    }
    return s;
}

Series cos_series(double w, std::size_t n) {
    Series s(n, 0.0);
    double t = 1.0, f = 1.0;
    for (std::size_t m = 0; m < n; m += 2) {
        s[m] = t / f * ((m / 2) % 2 ? -1.0 : 1.0);
        t *= w * w;
        f *= static_cast<double>((m + 1) * (m + 2));
    }
    return s;
}

// Positive-k solver; negative k maps to (|k|, -xi) with swapped components.
AngularProblem reduced(const AngularProblem& pb) {
    if (pb.k > 0) return pb;
    return {-pb.k, pb.zeta, -pb.xi};
}

void check_problem(const AngularProblem& pb) {
    const double twice = 2.0 * pb.k;
    if (std::abs(twice - std::round(twice)) > 1e-12 || std::fmod(std::abs(std::round(twice)), 2.0) != 1.0)
        throw DomainError("k must be a half-integer");
    if (!(pb.zeta >= 0)) throw DomainError("zeta must be non-negative");
}

// phi at theta = eps for k > 0 from the Frobenius data, w = -i u1.
double prufer_start(const AngularProblem& pb, double mu, const AngularOptions& opt) {
    const FrobeniusSeries s = frobenius_series(pb, mu, opt.order);
    const Vec2c u = s.eval(opt.eps);
    return std::atan2((-I * u[0]).real(), u[1].real());
}

double prufer_end(const AngularProblem& pb, double mu, const AngularOptions& opt) {
    namespace ode = boost::numeric::odeint;
    using St = std::array<double, 1>;
    St y{prufer_start(pb, mu, opt)};
    auto sys = [&](const St& x, St& dx, double th) {
        dx[0] = mu / std::sqrt(delta_theta(pb.zeta, th)) - P_of(pb, th) * std::sin(2.0 * x[0]);
    };
    auto stepper = ode::make_controlled(1e-14, opt.rtol, ode::runge_kutta_fehlberg78<St>());
    ode::integrate_adaptive(stepper, sys, y, opt.eps, 0.5 * M_PI, opt.eps);
    return y[0];
}

}  // namespace

AngularProblem angular_problem(const BlackHoleParams& p, double lambda, double k) {
    return {k, p.a * p.a * p.Lambda / 3.0, p.a * lambda};
}

double prufer_mismatch(const AngularProblem& pb0, double mu, const AngularOptions& opt) {
    check_problem(pb0);
    const AngularProblem pb = reduced(pb0);
    return 2.0 * prufer_end(pb, mu, opt) - 0.5 * M_PI;
}

double angular_eigenvalue(const AngularProblem& pb0, int l, const AngularOptions& opt) {
    check_problem(pb0);
    if (l < 1) throw DomainError("l must be >= 1");
    const AngularProblem pb = reduced(pb0);
    const double target = (l - 1) * M_PI;
    auto f = [&](double mu) { return prufer_mismatch(pb, mu, opt) - target; };
    // Slope of D in mu is 2 int_0^{pi/2} Delta^{-1/2}; use it for the initial guess.
    const double slope = M_PI / std::sqrt(1.0 + 0.5 * pb.zeta);
    double guess = (std::abs(pb.k) - 0.5 + l) * M_PI / slope;
    double lo = std::max(1e-9, guess - 0.5 - std::abs(pb.xi)), hi = guess + 0.5 + std::abs(pb.xi);
    double flo = f(lo), fhi = f(hi);
    for (int it = 0; it < 200 && flo > 0; ++it) {
        hi = lo;
        fhi = flo;
        lo = std::max(1e-9, lo - 1.0);
        flo = f(lo);
        if (lo <= 1e-9 && flo > 0) break;
    }
    for (int it = 0; it < 200 && fhi < 0; ++it) {
        lo = hi;
        flo = fhi;
        hi += 1.0;
        fhi = f(hi);
    }
    if (!(flo <= 0 && fhi >= 0))
        throw NumericalError("angular shooting mismatch fails to bracket at l=" + std::to_string(l));
    std::uintmax_t iters = 200;
    auto tol = [&](double a, double b) { return std::abs(b - a) <= opt.mu_tol * std::max(1.0, std::abs(a)); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    if (iters >= 200)
        throw NumericalError("angular eigenvalue solver did not converge at l=" + std::to_string(l));
    return 0.5 * (r.first + r.second);
}

std::vector<double> angular_eigenvalues(const AngularProblem& pb, int l_max, const AngularOptions& opt) {
    if (l_max < 1) throw DomainError("l_max must be >= 1");
    std::vector<double> mu;
    mu.reserve(l_max);
    for (int l = 1; l <= l_max; ++l) mu.push_back(angular_eigenvalue(pb, l, opt));
    for (int l = 1; l < l_max; ++l)
        if (!(mu[l] - mu[l - 1] > 1e-6))
            throw NumericalError("eigenvalues not simple at l=" + std::to_string(l + 1));
    return mu;
}

std::vector<double> angular_eigenvalues(double lambda, double k, int l_max, const BlackHoleParams& p,
                                        const AngularOptions& opt) {
    return angular_eigenvalues(angular_problem(p, lambda, k), l_max, opt);
}

FrobeniusSeries frobenius_series(const AngularProblem& pb0, double mu, int N) {
    check_problem(pb0);
    if (N < 2) throw DomainError("Frobenius order must be >= 2");
    const bool neg = pb0.k < 0;
    const AngularProblem pb = reduced(pb0);
    const double k = pb.k, zeta = pb.zeta;
    const std::size_t n = static_cast<std::size_t>(N) + 1;
    // Delta_theta = 1 + zeta (1 + cos 2 theta) / 2
    Series D = cos_series(2.0, n);
    for (double& d : D) d *= 0.5 * zeta;
    D[0] += 1.0 + 0.5 * zeta;
    const Series Dinv = inv(D);
    const Series sinc = [&] {
        Series s = sin_series(1.0, n + 1);
        Series t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = s[i + 1];
        return t;
    }();
    const Series S1 = inv(sinc);                                       // theta / sin
    const Series F2 = shift(power(D, -0.5));                           // theta / sqrt(Delta)
    Series F3 = mul(shift(sin_series(2.0, n)), Dinv);                  // theta sin 2theta / Delta
    for (double& v : F3) v *= zeta / 4.0;
    const Series F4 = mul(shift(sin_series(1.0, n)), Dinv);            // theta sin / Delta
    const double g = zeta * k - pb.xi;
    std::vector<std::array<cplx, 4>> A(n);
    for (std::size_t m = 0; m < n; ++m) {
        const cplx off = I * mu * F2[m];
        const double diag = -k * S1[m] - g * F4[m];
        A[m] = {F3[m] + diag, off, off, F3[m] - diag};
    }
    FrobeniusSeries out;
    out.k = pb0.k;
    out.mu = mu;
    out.zeta = zeta;
    out.xi = pb0.xi;
    out.v.assign(n, Vec2c{cplx(0), cplx(0)});
    out.v[0] = {cplx(0), cplx(1)};
    for (std::size_t m = 1; m < n; ++m) {
        Vec2c rhs{cplx(0), cplx(0)};
        for (std::size_t j = 0; j < m; ++j) {
            const auto& M = A[m - j];
            rhs[0] += M[0] * out.v[j][0] + M[1] * out.v[j][1];
            rhs[1] += M[2] * out.v[j][0] + M[3] * out.v[j][1];
        }
        out.v[m] = {rhs[0] / (2.0 * k + m), rhs[1] / static_cast<double>(m)};
    }
    if (neg)
        for (auto& v : out.v) std::swap(v[0], v[1]);
    return out;
}

Vec2c FrobeniusSeries::eval(double theta) const {
    Vec2c s{cplx(0), cplx(0)};
    double p = 1;
    for (const auto& c : v) {
        s[0] += c[0] * p;
        s[1] += c[1] * p;
        p *= theta;
    }
    const double f = std::pow(theta, std::abs(k));
    return {s[0] * f, s[1] * f};
}

Vec2c FrobeniusSeries::eval_derivative(double theta) const {
    Vec2c s{cplx(0), cplx(0)};
    const double ak = std::abs(k);
    for (std::size_t n = 0; n < v.size(); ++n) {
        const double e = ak + static_cast<double>(n);
        const double d = e * std::pow(theta, e - 1.0);
        s[0] += v[n][0] * d;
        s[1] += v[n][1] * d;
    }
    return s;
}

std::array<cplx, 4> angular_system_matrix(const AngularProblem& pb, double mu, double theta) {
    const double Dt = delta_theta(pb.zeta, theta);
    const double h = pb.zeta * std::sin(2.0 * theta) / (4.0 * Dt);
    const double P = P_of(pb, theta);
    const cplx off = I * mu / std::sqrt(Dt);
    return {h - P, off, off, h + P};
}

double series_ode_residual(const FrobeniusSeries& s, const AngularProblem& pb, double theta_max) {
    if (!(theta_max > 0 && theta_max <= 0.3)) throw DomainError("theta_max must lie in (0, 0.3]");
    double worst = 0;
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
        const double th = theta_max * std::pow(100.0, -1.0 + static_cast<double>(i) / n);
        const Vec2c u = s.eval(th), du = s.eval_derivative(th);
        const auto A = angular_system_matrix(pb, s.mu, th);
        const cplx r0 = du[0] - (A[0] * u[0] + A[1] * u[1]);
        const cplx r1 = du[1] - (A[2] * u[0] + A[3] * u[1]);
        const double nu = std::hypot(std::abs(u[0]), std::abs(u[1]));
        worst = std::max(worst, th * std::hypot(std::abs(r0), std::abs(r1)) / nu);
    }
    return worst;
}

AngularEigenpair angular_eigenfunction(const AngularProblem& pb0, int l, double mu, int n_theta,
                                       const AngularOptions& opt) {
    namespace ode = boost::numeric::odeint;
    check_problem(pb0);
    if (n_theta < 11 || n_theta % 2 == 0) throw DomainError("n_theta must be odd and >= 11");
    const bool neg = pb0.k < 0;
    const AngularProblem pb = reduced(pb0);
    const int half = (n_theta - 1) / 2;
    const double h = M_PI / (n_theta - 1);
    std::vector<double> theta(n_theta);
    for (int i = 0; i < n_theta; ++i) theta[i] = i * h;
    theta[half] = 0.5 * M_PI;
    theta.back() = M_PI;

    // Real pair (w, u2) of the phase-reduced system on [eps, pi/2].
    const FrobeniusSeries fro = frobenius_series(pb, mu, opt.order);
    std::vector<double> w(n_theta, 0.0), v(n_theta, 0.0);
    auto scale = [&](double th) { return std::pow(delta_theta(pb.zeta, th), 0.25); };
    for (int i = 1; i <= half && theta[i] <= opt.eps; ++i) {
        const Vec2c u = fro.eval(theta[i]);
        w[i] = (-I * u[0]).real() * scale(theta[i]);
        v[i] = u[1].real() * scale(theta[i]);
    }
    using St = std::array<double, 2>;
    const Vec2c u0 = fro.eval(opt.eps);
    St y{(-I * u0[0]).real() * scale(opt.eps), u0[1].real() * scale(opt.eps)};
    std::vector<double> times{opt.eps};
    std::vector<int> idx{-1};
    for (int i = 1; i <= half; ++i)
        if (theta[i] > opt.eps) {
            times.push_back(theta[i]);
            idx.push_back(i);
        }
    auto sys = [&](const St& x, St& dx, double th) {
        const double mt = mu / std::sqrt(delta_theta(pb.zeta, th));
        const double P = P_of(pb, th);
        dx[0] = -P * x[0] + mt * x[1];
        dx[1] = -mt * x[0] + P * x[1];
    };
    auto stepper = ode::make_controlled(1e-300, opt.rtol, ode::runge_kutta_fehlberg78<St>());
    std::size_t cnt = 0;
    ode::integrate_times(stepper, sys, y, times.begin(), times.end(), 1e-3 * opt.eps,
                         [&](const St& x, double) {
                             const int i = idx[cnt++];
                             if (i >= 0) {
                                 w[i] = x[0];
                                 v[i] = x[1];
                             }
                         });
    // Mirror: (w, u2)(pi - s) = sigma (u2, w)(s).
    const double sigma = (w[half] * v[half] >= 0) ? 1.0 : -1.0;
    for (int i = half + 1; i < n_theta; ++i) {
        const int j = n_theta - 1 - i;
        w[i] = sigma * v[j];
        v[i] = sigma * w[j];
    }
    AngularEigenpair ev;
    ev.k = pb0.k;
    ev.l = l;
    ev.mu = mu;
    ev.zeta = pb0.zeta;
    ev.xi = pb0.xi;
    ev.lambda = std::numeric_limits<double>::quiet_NaN();
    ev.theta = theta;
    ev.u1.resize(n_theta);
    ev.u2.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        const double s = 1.0 / scale(theta[i]);
        cplx a = I * w[i] * s, b = v[i] * s;
        if (neg) std::swap(a, b);
        ev.u1[i] = a;
        ev.u2[i] = b;
    }
    const double nrm = std::sqrt(angular_inner(theta, ev.u1, ev.u2, ev.u1, ev.u2).real());
    // Leading component at theta -> 0 made real positive.
    const cplx lead = neg ? ev.u1[1] : ev.u2[1];
    const cplx ph = std::abs(lead) > 0 ? lead / std::abs(lead) : cplx(1);
    for (int i = 0; i < n_theta; ++i) {
        ev.u1[i] /= nrm * ph;
        ev.u2[i] /= nrm * ph;
    }
    const FrobeniusSeries fs = frobenius_series(pb0, mu, 2);
    for (int j = 0; j < 3; ++j) ev.frobenius[j] = fs.v[j];
    ev.residual = operator_residual(pb0, ev.theta, ev.u1, ev.u2, mu);
    return ev;
}

double operator_residual(const AngularProblem& pb, const std::vector<double>& theta,
                         const std::vector<cplx>& u1, const std::vector<cplx>& u2, double mu,
                         double theta_lo) {
    const std::size_t n = theta.size();
    if (n < 8) return 0;
    const double h = theta[1] - theta[0];
    double worst = 0;
    for (std::size_t i = 3; i + 3 < n; ++i) {
        const double th = theta[i];
        if (th < theta_lo || th > M_PI - theta_lo) continue;
        auto d = [&](const std::vector<cplx>& f) {
            return (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] -
                    9.0 * f[i + 2] + f[i + 3]) / (60.0 * h);
        };
        const auto A = angular_system_matrix(pb, mu, th);
        // A_k u - mu u = -i sqrt(Delta) Gamma2 (u' - A u)
        const cplx r0 = d(u1) - (A[0] * u1[i] + A[1] * u2[i]);
        const cplx r1 = d(u2) - (A[2] * u1[i] + A[3] * u2[i]);
        const double sd = std::sqrt(delta_theta(pb.zeta, th));
        worst = std::max(worst, sd * std::hypot(std::abs(r0), std::abs(r1)));
    }
    return worst;
}

cplx angular_inner(const std::vector<double>& theta, const std::vector<cplx>& u1,
                   const std::vector<cplx>& u2, const std::vector<cplx>& v1,
                   const std::vector<cplx>& v2) {
    const std::size_t n = theta.size();
    const double h = theta[1] - theta[0];
    cplx s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double wgt = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        if (n % 2 == 0) wgt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        s += wgt * (std::conj(u1[i]) * v1[i] + std::conj(u2[i]) * v2[i]);
    }
    return s * (n % 2 ? h / 3.0 : h);
}

double growth_C1() { return 2.0 * (std::exp(1.0 / 26.0) - 1.0) * (27.0 / 26.0); }
double growth_C2() { return growth_C1() / 4.0; }

GrowthWindow growth_window(double k, int l, double xi) {
    const double e = std::exp(1.0 / 26.0);
    const double n = std::abs(k) - 0.5 + l;
    const double pad = growth_C1() * std::abs(k) + growth_C2() + std::abs(xi);
    return {(2.0 - e) * n - pad, e * n + pad};
}

MuntzCertificate muntz_certificate(const AngularProblem& pb, int L, const AngularOptions& opt) {
    if (L < 10) throw DomainError("L must be >= 10");
    MuntzCertificate c;
    c.mu = angular_eigenvalues(pb, L, opt);
    double s = 0, lo = 0, hi = 0;
    for (int l = 1; l <= L; ++l) {
        s += 1.0 / c.mu[l - 1];
        c.partial_sums.push_back(s);
        const GrowthWindow gw = growth_window(pb.k, l, pb.xi);
        lo += 1.0 / gw.hi;
        hi += gw.lo > 0 ? 1.0 / gw.lo : std::numeric_limits<double>::infinity();
    }
    c.bracket_lo = lo;
    c.bracket_hi = hi;
    // Least-squares slope of S(L') against ln L' for L' in [L/4, L].
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int l = std::max(1, L / 4); l <= L; ++l) {
        const double x = std::log(static_cast<double>(l)), y = c.partial_sums[l - 1];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    c.log_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return c;
}

}  // namespace knds
