#include "knds/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "knds/errors.hpp"

namespace knds {

namespace {

constexpr double kRotationBound = 0.0717967697244908259;  // 7 - 4 sqrt(3)

struct Quartic {
    double c4, c2, c1, c0;
    double operator()(double r) const { return ((c4 * r * r + c2) * r + c1) * r + c0; }
    double d1(double r) const { return (4.0 * c4 * r * r + 2.0 * c2) * r + c1; }
};

Quartic quartic_of(const BlackHoleParams& p) {
    const double a2 = p.a * p.a;
    return {-p.Lambda / 3.0, 1.0 - p.Lambda * a2 / 3.0, -2.0 * p.M, a2 + p.Q * p.Q};
}

template <class F>
double bisect(F f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Real roots of a monotone-between-breakpoints function, bracketed by sign changes.
template <class F>
std::vector<double> roots_between(F f, const std::vector<double>& breaks) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i], hi = breaks[i + 1];
        if (!(hi > lo)) continue;
        const double fl = f(lo), fh = f(hi);
        if (fl == 0.0) {
            out.push_back(lo);
            continue;
        }
        if ((fl < 0) != (fh < 0)) out.push_back(bisect(f, lo, hi));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <class F>
double gk(F f, double lo, double hi) {
    if (hi == lo) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-15);
}

template <class F>
double gl(F f, double lo, double hi) {
    if (hi == lo) return 0.0;
    return boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
}

}  // namespace

std::array<double, 2> critical_masses(const BlackHoleParams& p) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (!(p.Lambda > 0)) return {nan, nan};
    const double X = 1.0 - p.a * p.a * p.Lambda / 3.0;
    const double D = X * X - 4.0 * p.Lambda * (p.a * p.a + p.Q * p.Q);
    if (D < 0 || X <= 0) return {nan, nan};
    const double s = std::sqrt(D);
    const double pre = 1.0 / std::sqrt(18.0 * p.Lambda);
    return {pre * std::sqrt(X - s) * (2.0 * X + s), pre * std::sqrt(X + s) * (2.0 * X - s)};
}

HorizonData horizon_roots(const BlackHoleParams& p) {
    const Quartic P = quartic_of(p);
    if (!(P.c4 < 0)) throw InadmissibleError("Lambda > 0 violated");
    const double bound = 1.0 + std::max({std::abs(P.c2 / P.c4), std::abs(P.c1 / P.c4),
                                         std::abs(P.c0 / P.c4)});
    // Breakpoints: inflection points of the quartic isolate the critical points.
    std::vector<double> br2 = {-bound, bound};
    if (P.c2 > 0) {
        const double s = std::sqrt(-2.0 * P.c2 / (12.0 * P.c4));
        br2 = {-bound, -s, s, bound};
    }
    std::vector<double> crit = roots_between([&](double r) { return P.d1(r); }, br2);
    std::vector<double> br1 = {-bound};
    br1.insert(br1.end(), crit.begin(), crit.end());
    br1.push_back(bound);
    std::vector<double> rts = roots_between(P, br1);
    // Newton polish.
    for (double& r : rts) {
        for (int it = 0; it < 3; ++it) {
            const double d = P.d1(r);
            if (d == 0.0) break;
            const double step = P(r) / d;
            if (!std::isfinite(step) || std::abs(step) > 1e-6 * (1 + std::abs(r))) break;
            r -= step;
        }
    }
    if (rts.size() != 4)
        throw InadmissibleError("Delta_r does not have four simple real roots");
    HorizonData h;
    h.r_n = rts[0];
    h.r_c = rts[1];
    h.r_minus = rts[2];
    h.r_plus = rts[3];
    if (!(h.r_n < 0 && h.r_c > 0 && h.r_minus > h.r_c && h.r_plus > h.r_minus))
        throw InadmissibleError("roots of Delta_r not ordered r_n < 0 < r_c < r_- < r_+");
    const double scale = std::max({std::abs(P.c4), std::abs(P.c2), std::abs(P.c1), std::abs(P.c0)});
    for (double r : rts) {
        const double s = scale * std::pow(std::max(1.0, std::abs(r)), 4);
        if (std::abs(P(r)) > 1e-10 * s) throw InadmissibleError("root refinement failed");
    }
    const double a2 = p.a * p.a;
    auto kap = [&](double r) { return P.d1(r) / (2.0 * (r * r + a2)); };
    h.kappa_n = kap(h.r_n);
    h.kappa_c = kap(h.r_c);
    h.kappa_minus = kap(h.r_minus);
    h.kappa_plus = kap(h.r_plus);
    for (double kj : {h.kappa_n, h.kappa_c, h.kappa_minus, h.kappa_plus})
        if (kj == 0.0) throw InadmissibleError("degenerate root of Delta_r");
    h.E = 1.0 + p.Lambda * a2 / 3.0;
    return h;
}

Verdict validate_params(const BlackHoleParams& p) {
    for (double v : {p.M, p.Q, p.a, p.Lambda, p.q, p.c0, p.K})
        if (!std::isfinite(v)) return {false, "non-finite parameter"};
    if (!(p.M > 0)) return {false, "M > 0 violated"};
    if (!(p.Lambda > 0)) return {false, "Lambda > 0 violated"};
    const double zeta = p.a * p.a * p.Lambda / 3.0;
    if (zeta >= kRotationBound * (1.0 - 4.0 * std::numeric_limits<double>::epsilon()))
        return {false, "rotation bound not strict"};
    const auto mc = critical_masses(p);
    if (!std::isfinite(mc[0]) || !std::isfinite(mc[1]))
        return {false, "no sub-extremal mass window"};
    const double tol = 1e-10 * std::max(1.0, p.M);
    if (p.M <= mc[0] + tol) return {false, "M not above lower critical mass"};
    if (p.M >= mc[1] - tol) return {false, "M not below upper critical mass"};
    try {
        (void)horizon_roots(p);
    } catch (const InadmissibleError& e) {
        return {false, e.what()};
    }
    return {true, "accepted"};
}

Geometry::Geometry(const BlackHoleParams& p) : p_(p) {
    const Verdict v = validate_params(p);
    if (!v.accepted) throw InadmissibleError(v.reason);
    h_ = horizon_roots(p);
    r_s_ = 0.5 * (h_.r_minus + h_.r_plus);
    x_s_ = x_of_point(point_from_r(r_s_));
    h_.A_total = capital_A(h_, p_);
}

double Geometry::delta(double r) const { return quartic_of(p_)(r); }
double Geometry::delta_prime(double r) const { return quartic_of(p_).d1(r); }

double Geometry::delta_at(const RadialPoint& pt) const {
    return p_.Lambda / 3.0 * (pt.r - h_.r_n) * (pt.r - h_.r_c) * pt.dm * pt.dp;
}

double Geometry::G_minus(double r) const {
    return p_.Lambda / 3.0 * (r - h_.r_n) * (r - h_.r_c) * (h_.r_plus - r);
}

double Geometry::G_plus(double r) const {
    return p_.Lambda / 3.0 * (r - h_.r_n) * (r - h_.r_c) * (r - h_.r_minus);
}

double Geometry::omega_minus(double k) const {
    const double r = h_.r_minus, a2 = p_.a * p_.a;
    return (p_.a * h_.E * k + p_.q * p_.Q * r) / (r * r + a2);
}

double Geometry::omega_plus(double k) const {
    const double r = h_.r_plus, a2 = p_.a * p_.a;
    return (p_.a * h_.E * k + p_.q * p_.Q * r) / (r * r + a2);
}

RadialPoint Geometry::point_from_r(double r) const {
    if (!(r > h_.r_minus && r < h_.r_plus))
        throw DomainError("radius outside the exterior (r_-, r_+)");
    return {r, r - h_.r_minus, h_.r_plus - r};
}

double Geometry::x_of_point(const RadialPoint& pt) const {
    return p_.c0 + std::log(pt.r - h_.r_n) / (2.0 * h_.kappa_n) +
           std::log(pt.r - h_.r_c) / (2.0 * h_.kappa_c) + std::log(pt.dm) / (2.0 * h_.kappa_minus) +
           std::log(pt.dp) / (2.0 * h_.kappa_plus);
}

double Geometry::x_of_r(double r) const { return x_of_point(point_from_r(r)); }

double Geometry::x0_minus() const {
    const double r = h_.r_minus;
    return p_.c0 + std::log(r - h_.r_n) / (2.0 * h_.kappa_n) +
           std::log(r - h_.r_c) / (2.0 * h_.kappa_c) +
           std::log(h_.r_plus - r) / (2.0 * h_.kappa_plus);
}

double Geometry::x0_plus() const {
    const double r = h_.r_plus;
    return p_.c0 + std::log(r - h_.r_n) / (2.0 * h_.kappa_n) +
           std::log(r - h_.r_c) / (2.0 * h_.kappa_c) +
           std::log(r - h_.r_minus) / (2.0 * h_.kappa_minus);
}

RadialPoint Geometry::point_from_chart(Side s, double t) const {
    const double w = h_.r_plus - h_.r_minus;
    if (s == Side::minus) {
        const double dm = std::exp(t);
        return {h_.r_minus + dm, dm, w - dm};
    }
    const double dp = std::exp(-t);
    return {h_.r_plus - dp, w - dp, dp};
}

double Geometry::chart_of_point(Side s, const RadialPoint& pt) const {
    return s == Side::minus ? std::log(pt.dm) : -std::log(pt.dp);
}

double Geometry::dx_dt(Side s, const RadialPoint& pt) const {
    const double ra = pt.r * pt.r + p_.a * p_.a;
    return s == Side::minus ? ra / G_minus(pt.r) : ra / G_plus(pt.r);
}

RadialPoint Geometry::point_from_x(double x) const {
    if (!std::isfinite(x)) throw DomainError("non-finite x");
    const Side s = x <= x_s_ ? Side::minus : Side::plus;
    // Solve x_of_point(point_from_chart(s,t)) = x; the map t -> x is increasing.
    const double t_mid = chart_of_point(s, point_from_r(r_s_));
    const double kap = s == Side::minus ? h_.kappa_minus : -h_.kappa_plus;
    const double x0 = s == Side::minus ? x0_minus() : x0_plus();
    auto f = [&](double t) { return x_of_point(point_from_chart(s, t)) - x; };
    double t = 2.0 * kap * (x - x0);
    if (s == Side::minus) t = std::min(t, t_mid);
    else t = std::max(t, t_mid);
    double lo, hi;
    if (s == Side::minus) {
        hi = t_mid;
        lo = std::min(t, t_mid) - 1.0;
        double step = 1.0;
        while (f(lo) > 0) {
            step *= 2.0;
            lo -= step;
            if (lo < -1400) throw NumericalError("point_from_x: x too far into the minus tail");
        }
    } else {
        lo = t_mid;
        hi = std::max(t, t_mid) + 1.0;
        double step = 1.0;
        while (f(hi) < 0) {
            step *= 2.0;
            hi += step;
            if (hi > 1400) throw NumericalError("point_from_x: x too far into the plus tail");
        }
    }
    t = std::clamp(t, lo, hi);
    for (int it = 0; it < 100; ++it) {
        const RadialPoint pt = point_from_chart(s, t);
        const double fv = x_of_point(pt) - x;
        if (fv == 0.0) return pt;
        if (fv < 0) lo = t;
        else hi = t;
        double tn = t - fv / dx_dt(s, pt);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (std::abs(tn - t) <= 1e-15 * std::max(1.0, std::abs(t)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(t))) {
            t = tn;
            break;
        }
        t = tn;
    }
    return point_from_chart(s, t);
}

double Geometry::a_of(const RadialPoint& pt) const {
    return std::sqrt(delta_at(pt)) / (pt.r * pt.r + p_.a * p_.a);
}

double Geometry::c_of(const RadialPoint& pt, double k) const {
    return (p_.a * h_.E * k + p_.q * p_.Q * pt.r) / (pt.r * pt.r + p_.a * p_.a);
}

double Geometry::c_minus_omega_minus(const RadialPoint& pt, double k) const {
    const double al = p_.a * h_.E, ga = p_.q * p_.Q, a2 = p_.a * p_.a, r = pt.r, rm = h_.r_minus;
    const double N = -al * k * (r + rm) + ga * (a2 - r * rm);
    return pt.dm * N / ((r * r + a2) * (rm * rm + a2));
}

double Geometry::c_minus_omega_plus(const RadialPoint& pt, double k) const {
    const double al = p_.a * h_.E, ga = p_.q * p_.Q, a2 = p_.a * p_.a, r = pt.r, rp = h_.r_plus;
    const double N = -al * k * (r + rp) + ga * (a2 - r * rp);
    return -pt.dp * N / ((r * r + a2) * (rp * rp + a2));
}

double Geometry::dx_dr(const RadialPoint& pt) const {
    return (pt.r * pt.r + p_.a * p_.a) / delta_at(pt);
}

double Geometry::tail_amp_minus() const {
    const double r = h_.r_minus;
    return std::sqrt(G_minus(r)) / (r * r + p_.a * p_.a) *
           std::exp(-h_.kappa_minus * x0_minus());
}

double Geometry::tail_amp_plus() const {
    const double r = h_.r_plus;
    return std::sqrt(G_plus(r)) / (r * r + p_.a * p_.a) * std::exp(-h_.kappa_plus * x0_plus());
}

double Geometry::x_tail_minus(double eps) const {
    const double t_mid = chart_of_point(Side::minus, point_from_r(r_s_));
    auto lna = [&](double t) {
        const RadialPoint pt = point_from_chart(Side::minus, t);
        return 0.5 * (std::log(G_minus(pt.r)) + t) - std::log(pt.r * pt.r + p_.a * p_.a);
    };
    const double target = std::log(eps);
    if (lna(t_mid) <= target) return x_s_;
    const double t = bisect([&](double tt) { return lna(tt) - target; }, -1400.0, t_mid);
    return x_of_point(point_from_chart(Side::minus, t));
}

double Geometry::x_tail_plus(double eps) const {
    const double t_mid = chart_of_point(Side::plus, point_from_r(r_s_));
    auto lna = [&](double t) {
        const RadialPoint pt = point_from_chart(Side::plus, t);
        return 0.5 * (std::log(G_plus(pt.r)) - t) - std::log(pt.r * pt.r + p_.a * p_.a);
    };
    const double target = std::log(eps);
    if (lna(t_mid) <= target) return x_s_;
    const double t = bisect([&](double tt) { return lna(tt) - target; }, t_mid, 1400.0);
    return x_of_point(point_from_chart(Side::plus, t));
}

double Geometry::liouville_X(const RadialPoint& pt) const {
    if (pt.r <= r_s_) {
        auto f = [&](double s) { return 2.0 / std::sqrt(G_minus(h_.r_minus + s * s)); };
        return gk(f, 0.0, std::sqrt(pt.dm));
    }
    return h_.A_total - liouville_A_minus_X(pt);
}

double Geometry::liouville_A_minus_X(const RadialPoint& pt) const {
    if (pt.r >= r_s_) {
        auto f = [&](double s) { return 2.0 / std::sqrt(G_plus(h_.r_plus - s * s)); };
        return gk(f, 0.0, std::sqrt(pt.dp));
    }
    return h_.A_total - liouville_X(pt);
}

double Geometry::J_minus(const RadialPoint& pt, double k) const {
    const double al = p_.a * h_.E, ga = p_.q * p_.Q, a2 = p_.a * p_.a, rm = h_.r_minus;
    auto f = [&](double r) {
        const double N = -al * k * (r + rm) + ga * (a2 - r * rm);
        return N / ((rm * rm + a2) * G_minus(r));
    };
    return gk(f, rm, pt.r);
}

double Geometry::J_plus(const RadialPoint& pt, double k) const {
    const double al = p_.a * h_.E, ga = p_.q * p_.Q, a2 = p_.a * p_.a, rp = h_.r_plus;
    auto f = [&](double r) {
        const double N = -al * k * (r + rp) + ga * (a2 - r * rp);
        return -N / ((rp * rp + a2) * G_plus(r));
    };
    return gk(f, pt.r, rp);
}

double Geometry::beta(double k) const {
    const RadialPoint ps = point_from_r(r_s_);
    return J_minus(ps, k) + J_plus(ps, k) + (omega_minus(k) - omega_plus(k)) * x_s_;
}

double Geometry::C_of(const RadialPoint& pt, double k) const {
    const double x = x_of_point(pt);
    if (pt.r <= r_s_) return p_.K + omega_minus(k) * x + J_minus(pt, k);
    return p_.K + beta(k) + omega_plus(k) * x - J_plus(pt, k);
}

double capital_A(const HorizonData& h, const BlackHoleParams& p) {
    const double L3 = p.Lambda / 3.0;
    const double rs = 0.5 * (h.r_minus + h.r_plus);
    auto gm = [&](double s) {
        const double r = h.r_minus + s * s;
        return 2.0 / std::sqrt(L3 * (r - h.r_n) * (r - h.r_c) * (h.r_plus - r));
    };
    auto gp = [&](double s) {
        const double r = h.r_plus - s * s;
        return 2.0 / std::sqrt(L3 * (r - h.r_n) * (r - h.r_c) * (r - h.r_minus));
    };
    return gk(gm, 0.0, std::sqrt(rs - h.r_minus)) + gk(gp, 0.0, std::sqrt(h.r_plus - rs));
}

RadialProfile build_radial_profile(const Geometry& g, double k, double x_min, double x_max,
                                   std::size_t n) {
    if (!(x_min < x_max)) throw ConfigError("build_radial_profile: x_min must be < x_max");
    if (n < 2) throw ConfigError("build_radial_profile: grid size must be >= 2");
    const auto& h = g.horizons();
    const auto& p = g.params();
    RadialProfile pr;
    pr.k = k;
    pr.omega_minus = g.omega_minus(k);
    pr.omega_plus = g.omega_plus(k);
    pr.beta = g.beta(k);
    pr.A_total = g.A_total();
    pr.c0 = p.c0;
    pr.K = p.K;
    pr.x.resize(n);
    pr.r.resize(n);
    pr.a.resize(n);
    pr.c.resize(n);
    pr.C.resize(n);
    pr.X.resize(n);
    pr.q.resize(n);
    std::vector<RadialPoint> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n - 1);
        pr.x[i] = x;
        pts[i] = g.point_from_x(x);
    }
    const double a2 = p.a * p.a;
    const double L3 = p.Lambda / 3.0;
    const double al = p.a * h.E, ga = p.q * p.Q;
    const double rm = h.r_minus, rp = h.r_plus;
    auto Gm = [&](double r) { return L3 * (r - h.r_n) * (r - h.r_c) * (rp - r); };
    auto Gp = [&](double r) { return L3 * (r - h.r_n) * (r - h.r_c) * (r - rm); };
    auto jm = [&](double r) {
        return (-al * k * (r + rm) + ga * (a2 - r * rm)) / ((rm * rm + a2) * Gm(r));
    };
    auto jp = [&](double r) {
        return -(-al * k * (r + rp) + ga * (a2 - r * rp)) / ((rp * rp + a2) * Gp(r));
    };
    auto xm = [&](double s) { return 2.0 / std::sqrt(Gm(rm + s * s)); };
    auto xp = [&](double s) { return 2.0 / std::sqrt(Gp(rp - s * s)); };
    const double rs = g.r_split();
    std::size_t nl = 0;
    while (nl < n && pts[nl].r <= rs) ++nl;
    // Minus side: cumulative from the event horizon outward.
    double J = 0, X = 0, r_prev = rm, s_prev = 0;
    for (std::size_t i = 0; i < nl; ++i) {
        const double s = std::sqrt(pts[i].dm);
        if (i == 0) {
            J = gk(jm, rm, pts[i].r);
            X = gk(xm, 0.0, s);
        } else {
            J += gl(jm, r_prev, pts[i].r);
            X += gl(xm, s_prev, s);
        }
        r_prev = pts[i].r;
        s_prev = s;
        pr.C[i] = p.K + pr.omega_minus * pr.x[i] + J;
        pr.X[i] = X;
    }
    // Plus side: cumulative from the cosmological horizon inward.
    J = 0;
    double AX = 0;
    r_prev = rp;
    s_prev = 0;
    for (std::size_t j = n; j > nl; --j) {
        const std::size_t i = j - 1;
        const double s = std::sqrt(pts[i].dp);
        if (i == n - 1) {
            J = gk(jp, pts[i].r, rp);
            AX = gk(xp, 0.0, s);
        } else {
            J += gl(jp, pts[i].r, r_prev);
            AX += gl(xp, s_prev, s);
        }
        r_prev = pts[i].r;
        s_prev = s;
        pr.C[i] = p.K + pr.beta + pr.omega_plus * pr.x[i] - J;
        pr.X[i] = pr.A_total - AX;
    }
    for (std::size_t i = 0; i < n; ++i) {
        pr.r[i] = pts[i].r;
        pr.a[i] = g.a_of(pts[i]);
        pr.c[i] = g.c_of(pts[i], k);
        pr.q[i] = pr.a[i] * std::polar(1.0, 2.0 * pr.C[i]);
    }
    return pr;
}

std::array<double, 2> default_x_range(const Geometry& g, double eps) {
    return {g.x_tail_minus(eps), g.x_tail_plus(eps)};
}

double coupling_sup(const Geometry& g, int nx, int ntheta) {
    const auto& h = g.horizons();
    const double a = g.params().a, zeta = g.zeta();
    double amax = 0;
    for (int i = 1; i <= nx; ++i) {
        const double r = h.r_minus + (h.r_plus - h.r_minus) * i / (nx + 1.0);
        amax = std::max(amax, g.a_of(g.point_from_r(r)));
    }
    double bmax = 0;
    for (int j = 0; j < ntheta; ++j) {
        const double th = M_PI * (j + 0.5) / ntheta;
        const double ct = std::cos(th);
        bmax = std::max(bmax, std::abs(a) * std::sin(th) / std::sqrt(1.0 + zeta * ct * ct));
    }
    return amax * bmax;
}

}  // namespace knds
