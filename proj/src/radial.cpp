#include "knds/radial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/numeric/odeint.hpp>

#include "knds/errors.hpp"

namespace knds {

namespace {

const cplx I(0.0, 1.0);

using State = std::array<cplx, 4>;  // two columns (h1, h2) of H = exp(-i C Gamma1) F

struct Columns {
    State y{};
    double ls0 = 0, ls1 = 0;  // log scale of each column
};

void renormalize(Columns& c) {
    const double n0 = std::max(std::abs(c.y[0]), std::abs(c.y[1]));
    const double n1 = std::max(std::abs(c.y[2]), std::abs(c.y[3]));
    if (n0 > 1e3 || (n0 < 1e-3 && n0 > 0)) {
        c.y[0] /= n0;
        c.y[1] /= n0;
        c.ls0 += std::log(n0);
    }
    if (n1 > 1e3 || (n1 < 1e-3 && n1 > 0)) {
        c.y[2] /= n1;
        c.y[3] /= n1;
        c.ls1 += std::log(n1);
    }
}

class RadialSystem {
public:
    RadialSystem(const Geometry& g, double k, double lambda, cplx z, double rtol, double atol)
        : g_(g), k_(k), lam_(lambda), z_(z), rtol_(rtol), atol_(atol) {}

    Side side_of(double x) const { return x <= g_.x_split() ? Side::minus : Side::plus; }

    double t_of(Side s, double x) const {
        if (x == g_.x_split()) return g_.chart_of_point(s, g_.point_from_r(g_.r_split()));
        return g_.chart_of_point(s, g_.point_from_x(x));
    }

    // Propagates both columns from x_from to x_to; on_stop is called at each stop (sorted
    // along the direction of integration).
    void propagate(Columns& col, double x_from, double x_to, const std::vector<double>& stops,
                   const std::function<void(std::size_t, const Columns&)>& on_stop) const {
        const double dir = x_to > x_from ? 1.0 : -1.0;
        const double xs = g_.x_split();
        std::vector<std::pair<Side, std::array<double, 2>>> segs;
        const bool cross = (x_from - xs) * (x_to - xs) < 0;
        if (cross) {
            segs.push_back({side_of(x_from), {x_from, xs}});
            segs.push_back({side_of(x_to), {xs, x_to}});
        } else {
            const Side s = (x_from == xs) ? side_of(x_to) : side_of(x_from);
            segs.push_back({s, {x_from, x_to}});
        }
        std::size_t next = 0;
        for (const auto& [s, ends] : segs) {
            const double seg_x0 = ends[0], seg_x1 = ends[1];
            double t = t_of(s, seg_x0);
            while (next < stops.size() && dir * (stops[next] - seg_x1) <= 0) {
                const double ts = t_of(s, stops[next]);
                integrate(s, col, t, ts);
                t = ts;
                on_stop(next, col);
                ++next;
            }
            integrate(s, col, t, t_of(s, seg_x1));
        }
    }

private:
    void rhs(Side s, const State& y, State& dy, double t) const {
        const RadialPoint pt = g_.point_from_chart(s, t);
        const double f = g_.dx_dt(s, pt);
        const double w = f * (lam_ - g_.c_of(pt, k_));
        const cplx u = f * g_.a_of(pt) * z_;
        dy[0] = I * (w * y[0] + u * y[1]);
        dy[1] = -I * (w * y[1] + u * y[0]);
        dy[2] = I * (w * y[2] + u * y[3]);
        dy[3] = -I * (w * y[3] + u * y[2]);
    }

    void integrate(Side s, Columns& col, double t0, double t1) const {
        namespace ode = boost::numeric::odeint;
        if (t0 == t1) return;
        auto stepper = ode::make_controlled(atol_, rtol_, ode::runge_kutta_fehlberg78<State>());
        auto sys = [&](const State& y, State& dy, double t) { rhs(s, y, dy, t); };
        const double dir = t1 > t0 ? 1.0 : -1.0;
        double t = t0;
        double dt = dir * std::min(0.05, std::abs(t1 - t0));
        long steps = 0;
        while (dir * (t1 - t) > 1e-14 * std::max(1.0, std::abs(t1))) {
            if (dir * (t + dt - t1) > 0) dt = t1 - t;
            const auto res = stepper.try_step(sys, col.y, t, dt);
            if (res == ode::fail) {
                if (std::abs(dt) < 1e-12)
                    throw NumericalError("radial ODE step-size underflow at chart t=" +
                                         std::to_string(t));
                continue;
            }
            renormalize(col);
            if (++steps > 5000000) throw NumericalError("radial ODE step budget exhausted");
            dt = dir * std::min(std::abs(dt), 2.0);
        }
    }

    const Geometry& g_;
    double k_, lam_;
    cplx z_;
    double rtol_, atol_;
};

Columns free_columns(const Geometry& g, double k, double lambda, double x) {
    const double phi = lambda * x - g.C_of(g.point_from_x(x), k);
    Columns c;
    c.y = {std::polar(1.0, phi), cplx(0), cplx(0), std::polar(1.0, -phi)};
    return c;
}

Mat2 jost_matrix(const Geometry& g, double k, double x, const Columns& c) {
    const double C = g.C_of(g.point_from_x(x), k);
    const cplx e = std::polar(1.0, C);
    const double s0 = std::exp(c.ls0), s1 = std::exp(c.ls1);
    return {e * c.y[0] * s0, e * c.y[2] * s1, std::conj(e) * c.y[1] * s0,
            std::conj(e) * c.y[3] * s1};
}

cplx det_cols(cplx a0, cplx a1, cplx b0, cplx b1) { return a0 * b1 - b0 * a1; }

// Cumulative integrals of samples on a uniform grid with spacing h.
// Interval weights are sixth order in the interior, fourth order near the ends.
std::vector<cplx> interval_integrals(const std::vector<cplx>& f, double h) {
    const std::size_t n = f.size();
    std::vector<cplx> I(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (i >= 2 && i + 3 < n) {
            I[i] = h * (11.0 * (f[i - 2] + f[i + 3]) - 93.0 * (f[i - 1] + f[i + 2]) +
                        802.0 * (f[i] + f[i + 1])) / 1440.0;
        } else if (i >= 1 && i + 2 < n) {
            I[i] = h * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0;
        } else if (i + 3 < n) {
            I[i] = h * (9.0 * f[i] + 19.0 * f[i + 1] - 5.0 * f[i + 2] + f[i + 3]) / 24.0;
        } else if (i >= 2) {
            I[i] = h * (9.0 * f[i + 1] + 19.0 * f[i] - 5.0 * f[i - 1] + f[i - 2]) / 24.0;
        } else {
            I[i] = 0.5 * h * (f[i] + f[i + 1]);
        }
    }
    return I;
}

// R[f](x_i) = int_{x_i}^{x_end} f
std::vector<cplx> cumulative_right(const std::vector<cplx>& f, double h) {
    const auto I = interval_integrals(f, h);
    std::vector<cplx> out(f.size(), cplx(0));
    for (std::size_t j = f.size() - 1; j > 0; --j) out[j - 1] = out[j] + I[j - 1];
    return out;
}

// L[f](x_i) = int_{x_0}^{x_i} f
std::vector<cplx> cumulative_left(const std::vector<cplx>& f, double h) {
    const auto I = interval_integrals(f, h);
    std::vector<cplx> out(f.size(), cplx(0));
    for (std::size_t j = 1; j < f.size(); ++j) out[j] = out[j - 1] + I[j - 1];
    return out;
}

double grid_step(const RadialProfile& prof) {
    if (prof.x.size() < 8) throw ConfigError("series path needs at least 8 grid points");
    return (prof.x.back() - prof.x.front()) / static_cast<double>(prof.x.size() - 1);
}

}  // namespace

cplx TransferMatrix::entry(int j) const { return mant.at(j - 1) * std::exp(log_scale); }

double TransferMatrix::log_abs(int j) const { return std::log(std::abs(mant.at(j - 1))) + log_scale; }

const char* method_name(JostMethod m) { return m == JostMethod::series ? "series" : "ode"; }

OdeOptions default_ode_options(const Geometry& g, double eps) {
    OdeOptions o;
    const auto xr = default_x_range(g, eps);
    o.x_min = xr[0];
    o.x_max = xr[1];
    return o;
}

JostData jost_from_ode(const Geometry& g, double k, double lambda, cplx z, const OdeOptions& opt) {
    if (!(opt.x_min < g.x_split() && g.x_split() < opt.x_max))
        throw ConfigError("ODE domain must contain the split point");
    RadialSystem sys(g, k, lambda, z, opt.rtol, opt.atol);
    JostData out;
    out.lambda = lambda;
    out.k = k;
    out.z = z;
    out.method = JostMethod::ode;

    Columns L = free_columns(g, k, lambda, opt.x_max);
    Columns R = free_columns(g, k, lambda, opt.x_min);
    Columns Ls, Rs;

    std::vector<double> sx = opt.sample_x;
    for (double x : sx)
        if (!(x > opt.x_min && x < opt.x_max)) throw ConfigError("sample x outside ODE domain");
    // Left-Jost columns run from x_max down; right-Jost columns from x_min up.
    std::vector<double> stopsL = sx, stopsR = sx;
    const double xs = g.x_split();
    stopsL.push_back(xs);
    stopsR.push_back(xs);
    std::sort(stopsL.begin(), stopsL.end(), std::greater<>());
    std::sort(stopsR.begin(), stopsR.end());
    const bool full = !sx.empty();
    std::vector<Mat2> FLs(sx.size()), FRs(sx.size());
    std::vector<double> sorted = sx;
    std::sort(sorted.begin(), sorted.end());
    auto slot = [&](double x) {
        return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
    };
    bool gotL = false, gotR = false;
    sys.propagate(L, opt.x_max, full ? opt.x_min : xs, stopsL, [&](std::size_t i, const Columns& c) {
        if (stopsL[i] == xs && !gotL) {
            Ls = c;
            gotL = true;
        } else {
            FLs[slot(stopsL[i])] = jost_matrix(g, k, stopsL[i], c);
        }
    });
    sys.propagate(R, opt.x_min, full ? opt.x_max : xs, stopsR, [&](std::size_t i, const Columns& c) {
        if (stopsR[i] == xs && !gotR) {
            Rs = c;
            gotR = true;
        } else {
            FRs[slot(stopsR[i])] = jost_matrix(g, k, stopsR[i], c);
        }
    });
    if (!gotL || !gotR) throw NumericalError("matching point not reached");

    // A_L = H_R^{-1} H_L with det H_R = 1.
    const cplx d1 = det_cols(Ls.y[0], Ls.y[1], Rs.y[2], Rs.y[3]);
    const cplx d3 = det_cols(Rs.y[0], Rs.y[1], Ls.y[0], Ls.y[1]);
    const cplx d2 = det_cols(Ls.y[2], Ls.y[3], Rs.y[2], Rs.y[3]);
    const cplx d4 = det_cols(Rs.y[0], Rs.y[1], Ls.y[2], Ls.y[3]);
    const double l1 = Ls.ls0 + Rs.ls1, l3 = Rs.ls0 + Ls.ls0, l2 = Ls.ls1 + Rs.ls1, l4 = Rs.ls0 + Ls.ls1;
    const double lm = std::max({l1, l2, l3, l4});
    out.AL.log_scale = lm;
    out.AL.mant = {d1 * std::exp(l1 - lm), d2 * std::exp(l2 - lm), d3 * std::exp(l3 - lm),
                   d4 * std::exp(l4 - lm)};
    for (std::size_t i = 0; i < sorted.size(); ++i) out.samples.push_back({sorted[i], FLs[i], FRs[i]});
    return out;
}

int series_terms_for(double zA, double tol) {
    if (zA == 0.0) return 1;
    double lt = 0.0;  // log of (zA)^{2n}/(2n)!
    const double target = std::log(tol);
    for (int n = 1; n < 400; ++n) {
        lt += 2.0 * std::log(zA) - std::log(2.0 * n) - std::log(2.0 * n - 1.0);
        if (lt < target && 2.0 * n > zA) return n + 1;
    }
    return 400;
}

ALSeries al_series(const RadialProfile& prof, double lambda, int n_terms) {
    const double h = grid_step(prof);
    const std::size_t n = prof.x.size();
    std::vector<cplx> E(n), q(n), qb(n);
    for (std::size_t i = 0; i < n; ++i) {
        E[i] = std::polar(1.0, 2.0 * lambda * prof.x[i]);
        q[i] = prof.q[i];
        qb[i] = std::conj(prof.q[i]);
    }
    ALSeries s;
    s.lambda = lambda;
    s.k = prof.k;
    s.A_total = prof.A_total;
    std::vector<cplx> alpha(n, cplx(1)), eps(n, cplx(1)), f(n);
    for (int m = 0; m < n_terms; ++m) {
        s.c1.push_back(alpha[0]);
        s.c4.push_back(eps[0]);
        for (std::size_t i = 0; i < n; ++i) f[i] = E[i] * qb[i] * alpha[i];
        auto Rg = cumulative_right(f, h);
        s.c3.push_back(I * Rg[0]);
        for (std::size_t i = 0; i < n; ++i) f[i] = q[i] * I * std::conj(E[i]) * Rg[i];  // q gamma
        auto Ra = cumulative_right(f, h);
        for (std::size_t i = 0; i < n; ++i) f[i] = std::conj(E[i]) * q[i] * eps[i];
        auto Rd = cumulative_right(f, h);
        s.c2.push_back(-I * Rd[0]);
        for (std::size_t i = 0; i < n; ++i) f[i] = qb[i] * (-I) * E[i] * Rd[i];  // qbar delta
        auto Re = cumulative_right(f, h);
        for (std::size_t i = 0; i < n; ++i) {
            alpha[i] = -I * Ra[i];
            eps[i] = I * Re[i];
        }
    }
    return s;
}

TransferMatrix ALSeries::evaluate(cplx z) const {
    const cplx z2 = z * z;
    cplx a1 = 0, a2 = 0, a3 = 0, a4 = 0, p = 1;
    for (std::size_t n = 0; n < c1.size(); ++n) {
        a1 += c1[n] * p;
        a4 += c4[n] * p;
        a2 += c2[n] * p * z;
        a3 += c3[n] * p * z;
        p *= z2;
    }
    TransferMatrix t;
    t.mant = {a1, a2, a3, a4};
    t.log_scale = 0;
    return t;
}

FaddeevSeries faddeev_series(const RadialProfile& prof, double lambda, cplx z, int n_terms,
                             double tol) {
    if (std::abs(z) * prof.A_total > kSeriesCap)
        throw DomainError("|z| A exceeds the series cap; use the ODE path");
    const int need = series_terms_for(std::abs(z) * prof.A_total, tol);
    const int nt = std::max(n_terms, need);
    const double h = grid_step(prof);
    const std::size_t n = prof.x.size();
    std::vector<cplx> E(n), q(n), qb(n);
    for (std::size_t i = 0; i < n; ++i) {
        E[i] = std::polar(1.0, 2.0 * lambda * prof.x[i]);
        q[i] = prof.q[i];
        qb[i] = std::conj(prof.q[i]);
    }
    FaddeevSeries out;
    out.ML.assign(n, Mat2{cplx(0), cplx(0), cplx(0), cplx(0)});
    out.MR.assign(n, Mat2{cplx(0), cplx(0), cplx(0), cplx(0)});
    const cplx z2 = z * z;
    std::vector<cplx> f(n);

    // Left Faddeev functions, normalized at +infinity.
    {
        std::vector<cplx> alpha(n, cplx(1)), eps(n, cplx(1));
        cplx p = 1;
        for (int m = 0; m < nt; ++m) {
            for (std::size_t i = 0; i < n; ++i) f[i] = E[i] * qb[i] * alpha[i];
            auto Rg = cumulative_right(f, h);
            for (std::size_t i = 0; i < n; ++i) f[i] = std::conj(E[i]) * q[i] * eps[i];
            auto Rd = cumulative_right(f, h);
            for (std::size_t i = 0; i < n; ++i) {
                const cplx gam = I * std::conj(E[i]) * Rg[i];
                const cplx del = -I * E[i] * Rd[i];
                out.ML[i][0] += alpha[i] * p;
                out.ML[i][3] += eps[i] * p;
                out.ML[i][2] += gam * p * z;
                out.ML[i][1] += del * p * z;
                Rg[i] = q[i] * gam;
                Rd[i] = qb[i] * del;
            }
            auto Ra = cumulative_right(Rg, h);
            auto Re = cumulative_right(Rd, h);
            for (std::size_t i = 0; i < n; ++i) {
                alpha[i] = -I * Ra[i];
                eps[i] = I * Re[i];
            }
            p *= z2;
        }
    }
    // Right Faddeev functions, normalized at -infinity.
    {
        std::vector<cplx> alpha(n, cplx(1)), eps(n, cplx(1));
        cplx p = 1;
        for (int m = 0; m < nt; ++m) {
            for (std::size_t i = 0; i < n; ++i) f[i] = E[i] * qb[i] * alpha[i];
            auto Lg = cumulative_left(f, h);
            for (std::size_t i = 0; i < n; ++i) f[i] = std::conj(E[i]) * q[i] * eps[i];
            auto Ld = cumulative_left(f, h);
            for (std::size_t i = 0; i < n; ++i) {
                const cplx gam = -I * std::conj(E[i]) * Lg[i];
                const cplx del = I * E[i] * Ld[i];
                out.MR[i][0] += alpha[i] * p;
                out.MR[i][3] += eps[i] * p;
                out.MR[i][2] += gam * p * z;
                out.MR[i][1] += del * p * z;
                Lg[i] = q[i] * gam;
                Ld[i] = qb[i] * del;
            }
            auto La = cumulative_left(Lg, h);
            auto Le = cumulative_left(Ld, h);
            for (std::size_t i = 0; i < n; ++i) {
                alpha[i] = I * La[i];
                eps[i] = -I * Le[i];
            }
            p *= z2;
        }
    }
    // A_L from the left Faddeev functions.
    for (std::size_t i = 0; i < n; ++i) f[i] = E[i] * qb[i] * out.ML[i][0];
    const cplx a3 = I * z * cumulative_right(f, h)[0];
    for (std::size_t i = 0; i < n; ++i) f[i] = std::conj(E[i]) * q[i] * out.ML[i][3];
    const cplx a2 = -I * z * cumulative_right(f, h)[0];
    for (std::size_t i = 0; i < n; ++i) f[i] = qb[i] * out.ML[i][1];
    const cplx a4 = 1.0 + I * z * cumulative_right(f, h)[0];
    out.jost.lambda = lambda;
    out.jost.k = prof.k;
    out.jost.z = z;
    out.jost.method = JostMethod::series;
    out.jost.AL.mant = {out.ML[0][0], a2, a3, a4};
    out.jost.AL.log_scale = 0;
    return out;
}

ScatteringHat scattering_hat(const TransferMatrix& al) {
    ScatteringHat s;
    const cplx a1 = al.mant[0];
    if (a1 == cplx(0) || !std::isfinite(std::abs(a1))) {
        s.pole = true;
        s.T = s.R = s.L = cplx(std::numeric_limits<double>::quiet_NaN(), 0);
        return s;
    }
    s.T = std::exp(-al.log_scale) / a1;
    s.R = -al.mant[1] / a1;
    s.L = al.mant[2] / a1;
    return s;
}

ScatteringPhys scattering_physical(const ScatteringHat& hat, double beta_k, double K) {
    ScatteringPhys p;
    p.T = std::polar(1.0, -beta_k) * hat.T;
    p.R = std::polar(1.0, -2.0 * (beta_k + K)) * hat.R;
    p.L = std::polar(1.0, 2.0 * K) * hat.L;
    return p;
}

ScatteringRecord scatter(const Geometry& g, double k, double lambda, cplx z, const OdeOptions* opt) {
    const OdeOptions o = opt ? *opt : default_ode_options(g);
    const JostData j = jost_from_ode(g, k, lambda, z, o);
    ScatteringRecord rec;
    rec.lambda = lambda;
    rec.k = k;
    rec.z = z;
    rec.hat = scattering_hat(j.AL);
    rec.phys = scattering_physical(rec.hat, g.beta(k), g.params().K);
    rec.c0 = g.params().c0;
    rec.K = g.params().K;
    rec.method = JostMethod::ode;
    return rec;
}

ScatteringRecord rw_translation_covariance(const ScatteringRecord& rec, double c,
                                           double omega_minus, double omega_plus) {
    ScatteringRecord out = rec;
    const double theta = omega_minus - omega_plus;
    const double lp = rec.lambda - omega_plus, lm = rec.lambda - omega_minus;
    out.phys.T = std::polar(1.0, -theta * c) * rec.phys.T;
    out.phys.R = std::polar(1.0, -2.0 * lp * c) * rec.phys.R;
    out.phys.L = std::polar(1.0, 2.0 * lm * c) * rec.phys.L;
    out.hat.R = std::polar(1.0, -2.0 * lm * c) * rec.hat.R;
    out.hat.L = std::polar(1.0, 2.0 * lm * c) * rec.hat.L;
    out.c0 = rec.c0 + c;
    return out;
}

namespace {
template <class S>
double defect(const S& s) {
    const double t2 = std::norm(s.T);
    return std::max({std::abs(t2 + std::norm(s.R) - 1.0), std::abs(t2 + std::norm(s.L) - 1.0),
                     std::abs(s.T * std::conj(s.R) + s.L * std::conj(s.T))});
}
}  // namespace

double unitarity_defect(const ScatteringPhys& s) { return defect(s); }
double unitarity_defect(const ScatteringHat& s) { return defect(s); }

}  // namespace knds
