// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ...]   (no argument runs all eleven)
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "knds/angular.hpp"
#include "knds/asymptotics.hpp"
#include "knds/errors.hpp"
#include "knds/geometry.hpp"
#include "knds/inverse.hpp"
#include "knds/parallel.hpp"
#include "knds/radial.hpp"

using namespace knds;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

Outcome unitarity() {
    const auto t0 = std::chrono::steady_clock::now();
    const Geometry g(reference_params());
    struct Job {
        double lam, k, z;
    };
    std::vector<Job> jobs;
    for (double lam : {0.0, 0.3, 1.0})
        for (double k : {0.5, 1.5})
            for (int i = 1; i <= 16; ++i) jobs.push_back({lam, k, 0.5 * i});
    std::vector<double> d(jobs.size());
    const OdeOptions o = default_ode_options(g);
    parallel_for(jobs.size(), [&](std::size_t i) {
        d[i] = unitarity_defect(scatter(g, jobs[i].k, jobs[i].lam, jobs[i].z, &o).phys);
    });
    const double worst = *std::max_element(d.begin(), d.end());
    const double t = seconds_since(t0);
    return {worst <= 1e-8 && t <= 60,
            fmt("max defect %.2e over %zu samples (tol 1e-8), %.1f s (limit 60 s)", worst, jobs.size(), t)};
}

Outcome series_vs_ode() {
    const auto t0 = std::chrono::steady_clock::now();
    const Geometry g(reference_params());
    const double A = g.A_total();
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> U(0, 1);
    const std::vector<double> kset{0.5, -0.5, 1.5, -1.5, 2.5};
    struct Job {
        double lam, k;
        cplx z;
    };
    std::vector<Job> jobs;
    for (int i = 0; i < 20; ++i) {
        const double lam = -1.0 + 2.0 * U(rng);
        const double k = kset[i % kset.size()];
        const double mod = (20.0 / A) * U(rng);
        const double ph = i % 2 ? 2 * M_PI * U(rng) : 0.0;
        jobs.push_back({lam, k, std::polar(mod, ph)});
    }
    const auto xr = default_x_range(g, 1e-13);
    std::map<double, RadialProfile> prof;
    for (double k : kset) prof[k] = build_radial_profile(g, k, xr[0], xr[1], 20001);
    const OdeOptions o = default_ode_options(g);
    std::vector<double> err(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& j = jobs[i];
        const TransferMatrix ode = jost_from_ode(g, j.k, j.lam, j.z, o).AL;
        const TransferMatrix ser =
            al_series(prof.at(j.k), j.lam, series_terms_for(std::abs(j.z) * A, 1e-15)).evaluate(j.z);
        double scale = 1, e = 0;
        for (int m = 1; m <= 4; ++m) scale = std::max(scale, std::abs(ode.entry(m)));
        for (int m = 1; m <= 4; ++m) e = std::max(e, std::abs(ode.entry(m) - ser.entry(m)));
        err[i] = e / scale;
    });
    const double worst = *std::max_element(err.begin(), err.end());
    const double t = seconds_since(t0);
    return {worst <= 1e-8 && t <= 120,
            fmt("max componentwise difference %.2e relative to max(1, max|a_Lj|) over 20 triples (tol 1e-8), "
                "%.1f s (limit 120 s)",
                worst, t)};
}

Outcome determinants() {
    const Geometry g(reference_params());
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0, 1);
    OdeOptions o = default_ode_options(g);
    o.sample_x = linspace(-25, 30, 50);
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
        const double lam = -1 + 2 * U(rng);
        const double k = (i % 2 ? -1.0 : 1.0) * (0.5 + (i % 3));
        const cplx z(3 * U(rng), -3 + 6 * U(rng));
        const JostData J = jost_from_ode(g, k, lam, z, o);
        for (const JostSample& s : J.samples)
            worst = std::max({worst, std::abs(det2(s.FL) - 1.0), std::abs(det2(s.FR) - 1.0)});
    }
    return {worst <= 1e-9, fmt("max |det F - 1| = %.2e at 50 x for 10 triples (tol 1e-9)", worst)};
}

Outcome angular_exactness() {
    double flat = 0;
    for (double k : {0.5, 1.5, 2.5}) {
        const auto mu = angular_eigenvalues({k, 0.0, 0.0}, 6);
        for (int l = 1; l <= 6; ++l) flat = std::max(flat, std::abs(mu[l - 1] - (k - 0.5 + l)));
    }
    const BlackHoleParams p = reference_params();
    const Geometry g(p);
    bool in_window = true;
    double lip = -1e300;
    for (double k : {0.5, 1.5, -0.5, 2.5}) {
        const AngularProblem pb = angular_problem(p, 0.3, k);
        const auto mu = angular_eigenvalues(pb, 10);
        const auto mu0 = angular_eigenvalues({k, pb.zeta, 0.0}, 10);
        for (int l = 1; l <= 10; ++l) {
            const GrowthWindow w = growth_window(k, l, pb.xi);
            in_window = in_window && mu[l - 1] >= w.lo && mu[l - 1] <= w.hi;
            lip = std::max(lip, std::abs(mu[l - 1] - mu0[l - 1]) - std::abs(pb.xi));
        }
    }
    return {flat <= 1e-8 && in_window && lip <= 0,
            fmt("flat max error %.2e (tol 1e-8); P0 in growth window: %s; max(|mu(xi)-mu(0)| - |xi|) = %.3e (<= 0)",
                flat, in_window ? "yes" : "no", lip)};
}

Outcome frobenius_fidelity() {
    const BlackHoleParams p = reference_params();
    const std::vector<std::pair<double, int>> pairs{{0.5, 1}, {0.5, 3}, {1.5, 1}, {1.5, 2}, {-0.5, 2}, {2.5, 1}};
    double worst = 0;
    for (auto [k, l] : pairs) {
        const AngularProblem pb = angular_problem(p, 0.3, k);
        const double mu = angular_eigenvalue(pb, l);
        const AngularEigenpair ev = angular_eigenfunction(pb, l, mu, 4001);
        const FrobeniusSeries s = frobenius_series(pb, mu, 8);
        std::vector<Vec2c> us, ss;
        for (std::size_t i = 0; i < ev.theta.size(); ++i) {
            const double th = ev.theta[i];
            if (th < 0.01 || th > 0.1) continue;
            us.push_back({ev.u1[i], ev.u2[i]});
            ss.push_back(s.eval(th));
        }
        cplx num = 0;
        double den = 0, nu = 0;
        for (std::size_t i = 0; i < us.size(); ++i)
            for (int c = 0; c < 2; ++c) {
                num += std::conj(ss[i][c]) * us[i][c];
                den += std::norm(ss[i][c]);
            }
        const cplx alpha = num / den;
        double diff = 0;
        for (std::size_t i = 0; i < us.size(); ++i) {
            diff = std::max(diff, std::hypot(std::abs(us[i][0] - alpha * ss[i][0]), std::abs(us[i][1] - alpha * ss[i][1])));
            nu = std::max(nu, std::hypot(std::abs(us[i][0]), std::abs(us[i][1])));
        }
        worst = std::max(worst, diff / nu);
    }
    return {worst <= 1e-4, fmt("max relative difference %.2e on [0.01, 0.1] for 6 (k,l) pairs (tol 1e-4)", worst)};
}

struct AsymptoticRun {
    double k;
    std::vector<double> z;
    std::vector<ScatteringRecord> rec;
};

AsymptoticRun asymptotic_run(const Geometry& g, double lam, double k, int n) {
    AsymptoticRun r{k, {}, {}};
    r.z = linspace(30 / g.A_total(), 60 / g.A_total(), n);
    r.rec.resize(n);
    const OdeOptions o = default_ode_options(g);
    parallel_for(n, [&](std::size_t i) { r.rec[i] = scatter(g, k, lam, r.z[i], &o); });
    return r;
}

Outcome asymptotics_convergence(std::vector<std::string>& info) {
    const auto t0 = std::chrono::steady_clock::now();
    const Geometry g(reference_params());
    const double A = g.A_total(), lam = 0.3;
    double eT = 0, eR = 0, eL = 0, eTc = 0, eTc40 = 0;
    for (double k : {0.5, 1.5}) {
        const AsymptoticRun run = asymptotic_run(g, lam, k, 16);
        const AsymptoticModel m = asymptotic_model(g, lam, k);
        const cplx c1 = first_order_coefficient(g, lam, k);
        std::vector<double> lz, aR, aL;
        for (std::size_t i = 0; i < run.z.size(); ++i) {
            const double z = run.z[i];
            const ScatteringPhys& s = run.rec[i].phys;
            const double tz = std::abs(s.T) * std::exp(z * A);
            eT = std::max(eT, std::abs(tz / m.abs_T_pref - 1));
            const double corr = m.abs_T_pref * std::abs(std::exp(-c1 / z));
            eTc = std::max(eTc, std::abs(tz / corr - 1));
            if (z * A >= 40 - 1e-9) eTc40 = std::max(eTc40, std::abs(tz / corr - 1));
            lz.push_back(std::log(z));
            aR.push_back(std::arg(s.R));
            aL.push_back(std::arg(s.L));
        }
        aR = unwrap_phase(aR);
        aL = unwrap_phase(aL);
        eR = std::max(eR, std::abs(ls_slope(lz, aR) / (2 * m.rho_plus) - 1));
        eL = std::max(eL, std::abs(ls_slope(lz, aL) / (-2 * m.rho_minus) - 1));
        info.push_back(fmt("k=%.1f: rho_- = %.4f, rho_+ = %.4f, first-order coefficient c1 = %.4f%+.4fi", k,
                           m.rho_minus, m.rho_plus, c1.real(), c1.imag()));
    }
    const double t = seconds_since(t0);
    info.push_back(fmt("with the exp(-c1/z) correction: max |T| error %.2e on zA in [30,60], %.2e on [40,60]", eTc,
                       eTc40));
    const bool ok = eT <= 0.01 && eR <= 0.01 && eL <= 0.01 && t <= 600;
    return {ok, fmt("max relative errors on zA in [30,60]: |T|e^{zA} %.3e, arg R slope %.3e, arg L slope %.3e "
                    "(tol 1e-2), %.1f s (limit 600 s)",
                    eT, eR, eL, t)};
}

Outcome monotonicity() {
    const Geometry g(reference_params());
    const double A = g.A_total();
    bool ok = true;
    std::string d;
    for (double k : {0.5, 1.5}) {
        const auto zg = linspace(30 / A, 60 / A, 31);
        const MonotonicityResult r = monotonicity_check(g, 0.3, k, zg, 1);
        ok = ok && r.increasing;
        d += fmt("k=%.1f %s; ", k, r.increasing ? "strictly increasing" : "not increasing");
    }
    return {ok, d + "|a_L1| on 31 points with zA in [30,60]"};
}

Outcome exponential_bound() {
    const Geometry g(reference_params());
    const double A = g.A_total();
    struct Job {
        double lam, k;
        cplx z;
    };
    std::vector<Job> jobs;
    for (double lam : {0.3, 1.0})
        for (double k : {0.5, -1.5})
            for (int re = 0; re <= 6; ++re)
                for (int im = -6; im <= 6; ++im) jobs.push_back({lam, k, cplx(re, im)});
    std::vector<double> excess(jobs.size());
    const OdeOptions o = default_ode_options(g);
    parallel_for(jobs.size(), [&](std::size_t i) {
        const TransferMatrix al = jost_from_ode(g, jobs[i].k, jobs[i].lam, jobs[i].z, o).AL;
        double e = -1e300;
        for (int j = 1; j <= 4; ++j) e = std::max(e, al.log_abs(j) - A * std::abs(jobs[i].z.real()));
        excess[i] = e;
    });
    const double worst = *std::max_element(excess.begin(), excess.end());
    return {worst <= std::log1p(1e-6),
            fmt("max ln(|a_Lj| e^{-A|Re z|}) = %.3e over %zu lattice points (limit ln(1+1e-6))", worst, jobs.size())};
}

BlackHoleParams random_admissible(std::mt19937& rng) {
    std::uniform_real_distribution<double> U(0, 1);
    for (;;) {
        BlackHoleParams p;
        p.M = 0.8 + 0.4 * U(rng);
        p.Q = 0.05 + 0.25 * U(rng);
        p.a = 0.1 + 0.25 * U(rng);
        p.Lambda = 0.015 + 0.015 * U(rng);
        p.q = 0.2 + 0.6 * U(rng);
        p.c0 = -2 + 4 * U(rng);
        p.K = -1 + 2 * U(rng);
        if (validate_params(p).accepted) return p;
    }
}

Outcome inverse_end_to_end(std::vector<std::string>& info) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<BlackHoleParams> sets;
    BlackHoleParams p0 = reference_params();
    p0.c0 = 1.0;
    p0.K = 0.3;
    sets.push_back(p0);
    std::mt19937 rng(20261014);
    for (int i = 0; i < 5; ++i) sets.push_back(random_admissible(rng));
    double worst = 0, worst_c = 0;
    int failed = 0;
    for (const BlackHoleParams& p : sets) {
        try {
            const InverseReport r = run_inverse(p);
            const double e = std::max({std::abs(r.M_est / p.M - 1), std::abs(r.Qsq_est / (p.Q * p.Q) - 1),
                                       std::abs(r.a_est / p.a - 1), std::abs(r.Lambda_est / p.Lambda - 1)});
            worst = std::max(worst, e);
            worst_c = std::max(worst_c, std::abs(r.c_est - p.c0));
            info.push_back(fmt("M=%.4f Q=%.4f a=%.4f Lambda=%.4f q=%.4f c0=%.4f: max rel error %.2e, c error %.2e",
                               p.M, p.Q, p.a, p.Lambda, p.q, p.c0, e, std::abs(r.c_est - p.c0)));
        } catch (const std::exception& ex) {
            ++failed;
            info.push_back(fmt("M=%.4f Q=%.4f a=%.4f Lambda=%.4f q=%.4f: %s", p.M, p.Q, p.a, p.Lambda, p.q, ex.what()));
        }
    }
    const double t = seconds_since(t0);
    return {failed == 0 && worst <= 0.01 && worst_c <= 1e-3 && t <= 1200,
            fmt("6 parameter sets: max rel error of M, Q^2, a, Lambda %.2e (tol 1e-2), max |c_est - c0| %.2e "
                "(tol 1e-3), %d failures, %.1f s (limit 1200 s)",
                worst, worst_c, failed, t)};
}

Outcome distinguishability() {
    const BlackHoleParams p = reference_params();
    const std::vector<double> ks{0.5, 1.5};
    const std::vector<int> ls{1, 2};
    std::vector<BlackHoleParams> perturbed(5, p);
    perturbed[0].M *= 1.02;
    perturbed[1].Q *= std::sqrt(1.02);
    perturbed[2].a *= 1.02;
    perturbed[3].Lambda *= 1.02;
    perturbed[4].q *= 1.02;
    double min_mis = 1e300;
    bool all_dist = true;
    for (const auto& p2 : perturbed) {
        const CompareResult r = compare_blackholes(p, p2, 0.3, ks, ls, 1e-4);
        all_dist = all_dist && r.distinguishable;
        min_mis = std::min(min_mis, r.mismatch);
    }
    BlackHoleParams shifted = p;
    shifted.c0 = 1.0;
    const CompareResult same = compare_blackholes(p, p, 0.3, ks, ls, 1e-10);
    const CompareResult gauge = compare_blackholes(p, shifted, 0.3, ks, ls, 1e-10);
    const bool ok = all_dist && !same.distinguishable && !gauge.distinguishable;
    return {ok, fmt("2%% perturbations of M, Q^2, a, Lambda, q: min mismatch %.2e (distinguishable at 1e-4: %s); "
                    "identical %.1e, gauge-shifted %.1e (indistinguishable at 1e-10: %s)",
                    min_mis, all_dist ? "all" : "not all", same.mismatch, gauge.mismatch,
                    !same.distinguishable && !gauge.distinguishable ? "yes" : "no")};
}

Outcome covariance() {
    BlackHoleParams p = reference_params();
    BlackHoleParams q = p;
    q.c0 += 1.0;
    const Geometry g(p), gq(q);
    double worst = 0;
    for (double lam : {0.0, 0.3, 1.0})
        for (double k : {0.5, 1.5, -1.5})
            for (double z : {0.7, 2.0, 4.5}) {
                const ScatteringRecord r0 = scatter(g, k, lam, z);
                const ScatteringRecord r1 = scatter(gq, k, lam, z);
                const ScatteringRecord pr = rw_translation_covariance(r0, 1.0, g.omega_minus(k), g.omega_plus(k));
                for (auto [a, b] : {std::pair{r1.phys.T, pr.phys.T}, {r1.phys.R, pr.phys.R}, {r1.phys.L, pr.phys.L}})
                    worst = std::max(worst, std::abs(std::arg(a / b)));
            }
    return {worst <= 1e-6, fmt("max phase difference %.2e rad for 27 (lambda,k,z) (tol 1e-6)", worst)};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= 11; ++i) which.push_back(i);
    const char* names[] = {"",
                           "unitarity",
                           "series/ODE equivalence",
                           "Jost determinants",
                           "angular exactness",
                           "Frobenius fidelity",
                           "asymptotics convergence",
                           "monotonicity",
                           "exponential-type bound",
                           "inverse end-to-end",
                           "distinguishability",
                           "covariance"};
    int failures = 0;
    for (int c : which) {
        if (c < 1 || c > 11) {
            std::fprintf(stderr, "unknown criterion %d\n", c);
            return 2;
        }
        std::vector<std::string> info;
        Outcome o;
        try {
            switch (c) {
                case 1: o = unitarity(); break;
                case 2: o = series_vs_ode(); break;
                case 3: o = determinants(); break;
                case 4: o = angular_exactness(); break;
                case 5: o = frobenius_fidelity(); break;
                case 6: o = asymptotics_convergence(info); break;
                case 7: o = monotonicity(); break;
                case 8: o = exponential_bound(); break;
                case 9: o = inverse_end_to_end(info); break;
                case 10: o = distinguishability(); break;
                case 11: o = covariance(); break;
            }
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        for (const auto& s : info) std::printf("INFO [%d] %s\n", c, s.c_str());
        std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", c, names[c], o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures ? 1 : 0;
}
