#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "knds/angular.hpp"
#include "knds/asymptotics.hpp"
#include "knds/config.hpp"
#include "knds/errors.hpp"
#include "knds/inverse.hpp"
#include "knds/parallel.hpp"
#include "knds/radial.hpp"

namespace knds {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string tag(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void write_file(const std::filesystem::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << s;
}

std::vector<std::string> with(std::vector<std::string> base, const std::vector<std::string>& extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

Geometry admissible(const BlackHoleParams& p) {
    const Verdict v = validate_params(p);
    if (!v.accepted) throw InadmissibleError(v.reason);
    return Geometry(p);
}

void positive(double v, const char* name) {
    if (!(v > 0)) throw ConfigError(std::string(name) + " must be > 0");
}

void cmd_geometry(const KeyValueConfig& c, const std::filesystem::path& out) {
    c.require_known(with(param_keys(), {"k", "grid_n", "x_min", "x_max", "tail_eps"}));
    const BlackHoleParams p = params_from_config(c);
    const Geometry g = admissible(p);
    const double k = c.number("k", 0.5), eps = c.number("tail_eps", 1e-12);
    const int n = c.integer("grid_n", 2001);
    positive(eps, "tail_eps");
    if (n < 2) throw ConfigError("grid_n must be >= 2");
    const HorizonData& h = g.horizons();
    const auto mc = critical_masses(p);
    std::ostringstream os;
    os << "quantity,value\n";
    const std::pair<const char*, double> rows[] = {
        {"r_n", h.r_n}, {"r_c", h.r_c}, {"r_minus", h.r_minus}, {"r_plus", h.r_plus},
        {"kappa_n", h.kappa_n}, {"kappa_c", h.kappa_c}, {"kappa_minus", h.kappa_minus},
        {"kappa_plus", h.kappa_plus}, {"E", h.E}, {"A_total", g.A_total()},
        {"M_crit_lower", mc[0]}, {"M_crit_upper", mc[1]}, {"x_split", g.x_split()},
        {"Omega_minus", g.omega_minus(k)}, {"Omega_plus", g.omega_plus(k)}, {"beta", g.beta(k)}};
    for (const auto& [name, v] : rows) os << name << ',' << fmt(v) << '\n';
    write_file(out / "geometry.csv", os.str());

    const auto xr = default_x_range(g, eps);
    const double x_min = c.number("x_min", xr[0]), x_max = c.number("x_max", xr[1]);
    const RadialProfile pr = build_radial_profile(g, k, x_min, x_max, static_cast<std::size_t>(n));
    std::ostringstream ps;
    ps << "x,r,a,c,C,Re(q),Im(q)\n";
    for (std::size_t i = 0; i < pr.x.size(); ++i)
        ps << fmt(pr.x[i]) << ',' << fmt(pr.r[i]) << ',' << fmt(pr.a[i]) << ',' << fmt(pr.c[i]) << ','
           << fmt(pr.C[i]) << ',' << fmt(pr.q[i].real()) << ',' << fmt(pr.q[i].imag()) << '\n';
    write_file(out / "profile.csv", ps.str());
}

void cmd_angular(const KeyValueConfig& c, const std::filesystem::path& out) {
    c.require_known(with(param_keys(), {"lambda", "k", "l_max", "eigenfunctions", "n_theta", "mu_tol"}));
    const BlackHoleParams p = params_from_config(c);
    admissible(p);
    const auto lams = c.numbers("lambda", {0.3});
    const auto ks = c.numbers("k", {0.5});
    const int l_max = c.integer("l_max", 6), n_theta = c.integer("n_theta", 2001) | 1;
    const auto efs = c.integers("eigenfunctions", {});
    AngularOptions opt;
    opt.mu_tol = c.number("mu_tol", opt.mu_tol);
    positive(opt.mu_tol, "mu_tol");
    if (l_max < 1) throw ConfigError("l_max must be >= 1");
    std::ostringstream os;
    os << "k,l,lambda,mu,residual\n";
    for (double lam : lams)
        for (double k : ks) {
            const AngularProblem pb = angular_problem(p, lam, k);
            const auto mus = angular_eigenvalues(pb, l_max, opt);
            for (int l = 1; l <= l_max; ++l) {
                const double res = prufer_mismatch(pb, mus[l - 1], opt) - (l - 1) * M_PI;
                os << fmt(k) << ',' << l << ',' << fmt(lam) << ',' << fmt(mus[l - 1]) << ',' << fmt(std::abs(res)) << '\n';
            }
            for (int l : efs) {
                if (l < 1) throw ConfigError("eigenfunction index must be >= 1");
                const double mu = l <= l_max ? mus[l - 1] : angular_eigenvalue(pb, l, opt);
                const AngularEigenpair ev = angular_eigenfunction(pb, l, mu, n_theta, opt);
                std::ostringstream es;
                es << "theta,Re(u1),Im(u1),Re(u2),Im(u2)\n";
                for (std::size_t i = 0; i < ev.theta.size(); ++i)
                    es << fmt(ev.theta[i]) << ',' << fmt(ev.u1[i].real()) << ',' << fmt(ev.u1[i].imag()) << ','
                       << fmt(ev.u2[i].real()) << ',' << fmt(ev.u2[i].imag()) << '\n';
                write_file(out / ("eigenfunction_k" + tag(k) + "_l" + std::to_string(l) + "_lambda" + tag(lam) + ".csv"),
                           es.str());
            }
        }
    write_file(out / "angular.csv", os.str());
}

void cmd_scatter(const KeyValueConfig& c, const std::filesystem::path& out) {
    c.require_known(with(param_keys(), {"lambda", "k", "z", "z_im", "method", "profile_points", "series_tol"}));
    const BlackHoleParams p = params_from_config(c);
    const Geometry g = admissible(p);
    const auto lams = c.numbers("lambda", {0.3});
    const auto ks = c.numbers("k", {0.5});
    const auto zr = c.numbers("z", {0.5, 1, 2, 4, 8});
    const auto zi = c.numbers("z_im", std::vector<double>(zr.size(), 0.0));
    if (zi.size() != zr.size()) throw ConfigError("z_im must have the same length as z");
    const std::string method = c.text("method", "ode");
    if (method != "ode" && method != "series") throw ConfigError("method must be ode or series");
    const double tol = c.number("series_tol", 1e-15);
    positive(tol, "series_tol");
    struct Job {
        double lam, k;
        cplx z;
    };
    std::vector<Job> jobs;
    for (double lam : lams)
        for (double k : ks)
            for (std::size_t i = 0; i < zr.size(); ++i) jobs.push_back({lam, k, cplx(zr[i], zi[i])});
    std::vector<ScatteringRecord> recs(jobs.size());
    std::vector<TransferMatrix> als(jobs.size());
    std::map<double, RadialProfile> profiles;
    if (method == "series") {
        const auto xr = default_x_range(g, 1e-13);
        const int n = c.integer("profile_points", 20001) | 1;
        for (double k : ks) profiles[k] = build_radial_profile(g, k, xr[0], xr[1], static_cast<std::size_t>(n));
    }
    const OdeOptions o = default_ode_options(g);
    parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& j = jobs[i];
        ScatteringRecord r;
        if (method == "ode") {
            const JostData J = jost_from_ode(g, j.k, j.lam, j.z, o);
            als[i] = J.AL;
        } else {
            const double zA = std::abs(j.z) * g.A_total();
            if (zA > kSeriesCap) throw DomainError("series path limited to |z| A <= 30");
            const ALSeries s = al_series(profiles.at(j.k), j.lam, series_terms_for(zA, tol));
            als[i] = s.evaluate(j.z);
        }
        r.lambda = j.lam;
        r.k = j.k;
        r.z = j.z;
        r.hat = scattering_hat(als[i]);
        r.phys = scattering_physical(r.hat, g.beta(j.k), p.K);
        r.c0 = p.c0;
        r.K = p.K;
        r.method = method == "ode" ? JostMethod::ode : JostMethod::series;
        recs[i] = r;
    });
    std::ostringstream os;
    os << "lambda,k,z_re,z_im,T_re,T_im,R_re,R_im,L_re,L_im,method\n";
    nlohmann::ordered_json al = nlohmann::ordered_json::array();
    double defect = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        os << fmt(r.lambda) << ',' << fmt(r.k) << ',' << fmt(r.z.real()) << ',' << fmt(r.z.imag()) << ','
           << fmt(r.phys.T.real()) << ',' << fmt(r.phys.T.imag()) << ',' << fmt(r.phys.R.real()) << ','
           << fmt(r.phys.R.imag()) << ',' << fmt(r.phys.L.real()) << ',' << fmt(r.phys.L.imag()) << ','
           << method_name(r.method) << '\n';
        if (r.z.imag() == 0) defect = std::max(defect, unitarity_defect(r.phys));
        nlohmann::ordered_json e;
        e["lambda"] = r.lambda;
        e["k"] = r.k;
        e["z"] = {r.z.real(), r.z.imag()};
        e["log_scale"] = als[i].log_scale;
        nlohmann::ordered_json m = nlohmann::ordered_json::array();
        for (const cplx& v : als[i].mant) m.push_back({v.real(), v.imag()});
        e["mantissa"] = m;
        al.push_back(e);
    }
    write_file(out / "scatter.csv", os.str());
    write_file(out / "al.json", al.dump(1) + "\n");
    nlohmann::ordered_json s;
    s["samples"] = recs.size();
    s["max_unitarity_defect_real_z"] = defect;
    write_file(out / "scatter_summary.json", s.dump(2) + "\n");
}

void cmd_asymptotics(const KeyValueConfig& c, const std::filesystem::path& out) {
    c.require_known(with(param_keys(), {"lambda", "k", "zA_min", "zA_max", "z_count"}));
    const BlackHoleParams p = params_from_config(c);
    const Geometry g = admissible(p);
    const double lam = c.number("lambda", 0.3);
    const auto ks = c.numbers("k", {0.5, 1.5});
    const double lo = c.number("zA_min", 30), hi = c.number("zA_max", 60);
    const int n = c.integer("z_count", 16);
    positive(lo, "zA_min");
    if (!(hi > lo) || n < 2) throw ConfigError("need zA_max > zA_min and z_count >= 2");
    for (double k : ks) {
        const AsymptoticDataset d = asymptotic_dataset(g, lam, k, lo, hi, n);
        const AsymptoticModel m = asymptotic_model(g, lam, k);
        std::ostringstream os;
        os << "z,|T|,argT,|R|,argR,|L|,argL,pred_|T|,pred_argT,pred_|R|,pred_argR,pred_|L|,pred_argL\n";
        for (const auto& s : d.samples) {
            const ScatteringPhys pr = predict_scattering_asymptotics(m, s.z);
            const double pred_logT = std::log(std::abs(m.pref_T)) - s.z * m.A_total;
            os << fmt(s.z) << ',' << fmt(std::exp(s.log_abs_T)) << ',' << fmt(std::remainder(s.arg_T, 2 * M_PI)) << ','
               << fmt(std::abs(s.R)) << ',' << fmt(std::arg(s.R)) << ',' << fmt(std::abs(s.L)) << ','
               << fmt(std::arg(s.L)) << ',' << fmt(std::exp(pred_logT)) << ',' << fmt(std::arg(pr.T)) << ','
               << fmt(std::abs(pr.R)) << ',' << fmt(std::arg(pr.R)) << ',' << fmt(std::abs(pr.L)) << ','
               << fmt(std::arg(pr.L)) << '\n';
        }
        write_file(out / ("asymptotics_k" + tag(k) + ".csv"), os.str());
    }
}

void cmd_inverse(const KeyValueConfig& c, const std::filesystem::path& out, std::optional<unsigned> seed) {
    c.require_known(with(param_keys(), {"lambda1", "lambda2", "k1", "k2", "zA_min", "zA_max", "z_count",
                                        "n_corr", "noise_sigma", "profile_points"}));
    const BlackHoleParams p = params_from_config(c);
    admissible(p);
    InverseOptions o;
    o.lambda = {c.number("lambda1", o.lambda[0]), c.number("lambda2", o.lambda[1])};
    o.k = {c.number("k1", o.k[0]), c.number("k2", o.k[1])};
    o.zA_lo = c.number("zA_min", o.zA_lo);
    o.zA_hi = c.number("zA_max", o.zA_hi);
    o.n_z = c.integer("z_count", o.n_z);
    o.n_corr = c.integer("n_corr", o.n_corr);
    o.noise_sigma = c.number("noise_sigma", 0.0);
    o.profile_points = c.integer("profile_points", o.profile_points);
    if (o.noise_sigma < 0) throw ConfigError("noise_sigma must be >= 0");
    if (o.noise_sigma > 0 && !seed) throw ConfigError("noise_sigma > 0 requires --seed");
    if (seed) o.seed = *seed;
    const InverseReport rep = run_inverse(p, o);
    write_file(out / "inverse.json", rep.to_json());
    write_file(out / "inverse.csv", rep.to_csv());
}

void cmd_compare(const KeyValueConfig& c, const std::filesystem::path& out) {
    auto keys = with(param_keys(), param_keys("2"));
    c.require_known(with(keys, {"lambda", "k", "l", "tol"}));
    const BlackHoleParams p1 = params_from_config(c);
    BlackHoleParams p2 = p1;
    // second set defaults to the first, key by key
    p2.M = c.number("M2", p1.M);
    p2.Q = c.number("Q2", p1.Q);
    p2.a = c.number("a2", p1.a);
    p2.Lambda = c.number("Lambda2", p1.Lambda);
    p2.q = c.number("q2", p1.q);
    p2.c0 = c.number("c02", p1.c0);
    p2.K = c.number("K2", p1.K);
    admissible(p1);
    admissible(p2);
    const double lam = c.number("lambda", 0.3), tol = c.number("tol", 1e-4);
    positive(tol, "tol");
    const auto ks = c.numbers("k", {0.5, 1.5});
    const auto ls = c.integers("l", {1, 2, 3});
    const CompareResult r = compare_blackholes(p1, p2, lam, ks, ls, tol);
    nlohmann::ordered_json j;
    j["verdict"] = r.distinguishable ? "distinguishable" : "indistinguishable";
    j["tol"] = tol;
    j["mismatch"] = r.mismatch;
    j["c_align"] = r.c_align;
    write_file(out / "compare.json", j.dump(2) + "\n");
}

}  // namespace

int run(const RunConfig& rc) {
    try {
        std::filesystem::create_directories(rc.out_dir);
        const std::filesystem::path out(rc.out_dir);
        if (rc.command == "geometry")
            cmd_geometry(rc.values, out);
        else if (rc.command == "angular")
            cmd_angular(rc.values, out);
        else if (rc.command == "scatter")
            cmd_scatter(rc.values, out);
        else if (rc.command == "asymptotics")
            cmd_asymptotics(rc.values, out);
        else if (rc.command == "inverse")
            cmd_inverse(rc.values, out, rc.seed);
        else if (rc.command == "compare")
            cmd_compare(rc.values, out);
        else
            throw ConfigError("unknown command '" + rc.command + "'");
    } catch (const ConfigError& e) {
        std::cerr << "error=config reason=\"" << e.what() << "\"\n";
        return 2;
    } catch (const InadmissibleError& e) {
        std::cerr << "error=inadmissible reason=\"" << e.what() << "\"\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error=config reason=\"" << e.what() << "\"\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error=numerical reason=\"" << e.what() << "\"\n";
        return 4;
    }
    return 0;
}

}  // namespace knds
