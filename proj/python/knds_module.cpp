#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "knds/angular.hpp"
#include "knds/asymptotics.hpp"
#include "knds/errors.hpp"
#include "knds/geometry.hpp"
#include "knds/inverse.hpp"
#include "knds/radial.hpp"

namespace py = pybind11;
using namespace knds;

PYBIND11_MODULE(_knds, m) {
    m.doc() = "Dirac scattering on Kerr-Newman-de Sitter exteriors";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InadmissibleError>(m, "InadmissibleError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<BlackHoleParams>(m, "BlackHoleParams")
        .def(py::init([](double M, double Q, double a, double Lambda, double q, double c0, double K) {
                 return BlackHoleParams{M, Q, a, Lambda, q, c0, K};
             }),
             py::arg("M") = 1.0, py::arg("Q") = 0.2, py::arg("a") = 0.2, py::arg("Lambda") = 0.02,
             py::arg("q") = 0.5, py::arg("c0") = 0.0, py::arg("K") = 0.0)
        .def_readwrite("M", &BlackHoleParams::M)
        .def_readwrite("Q", &BlackHoleParams::Q)
        .def_readwrite("a", &BlackHoleParams::a)
        .def_readwrite("Lambda", &BlackHoleParams::Lambda)
        .def_readwrite("q", &BlackHoleParams::q)
        .def_readwrite("c0", &BlackHoleParams::c0)
        .def_readwrite("K", &BlackHoleParams::K)
        .def("__repr__", [](const BlackHoleParams& p) {
            return "BlackHoleParams(M=" + std::to_string(p.M) + ", Q=" + std::to_string(p.Q) +
                   ", a=" + std::to_string(p.a) + ", Lambda=" + std::to_string(p.Lambda) +
                   ", q=" + std::to_string(p.q) + ", c0=" + std::to_string(p.c0) + ", K=" + std::to_string(p.K) + ")";
        });

    m.def("reference_params", &reference_params);
    m.def("validate_params", [](const BlackHoleParams& p) {
        const Verdict v = validate_params(p);
        return py::make_tuple(v.accepted, v.reason);
    });

    py::class_<Geometry>(m, "Geometry")
        .def(py::init<const BlackHoleParams&>())
        .def_property_readonly("r_minus", [](const Geometry& g) { return g.horizons().r_minus; })
        .def_property_readonly("r_plus", [](const Geometry& g) { return g.horizons().r_plus; })
        .def_property_readonly("kappa_minus", [](const Geometry& g) { return g.horizons().kappa_minus; })
        .def_property_readonly("kappa_plus", [](const Geometry& g) { return g.horizons().kappa_plus; })
        .def_property_readonly("A_total", &Geometry::A_total)
        .def("omega_minus", &Geometry::omega_minus, py::arg("k"))
        .def("omega_plus", &Geometry::omega_plus, py::arg("k"))
        .def("r_of_x", &Geometry::r_of_x, py::arg("x"))
        .def("x_of_r", &Geometry::x_of_r, py::arg("r"));

    m.def(
        "angular_eigenvalues",
        [](const BlackHoleParams& p, double lambda, double k, int l_max) {
            return angular_eigenvalues(lambda, k, l_max, p);
        },
        py::arg("params"), py::arg("lambda_"), py::arg("k"), py::arg("l_max"),
        "The l_max smallest positive eigenvalues mu_kl(lambda).");

    m.def(
        "scatter",
        [](const Geometry& g, double lambda, double k, cplx z) {
            ScatteringRecord r;
            {
                py::gil_scoped_release nogil;
                r = scatter(g, k, lambda, z);
            }
            py::dict d;
            d["T"] = r.phys.T;
            d["R"] = r.phys.R;
            d["L"] = r.phys.L;
            d["unitarity_defect"] = unitarity_defect(r.phys);
            return d;
        },
        py::arg("geometry"), py::arg("lambda_"), py::arg("k"), py::arg("z"),
        "Physical transmission and reflection coefficients at one (lambda, k, z).");

    m.def(
        "transfer_matrix",
        [](const Geometry& g, double lambda, double k, cplx z) {
            TransferMatrix al;
            {
                py::gil_scoped_release nogil;
                al = jost_from_ode(g, k, lambda, z, default_ode_options(g)).AL;
            }
            return py::make_tuple(std::vector<cplx>(al.mant.begin(), al.mant.end()), al.log_scale);
        },
        py::arg("geometry"), py::arg("lambda_"), py::arg("k"), py::arg("z"),
        "A_L as (mantissa [a1, a2, a3, a4], log_scale); entries are mantissa * exp(log_scale).");

    m.def(
        "asymptotic_model",
        [](const Geometry& g, double lambda, double k) {
            const AsymptoticModel a = asymptotic_model(g, lambda, k);
            py::dict d;
            d["rho_minus"] = a.rho_minus;
            d["rho_plus"] = a.rho_plus;
            d["abs_T_pref"] = a.abs_T_pref;
            d["pref_T"] = a.pref_T;
            d["pref_R"] = a.pref_R;
            d["pref_L"] = a.pref_L;
            d["first_order_coefficient"] = first_order_coefficient(g, lambda, k);
            return d;
        },
        py::arg("geometry"), py::arg("lambda_"), py::arg("k"));

    m.def(
        "run_inverse",
        [](const BlackHoleParams& p, double zA_lo, double zA_hi, int n_z, double noise_sigma, unsigned seed) {
            InverseOptions o;
            o.zA_lo = zA_lo;
            o.zA_hi = zA_hi;
            o.n_z = n_z;
            o.noise_sigma = noise_sigma;
            o.seed = seed;
            py::gil_scoped_release nogil;
            return run_inverse(p, o).to_json();
        },
        py::arg("params"), py::arg("zA_lo") = 100.0, py::arg("zA_hi") = 1000.0, py::arg("n_z") = 48,
        py::arg("noise_sigma") = 0.0, py::arg("seed") = 0u);

    m.def(
        "compare_blackholes",
        [](const BlackHoleParams& p1, const BlackHoleParams& p2, double lambda, const std::vector<double>& ks,
           const std::vector<int>& ls, double tol) {
            CompareResult r;
            {
                py::gil_scoped_release nogil;
                r = compare_blackholes(p1, p2, lambda, ks, ls, tol);
            }
            py::dict d;
            d["distinguishable"] = r.distinguishable;
            d["mismatch"] = r.mismatch;
            d["c_align"] = r.c_align;
            return d;
        },
        py::arg("p1"), py::arg("p2"), py::arg("lambda_") = 0.3, py::arg("k_set") = std::vector<double>{0.5, 1.5},
        py::arg("l_set") = std::vector<int>{1, 2}, py::arg("tol") = 1e-4);
}
