#pragma once

#include <array>
#include <complex>
#include <vector>

#include "knds/geometry.hpp"

namespace knds {

// Row-major 2x2 complex matrix [m11, m12, m21, m22].
using Mat2 = std::array<cplx, 4>;

inline cplx det2(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

// Transfer matrix A_L = [[a1, a2], [a3, a4]] stored as mantissa * exp(log_scale).
struct TransferMatrix {
    Mat2 mant{cplx(1), cplx(0), cplx(0), cplx(1)};
    double log_scale = 0.0;

    // Entry j in 1..4; overflows to inf for very large log_scale.
    cplx entry(int j) const;
    double log_abs(int j) const;
};

enum class JostMethod { series, ode };
const char* method_name(JostMethod m);

// Jost matrices F_L, F_R of the q-gauge system at one x.
struct JostSample {
    double x = 0;
    Mat2 FL{}, FR{};
};

struct JostData {
    double lambda = 0, k = 0.5;
    cplx z = 0;
    JostMethod method = JostMethod::ode;
    TransferMatrix AL;
    std::vector<JostSample> samples;
};

struct OdeOptions {
    double x_min = 0, x_max = 0;
    double rtol = 1e-13, atol = 1e-14;
    std::vector<double> sample_x;  // where F_L and F_R are recorded
};

OdeOptions default_ode_options(const Geometry& g, double eps = 1e-13);

// Integrates the radial Dirac system from both tails and matches at the split point.
JostData jost_from_ode(const Geometry& g, double k, double lambda, cplx z, const OdeOptions& opt);

// z-independent power-series coefficients of A_L:
// a1 = sum c1[n] z^{2n}, a2 = sum c2[n] z^{2n+1}, a3 = sum c3[n] z^{2n+1}, a4 = sum c4[n] z^{2n}.
struct ALSeries {
    double lambda = 0, k = 0.5, A_total = 0;
    std::vector<cplx> c1, c2, c3, c4;
    TransferMatrix evaluate(cplx z) const;
};

ALSeries al_series(const RadialProfile& prof, double lambda, int n_terms);

// Number of terms for which the cosh-type tail bound falls below tol.
int series_terms_for(double zA, double tol);

constexpr double kSeriesCap = 30.0;  // largest |z| A_total accepted by the series path

struct FaddeevSeries {
    JostData jost;                   // method = series, AL from the quadrature formulas
    std::vector<Mat2> ML, MR;        // on the profile grid
};

// Full Volterra iteration at one z: Faddeev matrices on the grid and A_L.
FaddeevSeries faddeev_series(const RadialProfile& prof, double lambda, cplx z, int n_terms,
                             double tol);

struct ScatteringHat {
    cplx T = 1, R = 0, L = 0;
    bool pole = false;
};

ScatteringHat scattering_hat(const TransferMatrix& al);

struct ScatteringPhys {
    cplx T = 1, R = 0, L = 0;
};

ScatteringPhys scattering_physical(const ScatteringHat& hat, double beta_k, double K);

struct ScatteringRecord {
    double lambda = 0, k = 0.5;
    cplx z = 0;
    ScatteringHat hat;
    ScatteringPhys phys;
    double c0 = 0, K = 0;
    JostMethod method = JostMethod::ode;
};

// Forward scattering at one (lambda, k, z) via the ODE path.
ScatteringRecord scatter(const Geometry& g, double k, double lambda, cplx z,
                         const OdeOptions* opt = nullptr);

// Closed-form effect of the shift c0 -> c0 + c on physical coefficients.
ScatteringRecord rw_translation_covariance(const ScatteringRecord& rec, double c,
                                           double omega_minus, double omega_plus);

// |T|^2+|R|^2-1, |T|^2+|L|^2-1 and |T conj(R) + L conj(T)|, largest of the three.
double unitarity_defect(const ScatteringPhys& s);
double unitarity_defect(const ScatteringHat& s);

// Physical reduced matrix [[T, R], [L, T]] at z = mu_kl(lambda).
struct ReducedMatrix {
    double lambda = 0, k = 0.5, mu = 0;
    int l = 1;
    Mat2 S{};
};

ReducedMatrix reduced_matrix(const Geometry& g, double lambda, double k, int l);

}  // namespace knds
