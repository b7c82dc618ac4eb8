#pragma once

#include <functional>
#include <string>
#include <vector>

#include "knds/angular.hpp"
#include "knds/geometry.hpp"
#include "knds/radial.hpp"

namespace knds {

// One large-z observation. ln|T| is kept separately since T underflows for z A > 700.
struct AsymptoticSample {
    double z = 0;
    double log_abs_T = 0, arg_T = 0;
    cplx R, L;
};

struct AsymptoticDataset {
    double lambda = 0, k = 0.5;
    std::vector<AsymptoticSample> samples;
};

// Forward data on a geometric grid of n points with z A in [zA_lo, zA_hi].
AsymptoticDataset asymptotic_dataset(const Geometry& g, double lambda, double k, double zA_lo,
                                     double zA_hi, int n);
AsymptoticSample asymptotic_sample(const Geometry& g, double lambda, double k, double z,
                                   const OdeOptions* opt = nullptr);

struct FitResult {
    double value = 0;
    double residual = 0;  // rms residual relative to rms data
    std::vector<double> coeffs;
};

// Least squares of -ln|T| on {z, 1, z^-1, ..., z^-n_corr}; A is the z-coefficient.
FitResult fit_A_from_T(const AsymptoticDataset& d, int n_corr = 4, double max_residual = 1e-3);

struct HorizonExponents {
    double rho_plus = 0, rho_minus = 0;  // lambda_+/kappa_+ and lambda_-/kappa_-
    double residual_plus = 0, residual_minus = 0;
};

// arg R ~ 2 rho_+ ln z and arg L ~ -2 rho_- ln z, with z^-j nuisance terms.
HorizonExponents fit_horizon_exponents(const AsymptoticDataset& d, int n_corr = 4,
                                       double max_residual = 1e-3);

// Unwraps a phase sequence; throws DomainError when a raw increment exceeds max_jump.
std::vector<double> unwrap_phase(const std::vector<double>& raw, double max_jump = 0.9 * M_PI);

// Leading Frobenius data of the eigenfunction with the top component normalized to 1.
struct FrobeniusObservation {
    double k = 0.5, lambda = 0;
    double m = 0;   // (2k+1) |v1|, equal to mu / sqrt(1 + zeta)
    double v2 = 0;  // theta^{k+2} coefficient of the second component
};

FrobeniusObservation frobenius_observation(const AngularEigenpair& ev);

struct RotationEstimate {
    double a = 0, Lambda = 0, zeta = 0;
    double slope = 0, intercept = 0;
};

RotationEstimate recover_a_lambda(const FrobeniusObservation& o1, const FrobeniusObservation& o2);

// i times the z-derivative of a_L2 at 0, by Richardson extrapolation of a_L2(h)/h.
cplx recover_qhat(const std::function<cplx(double)>& al2, double h = 0.05);
cplx recover_qhat(const RadialProfile& prof, double lambda, double h = 0.05);
// Direct quadrature of int e^{-2 i lambda x} q(x) dx on the profile grid.
cplx qhat_direct(const RadialProfile& prof, double lambda);

struct PotentialReconstruction {
    std::vector<double> x;
    std::vector<cplx> q;          // reconstructed
    std::vector<cplx> q_profile;  // reference
    double l2_rel_error = 0;
};

// Inverse Fourier transform of recovered qhat over lambda in [-lam_max, lam_max].
PotentialReconstruction reconstruct_potential(const RadialProfile& prof, double lam_max = 3.0,
                                              int n_lambda = 1201);

struct HorizonRatios {
    std::array<double, 2> lambda{}, k{};
    // rho[i][j] at lambda[i], k[j]
    std::array<std::array<double, 2>, 2> rho_plus{}, rho_minus{};
};

struct ParameterEstimate {
    double kappa_minus = 0, kappa_plus = 0;
    double r_minus = 0, r_plus = 0;
    double Q = 0, Qsq = 0, M = 0;
    double consistency = 0;  // |Delta_r(r_-)| / scale with M from Delta_r(r_+) = 0
    double kappa_check = 0;  // relative mismatch of kappa_+- against Delta_r'/(2(r^2+a^2))
    double condition = 0;
};

ParameterEstimate recover_parameters(const HorizonRatios& h, double a, double Lambda, double q);

// Gauge shift c with q_data(x) = e^{i phi} q_model(x - c), from qhat ratios over a lambda grid.
double estimate_gauge_shift(const RadialProfile& data, const RadialProfile& model);

struct InverseOptions {
    std::array<double, 2> lambda{0.15, 0.3};
    std::array<double, 2> k{0.5, 1.5};
    double zA_lo = 100, zA_hi = 1000;
    int n_z = 48;
    int n_corr = 4;
    int profile_points = 20001;
    double noise_sigma = 0;  // Gaussian noise on Re/Im of R, L and on ln|T|
    unsigned seed = 0;
};

struct InverseReport {
    std::vector<std::string> inputs;
    double A_est = 0, kappa_minus_est = 0, kappa_plus_est = 0;
    double r_minus_est = 0, r_plus_est = 0, a_est = 0, Lambda_est = 0, M_est = 0, Qsq_est = 0;
    double c_est = 0;
    double consistency = 0;
    bool has_truth = false;
    BlackHoleParams truth;
    struct Row {
        std::string quantity;
        double estimate, truth, rel_error, residual;
    };
    std::vector<Row> rows;
    std::string to_json() const;
    std::string to_csv() const;
};

// Full loop: synthesize data from p, then recover everything from the data alone.
InverseReport run_inverse(const BlackHoleParams& p, const InverseOptions& opt = {});

struct CompareResult {
    bool distinguishable = false;
    double mismatch = 0;  // after gauge alignment
    double c_align = 0;   // c0(p1) - c0(p2) for a pure gauge pair
};

CompareResult compare_blackholes(const BlackHoleParams& p1, const BlackHoleParams& p2,
                                 double lambda, const std::vector<double>& k_set,
                                 const std::vector<int>& l_set, double tol);

}  // namespace knds
