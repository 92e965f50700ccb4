// Direct scattering at fixed energy lambda: outgoing free resolvent as a
// truncated-kernel FFT convolution, Herglotz/Poisson waves, the
// Lippmann-Schwinger solve in scattered-field form, far-field extraction,
// the sampled scattering matrix Sigma_lambda, and the Green-identity
// boundary pairing.
#pragma once

#include <vector>

#include "cgoscat/coeffs.hpp"
#include "cgoscat/grid.hpp"

namespace cgoscat {

// ---------------------------------------------------------------------------
// Sphere quadrature (tensor Gauss-Legendre polar x uniform azimuth)
// ---------------------------------------------------------------------------

struct SphereGrid {
    double lambda = 0.0;
    int n_polar = 0, n_azimuth = 0;
    std::vector<Vec3> directions;  // unit vectors theta_q
    std::vector<double> weights;   // sum to 4 pi

    int size() const { return static_cast<int>(directions.size()); }
    // Node index of -theta_q (exact for even azimuth counts).
    int antipode(int q) const;
};

// Requires n_polar >= 1 and even n_azimuth >= 2.
SphereGrid make_sphere_grid(double lambda, int n_polar, int n_azimuth);

// c_lambda for n = 3; the (n-3)/2 exponent collapses the lambda dependence.
inline double c_lambda_constant() { return 1.0 / (4.0 * M_PI); }

// ---------------------------------------------------------------------------
// Free resolvent and Herglotz waves
// ---------------------------------------------------------------------------

// R0(lambda + i0) f: convolution with exp(i sqrt(lambda)|y|) / (4 pi |y|)
// truncated at the padded half-period, zero-padding factor 2, applied through
// the closed-form spectrum of the truncated kernel.
ScalarField apply_R0_out(const ScalarField& f, double lambda);

// Interior residual ||(-Delta - lambda) u - f|| / ||f|| over |x| <= frac*L,
// with a 4th-order finite-difference Laplacian (local stencils, so the
// periodic wrap of the non-decaying wave does not pollute the measure).
double r0_equation_residual(const ScalarField& u, const ScalarField& f, double lambda,
                            double interior_fraction = 0.7);

// P0(lambda) g = i (2 pi)^{1-n} int exp(i x.xi) g dS_lambda / (2 sqrt(lambda));
// for n = 3 this is (i sqrt(lambda) / 8 pi^2) sum_q w_q g_q exp(i sqrt(lambda)
// theta_q . x). Gradient is assembled analytically from the same sum.
ScalarField herglotz(const std::vector<Complex>& g, const SphereGrid& sphere, const Grid& grid);
FieldWithGradient herglotz_with_gradient(const std::vector<Complex>& g, const SphereGrid& sphere,
                                         const Grid& grid);

// V(x,D) u = 2A.Du + Vtilde u with a caller-supplied gradient of u.
ScalarField multiply_potential(const CoefficientSet& coeffs, const ScalarField& u,
                               const VectorField& grad_u);

// ---------------------------------------------------------------------------
// Lippmann-Schwinger solve and far fields
// ---------------------------------------------------------------------------

struct ScatterOptions {
    double tol = 1e-8;
    int max_iter = 300;
    int restart = 50;
};

struct ScatteringSolution {
    SphereGrid sphere;
    std::vector<Complex> density;  // incident density g
    ScalarField incident;          // P0(lambda) g
    VectorField incident_grad;     // analytic gradient of the incident wave
    ScalarField scattered;         // u_sc = u - P0 g
    ScalarField u;                 // total wave
    double lambda = 0.0;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
};

// Solves u = P0 g - R0(lambda+i0) V(x,D) u, matrix-free GMRES on the
// scattered part. Throws on non-convergence with the residual history.
ScatteringSolution solve_scattering(const CoefficientSet& coeffs, double lambda,
                                    const std::vector<Complex>& g, const SphereGrid& sphere,
                                    const ScatterOptions& opts = {});

struct FarFieldData {
    SphereGrid sphere;
    std::vector<Complex> outgoing;  // g_plus(theta_q)
    std::vector<Complex> incoming;  // g_minus(theta_q)
    double c_lambda = 0.0;
};

struct FarFieldResult {
    FarFieldData data;
    std::vector<Complex> sigma_g;  // (Sigma_lambda g) samples
};

// (Sigma_lambda g)(sqrt(lambda) theta) = g(theta) - (V(x,D)u)^(sqrt(lambda)
// theta), Fourier transform by direct quadrature per direction.
FarFieldResult far_field(const ScatteringSolution& sol, const CoefficientSet& coeffs);

// ---------------------------------------------------------------------------
// Scattering matrix
// ---------------------------------------------------------------------------

struct ScatteringMatrixSamples {
    SphereGrid sphere;
    std::vector<std::vector<Complex>> matrix;  // S[p][q], sample basis
    double unitarity_defect = 0.0;  // ||B^H B - I||_2, B = W^{1/2} S W^{-1/2},
                                    // W the dS_lambda / 2 sqrt(lambda) weights
};

// Columns assembled from per-node unit densities (each column is one
// Lippmann-Schwinger solve); requires a sphere of at least 6 x 12 nodes.
ScatteringMatrixSamples sigma_matrix(const CoefficientSet& coeffs, double lambda,
                                     const SphereGrid& sphere, const ScatterOptions& opts = {},
                                     int threads = 0);

double unitarity_defect(const ScatteringMatrixSamples& s);

// ---------------------------------------------------------------------------
// Boundary pairing (Green identity at infinity)
// ---------------------------------------------------------------------------

struct PairingWave {
    ScalarField u;
    ScalarField h0u;  // (H0 - lambda) u, known analytically for each builder
    std::vector<Complex> g_plus, g_minus;  // r^{-1} exp(+-i sqrt(lambda) r) amplitudes
};

PairingWave herglotz_pairing_wave(const std::vector<Complex>& g, const SphereGrid& sphere,
                                  const Grid& grid);
PairingWave outgoing_pairing_wave(const ScalarField& f, double lambda, const SphereGrid& sphere);

struct PairingCheck {
    Complex volume_side;  // (u|(H0-l)v) - ((H0-l)u|v) over |x| < R
    Complex sphere_side;  // 2 i sqrt(lambda) [ (g+|h+) - (g-|h-) ]
    double discrepancy;   // |volume - sphere|
};

PairingCheck boundary_pairing_check(const PairingWave& u, const PairingWave& v,
                                    const SphereGrid& sphere, double lambda, double radius);

}  // namespace cgoscat
