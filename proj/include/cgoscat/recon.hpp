// Frequency-shell reconstruction: frames {xi, mu, nu}, the rho(t)/rho'(t)
// pairs, the pairing functional I(t), the nonlinear Fourier transform and its
// reduction to the linear one, and the recovery of (dA)^ and (V - V')^ on the
// shell 2 sqrt(lambda) < |xi| < 2 sqrt(lambda + gamma0^2/4).
#pragma once

#include <utility>
#include <vector>

#include "cgoscat/cgo.hpp"
#include "cgoscat/coeffs.hpp"
#include "cgoscat/faddeev.hpp"
#include "cgoscat/grid.hpp"

namespace cgoscat {

struct ReconFrame {
    Vec3 xi{}, mu{}, nu{};
    double lambda = 0.0, gamma0 = 0.0;
};

// Shell bounds (2 sqrt(lambda), 2 sqrt(lambda + gamma0^2/4)).
std::pair<double, double> shell_bounds(double lambda, double gamma0);

// Deterministic orthonormal completion of xi/|xi| (Gram-Schmidt against the
// axis most orthogonal to xi, lowest index on ties). Throws "off shell" when
// |xi| is outside the open shell.
ReconFrame make_frame(Vec3 xi, double lambda, double gamma0);

// In-plane reorientations of a frame (stay axis-aligned for axis frames).
ReconFrame swap_orientation(const ReconFrame& f);    // (mu, nu) -> (nu, mu)
ReconFrame rotate_quarter(const ReconFrame& f);      // (mu, nu) -> (nu, -mu)

// rho(t) = xi/2 + s mu + i t nu, rho'(t) = -xi/2 + s mu - i t nu with
// s = sqrt(t^2 + lambda - |xi|^2/4); both satisfy rho.rho = lambda. Requires
// t strictly above sqrt(|xi|^2/4 - lambda).
std::pair<ComplexFrequency, ComplexFrequency> rho_pair(double t, const ReconFrame& frame);

// I(t) = ((2A.(D+rho) + Vt)(1+v) | e^{-ix.xi}(1+v')) -
//        (e^{ix.xi}(1+v) | (2A'.(D+rho') + Vt')(1+v'))
// with v from set_a at rho(t) and v' from set_b at rho'(t).
Complex pairing_I(double t, const ReconFrame& frame, const CoefficientSet& set_a,
                  const CoefficientSet& set_b, const CgoOptions& opts = {});

struct PairingCurve {
    std::vector<double> t_values;
    std::vector<Complex> I_values;
    std::vector<Complex> I_over_t;
};

PairingCurve pairing_curve(const ReconFrame& frame, const CoefficientSet& set_a,
                           const CoefficientSet& set_b, const std::vector<double>& t_values,
                           const CgoOptions& opts = {});

// Nonlinear Fourier transform int e^{ix.xi} e^{i Phi} (mu+i nu).(A - A') dx
// with Phi the Cauchy phase of -(mu+i nu).(A - A').
Complex nft(const VectorField& A, const VectorField& Aprime, const ReconFrame& frame);

// The linear counterpart int e^{ix.xi} (mu+i nu).(A - A') dx.
Complex transverse_ft(const VectorField& A, const VectorField& Aprime, const ReconFrame& frame);

// ---------------------------------------------------------------------------
// Recovery tables
// ---------------------------------------------------------------------------

struct ShellRow {
    Vec3 xi{};
    int component = 0;  // dA components (1,2), (1,3), (2,3); 0 for V rows
    Complex recovered{}, reference{};
    double rel_err = 0.0;
};

// Recovers (dA)^ on the shell from the two frame orientations per xi:
// m1 with (mu, nu) and m2 with (nu, mu) give the transverse components
// mu.T = (m1 - i m2)/2, nu.T = (m2 - i m1)/2 of T(xi) = int e^{ix.xi} A dx,
// and (dA)^_jk = -i (xi_j T_k - xi_k T_j) (longitudinal part cancels).
// Reference from direct Fourier quadrature of A. Three rows per sample.
std::vector<ShellRow> recover_dA(const CoefficientSet& coeffs, double lambda, double gamma0,
                                 const std::vector<Vec3>& shell_samples, int threads = 0);

struct VRecoveryRow {
    Vec3 xi{};
    Complex recovered{}, reference{};
    double rel_err = 0.0;
    double extrapolation_residual = 0.0;  // spread of the Richardson levels
};

// Recovers (V - V')^ on the shell for two sets sharing the same A, by
// Richardson extrapolation of J(t) = int (V-V') e^{ix.xi} (1+v)(1+v')* dx
// over a t-doubling sweep {t0, 2 t0, 4 t0}.
std::vector<VRecoveryRow> recover_V(const CoefficientSet& set_a, const CoefficientSet& set_b,
                                    double lambda, const std::vector<Vec3>& shell_samples,
                                    const std::vector<double>& t_sweep,
                                    const CgoOptions& opts = {}, int threads = 0);

// Axis-aligned-frame-compatible shell sampling: n_radii radii strictly inside
// the shell times the six signed coordinate directions.
std::vector<Vec3> default_shell_samples(double lambda, double gamma0, int n_radii);

}  // namespace cgoscat
