// Complex geometrical optics solutions u_rho = exp(i rho.x)(1 + v_rho):
// the operator K_rho = (2A.D_rho + Vtilde) G_rho, the matrix-free solve of
// (I + K_rho) w = -2A.rho - Vtilde, and the asymptotic split
// 1 + v_rho = a_rho + r_rho with a_rho = exp(i chi_rho phi#).
#pragma once

#include <stdexcept>
#include <vector>

#include "cgoscat/coeffs.hpp"
#include "cgoscat/faddeev.hpp"
#include "cgoscat/grid.hpp"

namespace cgoscat {

struct CgoOptions {
    double tol = 1e-8;
    int max_iter = 400;
    int restart = 50;
    double delta = -0.6;          // weight exponent for reported norms
    double theta = 0.1;           // cutoff scaling chi_rho(x) = chi(h^theta x / R0)
    double sigma0 = 0.25;         // mollifier exponent for A#
    double cutoff_radius = 0.0;   // R0; 0 means half_width / 2
    bool with_asymptotics = true; // build a_rho, r_rho via phi# (needs an axis frame)
};

struct CgoSolution {
    ComplexFrequency rho;
    ScalarField v;  // remainder v_rho
    ScalarField a;  // a_rho = exp(i chi_rho phi#); identically 1 when the
                    // frame is not grid-axis aligned (see asymptotics_built)
    ScalarField r;  // r_rho = 1 - a_rho + v_rho
    bool asymptotics_built = false;

    int iterations = 0;
    double residual = 0.0;  // final relative GMRES residual
    std::vector<double> residual_history;
    double rhs_norm = 0.0;            // ||2A.rho + Vtilde||_2
    double min_symbol_modulus = 0.0;  // G_rho multiplier diagnostic

    double norm_v = 0.0;        // ||v||_{L2_delta}
    double norm_r = 0.0;        // ||r||_{L2_delta}
    double norm_hgrad_r = 0.0;  // h ||grad r||_{L2_delta}
    double delta = 0.0;
};

class CgoDivergenceError : public std::runtime_error {
  public:
    CgoDivergenceError(const std::string& msg, std::vector<double> history)
        : std::runtime_error(msg), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

// (2A.(D + rho) + Vtilde) G_rho w, spectral derivatives in the shifted basis.
ScalarField apply_K_rho(const ScalarField& w, const CoefficientSet& coeffs,
                        const ComplexFrequency& rho);

// Right-hand side -2A.rho - Vtilde of the conjugated equation.
ScalarField cgo_rhs(const CoefficientSet& coeffs, const ComplexFrequency& rho);

CgoSolution solve_cgo(const CoefficientSet& coeffs, const ComplexFrequency& rho,
                      const CgoOptions& opts = {});

// Independent residual of the conjugated equation on a returned solution:
// ||(P_rho + 2A.D_rho + Vtilde)(1 + v)||_2 / ||2A.rho + Vtilde||_2.
double conjugated_residual(const CgoSolution& sol, const CoefficientSet& coeffs);

// (2A.(D + rho) + Vtilde)(1 + v) for a returned solution; the source whose
// pairing against a second solution forms I(t).
ScalarField conjugated_source(const CgoSolution& sol, const CoefficientSet& coeffs);

}  // namespace cgoscat
