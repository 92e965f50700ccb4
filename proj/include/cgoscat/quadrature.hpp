// Gauss-Legendre rules and small fitting helpers shared across modules.
#pragma once

#include <utility>
#include <vector>

namespace cgoscat {

struct QuadratureRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule (Newton iteration on Legendre polynomials).
QuadratureRule gauss_legendre(int n);

// Rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Least-squares line y = a + b x; returns (a, b).
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cgoscat
