// Restarted GMRES for matrix-free complex linear operators.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace cgoscat {

struct KrylovResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    std::vector<double> residual_history;  // relative residual per iteration
};

// Solves op(x) = rhs with GMRES(restart), modified Gram-Schmidt + Givens
// rotations. x carries the initial guess on entry and the solution on exit.
// Convergence is ||rhs - op(x)|| <= tol * ||rhs||.
inline KrylovResult gmres(
    const std::function<void(const std::vector<std::complex<double>>&,
                             std::vector<std::complex<double>>&)>& op,
    const std::vector<std::complex<double>>& rhs, std::vector<std::complex<double>>& x,
    double tol, int max_iter, int restart = 50) {
    using C = std::complex<double>;
    const std::size_t n = rhs.size();
    auto cdot = [&](const std::vector<C>& a, const std::vector<C>& b) {
        C s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
        return s;
    };
    auto nrm = [&](const std::vector<C>& a) { return std::sqrt(std::abs(cdot(a, a))); };

    KrylovResult res;
    double rhs_norm = nrm(rhs);
    if (rhs_norm == 0.0) {
        x.assign(n, C(0.0));
        res.converged = true;
        return res;
    }

    std::vector<C> r(n), w(n);
    int total_iters = 0;
    while (total_iters < max_iter) {
        op(x, w);
        for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - w[i];
        double beta = nrm(r);
        res.relative_residual = beta / rhs_norm;
        if (res.relative_residual <= tol) {
            res.converged = true;
            return res;
        }

        int m = std::min(restart, max_iter - total_iters);
        std::vector<std::vector<C>> V;
        V.reserve(m + 1);
        V.push_back(r);
        for (auto& v : V[0]) v /= beta;
        // Hessenberg in Givens-rotated form.
        std::vector<std::vector<C>> H(m + 1, std::vector<C>(m, 0.0));
        std::vector<C> cs(m), sn(m), g(m + 1, 0.0);
        g[0] = beta;

        int k = 0;
        for (; k < m; ++k) {
            op(V[k], w);
            for (int i = 0; i <= k; ++i) {
                H[i][k] = cdot(V[i], w);
                for (std::size_t s = 0; s < n; ++s) w[s] -= H[i][k] * V[i][s];
            }
            const double hraw = nrm(w);
            H[k + 1][k] = hraw;
            for (int i = 0; i < k; ++i) {
                C t = std::conj(cs[i]) * H[i][k] + std::conj(sn[i]) * H[i + 1][k];
                H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
                H[i][k] = t;
            }
            double denom = std::sqrt(std::norm(H[k][k]) + std::norm(H[k + 1][k]));
            if (denom == 0.0) {
                cs[k] = 1.0;
                sn[k] = 0.0;
            } else {
                cs[k] = H[k][k] / denom;
                sn[k] = H[k + 1][k] / denom;
            }
            H[k][k] = std::conj(cs[k]) * H[k][k] + std::conj(sn[k]) * H[k + 1][k];
            H[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = std::conj(cs[k]) * g[k];

            ++total_iters;
            double rel = std::abs(g[k + 1]) / rhs_norm;
            res.residual_history.push_back(rel);
            res.relative_residual = rel;
            if (rel <= tol || total_iters >= max_iter || hraw == 0.0) {
                ++k;
                break;
            }
            std::vector<C> vnext = w;
            for (auto& v : vnext) v /= hraw;
            V.push_back(std::move(vnext));
        }

        // Back substitution for the k-dimensional least-squares solution.
        std::vector<C> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            C s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
            y[i] = s / H[i][i];
        }
        for (int i = 0; i < k; ++i)
            for (std::size_t s = 0; s < n; ++s) x[s] += y[i] * V[i][s];

        res.iterations = total_iters;
        if (res.relative_residual <= tol) {
            // Confirm with a true residual at the restart boundary.
            op(x, w);
            double tr = 0.0;
            for (std::size_t i = 0; i < n; ++i) tr += std::norm(rhs[i] - w[i]);
            res.relative_residual = std::sqrt(tr) / rhs_norm;
            if (res.relative_residual <= tol) {
                res.converged = true;
                return res;
            }
        }
    }
    res.iterations = total_iters;
    return res;
}

}  // namespace cgoscat
