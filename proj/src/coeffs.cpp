#include "cgoscat/coeffs.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cgoscat/fft.hpp"
#include "cgoscat/quadrature.hpp"

namespace cgoscat {

namespace {

double gaussian(Vec3 x, Vec3 c, double w) {
    Vec3 d = x - c;
    return std::exp(-dot(d, d) / (2.0 * w * w));
}

Vec3 gaussian_grad(Vec3 x, Vec3 c, double w) {
    double g = gaussian(x, c, w);
    return (-g / (w * w)) * (x - c);
}

// Records the decay constant and boundary leakage of the generated samples.
void audit_decay(CoefficientSet& cs) {
    const Grid& g = cs.A.grid;
    const int n = g.n_per_axis;
    double c_req = 0.0, peak = 0.0, boundary = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Vec3 x = g.point(i, j, k);
                double mag = std::abs(cs.V.at(i, j, k));
                for (int c = 0; c < 3; ++c) mag = std::max(mag, std::abs(cs.A[c].at(i, j, k)));
                peak = std::max(peak, mag);
                c_req = std::max(c_req, mag * std::exp(cs.gamma0 * jbracket(x)));
                if (i == 0 || j == 0 || k == 0) boundary = std::max(boundary, mag);
            }
    cs.decay_constant = c_req;
    cs.boundary_warning = peak > 0.0 && boundary > 1e-8 * peak;
}

}  // namespace

CoefficientSet make_test_coefficients(const Grid& grid, double gamma0, const GeneratorSpec& spec) {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("make_test_coefficients: gamma0 > 0 required");
    if (!std::isfinite(spec.a_amplitude) || !std::isfinite(spec.v_amplitude) ||
        !(spec.width > 0.0) || !(spec.width_v > 0.0))
        throw std::invalid_argument("make_test_coefficients: bad generator parameters");

    CoefficientSet cs;
    cs.A = VectorField(grid);
    cs.V = ScalarField(grid);
    cs.gamma0 = gamma0;

    const int n = grid.n_per_axis;
    const double w = spec.width;
    // Deterministic off-center placements so "gaussian" exercises generic
    // (nonzero curl and divergence) configurations.
    const Vec3 c0 = spec.center;
    const std::array<Vec3, 3> ca = {c0 + 0.5 * w * Vec3{0, 1, 0}, c0 + 0.5 * w * Vec3{0, 0, 1},
                                    c0 + 0.5 * w * Vec3{1, 0, 0}};
    // Vector potential for the solenoidal kind, A = curl(Psi).
    const std::array<Vec3, 3> cpsi = {c0 + 0.4 * w * Vec3{1, 0, 0}, c0 + 0.4 * w * Vec3{0, 1, 0},
                                      c0 - 0.3 * w * Vec3{0, 0, 1}};

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Vec3 x = grid.point(i, j, k);
                cs.V.at(i, j, k) = spec.v_amplitude * gaussian(x, spec.center_v, spec.width_v);
                if (spec.kind == "zero" || spec.a_amplitude == 0.0) {
                    // A stays zero
                } else if (spec.kind == "gaussian") {
                    for (int c = 0; c < 3; ++c)
                        cs.A[c].at(i, j, k) = spec.a_amplitude * gaussian(x, ca[c], w);
                } else if (spec.kind == "solenoidal") {
                    // curl of Psi_c = a * exp(-|x-cpsi_c|^2 / 2w^2), analytic.
                    Vec3 g0 = gaussian_grad(x, cpsi[0], w);
                    Vec3 g1 = gaussian_grad(x, cpsi[1], w);
                    Vec3 g2 = gaussian_grad(x, cpsi[2], w);
                    cs.A[0].at(i, j, k) = spec.a_amplitude * (g1.z - g2.y);
                    cs.A[1].at(i, j, k) = spec.a_amplitude * (g2.x - g0.z);
                    cs.A[2].at(i, j, k) = spec.a_amplitude * (g0.y - g1.x);
                } else if (spec.kind == "gradient") {
                    Vec3 g = gaussian_grad(x, c0, w);
                    cs.A[0].at(i, j, k) = spec.a_amplitude * g.x;
                    cs.A[1].at(i, j, k) = spec.a_amplitude * g.y;
                    cs.A[2].at(i, j, k) = spec.a_amplitude * g.z;
                } else {
                    throw std::invalid_argument("make_test_coefficients: unknown kind '" + spec.kind + "'");
                }
            }

    cs.Vtilde = assemble_vtilde(cs.A, cs.V);
    audit_decay(cs);
    return cs;
}

CoefficientSet scale_coefficients(const CoefficientSet& base, double a_factor, double v_factor) {
    CoefficientSet cs = base;
    for (int c = 0; c < 3; ++c) scale(cs.A[c], a_factor);
    scale(cs.V, v_factor);
    cs.Vtilde = assemble_vtilde(cs.A, cs.V);
    cs.decay_constant = base.decay_constant * std::max(std::abs(a_factor), std::abs(v_factor));
    return cs;
}

ScalarField assemble_vtilde(const VectorField& A, const ScalarField& V) {
    if (!(A.grid == V.grid)) throw std::invalid_argument("assemble_vtilde: grid mismatch");
    ScalarField div = divergence(A);
    ScalarField out(V.grid);
    const Complex mi(0.0, -1.0);  // D.A = -i div A
    for (std::size_t i = 0; i < out.size(); ++i) {
        Complex a2 = A[0].samples[i] * A[0].samples[i] + A[1].samples[i] * A[1].samples[i] +
                     A[2].samples[i] * A[2].samples[i];
        out.samples[i] = a2 + mi * div.samples[i] + V.samples[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mollification
// ---------------------------------------------------------------------------

double MollifierParams::delta() const { return std::pow(h, sigma0); }

double bump_profile(double r) {
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

double cutoff_profile(double r) {
    if (r <= 0.5) return 1.0;
    if (r >= 1.0) return 0.0;
    // Smoothed step from the 1D edge bump exp(-1/(u(1-u))) on (0,1).
    static const QuadratureRule rule = gauss_legendre(48, 0.0, 1.0);
    auto edge = [](double u) { return (u <= 0.0 || u >= 1.0) ? 0.0 : std::exp(-1.0 / (u * (1.0 - u))); };
    const double s = 2.0 * (1.0 - r);  // in (0, 1)
    double total = 0.0, part = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        total += edge(rule.nodes[q]) * rule.weights[q];
        part += s * edge(s * rule.nodes[q]) * rule.weights[q];
    }
    return part / total;
}

std::pair<VectorField, VectorField> mollify(const VectorField& A, const MollifierParams& p) {
    if (!(p.sigma0 > 0.0 && p.sigma0 < 1.0 / 3.0))
        throw std::invalid_argument("mollify: sigma0 must lie in (0, 1/3)");
    if (!(p.h > 0.0 && p.h <= 1.0)) throw std::invalid_argument("mollify: h must lie in (0, 1]");
    const Grid& g = A.grid;
    const double delta = p.delta();
    if (delta < g.spacing()) throw std::runtime_error("mollifier under-resolved");

    // Sample chi_delta and normalize its discrete mass to one, so the
    // convolution conserves field mass exactly.
    ScalarField chi(g);
    const int n = g.n_per_axis;
    double mass = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                // Kernel centered at the origin of the periodic box.
                double xi = g.coord(i), xj = g.coord(j), xk = g.coord(k);
                double r = std::sqrt(xi * xi + xj * xj + xk * xk) / delta;
                double v = bump_profile(r);
                chi.at(i, j, k) = v;
                mass += v;
            }
    if (mass <= 0.0) throw std::runtime_error("mollifier under-resolved");
    scale(chi, 1.0 / (mass * g.cell_volume()));

    // fft carries the absolute-coordinate phases, so the convolution theorem
    // holds with no shift bookkeeping: conv = ifft(fft(A) . fft(chi)).
    ScalarField chi_hat = fft(chi);
    VectorField sharp(g), flat(g);
    for (int c = 0; c < 3; ++c) {
        ScalarField ah = fft(A[c]);
        for (std::size_t s = 0; s < ah.size(); ++s) ah.samples[s] *= chi_hat.samples[s];
        sharp[c] = ifft(ah);
        for (std::size_t s = 0; s < sharp[c].size(); ++s)
            flat[c].samples[s] = A[c].samples[s] - sharp[c].samples[s];
    }
    return {sharp, flat};
}

// ---------------------------------------------------------------------------
// Curl and gauge primitive
// ---------------------------------------------------------------------------

std::array<ScalarField, 3> curl(const VectorField& A) {
    std::array<ScalarField, 3> out = {ScalarField(A.grid), ScalarField(A.grid), ScalarField(A.grid)};
    const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
    for (int c = 0; c < 3; ++c) {
        auto [j, k] = pairs[c];
        ScalarField djak = derivative(A[k], j);
        ScalarField dkaj = derivative(A[j], k);
        out[c] = djak;
        axpy(-1.0, dkaj, out[c]);
    }
    return out;
}

namespace {

// Chirp-z resampling of one axis: replaces samples along `axis` with the
// band-limited interpolant evaluated at t * x (dilation toward the origin).
// Grid lattice x_i = -L + i*dx; target points t*x_i.
class AxisDilator {
  public:
    AxisDilator(int n, double t) : n_(n), m_(2 * n), t_(t) {
        // Chirp W = exp(i 2 pi t / n); kernel B[j] = W^{-l^2/2} for the
        // linear-convolution window l = j - (n/2 - 1), j in [0, 2n-2].
        kernel_fft_.assign(m_, 0.0);
        for (int j = 0; j <= 2 * n_ - 2; ++j) {
            double l = j - (n_ / 2 - 1);
            kernel_fft_[j] = chirp(-l * l);
        }
        fftw::forward1d(m_, kernel_fft_.data());
        pre_.resize(n_);
        post_.resize(n_);
        for (int mq = 0; mq < n_; ++mq) {
            int mc = mq < n_ / 2 ? mq : mq - n_;  // centered dual index
            // d_m = b_m exp(i pi (1-t) m) ; u_m = d_m W^{m^2/2}
            pre_[mq] = std::polar(1.0, M_PI * (1.0 - t_) * mc) * chirp(double(mc) * mc);
        }
        for (int i = 0; i < n_; ++i) post_[i] = chirp(double(i) * i);
    }

    // line: n contiguous samples; overwritten with resampled values.
    void apply(Complex* line, Complex* scratch_m) const {
        // b = (1/n) DFT(line)
        std::vector<Complex> b(line, line + n_);
        fftw::forward1d(n_, b.data());
        Complex* buf = scratch_m;
        std::fill(buf, buf + m_, Complex(0.0));
        for (int mq = 0; mq < n_; ++mq) {
            int mc = mq < n_ / 2 ? mq : mq - n_;
            int q = mc + n_ / 2;  // placement index in [0, n)
            buf[q] = b[mq] * pre_[mq] / double(n_);
        }
        fftw::forward1d(m_, buf);
        for (int j = 0; j < m_; ++j) buf[j] *= kernel_fft_[j];
        fftw::backward1d(m_, buf);
        for (int i = 0; i < n_; ++i) line[i] = post_[i] * buf[i + n_ - 1] / double(m_);
    }

    int padded_size() const { return m_; }

  private:
    Complex chirp(double sq) const { return std::polar(1.0, M_PI * t_ * sq / n_); }

    int n_, m_;
    double t_;
    std::vector<Complex> kernel_fft_, pre_, post_;
};

void dilate_field(ScalarField& f, double t) {
    const int n = f.grid.n_per_axis;
    AxisDilator dil(n, t);
    std::vector<Complex> line(n), scratch(dil.padded_size());
    // axis 2 (contiguous)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dil.apply(&f.samples[f.grid.index(i, j, 0)], scratch.data());
    // axis 1
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) line[j] = f.at(i, j, k);
            dil.apply(line.data(), scratch.data());
            for (int j = 0; j < n; ++j) f.at(i, j, k) = line[j];
        }
    // axis 0
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) line[i] = f.at(i, j, k);
            dil.apply(line.data(), scratch.data());
            for (int i = 0; i < n; ++i) f.at(i, j, k) = line[i];
        }
}

}  // namespace

GaugeFunction gauge_primitive(const VectorField& A) {
    auto da = curl(A);
    for (const auto& comp : da)
        if (sup_norm(comp) > 1e-6) throw std::runtime_error("gauge_primitive: not curl-free");

    const Grid& g = A.grid;
    const int n = g.n_per_axis;
    GaugeFunction out;
    out.alpha = ScalarField(g);

    static const QuadratureRule rule = gauss_legendre(32, 0.0, 1.0);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const double wq = rule.weights[q];
        VectorField adil = A;
        for (int c = 0; c < 3; ++c) dilate_field(adil[c], t);
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    Vec3 x = g.point(i, j, k);
                    out.alpha.samples[idx] += wq * (x.x * adil[0].samples[idx] +
                                                    x.y * adil[1].samples[idx] +
                                                    x.z * adil[2].samples[idx]);
                }
    }
    // The line integral of a real field is real; drop roundoff imaginaries.
    for (auto& v : out.alpha.samples) v = Complex(v.real(), 0.0);

    // Fix the additive constant: zero the average over the sphere |x| = 0.9 L.
    const double R = 0.9 * g.half_width;
    const QuadratureRule polar = gauss_legendre(8);
    const int n_az = 16;
    double avg = 0.0, wsum = 0.0;
    for (int ip = 0; ip < 8; ++ip)
        for (int ia = 0; ia < n_az; ++ia) {
            double ct = polar.nodes[ip], st = std::sqrt(1.0 - ct * ct);
            double phi = 2.0 * M_PI * ia / n_az;
            Vec3 p = {R * st * std::cos(phi), R * st * std::sin(phi), R * ct};
            avg += polar.weights[ip] * interp_tricubic(out.alpha, p).real();
            wsum += polar.weights[ip];
        }
    avg /= wsum;
    out.normalization = avg;
    for (auto& v : out.alpha.samples) v -= avg;
    return out;
}

}  // namespace cgoscat
