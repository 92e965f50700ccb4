#include "cgoscat/grid.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cgoscat/fft.hpp"
#include "json.hpp"

namespace cgoscat {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// (-1)^(m1+m2+m3) phase that converts FFT bin ordering to the centered lattice
// exp(-i k.x) convention with x starting at -L.
inline double checker(int i, int j, int k) { return ((i + j + k) & 1) ? -1.0 : 1.0; }

}  // namespace

Grid make_grid(int n_per_axis, double half_width) {
    if (!is_power_of_two(n_per_axis) || n_per_axis < 8)
        throw std::invalid_argument("make_grid: n_per_axis must be a power of two >= 8");
    if (!(half_width > 0.0))
        throw std::invalid_argument("make_grid: half_width must be positive");
    return Grid{n_per_axis, half_width};
}

ScalarField fft(const ScalarField& f) {
    ScalarField out = f;
    const int n = f.grid.n_per_axis;
    fftw::forward3d(n, out.samples.data());
    const double scale = f.grid.cell_volume();
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) out.samples[idx] *= scale * checker(i, j, k);
    return out;
}

ScalarField ifft(const ScalarField& g) {
    ScalarField out = g;
    const int n = g.grid.n_per_axis;
    const double ds = g.grid.dual_spacing();
    const double scale = ds * ds * ds / (8.0 * M_PI * M_PI * M_PI);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) out.samples[idx] *= scale * checker(i, j, k);
    fftw::backward3d(n, out.samples.data());
    return out;
}

ScalarField derivative(const ScalarField& f, int axis) {
    ScalarField g = fft(f);
    const int n = f.grid.n_per_axis;
    const Complex iu(0.0, 1.0);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) {
                int m = axis == 0 ? i : (axis == 1 ? j : k);
                g.samples[idx] *= iu * f.grid.freq(m);
            }
    return ifft(g);
}

VectorField gradient(const ScalarField& f) {
    ScalarField fh = fft(f);
    VectorField out(f.grid);
    const int n = f.grid.n_per_axis;
    const Complex iu(0.0, 1.0);
    for (int axis = 0; axis < 3; ++axis) {
        ScalarField g = fh;
        std::size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k, ++idx) {
                    int m = axis == 0 ? i : (axis == 1 ? j : k);
                    g.samples[idx] *= iu * f.grid.freq(m);
                }
        out[axis] = ifft(g);
    }
    return out;
}

ScalarField divergence(const VectorField& a) {
    ScalarField out(a.grid);
    for (int axis = 0; axis < 3; ++axis) {
        ScalarField d = derivative(a[axis], axis);
        for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += d.samples[i];
    }
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    ScalarField g = fft(f);
    const int n = f.grid.n_per_axis;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) {
                double ki = f.grid.freq(i), kj = f.grid.freq(j), kk = f.grid.freq(k);
                g.samples[idx] *= -(ki * ki + kj * kj + kk * kk);
            }
    return ifft(g);
}

double weighted_norm(const ScalarField& f, const WeightSpec& w) {
    const int n = f.grid.n_per_axis;
    double acc = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k, ++idx) {
                double wt = std::pow(jbracket(f.grid.point(i, j, k)), w.delta);
                acc += std::norm(f.samples[idx]) * wt * wt;
            }
    return std::sqrt(acc * f.grid.cell_volume());
}

double weighted_norm(const VectorField& a, const WeightSpec& w) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        double nc = weighted_norm(a[c], w);
        s += nc * nc;
    }
    return std::sqrt(s);
}

double l2_norm(const ScalarField& f) {
    double acc = 0.0;
    for (const Complex& v : f.samples) acc += std::norm(v);
    return std::sqrt(acc * f.grid.cell_volume());
}

double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (const Complex& v : f.samples) m = std::max(m, std::abs(v));
    return m;
}

Complex fourier_at(const ScalarField& f, Vec3 xi) {
    const int n = f.grid.n_per_axis;
    // Separable phase tables: exp(-i xi_a x) per axis.
    std::vector<Complex> p1(n), p2(n), p3(n);
    for (int i = 0; i < n; ++i) {
        double x = f.grid.coord(i);
        p1[i] = std::polar(1.0, -xi.x * x);
        p2[i] = std::polar(1.0, -xi.y * x);
        p3[i] = std::polar(1.0, -xi.z * x);
    }
    Complex total = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        Complex si = 0.0;
        for (int j = 0; j < n; ++j) {
            Complex sj = 0.0;
            for (int k = 0; k < n; ++k, ++idx) sj += f.samples[idx] * p3[k];
            si += sj * p2[j];
        }
        total += si * p1[i];
    }
    return total * f.grid.cell_volume();
}

ScalarField plane_wave(const Grid& grid, Vec3 k) {
    ScalarField out(grid);
    const int n = grid.n_per_axis;
    std::vector<Complex> p1(n), p2(n), p3(n);
    for (int i = 0; i < n; ++i) {
        double x = grid.coord(i);
        p1[i] = std::polar(1.0, k.x * x);
        p2[i] = std::polar(1.0, k.y * x);
        p3[i] = std::polar(1.0, k.z * x);
    }
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex pij = p1[i] * p2[j];
            for (int l = 0; l < n; ++l, ++idx) out.samples[idx] = pij * p3[l];
        }
    return out;
}

namespace {

// Wraps an integer index into [0, n).
inline int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

}  // namespace

Complex interp_trilinear(const ScalarField& f, Vec3 p) {
    const Grid& g = f.grid;
    const int n = g.n_per_axis;
    const double h = g.spacing();
    double u = (p.x + g.half_width) / h, v = (p.y + g.half_width) / h, w = (p.z + g.half_width) / h;
    int i0 = static_cast<int>(std::floor(u)), j0 = static_cast<int>(std::floor(v)),
        k0 = static_cast<int>(std::floor(w));
    double fu = u - i0, fv = v - j0, fw = w - k0;
    Complex acc = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
                double wt = (di ? fu : 1 - fu) * (dj ? fv : 1 - fv) * (dk ? fw : 1 - fw);
                acc += wt * f.at(wrap(i0 + di, n), wrap(j0 + dj, n), wrap(k0 + dk, n));
            }
    return acc;
}

namespace {

// 4-point Lagrange weights for fractional offset t in [0,1) on stencil {-1,0,1,2}.
inline void cubic_weights(double t, double w[4]) {
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

}  // namespace

Complex interp_tricubic(const ScalarField& f, Vec3 p) {
    const Grid& g = f.grid;
    const int n = g.n_per_axis;
    const double h = g.spacing();
    double u = (p.x + g.half_width) / h, v = (p.y + g.half_width) / h, w = (p.z + g.half_width) / h;
    int i0 = static_cast<int>(std::floor(u)), j0 = static_cast<int>(std::floor(v)),
        k0 = static_cast<int>(std::floor(w));
    double wu[4], wv[4], ww[4];
    cubic_weights(u - i0, wu);
    cubic_weights(v - j0, wv);
    cubic_weights(w - k0, ww);
    Complex acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        int i = wrap(i0 - 1 + a, n);
        Complex accj = 0.0;
        for (int b = 0; b < 4; ++b) {
            int j = wrap(j0 - 1 + b, n);
            Complex acck = 0.0;
            for (int c = 0; c < 4; ++c) acck += ww[c] * f.at(i, j, wrap(k0 - 1 + c, n));
            accj += wv[b] * acck;
        }
        acc += wu[a] * accj;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// CGOF serialization
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'C', 'G', 'O', 'F'};
constexpr std::uint8_t kVersion = 1;

void write_header(std::ofstream& out, std::uint8_t rank, const Grid& g) {
    out.write(kMagic, 4);
    std::uint8_t ver = kVersion;
    std::uint8_t reserved[2] = {0, 0};
    out.write(reinterpret_cast<const char*>(&ver), 1);
    out.write(reinterpret_cast<const char*>(&rank), 1);
    out.write(reinterpret_cast<const char*>(reserved), 2);
    std::uint32_t axes[3] = {static_cast<std::uint32_t>(g.n_per_axis),
                             static_cast<std::uint32_t>(g.n_per_axis),
                             static_cast<std::uint32_t>(g.n_per_axis)};
    out.write(reinterpret_cast<const char*>(axes), sizeof(axes));
    double hw = g.half_width;
    out.write(reinterpret_cast<const char*>(&hw), sizeof(hw));
}

void write_payload(std::ofstream& out, const std::vector<Complex>& samples) {
    out.write(reinterpret_cast<const char*>(samples.data()),
              static_cast<std::streamsize>(samples.size() * sizeof(Complex)));
}

struct Header {
    std::uint8_t rank;
    Grid grid;
};

Header read_header(std::ifstream& in, const std::string& path) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": bad magic");
    std::uint8_t ver, rank, reserved[2];
    in.read(reinterpret_cast<char*>(&ver), 1);
    in.read(reinterpret_cast<char*>(&rank), 1);
    in.read(reinterpret_cast<char*>(reserved), 2);
    if (!in || ver != kVersion) throw std::runtime_error(path + ": version mismatch");
    std::uint32_t axes[3];
    in.read(reinterpret_cast<char*>(axes), sizeof(axes));
    double hw = 0.0;
    in.read(reinterpret_cast<char*>(&hw), sizeof(hw));
    if (!in) throw std::runtime_error(path + ": truncated header");
    if (axes[0] != axes[1] || axes[1] != axes[2])
        throw std::runtime_error(path + ": dimension mismatch (axes differ)");
    Header h;
    h.rank = rank;
    h.grid = Grid{static_cast<int>(axes[0]), hw};
    return h;
}

void read_payload(std::ifstream& in, const std::string& path, std::vector<Complex>& samples) {
    in.read(reinterpret_cast<char*>(samples.data()),
            static_cast<std::streamsize>(samples.size() * sizeof(Complex)));
    if (!in) throw std::runtime_error(path + ": truncated payload");
}

}  // namespace

void write_field(const ScalarField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_header(out, 1, f.grid);
    write_payload(out, f.samples);
}

void write_field(const VectorField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_header(out, 3, f.grid);
    for (int c = 0; c < 3; ++c) write_payload(out, f[c].samples);
}

ScalarField read_scalar_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open");
    Header h = read_header(in, path);
    if (h.rank != 1) throw std::runtime_error(path + ": rank mismatch");
    ScalarField f(h.grid);
    read_payload(in, path, f.samples);
    return f;
}

VectorField read_vector_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open");
    Header h = read_header(in, path);
    if (h.rank != 3) throw std::runtime_error(path + ": rank mismatch");
    VectorField f(h.grid);
    for (int c = 0; c < 3; ++c) read_payload(in, path, f[c].samples);
    return f;
}

void write_meta(const FieldMeta& meta, const std::string& field_path) {
    nlohmann::json j;
    j["lambda"] = meta.lambda;
    j["gamma0"] = meta.gamma0;
    j["description"] = meta.description;
    std::ofstream out(field_path + ".meta.json");
    out << j.dump(2) << "\n";
}

FieldMeta read_meta(const std::string& field_path) {
    std::ifstream in(field_path + ".meta.json");
    if (!in) throw std::runtime_error(field_path + ".meta.json: cannot open");
    nlohmann::json j;
    in >> j;
    FieldMeta m;
    m.lambda = j.value("lambda", 0.0);
    m.gamma0 = j.value("gamma0", 0.0);
    m.description = j.value("description", "");
    return m;
}

}  // namespace cgoscat
