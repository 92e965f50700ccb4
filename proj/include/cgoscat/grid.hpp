// Uniform periodic grids on the cube [-L, L)^3, complex scalar/vector fields,
// discrete Fourier transforms matching the convention
//     fhat(k) = integral of exp(-i k.x) f(x) dx
// (forward scaled by spacing^3), weighted L2 norms, and the CGOF field format.
//
// Lattice layout: sample i along an axis sits at x_i = -L + i*spacing,
// samples stored row-major over (x1, x2, x3) so the x3 index runs fastest.
// The dual lattice is k_m = (pi/L) * m with m in the centered integer range
// [-n/2, n/2).
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cgoscat {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Small 3-vector helpers
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0, y = 0, z = 0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec3 normalized(Vec3 a) { return (1.0 / norm(a)) * a; }

// Complex 3-vector (frequency vectors rho live here).
using CVec3 = std::array<Complex, 3>;

inline Complex bdot(const CVec3& a, const CVec3& b) {  // bilinear, no conjugation
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Complex bdot(const CVec3& a, Vec3 b) { return a[0] * b.x + a[1] * b.y + a[2] * b.z; }

// <x> = (1+|x|^2)^{1/2}
inline double jbracket(Vec3 x) { return std::sqrt(1.0 + dot(x, x)); }

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

struct Grid {
    int n_per_axis = 0;
    double half_width = 0.0;

    double spacing() const { return 2.0 * half_width / n_per_axis; }
    double dual_spacing() const { return M_PI / half_width; }
    std::size_t point_count() const {
        return static_cast<std::size_t>(n_per_axis) * n_per_axis * n_per_axis;
    }
    double cell_volume() const { return spacing() * spacing() * spacing(); }

    double coord(int i) const { return -half_width + i * spacing(); }
    Vec3 point(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }

    // Centered dual index and frequency for FFT bin m in [0, n).
    int centered(int m) const { return m < n_per_axis / 2 ? m : m - n_per_axis; }
    double freq(int m) const { return dual_spacing() * centered(m); }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_per_axis + j) * n_per_axis + k;
    }

    bool operator==(const Grid& o) const {
        return n_per_axis == o.n_per_axis && half_width == o.half_width;
    }
};

// Validates n_per_axis (power of two, >= 8) and half_width > 0.
Grid make_grid(int n_per_axis, double half_width);

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

struct ScalarField {
    Grid grid;
    std::vector<Complex> samples;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), samples(g.point_count()) {}

    Complex& at(int i, int j, int k) { return samples[grid.index(i, j, k)]; }
    Complex at(int i, int j, int k) const { return samples[grid.index(i, j, k)]; }
    std::size_t size() const { return samples.size(); }
};

struct VectorField {
    Grid grid;
    std::array<ScalarField, 3> comp;

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g), comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}

    ScalarField& operator[](int c) { return comp[c]; }
    const ScalarField& operator[](int c) const { return comp[c]; }
};

struct WeightSpec {
    double delta = 0.0;
};

struct FieldWithGradient {
    ScalarField u;
    VectorField grad;
};

// ---------------------------------------------------------------------------
// Transforms and calculus
// ---------------------------------------------------------------------------

// Forward transform: fhat(k_m) = spacing^3 * sum_x f(x) exp(-i k_m . x).
// Output is indexed by FFT bin m; use grid.freq to map bins to frequencies.
ScalarField fft(const ScalarField& f);

// Inverse of fft (exact round trip up to roundoff).
ScalarField ifft(const ScalarField& g);

// Spectral partial derivatives d/dx_axis and friends.
ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& a);
ScalarField laplacian(const ScalarField& f);

// In-place field arithmetic (shapes must match).
inline void axpy(Complex a, const ScalarField& x, ScalarField& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y.samples[i] += a * x.samples[i];
}
inline void scale(ScalarField& f, Complex a) {
    for (auto& v : f.samples) v *= a;
}
inline Complex inner(const ScalarField& f, const ScalarField& g) {  // (f|g) = int f conj(g)
    Complex acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f.samples[i] * std::conj(g.samples[i]);
    return acc * f.grid.cell_volume();
}

// ||<x>^delta f||_{L^2} by the grid quadrature.
double weighted_norm(const ScalarField& f, const WeightSpec& w);
double weighted_norm(const VectorField& a, const WeightSpec& w);
double l2_norm(const ScalarField& f);
double sup_norm(const ScalarField& f);

// integral of exp(-i xi . x) f(x) dx for arbitrary xi (separable phase tables,
// no lattice alignment required).
Complex fourier_at(const ScalarField& f, Vec3 xi);

// Samples of exp(i k . x) on the grid.
ScalarField plane_wave(const Grid& grid, Vec3 k);

// Trilinear / tricubic sampling of a field at an arbitrary point in the box
// (periodic wrap at the edges).
Complex interp_trilinear(const ScalarField& f, Vec3 p);
Complex interp_tricubic(const ScalarField& f, Vec3 p);

// ---------------------------------------------------------------------------
// Serialization (CGOF format)
//
// bytes 0-3  magic "CGOF"
// byte 4     version (1)
// byte 5     rank (1 scalar, 3 vector)
// bytes 6-7  reserved zero
// 3x u32 LE  axis lengths
// f64 LE     half_width
// payload    rank * n^3 complex samples, interleaved (re, im) f64 LE,
//            row-major, components consecutive
// ---------------------------------------------------------------------------

struct FieldMeta {
    double lambda = 0.0;
    double gamma0 = 0.0;
    std::string description;
};

void write_field(const ScalarField& f, const std::string& path);
void write_field(const VectorField& f, const std::string& path);
ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(const std::string& path);

void write_meta(const FieldMeta& meta, const std::string& field_path);
FieldMeta read_meta(const std::string& field_path);

}  // namespace cgoscat
