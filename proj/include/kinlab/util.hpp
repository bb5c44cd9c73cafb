#pragma once
/// @file util.hpp
/// Small fixed-dimension tensor types (n <= 3), deterministic RNG,
/// a chunked parallel_for, and shared error types.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinlab {

inline constexpr int kMaxDim = 3;

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ClassificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Fixed-capacity vector/matrix/rank-3/rank-4 tensors. Dimension is runtime
// (2 or 3); storage is stack-resident so grid kernels stay allocation-free.
// ---------------------------------------------------------------------------

struct Vec {
    double v[kMaxDim] = {0, 0, 0};
    int n = 0;

    Vec() = default;
    explicit Vec(int dim) : n(dim) {}
    Vec(double a, double b) : n(2) { v[0] = a; v[1] = b; }
    Vec(double a, double b, double c) : n(3) { v[0] = a; v[1] = b; v[2] = c; }

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n; ++i) v[i] += o.v[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n; ++i) v[i] *= s;
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) {
        for (int i = 0; i < a.n; ++i) a.v[i] -= b.v[i];
        return a;
    }
    friend Vec operator*(double s, Vec a) { return a *= s; }

    double max_abs() const {
        double m = 0;
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
        return m;
    }
};

struct Mat {
    double m[kMaxDim * kMaxDim] = {};
    int n = 0;

    Mat() = default;
    explicit Mat(int dim) : n(dim) {}

    double& operator()(int i, int j) { return m[i * kMaxDim + j]; }
    double operator()(int i, int j) const { return m[i * kMaxDim + j]; }

    static Mat identity(int dim) {
        Mat r(dim);
        for (int i = 0; i < dim; ++i) r(i, i) = 1.0;
        return r;
    }

    Mat& operator+=(const Mat& o) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) (*this)(i, j) += o(i, j);
        return *this;
    }
    friend Mat operator-(Mat a, const Mat& b) {
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j) a(i, j) -= b(i, j);
        return a;
    }
    friend Mat operator*(double s, Mat a) {
        for (int i = 0; i < a.n; ++i)
            for (int j = 0; j < a.n; ++j) a(i, j) *= s;
        return a;
    }

    double max_abs() const {
        double r = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r = std::max(r, std::abs((*this)(i, j)));
        return r;
    }
};

// Rank-3 tensor, used for Christoffel symbols t(i,j,k) = Gamma^i_{jk}
// and metric derivatives t(k,i,j) = d_k g_ij.
struct Ten3 {
    double t[kMaxDim * kMaxDim * kMaxDim] = {};
    int n = 0;

    Ten3() = default;
    explicit Ten3(int dim) : n(dim) {}
    double& operator()(int i, int j, int k) {
        return t[(i * kMaxDim + j) * kMaxDim + k];
    }
    double operator()(int i, int j, int k) const {
        return t[(i * kMaxDim + j) * kMaxDim + k];
    }
};

// Rank-4 tensor, used for the curvature tensor r(i,j,k,l) = R_{ijk}^l.
struct Ten4 {
    double t[kMaxDim * kMaxDim * kMaxDim * kMaxDim] = {};
    int n = 0;

    Ten4() = default;
    explicit Ten4(int dim) : n(dim) {}
    double& operator()(int i, int j, int k, int l) {
        return t[((i * kMaxDim + j) * kMaxDim + k) * kMaxDim + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return t[((i * kMaxDim + j) * kMaxDim + k) * kMaxDim + l];
    }
};

double dot(const Vec& a, const Vec& b);
Vec mat_vec(const Mat& m, const Vec& x);
Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_inverse(const Mat& m);           // throws GeometryError if singular
double determinant(const Mat& m);
// Eigenvalues of a symmetric 2x2/3x3 matrix, ascending.
Vec sym_eigenvalues(const Mat& m);

// ---------------------------------------------------------------------------
// Deterministic counter-based RNG. splitmix64 gives a stateless stream:
// the k-th draw of stream (seed, tag) is identical regardless of schedule.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : state_(splitmix64(seed ^ (0x6a09e667f3bcc909ULL + stream))) {}

    std::uint64_t next_u64() {
        state_ = splitmix64(state_);
        return state_;
    }
    // Uniform in [0,1).
    double uniform() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Standard normal via Box-Muller (deterministic, portable).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Chunked parallel_for. Workers write to disjoint ranges only, so results
// are bitwise independent of the thread count.
// ---------------------------------------------------------------------------

void set_default_threads(int k);
int default_threads();
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  int threads = 0);

// Adaptive Simpson quadrature; throws NumericError on non-convergence.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol);

// printf-style helper used everywhere report text is assembled.
std::string format(const char* fmt, ...);

// Shortest round-trip decimal representation, used for bit-stable CSV/JSON.
std::string format_double(double x);

// FNV-1a, for config/artifact hashes in run manifests.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace kinlab
