#include "kinlab/util.hpp"

#include <cstdarg>
#include <cstdio>
#include <mutex>
#include <thread>

namespace kinlab {

double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.n; ++i) s += a.v[i] * b.v[i];
    return s;
}

Vec mat_vec(const Mat& m, const Vec& x) {
    Vec r(m.n);
    for (int i = 0; i < m.n; ++i) {
        double s = 0;
        for (int j = 0; j < m.n; ++j) s += m(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    Mat r(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            double s = 0;
            for (int k = 0; k < a.n; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

double determinant(const Mat& m) {
    if (m.n == 1) return m(0, 0);
    if (m.n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Mat mat_inverse(const Mat& m) {
    double det = determinant(m);
    if (std::abs(det) < 1e-300)
        throw GeometryError("singular matrix (det = " + format_double(det) + ")");
    Mat r(m.n);
    if (m.n == 1) {
        r(0, 0) = 1.0 / det;
    } else if (m.n == 2) {
        r(0, 0) = m(1, 1) / det;
        r(0, 1) = -m(0, 1) / det;
        r(1, 0) = -m(1, 0) / det;
        r(1, 1) = m(0, 0) / det;
    } else {
        r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
        r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
        r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
        r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
        r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
        r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
        r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
        r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
        r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
    }
    return r;
}

Vec sym_eigenvalues(const Mat& m) {
    if (m.n == 2) {
        double tr = m(0, 0) + m(1, 1);
        double det = determinant(m);
        double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        return Vec(tr / 2 - disc, tr / 2 + disc);
    }
    // Jacobi rotations; plenty for 3x3 symmetric input.
    Mat a = m;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
                Mat b = a;
                for (int k = 0; k < 3; ++k) {
                    b(p, k) = c * a(p, k) - s * a(q, k);
                    b(q, k) = s * a(p, k) + c * a(q, k);
                }
                Mat d = b;
                for (int k = 0; k < 3; ++k) {
                    d(k, p) = c * b(k, p) - s * b(k, q);
                    d(k, q) = s * b(k, p) + c * b(k, q);
                }
                a = d;
            }
    }
    Vec ev(3);
    ev[0] = a(0, 0);
    ev[1] = a(1, 1);
    ev[2] = a(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2 - i; ++j)
            if (ev[j] > ev[j + 1]) std::swap(ev.v[j], ev.v[j + 1]);
    return ev;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    double err = left + right - whole;
    if (std::abs(err) < 15 * tol) return left + right + err / 15.0;
    if (depth <= 0) throw NumericError("adaptive quadrature failed to converge");
    return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    double m = 0.5 * (a + b);
    return sign * adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 48);
}

namespace {
int g_threads = 1;
}

void set_default_threads(int k) { g_threads = std::max(1, k); }
int default_threads() { return g_threads; }

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body,
                  int threads) {
    int k = threads > 0 ? threads : g_threads;
    if (k <= 1 || count < 2048) {
        body(0, count);
        return;
    }
    k = int(std::min<std::size_t>(k, count));
    std::vector<std::thread> pool;
    pool.reserve(k);
    std::size_t chunk = (count + k - 1) / k;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < k; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string format(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    char buf[1024];
    vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return std::string(buf);
}

std::string format_double(double x) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace kinlab
