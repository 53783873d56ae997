#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ftdecay {

// Dense vectors in R^d, d small (2 or 3 in practice). Matrices are row-major d x d.
using Vec = std::vector<double>;

struct Mat {
    int n = 0;
    std::vector<double> a;  // row-major, size n*n

    static Mat identity(int n) {
        Mat m;
        m.n = n;
        m.a.assign(static_cast<size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) m.a[static_cast<size_t>(i) * n + i] = 1.0;
        return m;
    }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
};

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2sq(const Vec& x) { return dot(x, x); }
inline double norm2(const Vec& x) { return std::sqrt(norm2sq(x)); }

inline Vec add(const Vec& x, const Vec& y) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

inline Vec sub(const Vec& x, const Vec& y) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

inline Vec scaled(const Vec& x, double s) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] * s;
    return r;
}

inline void axpy(double a, const Vec& x, Vec& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Vec normalized(const Vec& x) {
    double n = norm2(x);
    return scaled(x, 1.0 / n);
}

inline Vec matvec(const Mat& m, const Vec& x) {
    Vec r(static_cast<size_t>(m.n), 0.0);
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += m(i, j) * x[j];
        r[static_cast<size_t>(i)] = s;
    }
    return r;
}

// m^T x (for orthogonal m this is the inverse action).
inline Vec mattvec(const Mat& m, const Vec& x) {
    Vec r(static_cast<size_t>(m.n), 0.0);
    for (int j = 0; j < m.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m.n; ++i) s += m(i, j) * x[i];
        r[static_cast<size_t>(j)] = s;
    }
    return r;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    Mat c;
    c.n = a.n;
    c.a.assign(static_cast<size_t>(a.n) * a.n, 0.0);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            double v = a(i, k);
            for (int j = 0; j < a.n; ++j) c(i, j) += v * b(k, j);
        }
    return c;
}

inline Vec cross3(const Vec& a, const Vec& b) {
    return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace ftdecay
