// Scalar reference kernels. Loop orders here define the reference results the
// AVX2 variants are equivalence-tested against; keep them boring.
#include "spinwell/kernels.hpp"

#include <cmath>
#include <cstring>

namespace spinwell::kern {
namespace {

void matmul_scalar(const double* A, const double* B, double* C, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        double* crow = C + static_cast<std::size_t>(i) * n;
        std::memset(crow, 0, sizeof(double) * static_cast<std::size_t>(n));
        const double* arow = A + static_cast<std::size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const double a = arow[p];
            const double* brow = B + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j)
                crow[j] += a * brow[j];
        }
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

void scale_scalar(double* y, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] *= a;
}

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] * b[i];
}

void cross_scalar(const double* ax, const double* ay, const double* az,
                  const double* bx, const double* by, const double* bz,
                  double* ox, double* oy, double* oz, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double cx = ay[i] * bz[i] - az[i] * by[i];
        const double cy = az[i] * bx[i] - ax[i] * bz[i];
        const double cz = ax[i] * by[i] - ay[i] * bx[i];
        ox[i] = cx;
        oy[i] = cy;
        oz[i] = cz;
    }
}

double max_abs_scalar(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, std::fabs(a[i]));
    return m;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops table{
        "scalar",
        matmul_scalar,
        dot_scalar,
        axpy_scalar,
        scale_scalar,
        mul_scalar,
        cross_scalar,
        max_abs_scalar,
    };
    return table;
}

} // namespace spinwell::kern
