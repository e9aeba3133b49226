// AVX2+FMA kernel variants. This TU is the only one compiled with -mavx2, and
// the dispatcher only hands out this table after __builtin_cpu_supports says
// the CPU can run it. Results differ from the scalar reference only by FMA
// and reassociation rounding; the equivalence tests pin that gap.
#include "spinwell/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <cmath>
#include <cstring>
#include <immintrin.h>

namespace spinwell::kern {
namespace {

void matmul_avx2(const double* A, const double* B, double* C, int m, int k, int n) {
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        double* crow = C + static_cast<std::size_t>(i) * n;
        std::memset(crow, 0, sizeof(double) * static_cast<std::size_t>(n));
        const double* arow = A + static_cast<std::size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const __m256d a = _mm256_set1_pd(arow[p]);
            const double* brow = B + static_cast<std::size_t>(p) * n;
            int j = 0;
            for (; j < n4; j += 4) {
                __m256d c = _mm256_loadu_pd(crow + j);
                c = _mm256_fmadd_pd(a, _mm256_loadu_pd(brow + j), c);
                _mm256_storeu_pd(crow + j, c);
            }
            for (; j < n; ++j)
                crow[j] += arow[p] * brow[j];
        }
    }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < n4; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

void scale_avx2(double* y, double a, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i < n4; i += 4)
        _mm256_storeu_pd(y + i, _mm256_mul_pd(av, _mm256_loadu_pd(y + i)));
    for (; i < n; ++i)
        y[i] *= a;
}

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    std::size_t i = 0;
    for (; i < n4; i += 4)
        _mm256_storeu_pd(out + i,
                         _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] * b[i];
}

void cross_avx2(const double* ax, const double* ay, const double* az,
                const double* bx, const double* by, const double* bz,
                double* ox, double* oy, double* oz, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d vax = _mm256_loadu_pd(ax + i), vay = _mm256_loadu_pd(ay + i),
                      vaz = _mm256_loadu_pd(az + i);
        const __m256d vbx = _mm256_loadu_pd(bx + i), vby = _mm256_loadu_pd(by + i),
                      vbz = _mm256_loadu_pd(bz + i);
        // fmsub(a, b, c*d) keeps the same a*b - c*d rounding shape as scalar.
        const __m256d cx = _mm256_fmsub_pd(vay, vbz, _mm256_mul_pd(vaz, vby));
        const __m256d cy = _mm256_fmsub_pd(vaz, vbx, _mm256_mul_pd(vax, vbz));
        const __m256d cz = _mm256_fmsub_pd(vax, vby, _mm256_mul_pd(vay, vbx));
        _mm256_storeu_pd(ox + i, cx);
        _mm256_storeu_pd(oy + i, cy);
        _mm256_storeu_pd(oz + i, cz);
    }
    for (; i < n; ++i) {
        const double cx = ay[i] * bz[i] - az[i] * by[i];
        const double cy = az[i] * bx[i] - ax[i] * bz[i];
        const double cz = ax[i] * by[i] - ay[i] * bx[i];
        ox[i] = cx;
        oy[i] = cy;
        oz[i] = cz;
    }
}

double max_abs_avx2(const double* a, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t{3};
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i < n4; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, _mm256_loadu_pd(a + i)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i)
        m = std::max(m, std::fabs(a[i]));
    return m;
}

const Ops avx2_table{
    "avx2",
    matmul_avx2,
    dot_avx2,
    axpy_avx2,
    scale_avx2,
    mul_avx2,
    cross_avx2,
    max_abs_avx2,
};

} // namespace

const Ops* avx2_ops() {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &avx2_table;
    return nullptr;
}

} // namespace spinwell::kern

#else // compiler or target without AVX2 support

namespace spinwell::kern {

const Ops* avx2_ops() { return nullptr; }

} // namespace spinwell::kern

#endif
