// Data-parallel arithmetic kernels behind the spectral transforms and grid
// algebra. Two implementations share one table of function pointers: a
// portable scalar reference and an AVX2+FMA variant compiled in its own
// translation unit. The backend is chosen once at startup (cpuid, overridable
// with SPINWELL_SIMD=scalar|avx2|auto) so a fixed run is bit-reproducible.
//
// Conventions: matrices are row major and dense, vector fields on grids are
// stored as three separate component planes (structure of arrays).
#pragma once

#include <cstddef>
#include <string_view>

namespace spinwell::kern {

struct Ops {
    const char* name;

    // C[m x n] = A[m x k] * B[k x n], C overwritten.
    void (*matmul)(const double* A, const double* B, double* C, int m, int k, int n);

    double (*dot)(const double* a, const double* b, std::size_t n);

    // y += a * x
    void (*axpy)(double* y, double a, const double* x, std::size_t n);

    // y *= a
    void (*scale)(double* y, double a, std::size_t n);

    // out = a .* b (pointwise)
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);

    // Pointwise cross product of SoA vector fields: o = a x b.
    void (*cross)(const double* ax, const double* ay, const double* az,
                  const double* bx, const double* by, const double* bz,
                  double* ox, double* oy, double* oz, std::size_t n);

    double (*max_abs)(const double* a, std::size_t n);
};

// Active backend. First call resolves SPINWELL_SIMD and cpuid; later calls
// are a cheap load.
const Ops& ops();

// Force a backend by name ("scalar", "avx2", "auto"). Returns false and
// leaves the selection unchanged if the request is unavailable. Used by the
// equivalence tests.
bool select_backend(std::string_view name);

const Ops& scalar_ops();

// Null when the binary was built without AVX2 support or the CPU lacks it.
const Ops* avx2_ops();

} // namespace spinwell::kern
