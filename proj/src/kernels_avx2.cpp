// AVX2 kernel variants. Compiled with -mavx2 -mfma in its own translation
// unit; only reached after the runtime cpuid check in active_backend().
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "avi/kernels.hpp"

namespace avi::kernels::avx2 {

namespace {

inline double hsum256(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(std::span<const double> x) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(&x[i]));
    }
    double r = hsum256(acc);
    for (; i < x.size(); ++i) r += x[i];
    return r;
}

double dot(std::span<const double> x, std::span<const double> y) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc);
    }
    double r = hsum256(acc);
    for (; i < x.size(); ++i) r += x[i] * y[i];
    return r;
}

double sum_sq(std::span<const double> x) { return dot(x, x); }

void centered_moments(std::span<const double> x, std::span<const double> y,
                      double mx, double my, double& sxy, double& sxx, double& syy) {
    const __m256d vmx = _mm256_set1_pd(mx);
    const __m256d vmy = _mm256_set1_pd(my);
    __m256d axy = _mm256_setzero_pd(), axx = axy, ayy = axy;
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(&x[i]), vmx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(&y[i]), vmy);
        axy = _mm256_fmadd_pd(dx, dy, axy);
        axx = _mm256_fmadd_pd(dx, dx, axx);
        ayy = _mm256_fmadd_pd(dy, dy, ayy);
    }
    double rxy = hsum256(axy), rxx = hsum256(axx), ryy = hsum256(ayy);
    for (; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        rxy += dx * dy;
        rxx += dx * dx;
        ryy += dy * dy;
    }
    sxy = rxy;
    sxx = rxx;
    syy = ryy;
}

}  // namespace avi::kernels::avx2

#endif  // x86_64
