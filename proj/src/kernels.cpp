#include "avi/kernels.hpp"

#include <stdexcept>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace avi::kernels {

namespace scalar {

double sum(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double sum_sq(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc;
}

void centered_moments(std::span<const double> x, std::span<const double> y,
                      double mx, double my, double& sxy, double& sxx, double& syy) {
    double axy = 0.0, axx = 0.0, ayy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        axy += dx * dy;
        axx += dx * dx;
        ayy += dy * dy;
    }
    sxy = axy;
    sxx = axx;
    syy = ayy;
}

}  // namespace scalar

#if defined(__aarch64__)
namespace neon {

double sum(std::span<const double> x) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= x.size(); i += 2) acc = vaddq_f64(acc, vld1q_f64(&x[i]));
    double r = vaddvq_f64(acc);
    for (; i < x.size(); ++i) r += x[i];
    return r;
}

double dot(std::span<const double> x, std::span<const double> y) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= x.size(); i += 2) {
        acc = vfmaq_f64(acc, vld1q_f64(&x[i]), vld1q_f64(&y[i]));
    }
    double r = vaddvq_f64(acc);
    for (; i < x.size(); ++i) r += x[i] * y[i];
    return r;
}

double sum_sq(std::span<const double> x) { return dot(x, x); }

void centered_moments(std::span<const double> x, std::span<const double> y,
                      double mx, double my, double& sxy, double& sxx, double& syy) {
    const float64x2_t vmx = vdupq_n_f64(mx);
    const float64x2_t vmy = vdupq_n_f64(my);
    float64x2_t axy = vdupq_n_f64(0.0), axx = axy, ayy = axy;
    std::size_t i = 0;
    for (; i + 2 <= x.size(); i += 2) {
        const float64x2_t dx = vsubq_f64(vld1q_f64(&x[i]), vmx);
        const float64x2_t dy = vsubq_f64(vld1q_f64(&y[i]), vmy);
        axy = vfmaq_f64(axy, dx, dy);
        axx = vfmaq_f64(axx, dx, dx);
        ayy = vfmaq_f64(ayy, dy, dy);
    }
    double rxy = vaddvq_f64(axy), rxx = vaddvq_f64(axx), ryy = vaddvq_f64(ayy);
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

}  // namespace neon
#endif

Backend active_backend() {
    static const Backend backend = [] {
#if defined(__aarch64__)
        return Backend::Neon;
#elif defined(__x86_64__) || defined(_M_X64)
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            return Backend::Avx2;
        }
        return Backend::Scalar;
#else
        return Backend::Scalar;
#endif
    }();
    return backend;
}

const char* backend_name() {
    switch (active_backend()) {
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
        case Backend::Scalar: return "scalar";
    }
    return "scalar";
}

double sum(std::span<const double> x) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::Avx2: return avx2::sum(x);
#endif
#if defined(__aarch64__)
        case Backend::Neon: return neon::sum(x);
#endif
        default: return scalar::sum(x);
    }
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::Avx2: return avx2::dot(x, y);
#endif
#if defined(__aarch64__)
        case Backend::Neon: return neon::dot(x, y);
#endif
        default: return scalar::dot(x, y);
    }
}

double sum_sq(std::span<const double> x) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::Avx2: return avx2::sum_sq(x);
#endif
#if defined(__aarch64__)
        case Backend::Neon: return neon::sum_sq(x);
#endif
        default: return scalar::sum_sq(x);
    }
}

void centered_moments(std::span<const double> x, std::span<const double> y,
                      double mx, double my, double& sxy, double& sxx, double& syy) {
    if (x.size() != y.size()) throw std::invalid_argument("centered_moments: length mismatch");
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::Avx2: return avx2::centered_moments(x, y, mx, my, sxy, sxx, syy);
#endif
#if defined(__aarch64__)
        case Backend::Neon: return neon::centered_moments(x, y, mx, my, sxy, sxx, syy);
#endif
        default: return scalar::centered_moments(x, y, mx, my, sxy, sxx, syy);
    }
}

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean: empty input");
    return sum(x) / static_cast<double>(x.size());
}

}  // namespace avi::kernels
