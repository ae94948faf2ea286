#pragma once

#include <cstddef>
#include <span>

namespace avi::kernels {

// Scalar reference kernels. These are the semantic definition; the SIMD
// variants below must agree with them up to floating-point reassociation.
namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double sum_sq(std::span<const double> x);
/// Sums of (x-mx)*(y-my), (x-mx)^2, (y-my)^2 in one pass.
void centered_moments(std::span<const double> x, std::span<const double> y,
                      double mx, double my, double& sxy, double& sxx, double& syy);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double sum_sq(std::span<const double> x);
void centered_moments(std::span<const double> x, std::span<const double> y,
                      double mx, double my, double& sxy, double& sxx, double& syy);
}  // namespace avx2
#endif

/// Active instruction-set backend, resolved once at first use.
enum class Backend { Scalar, Avx2, Neon };
Backend active_backend();
const char* backend_name();

// Dispatched entry points used by the analysis code.
double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double sum_sq(std::span<const double> x);
void centered_moments(std::span<const double> x, std::span<const double> y,
                      double mx, double my, double& sxy, double& sxx, double& syy);

double mean(std::span<const double> x);

}  // namespace avi::kernels
