#pragma once

// Data-parallel inner loops used by the quadrature and autocorrelation code.
//
// Every kernel has a portable scalar reference in noncoh::kernels::scalar and,
// on x86-64 builds, an AVX2/FMA variant in noncoh::kernels::avx2. The free
// functions in noncoh::kernels dispatch once per process to the widest variant
// the CPU supports. Setting NONCOH_ISA=scalar in the environment pins the
// scalar path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace noncoh::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

/// ISA selected for this process.
Isa active_isa() noexcept;

/// True if the AVX2 variants were compiled in and the CPU can run them.
bool avx2_available() noexcept;

/// Sum of a[i]*b[i].
double dot(std::span<const double> a, std::span<const double> b);

/// Sum of |r[i]|^2.
double sum_abs2(std::span<const std::complex<double>> r);

/// Sum over 1 <= v < min(n, r.size()) of (1 - v/n) |r[v]|^2. r[0] is ignored.
double cesaro_abs2(std::span<const std::complex<double>> r, std::size_t n);

/// out[j] = Re r[0] + 2 sum_{v>=1} Re(r[v] exp(-i v omega[j])).
///
/// This is the spectral density of a Hermitian sequence truncated at
/// r.size()-1 lags.
void trig_series(std::span<const std::complex<double>> r, std::span<const double> omega,
                 std::span<double> out);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double sum_abs2(std::span<const std::complex<double>> r);
double cesaro_abs2(std::span<const std::complex<double>> r, std::size_t n);
void trig_series(std::span<const std::complex<double>> r, std::span<const double> omega,
                 std::span<double> out);
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_available() is true.
double dot(std::span<const double> a, std::span<const double> b);
double sum_abs2(std::span<const std::complex<double>> r);
double cesaro_abs2(std::span<const std::complex<double>> r, std::size_t n);
void trig_series(std::span<const std::complex<double>> r, std::span<const double> omega,
                 std::span<double> out);
}  // namespace avx2

}  // namespace noncoh::kernels
