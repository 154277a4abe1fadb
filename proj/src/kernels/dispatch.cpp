#include <cstdlib>
#include <cstring>

#include "noncoh/kernels.hpp"

namespace noncoh::kernels {
namespace {

struct Table {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*sum_abs2)(std::span<const std::complex<double>>);
  double (*cesaro_abs2)(std::span<const std::complex<double>>, std::size_t);
  void (*trig_series)(std::span<const std::complex<double>>, std::span<const double>,
                      std::span<double>);
};

bool cpu_has_avx2() noexcept {
#if defined(NONCOH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Table select() noexcept {
  const char* forced = std::getenv("NONCOH_ISA");
  const bool want_scalar = forced != nullptr && std::strcmp(forced, "scalar") == 0;
#if defined(NONCOH_HAVE_AVX2)
  if (!want_scalar && cpu_has_avx2()) {
    return {Isa::avx2, &avx2::dot, &avx2::sum_abs2, &avx2::cesaro_abs2, &avx2::trig_series};
  }
#endif
  (void)want_scalar;
  return {Isa::scalar, &scalar::dot, &scalar::sum_abs2, &scalar::cesaro_abs2,
          &scalar::trig_series};
}

const Table& table() noexcept {
  static const Table t = select();
  return t;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa active_isa() noexcept { return table().isa; }

bool avx2_available() noexcept { return cpu_has_avx2(); }

double dot(std::span<const double> a, std::span<const double> b) { return table().dot(a, b); }

double sum_abs2(std::span<const std::complex<double>> r) { return table().sum_abs2(r); }

double cesaro_abs2(std::span<const std::complex<double>> r, std::size_t n) {
  return table().cesaro_abs2(r, n);
}

void trig_series(std::span<const std::complex<double>> r, std::span<const double> omega,
                 std::span<double> out) {
  table().trig_series(r, omega, out);
}

}  // namespace noncoh::kernels
