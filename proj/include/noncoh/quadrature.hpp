#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace noncoh::quad {

/// Nodes and weights of an interpolatory rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// n-point Gauss–Hermite rule for the weight exp(-x^2) on the real line.
/// Rules are computed once (Golub–Welsch) and cached; the reference stays valid
/// for the life of the process.
const Rule& gauss_hermite(int n);

/// Composite Gauss–Legendre grid on [lo, hi].
///
/// The interval is first split at every breakpoint strictly inside (lo, hi);
/// each piece is then cut into `panels` equal panels carrying a
/// `points_per_panel`-point rule.
struct Grid {
  std::vector<double> x;
  std::vector<double> w;
};

Grid composite_grid(double lo, double hi, std::span<const double> breakpoints,
                    std::size_t panels, int points_per_panel = 16);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Options for panel-doubling composite quadrature.
struct DoublingOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t initial_panels = 4;
  std::size_t max_points = std::size_t{1} << 20;
  int points_per_panel = 16;
};

/// Integrates several functionals sharing one grid. `eval` receives the grid
/// abscissae and must write one row of `count` values per abscissa into `out`
/// (row-major, x.size() * count). Panels double until every component changes
/// by less than max(abs_tol, rel_tol * |value|) between successive levels.
std::vector<Estimate> composite_doubling(
    const std::function<void(std::span<const double> x, std::span<double> out)>& eval,
    std::size_t count, double lo, double hi, std::span<const double> breakpoints,
    const DoublingOptions& opts = {});

/// Globally adaptive 7/15-point Gauss–Kronrod on a finite interval.
Estimate adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                double abs_tol, double rel_tol, int max_intervals = 4000);

}  // namespace noncoh::quad
