#pragma once

// Projected-gradient maximization of smooth concave functions over the small
// polytopes that appear in the MIMO bounds, plus a bracketed 1-D maximizer.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace noncoh::opt {

/// Returns f(x) and writes its gradient into `grad`.
using Oracle = std::function<double(std::span<const double> x, std::span<double> grad)>;
/// Replaces x by its Euclidean projection onto the feasible set.
using Projector = std::function<void(std::span<double> x)>;

struct SolverOptions {
  /// Stop when the gradient-mapping norm drops below tol times the gradient
  /// norm at the starting point.
  double tol = 1e-10;
  int max_iterations = 50000;
};

struct Solution {
  double value = 0.0;
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
};

/// Runs projected gradient ascent with backtracking from every start and keeps
/// the best value. Near-ties go to the lexicographically smallest point.
/// Throws NumericError (carrying the best value) if the best run hit the cap.
Solution maximize_concave(const Oracle& f, const Projector& project,
                          const std::vector<std::vector<double>>& starts,
                          const SolverOptions& opts = {});

/// Projection onto {x >= 0, sum x = total}.
void project_simplex(std::span<double> x, double total);

/// Projection onto A(cap) = {x >= 0, sum x <= cap}.
void project_capped_simplex(std::span<double> x, double cap);

/// Vertices of A(cap) followed by its centroid, centroid first.
std::vector<std::vector<double>> capped_simplex_starts(int n, double cap);

/// Distributions p over the 2^nt on/off patterns (bit t of the index b is
/// antenna t) whose per-antenna marginals sum_b p_b b_t stay below `cap`.
class PatternPolytope {
 public:
  static constexpr int kMaxAntennas = 16;

  PatternPolytope(int nt, double cap);

  int antennas() const noexcept { return nt_; }
  std::size_t size() const noexcept { return std::size_t{1} << nt_; }
  double cap() const noexcept { return cap_; }

  /// Dykstra's alternating projections onto the simplex and each marginal
  /// halfspace, run until the iterate moves less than 1e-12.
  void project(std::span<double> p) const;
  double marginal(std::span<const double> p, int t) const;
  bool contains(std::span<const double> p, double tol = 1e-10) const;
  /// Feasible starting points: the projected uniform law, then point masses.
  std::vector<std::vector<double>> starts(std::size_t max_starts = 24) const;

 private:
  int nt_;
  double cap_;
};

struct Max1d {
  double x = 0.0;
  double value = 0.0;
};

/// Maximizes f on [lo, hi]: evaluates a uniform grid of `grid` points plus
/// `seeds`, then refines around the best point by golden section until the
/// bracket is narrower than xtol (relative to hi - lo).
Max1d maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                  std::span<const double> seeds = {}, int grid = 16, double xtol = 1e-12);

}  // namespace noncoh::opt
