#include "noncoh/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "noncoh/errors.hpp"
#include "noncoh/kernels.hpp"

namespace noncoh::quad {

Rule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  if (n == 1) return Rule{{0.0}, {2.0}};
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Legendre P_n and its derivative at x.
  const auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const Rule& gauss_hermite(int n) {
  if (n < 1 || n > 4096) throw DomainError("gauss_hermite: order out of range");
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  // Golub–Welsch: Jacobi matrix of the physicists' Hermite recurrence.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("gauss_hermite: eigen solve failed");

  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  // Symmetrize to remove eigen-solver asymmetry in the last bits.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

const Rule& cached_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  return cache.emplace(n, gauss_legendre(n)).first->second;
}

}  // namespace

Grid composite_grid(double lo, double hi, std::span<const double> breakpoints,
                    std::size_t panels, int points_per_panel) {
  if (!(hi > lo)) throw DomainError("composite_grid: empty interval");
  if (panels == 0) throw DomainError("composite_grid: need at least one panel");
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const Rule& rule = cached_legendre(points_per_panel);
  Grid grid;
  const std::size_t total = (cuts.size() - 1) * panels * rule.nodes.size();
  grid.x.reserve(total);
  grid.w.reserve(total);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double width = (cuts[s + 1] - cuts[s]) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = cuts[s] + width * static_cast<double>(p);
      const double half = 0.5 * width;
      const double mid = a + half;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        grid.x.push_back(mid + half * rule.nodes[k]);
        grid.w.push_back(half * rule.weights[k]);
      }
    }
  }
  return grid;
}

std::vector<Estimate> composite_doubling(
    const std::function<void(std::span<const double>, std::span<double>)>& eval,
    std::size_t count, double lo, double hi, std::span<const double> breakpoints,
    const DoublingOptions& opts) {
  std::vector<Estimate> prev(count), cur(count);
  std::vector<double> values, column;
  std::size_t panels = std::max<std::size_t>(opts.initial_panels, 1);
  bool have_prev = false;
  std::size_t used = 0;
  for (;;) {
    const Grid grid = composite_grid(lo, hi, breakpoints, panels, opts.points_per_panel);
    const std::size_t m = grid.x.size();
    if (m > opts.max_points) break;
    values.assign(m * count, 0.0);
    eval(grid.x, values);
    used += m;
    column.resize(m);
    for (std::size_t c = 0; c < count; ++c) {
      for (std::size_t i = 0; i < m; ++i) column[i] = values[i * count + c];
      cur[c].value = kernels::dot(grid.w, column);
      cur[c].evaluations = used;
    }
    if (have_prev) {
      bool all = true;
      for (std::size_t c = 0; c < count; ++c) {
        const double diff = std::abs(cur[c].value - prev[c].value);
        cur[c].error = diff;
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(cur[c].value));
        cur[c].converged = diff <= tol;
        all = all && cur[c].converged;
      }
      if (all) return cur;
    }
    prev = cur;
    have_prev = true;
    panels *= 2;
  }
  if (!have_prev) throw NumericError("composite quadrature: point cap below first level");
  // Cap reached: report the finest level with converged=false.
  for (auto& e : prev) e.converged = false;
  return prev;
}

namespace {

// Kronrod 15-point nodes/weights with the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7];
  double rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, rk * h, std::abs((rk - rg) * h)};
}

}  // namespace

Estimate adaptive_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                double abs_tol, double rel_tol, int max_intervals) {
  std::priority_queue<Piece> heap;
  Piece first = gk15(f, a, b);
  double total = first.value, err = first.error;
  heap.push(first);
  std::size_t evals = 15;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      return {total, err, evals, false};
    }
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Piece left = gk15(f, worst.a, mid);
    const Piece right = gk15(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed drift from the running updates.
  double sum = 0.0, e = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  return {sum, e, evals, true};
}

}  // namespace noncoh::quad
