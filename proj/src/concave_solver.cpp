#include "noncoh/concave_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "noncoh/errors.hpp"
#include "noncoh/kernels.hpp"

namespace noncoh::opt {
namespace {

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

Solution ascend(const Oracle& f, const Projector& project, std::vector<double> x,
                const SolverOptions& opts) {
  const std::size_t n = x.size();
  project(x);
  std::vector<double> g(n), gy(n), y(n), step(n);
  double fx = f(x, g);
  const double scale = norm2(g);
  Solution sol;
  if (!std::isfinite(fx)) throw NumericError("objective is not finite at a start point");
  if (scale == 0.0) return {fx, x, 0, true};

  double t = 1.0 / scale;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    double fy = 0.0;
    for (int tries = 0;; ++tries) {
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + t * g[i];
      project(y);
      for (std::size_t i = 0; i < n; ++i) step[i] = y[i] - x[i];
      fy = f(y, gy);
      // Secant curvature along the step must not exceed 1/t. Gradients stay
      // accurate near the optimum where differences of f drown in rounding.
      double bend = 0.0;
      for (std::size_t i = 0; i < n; ++i) bend -= (gy[i] - g[i]) * step[i];
      if (std::isfinite(fy) && bend <= kernels::dot(step, step) / t) break;
      t *= 0.5;
      if (tries > 200) return {fx, x, it, false};
    }
    const double mapping = norm2(step) / t;
    x.swap(y);
    g.swap(gy);
    fx = fy;
    if (mapping <= opts.tol * scale) return {fx, x, it, true};
    t *= 2.0;
  }
  return {fx, x, opts.max_iterations, false};
}

}  // namespace

Solution maximize_concave(const Oracle& f, const Projector& project,
                          const std::vector<std::vector<double>>& starts,
                          const SolverOptions& opts) {
  if (starts.empty()) throw DomainError("maximize_concave needs at least one start");
  std::vector<Solution> runs;
  runs.reserve(starts.size());
  for (const auto& s : starts) runs.push_back(ascend(f, project, s, opts));

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : runs) best = std::max(best, r.value);
  const double slack = 1e-12 * std::max(1e-300, std::abs(best));
  const Solution* pick = nullptr;
  for (const auto& r : runs) {
    if (r.value < best - slack) continue;
    if (!pick || std::lexicographical_compare(r.x.begin(), r.x.end(), pick->x.begin(), pick->x.end())) {
      pick = &r;
    }
  }
  const bool any_converged = std::any_of(runs.begin(), runs.end(), [&](const Solution& r) {
    return r.converged && r.value >= best - slack;
  });
  if (!any_converged) {
    std::ostringstream os;
    os << "projected gradient did not converge within " << opts.max_iterations << " iterations";
    throw NumericError(os.str(), best);
  }
  Solution out = *pick;
  out.converged = true;
  return out;
}

void project_simplex(std::span<double> x, double total) {
  const std::size_t n = x.size();
  if (n == 0) return;
  std::vector<double> u(x.begin(), x.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += u[k];
    const double cand = (cum - total) / static_cast<double>(k + 1);
    if (k + 1 == n || u[k + 1] <= cand) {
      theta = cand;
      break;
    }
  }
  for (auto& v : x) v = std::max(v - theta, 0.0);
}

void project_capped_simplex(std::span<double> x, double cap) {
  double sum = 0.0;
  for (auto& v : x) {
    v = std::max(v, 0.0);
    sum += v;
  }
  if (sum > cap) project_simplex(x, cap);
}

std::vector<std::vector<double>> capped_simplex_starts(int n, double cap) {
  std::vector<std::vector<double>> out;
  out.emplace_back(static_cast<std::size_t>(n), cap / (n + 1));
  out.emplace_back(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < n; ++t) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    v[static_cast<std::size_t>(t)] = cap;
    out.push_back(std::move(v));
  }
  return out;
}

PatternPolytope::PatternPolytope(int nt, double cap) : nt_(nt), cap_(cap) {
  if (nt < 1) throw DomainError("pattern polytope needs at least one antenna");
  if (nt > kMaxAntennas) {
    std::ostringstream os;
    os << "pattern space 2^" << nt << " exceeds the supported 2^" << kMaxAntennas;
    throw CapacityError(os.str());
  }
  if (!(cap > 0.0)) throw DomainError("marginal cap must be > 0");
}

double PatternPolytope::marginal(std::span<const double> p, int t) const {
  double m = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    if ((b >> t) & 1U) m += p[b];
  }
  return m;
}

bool PatternPolytope::contains(std::span<const double> p, double tol) const {
  if (p.size() != size()) return false;
  double sum = 0.0;
  for (double v : p) {
    if (v < -tol) return false;
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) return false;
  for (int t = 0; t < nt_; ++t) {
    if (marginal(p, t) > cap_ + tol) return false;
  }
  return true;
}

void PatternPolytope::project(std::span<double> p) const {
  const std::size_t n = size();
  if (cap_ >= 1.0) {
    project_simplex(p, 1.0);
    return;
  }
  // Halfspace t has normal with entries b_t in {0,1}, so |normal|^2 = n/2.
  const double normal_sq = static_cast<double>(n / 2);
  std::vector<std::vector<double>> inc(static_cast<std::size_t>(nt_) + 1, std::vector<double>(n, 0.0));
  std::vector<double> x(p.begin(), p.end()), z(n), prev(n);
  for (int cycle = 0; cycle < 200000; ++cycle) {
    prev = x;
    for (std::size_t i = 0; i < n; ++i) z[i] = x[i] + inc[0][i];
    x = z;
    project_simplex(x, 1.0);
    for (std::size_t i = 0; i < n; ++i) inc[0][i] = z[i] - x[i];
    for (int t = 0; t < nt_; ++t) {
      auto& y = inc[static_cast<std::size_t>(t) + 1];
      for (std::size_t i = 0; i < n; ++i) z[i] = x[i] + y[i];
      const double excess = marginal(z, t) - cap_;
      x = z;
      if (excess > 0.0) {
        const double s = excess / normal_sq;
        for (std::size_t b = 0; b < n; ++b) {
          if ((b >> t) & 1U) x[b] -= s;
        }
      }
      for (std::size_t i = 0; i < n; ++i) y[i] = z[i] - x[i];
    }
    double move = 0.0;
    for (std::size_t i = 0; i < n; ++i) move = std::max(move, std::abs(x[i] - prev[i]));
    if (move < 1e-13 && contains(x, 1e-12)) {
      std::copy(x.begin(), x.end(), p.begin());
      return;
    }
  }
  throw NumericError("pattern polytope projection did not converge");
}

std::vector<std::vector<double>> PatternPolytope::starts(std::size_t max_starts) const {
  const std::size_t n = size();
  std::vector<std::vector<double>> out;
  std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
  project(uniform);
  out.push_back(std::move(uniform));
  std::vector<std::size_t> patterns;
  if (n + 1 <= max_starts) {
    patterns.resize(n);
    std::iota(patterns.begin(), patterns.end(), std::size_t{0});
  } else {
    patterns.push_back(0);
    for (int t = 0; t < nt_; ++t) patterns.push_back(std::size_t{1} << t);
    patterns.push_back(n - 1);
  }
  for (std::size_t b : patterns) {
    if (out.size() >= max_starts) break;
    std::vector<double> v(n, 0.0);
    v[b] = 1.0;
    project(v);
    out.push_back(std::move(v));
  }
  return out;
}

Max1d maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                  std::span<const double> seeds, int grid, double xtol) {
  if (!(hi >= lo)) throw DomainError("maximize_1d: empty interval");
  if (hi == lo) return {lo, f(lo)};
  std::vector<double> xs;
  grid = std::max(grid, 2);
  for (int i = 0; i < grid; ++i) xs.push_back(lo + (hi - lo) * i / (grid - 1));
  for (double s : seeds) {
    if (s >= lo && s <= hi) xs.push_back(s);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);
  const std::size_t k = static_cast<std::size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  Max1d best{xs[k], fs[k]};

  double a = xs[k == 0 ? 0 : k - 1];
  double b = xs[k + 1 == xs.size() ? k : k + 1];
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  const double width = xtol * (hi - lo);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

}  // namespace noncoh::opt
