#include "finsler/verify/oracle.hpp"

#include <cmath>
#include <limits>

#include "finsler/errors.hpp"

namespace finsler::oracle {

namespace {

int total_order(const std::vector<int>& mi) {
  int t = 0;
  for (int e : mi) t += e;
  return t;
}

// Richardson tableau for a central first difference: D(h) = f' + c2 h^2 + c4 h^4 + ...
// T[k][j] eliminates h^(2j); the returned estimate is the last diagonal entry.
double richardson(const std::function<double(double)>& central, double h0, int levels,
                  double* err) {
  std::vector<std::vector<double>> t(static_cast<size_t>(levels));
  for (int k = 0; k < levels; ++k) {
    t[static_cast<size_t>(k)].resize(static_cast<size_t>(k) + 1);
    t[static_cast<size_t>(k)][0] = central(h0 / std::pow(2.0, k));
    for (int j = 1; j <= k; ++j) {
      const double pow4 = std::pow(4.0, j);
      t[static_cast<size_t>(k)][static_cast<size_t>(j)] =
          (pow4 * t[static_cast<size_t>(k)][static_cast<size_t>(j - 1)] -
           t[static_cast<size_t>(k - 1)][static_cast<size_t>(j - 1)]) /
          (pow4 - 1.0);
    }
  }
  const double best = t.back().back();
  if (err) {
    const double prev =
        levels >= 2 ? t[static_cast<size_t>(levels - 2)][static_cast<size_t>(levels - 2)] : best;
    *err = std::abs(best - prev);
  }
  return best;
}

struct Chart {
  std::vector<double> x, y;
  double& coord(int var) {
    const size_t n = x.size();
    return var < static_cast<int>(n) ? x[static_cast<size_t>(var)]
                                     : y[static_cast<size_t>(var) - n];
  }
};

// Recursive estimator: derivative along the first active variable applied to the estimator
// for the remaining multi-index.
double estimate(const ScalarField& f, Chart pt, std::vector<int> mi, const FDConfig& cfg,
                double* err) {
  int var = -1;
  for (size_t i = 0; i < mi.size(); ++i) {
    if (mi[i] > 0) {
      var = static_cast<int>(i);
      break;
    }
  }
  if (var < 0) {
    if (err) *err = 0.0;
    return f(pt.x, pt.y);
  }
  mi[static_cast<size_t>(var)] -= 1;
  const double base = pt.coord(var);
  const double h0 = cfg.base_step * (1.0 + std::abs(base));
  auto central = [&](double h) {
    Chart plus = pt, minus = pt;
    plus.coord(var) = base + h;
    minus.coord(var) = base - h;
    double inner_err = 0.0;
    const double fp = estimate(f, plus, mi, cfg, &inner_err);
    const double fm = estimate(f, minus, mi, cfg, &inner_err);
    return (fp - fm) / (2.0 * h);
  };
  return richardson(central, h0, cfg.richardson_levels, err);
}

} // namespace

FDResult fd_partial(const ScalarField& f, std::vector<double> x, std::vector<double> y,
                    const std::vector<int>& multi_index, const FDConfig& cfg) {
  if (multi_index.size() != x.size() + y.size())
    fail(errc::config, "multi-index length must be 2n");
  if (total_order(multi_index) > 3)
    fail(errc::config, "finite-difference order capped at 3; certify higher orders transitively");
  if (cfg.base_step <= 0.0 || cfg.richardson_levels < 2)
    fail(errc::config, "finite-difference configuration requires a positive step and >= 2 levels");
  FDResult r;
  Chart pt{std::move(x), std::move(y)};
  r.value = estimate(f, pt, multi_index, cfg, &r.error_estimate);
  return r;
}

std::vector<double> fd_derivative_vec(const VectorField& f, std::vector<double> x,
                                      std::vector<double> y, int var, const FDConfig& cfg) {
  Chart pt{std::move(x), std::move(y)};
  const double base = pt.coord(var);
  const double h0 = cfg.base_step * (1.0 + std::abs(base));
  const int levels = cfg.richardson_levels;

  std::vector<std::vector<std::vector<double>>> t(static_cast<size_t>(levels));
  size_t dimension = 0;
  for (int k = 0; k < levels; ++k) {
    const double h = h0 / std::pow(2.0, k);
    Chart plus = pt, minus = pt;
    plus.coord(var) = base + h;
    minus.coord(var) = base - h;
    std::vector<double> fp = f(plus.x, plus.y);
    std::vector<double> fm = f(minus.x, minus.y);
    dimension = fp.size();
    std::vector<double> d(dimension);
    for (size_t i = 0; i < dimension; ++i) d[i] = (fp[i] - fm[i]) / (2.0 * h);
    t[static_cast<size_t>(k)].resize(static_cast<size_t>(k) + 1);
    t[static_cast<size_t>(k)][0] = std::move(d);
    for (int j = 1; j <= k; ++j) {
      const double pow4 = std::pow(4.0, j);
      std::vector<double> e(dimension);
      for (size_t i = 0; i < dimension; ++i)
        e[i] = (pow4 * t[static_cast<size_t>(k)][static_cast<size_t>(j - 1)][i] -
                t[static_cast<size_t>(k - 1)][static_cast<size_t>(j - 1)][i]) /
               (pow4 - 1.0);
      t[static_cast<size_t>(k)][static_cast<size_t>(j)] = std::move(e);
    }
  }
  return t.back().back();
}

SweepResult sweep_min(const PointFunction& f, const PointSampler& sampler, size_t count) {
  if (count < 1) fail(errc::config, "sweep needs at least one sample");
  SweepResult r;
  r.min_abs = std::numeric_limits<double>::infinity();
  std::vector<double> x, y;
  for (uint64_t i = 0; i < count; ++i) {
    sampler(i, x, y);
    double v;
    try {
      v = std::abs(f(x, y));
    } catch (const error&) {
      ++r.skipped;
      continue;
    }
    ++r.admissible;
    if (v < r.min_abs) {
      r.min_abs = v;
      r.argmin_x = x;
      r.argmin_y = y;
    }
    r.max_abs = std::max(r.max_abs, v);
  }
  if (r.admissible == 0) fail(errc::inadmissible_point, "all sweep samples were inadmissible");
  return r;
}

} // namespace finsler::oracle
