#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace finsler::oracle {

// Scalar field over the chart (x, y); throwing marks the stencil point inadmissible.
using ScalarField = std::function<double(const std::vector<double>& x, const std::vector<double>& y)>;
using VectorField =
    std::function<std::vector<double>(const std::vector<double>& x, const std::vector<double>& y)>;

struct FDConfig {
  double base_step = 1e-2; // scaled by (1 + |coordinate|) per variable
  int richardson_levels = 3;
};

struct FDResult {
  double value = 0.0;
  double error_estimate = 0.0; // difference between the last two Richardson levels
};

// Central-difference mixed partial with Richardson extrapolation. The multi-index runs over
// the 2n chart variables (first n are x, last n are y); total order capped at 3 because
// higher orders are certified transitively from lower-order jet output.
FDResult fd_partial(const ScalarField& f, std::vector<double> x, std::vector<double> y,
                    const std::vector<int>& multi_index, const FDConfig& cfg = {});

// First derivative of a vector-valued evaluator along one chart variable (var < n moves x,
// var >= n moves y). One Richardson tableau shared across all components.
std::vector<double> fd_derivative_vec(const VectorField& f, std::vector<double> x,
                                      std::vector<double> y, int var, const FDConfig& cfg = {});

struct SweepResult {
  double min_abs = 0.0;
  double max_abs = 0.0;
  size_t admissible = 0;
  size_t skipped = 0;
  std::vector<double> argmin_x, argmin_y;
};

using PointSampler =
    std::function<void(uint64_t index, std::vector<double>& x, std::vector<double>& y)>;
using PointFunction =
    std::function<double(const std::vector<double>& x, const std::vector<double>& y)>;

// Deterministic brute-force sweep used for negative controls: evaluates |f| on `count`
// sampled points and reports the extremes. Inadmissible samples are counted, never averaged.
SweepResult sweep_min(const PointFunction& f, const PointSampler& sampler, size_t count);

} // namespace finsler::oracle
