// Copyright 2026 The ESBQ Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "esbq/aligner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "esbq/error.h"
#include "esbq/parallel.h"
#include "esbq/projection.h"
#include "esbq/quant_grid.h"

namespace esbq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Upper tail 1 - Phi(t), accurate for large positive t.
double normal_sf(double t) {
  if (t == kInf) return 0.0;
  if (t == -kInf) return 1.0;
  return 0.5 * std::erfc(t / std::numbers::sqrt2);
}

// Phi(u) - Phi(l) without cancellation on the positive half-line.
double normal_mass(double l, double u) {
  if (l >= 0.0) return normal_sf(l) - normal_sf(u);
  if (u <= 0.0) return normal_cdf(u) - normal_cdf(l);
  return 1.0 - normal_sf(u) - normal_cdf(l);
}

// (x - 2q) * phi(x) with the phi(+-inf) = 0 convention.
double edge_term(double x, double q) {
  if (std::isinf(x)) return 0.0;
  return (x - 2.0 * q) * normal_pdf(x);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ArgumentError("alpha must be positive and finite, got " +
                        std::to_string(alpha));
  }
}

}  // namespace

double normal_pdf(double t) {
  if (std::isinf(t)) return 0.0;
  return std::exp(-0.5 * t * t) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double normal_cdf(double t) {
  if (t == kInf) return 1.0;
  if (t == -kInf) return 0.0;
  return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

double gaussian_interval_sqerr(double l, double u, double q) {
  if (std::isnan(l) || std::isnan(u) || std::isnan(q) || l > u) {
    throw ArgumentError("gaussian_interval_sqerr needs l <= u, got l=" +
                        std::to_string(l) + " u=" + std::to_string(u));
  }
  if (l == u) return 0.0;
  const double value =
      (1.0 + q * q) * normal_mass(l, u) + edge_term(l, q) - edge_term(u, q);
  // Rounding can leave a tiny negative residue on very narrow cells.
  return std::max(0.0, value);
}

std::vector<DdaCell> dda_cells(double alpha, const QuantConfig& config) {
  check_alpha(alpha);
  const auto values = grid_for(config).values();
  std::vector<DdaCell> cells(values.size());
  double lower = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double level = alpha * values[i];
    const double upper = (i + 1 < values.size())
                             ? 0.5 * (level + alpha * values[i + 1])
                             : kInf;
    cells[i] = {lower, upper, level};
    lower = upper;
  }
  return cells;
}

double dda_eval(double alpha, const QuantConfig& config) {
  double half = 0.0;
  for (const DdaCell& cell : dda_cells(alpha, config)) {
    half += gaussian_interval_sqerr(cell.lower, cell.upper, cell.level);
  }
  return 2.0 * half;
}

DdaResult solve_alpha(const QuantConfig& config, const SolverOptions& options) {
  if (!(options.scan_step > 0.0) || !(options.alpha_max >= options.scan_step) ||
      !(options.tolerance > 0.0)) {
    throw ArgumentError("solver needs 0 < scan_step <= alpha_max and tolerance > 0");
  }
  const auto steps =
      static_cast<int>(std::llround(options.alpha_max / options.scan_step));
  auto lattice = [&](int j) { return j * options.scan_step; };

  // scan[0] is the alpha -> 0+ limit, where every sample falls in the zero
  // cell and the error is E[t^2] = 1.
  std::vector<double> scan(steps + 1);
  scan[0] = 1.0;
  for (int j = 1; j <= steps; ++j) scan[j] = dda_eval(lattice(j), config);

  auto is_local_min = [&](int j) {
    return scan[j] <= scan[j - 1] && (j == steps || scan[j] <= scan[j + 1]);
  };

  // Golden-section search on the bracket around lattice point j.
  auto refine = [&](int j) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lattice(j - 1);
    double c = lattice(std::min(j + 1, steps));
    double x1 = c - inv_phi * (c - a);
    double x2 = a + inv_phi * (c - a);
    double f1 = dda_eval(x1, config);
    double f2 = dda_eval(x2, config);
    DdaResult r;
    r.config = config;
    while (c - a > options.tolerance) {
      if (f1 <= f2) {
        c = x2;
        x2 = x1;
        f2 = f1;
        x1 = c - inv_phi * (c - a);
        f1 = dda_eval(x1, config);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (c - a);
        f2 = dda_eval(x2, config);
      }
      ++r.iterations;
    }
    r.alpha_star = f1 <= f2 ? x1 : x2;
    r.dda = std::min(f1, f2);
    if (scan[j] < r.dda) {
      r.alpha_star = lattice(j);
      r.dda = scan[j];
    }
    return r;
  };

  if (options.policy == MinimumPolicy::kFirstLocal) {
    for (int j = 1; j <= steps; ++j) {
      if (is_local_min(j)) return refine(j);
    }
    return refine(steps);
  }
  DdaResult result;
  result.dda = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  for (int j = 1; j <= steps; ++j) {
    if (!is_local_min(j)) continue;
    const DdaResult r = refine(j);
    total_iterations += r.iterations;
    if (r.dda < result.dda) result = r;
  }
  result.iterations = total_iterations;
  return result;
}

MonteCarloEstimate dda_monte_carlo(double alpha, const QuantConfig& config,
                                   std::uint64_t n, std::uint64_t seed) {
  check_alpha(alpha);
  if (n == 0) throw ArgumentError("Monte Carlo needs at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double c = config.max_value();
  // Welford running mean/variance of the squared error.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double x = normal(rng);
    const double q = alpha * project_lookup(std::clamp(x / alpha, -c, c), config);
    const double err = (x - q) * (x - q);
    const double delta = err - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (err - mean);
  }
  MonteCarloEstimate out;
  out.mse = mean;
  out.samples = n;
  out.std_error =
      n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n))
            : 0.0;
  return out;
}

std::vector<TableRow> generate_table(int bits_min, int bits_max,
                                     const SolverOptions& options) {
  if (bits_min > bits_max) {
    throw ArgumentError("bits range is empty: " + std::to_string(bits_min) +
                        ".." + std::to_string(bits_max));
  }
  std::vector<QuantConfig> configs;
  for (int b = bits_min; b <= bits_max; ++b) {
    for (int k = 0; k <= b - 2; ++k) configs.push_back(QuantConfig::make(b, k));
  }
  std::vector<TableRow> rows(configs.size());
  parallel_for(configs.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const DdaResult r = solve_alpha(configs[i], options);
      rows[i] = {configs[i], configs[i].alias(), r.alpha_star, r.dda,
                 configs[i].recommended()};
    }
  });
  return rows;
}

}  // namespace esbq
