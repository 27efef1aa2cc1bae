// Copyright 2026 The barstress Authors.
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

// Stress and relaxation curve models.
//
//   4PL:      y = d + (a - d) / (1 + (x / c)^b)
//   quartic:  y = a + b x + c x^2 + d x^3 + e x^4
//
// Fits are scored with R^2 = 1 - RSS/TSS and with AIC under a Gaussian
// likelihood, AIC = n ln(2 pi RSS / n) + n + 2k, where k counts only the
// model coefficients (4 or 5), not the noise variance.

#ifndef BARSTRESS_CORE_REGRESS_H_
#define BARSTRESS_CORE_REGRESS_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace barstress {

struct DataPoint {
  double x = 0.0;  // minutes
  double y = 0.0;  // ratio
};

struct FourPLModel {
  double a = 0.0;  // response at x = 0
  double b = 1.0;  // Hill slope
  double c = 1.0;  // inflection point, minutes
  double d = 0.0;  // response as x -> infinity
};

struct QuarticModel {
  std::array<double, 5> coef{};  // degree 0..4
};

// Exact formula. (x/c)^b is evaluated as exp(b ln(x/c)) with the exponent
// clamped to +-700. Throws kUndefinedAtZero for x = 0 with b <= 0 and
// kInvalidArgument for x < 0 or c <= 0.
double Eval4pl(const FourPLModel& model, double x);
double EvalQuartic(const QuarticModel& model, double x);

struct FitOptions {
  int max_iterations = 500;
  double tolerance = 1e-12;  // relative RSS change
  int multistart_count = 16;
  double b_min = 0.01;
  double b_max = 50.0;
  double c_min = 0.1;
  double c_max_factor = 1e4;  // c <= c_max_factor * max(x)

  void Validate() const;
};

enum class ModelType { kFourPL, kQuartic };

struct FitResult {
  std::variant<FourPLModel, QuarticModel> model;
  double rss = 0.0;
  double r_squared = 0.0;
  double aic = 0.0;  // -infinity when interpolating
  int n = 0;
  int k = 0;
  bool converged = false;
  int iterations = 0;
  // RSS at floating-point noise level: the model passes through every point.
  bool interpolating = false;
  std::vector<DataPoint> points;

  ModelType type() const {
    return std::holds_alternative<FourPLModel>(model) ? ModelType::kFourPL
                                                      : ModelType::kQuartic;
  }
  double Predict(double x) const;
  // a, b, c, d[, e]
  std::vector<double> Params() const;
};

// Deterministic multistart initialisations for Fit4pl.
std::vector<FourPLModel> FourPLStarts(std::span<const DataPoint> points,
                                      const FitOptions& options);

double Rss4pl(std::span<const DataPoint> points, const FourPLModel& model);

// Damped Gauss-Newton (Levenberg-Marquardt) from every start; the lowest RSS
// wins, ties going to the earlier start. converged is true if any start met
// the tolerance. Throws kTooFewPoints (< 4 points or < 4 distinct x),
// kDegenerateX (all x equal).
FitResult Fit4pl(std::span<const DataPoint> points, const FitOptions& options = {});

// Column-pivoted Householder QR on the degree-4 monomial basis. Throws
// kTooFewPoints (< 5 distinct x), kDegenerateX.
FitResult FitQuartic(std::span<const DataPoint> points);

// 1 - RSS/TSS. Throws kLengthMismatch, kTooFewPoints (< 2),
// kZeroTotalVariance.
double RSquared(std::span<const double> observed, std::span<const double> predicted);

// Throws kNonPositiveRss for rss <= 0, kInvalidArgument for n < 1 or k < 1.
double Aic(double rss, int n, int k);

struct Ranking {
  std::vector<std::size_t> order;  // best first
  bool overfit_warning = false;    // the winner interpolates its data
};

// Ascending AIC; ties by smaller k, then smaller RSS. Throws
// kMismatchedData unless all fits share the same points.
Ranking CompareModels(std::span<const FitResult> fits);

// {model_type, params{...}, rss, r_squared, aic, n, k, converged,
//  iterations, interpolating}; aic is null when interpolating.
std::string FitResultToJson(const FitResult& fit);

}  // namespace barstress

#endif  // BARSTRESS_CORE_REGRESS_H_
