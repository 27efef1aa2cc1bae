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

#include "core/regress.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "core/error.h"
#include "json.hpp"

namespace barstress {

namespace {

constexpr double kExponentClamp = 700.0;
constexpr double kInterpolationRss = 1e-18;  // relative to sum(y^2)

// (x/c)^b for x > 0 as exp(b (ln x - ln c)).
double PowerTerm(double x, double b, double log_c) {
  return std::exp(std::clamp(b * (std::log(x) - log_c), -kExponentClamp, kExponentClamp));
}

double SumSquares(std::span<const DataPoint> points) {
  double s = 0.0;
  for (const auto& p : points) s += p.y * p.y;
  return s;
}

std::size_t DistinctX(std::span<const DataPoint> points) {
  std::set<double> xs;
  for (const auto& p : points) xs.insert(p.x);
  return xs.size();
}

void CheckPoints(std::span<const DataPoint> points, std::size_t needed) {
  if (points.size() < needed) {
    Fail(ErrorCode::kTooFewPoints, std::to_string(points.size()) + " points, need " +
                                       std::to_string(needed));
  }
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      Fail(ErrorCode::kInvalidArgument, "non-finite data point");
    }
  }
  const std::size_t distinct = DistinctX(points);
  if (distinct == 1) Fail(ErrorCode::kDegenerateX, "all x values are equal");
  if (distinct < needed) {
    Fail(ErrorCode::kTooFewPoints, std::to_string(distinct) + " distinct x values, need " +
                                       std::to_string(needed));
  }
}

// Fills R^2, AIC, the interpolation flag and the point copy.
void Score(FitResult& fit, std::span<const DataPoint> points) {
  fit.points.assign(points.begin(), points.end());
  fit.n = static_cast<int>(points.size());
  fit.interpolating = fit.rss <= kInterpolationRss * SumSquares(points);
  std::vector<double> observed;
  std::vector<double> predicted;
  for (const auto& p : points) {
    observed.push_back(p.y);
    predicted.push_back(fit.Predict(p.x));
  }
  double mean = 0.0;
  for (double y : observed) mean += y;
  mean /= static_cast<double>(observed.size());
  double tss = 0.0;
  for (double y : observed) tss += (y - mean) * (y - mean);
  if (tss > 0.0) {
    fit.r_squared = RSquared(observed, predicted);
  } else {
    fit.r_squared = fit.interpolating ? 1.0 : 0.0;
  }
  fit.aic = fit.interpolating ? -std::numeric_limits<double>::infinity()
                              : Aic(fit.rss, fit.n, fit.k);
}

// Levenberg-Marquardt over theta = (a, b, ln c, d) with box bounds on b and
// ln c handled by projection plus an active set.
struct LmOutcome {
  FourPLModel model;
  double rss = 0.0;
  bool converged = false;
  int iterations = 0;
};

class FourPLProblem {
 public:
  FourPLProblem(std::span<const DataPoint> points, const FitOptions& options)
      : points_(points), options_(options) {
    double max_x = 0.0;
    for (const auto& p : points) max_x = std::max(max_x, p.x);
    lower_ = {-INFINITY, options.b_min, std::log(options.c_min), -INFINITY};
    upper_ = {INFINITY, options.b_max,
              std::log(std::max(options.c_min, options.c_max_factor * max_x)), INFINITY};
  }

  Eigen::Vector4d Clamp(Eigen::Vector4d theta) const {
    for (int i = 0; i < 4; ++i) theta[i] = std::clamp(theta[i], lower_[i], upper_[i]);
    return theta;
  }

  static FourPLModel ToModel(const Eigen::Vector4d& t) {
    return {t[0], t[1], std::exp(t[2]), t[3]};
  }

  double Rss(const Eigen::Vector4d& theta) const {
    double s = 0.0;
    for (const auto& p : points_) {
      const double r = Predict(theta, p.x) - p.y;
      s += r * r;
    }
    return s;
  }

  static double Predict(const Eigen::Vector4d& t, double x) {
    if (x == 0.0) return t[0];
    const double u = PowerTerm(x, t[1], t[2]);
    return t[3] + (t[0] - t[3]) / (1.0 + u);
  }

  void Linearize(const Eigen::Vector4d& t, Eigen::Matrix4d* jtj, Eigen::Vector4d* jtr) const {
    jtj->setZero();
    jtr->setZero();
    for (const auto& p : points_) {
      Eigen::Vector4d row = Eigen::Vector4d::Zero();
      double g = 1.0;
      double h = 0.0;
      if (p.x > 0.0) {
        const double u = PowerTerm(p.x, t[1], t[2]);
        g = 1.0 / (1.0 + u);
        h = u / (1.0 + u);
        const double spread = (t[0] - t[3]) * g * h;
        row[1] = -spread * (std::log(p.x) - t[2]);
        row[2] = spread * t[1];
      }
      row[0] = g;
      row[3] = h;
      const double r = t[3] + (t[0] - t[3]) * g - p.y;
      *jtj += row * row.transpose();
      *jtr += row * r;
    }
  }

  LmOutcome Solve(const FourPLModel& start) const {
    Eigen::Vector4d theta = Clamp(
        {start.a, start.b, std::log(std::max(start.c, options_.c_min)), start.d});
    double rss = Rss(theta);
    const double floor_rss = kInterpolationRss * SumSquares(points_);
    double lambda = 1e-3;
    LmOutcome out;
    for (out.iterations = 0; out.iterations < options_.max_iterations; ++out.iterations) {
      if (rss <= floor_rss) {
        out.converged = true;
        break;
      }
      Eigen::Matrix4d jtj;
      Eigen::Vector4d jtr;
      Linearize(theta, &jtj, &jtr);

      // Parameters pinned at a bound with the descent direction pointing out.
      std::array<bool, 4> active{};
      for (int i = 0; i < 4; ++i) {
        active[i] = (theta[i] <= lower_[i] && jtr[i] > 0.0) ||
                    (theta[i] >= upper_[i] && jtr[i] < 0.0);
      }

      bool accepted = false;
      while (!accepted) {
        Eigen::Matrix4d lhs = jtj;
        Eigen::Vector4d rhs = -jtr;
        for (int i = 0; i < 4; ++i) {
          lhs(i, i) += lambda * std::max(jtj(i, i), 1e-12);
          if (active[i]) {
            lhs.row(i).setZero();
            lhs.col(i).setZero();
            lhs(i, i) = 1.0;
            rhs[i] = 0.0;
          }
        }
        const Eigen::Vector4d step = lhs.ldlt().solve(rhs);
        const Eigen::Vector4d trial = Clamp(theta + step);
        const double trial_rss = step.allFinite() ? Rss(trial) : INFINITY;
        if (trial_rss < rss) {
          const double relative = (rss - trial_rss) / rss;
          theta = trial;
          rss = trial_rss;
          lambda = std::max(lambda * 0.1, 1e-15);
          accepted = true;
          if (relative <= options_.tolerance) out.converged = true;
        } else {
          lambda *= 10.0;
          if (lambda > 1e16) break;
        }
      }
      if (!accepted) {
        // No descending step even at maximal damping: stationary point.
        out.converged = true;
        ++out.iterations;
        break;
      }
      if (out.converged) {
        ++out.iterations;
        break;
      }
    }
    out.model = ToModel(theta);
    out.rss = rss;
    return out;
  }

 private:
  std::span<const DataPoint> points_;
  const FitOptions& options_;
  std::array<double, 4> lower_;
  std::array<double, 4> upper_;
};

}  // namespace

double Eval4pl(const FourPLModel& m, double x) {
  if (!(x >= 0.0)) Fail(ErrorCode::kInvalidArgument, "4PL is defined for x >= 0");
  if (!(m.c > 0.0)) Fail(ErrorCode::kInvalidArgument, "4PL inflection c must be > 0");
  if (x == 0.0) {
    if (!(m.b > 0.0)) Fail(ErrorCode::kUndefinedAtZero, "(0/c)^b with b <= 0");
    return m.a;
  }
  const double u = PowerTerm(x, m.b, std::log(m.c));
  return m.d + (m.a - m.d) / (1.0 + u);
}

double EvalQuartic(const QuarticModel& m, double x) {
  double y = 0.0;
  for (int k = 4; k >= 0; --k) y = y * x + m.coef[k];
  return y;
}

void FitOptions::Validate() const {
  if (max_iterations < 1) Fail(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  if (!(tolerance > 0.0)) Fail(ErrorCode::kInvalidArgument, "tolerance must be > 0");
  if (multistart_count < 1) Fail(ErrorCode::kInvalidArgument, "multistart_count must be >= 1");
  if (!(b_min > 0.0 && b_min < b_max)) Fail(ErrorCode::kInvalidArgument, "bad b bounds");
  if (!(c_min > 0.0 && c_max_factor > 0.0)) Fail(ErrorCode::kInvalidArgument, "bad c bounds");
}

double FitResult::Predict(double x) const {
  if (const auto* m = std::get_if<FourPLModel>(&model)) return Eval4pl(*m, x);
  return EvalQuartic(std::get<QuarticModel>(model), x);
}

std::vector<double> FitResult::Params() const {
  if (const auto* m = std::get_if<FourPLModel>(&model)) return {m->a, m->b, m->c, m->d};
  const auto& q = std::get<QuarticModel>(model);
  return {q.coef.begin(), q.coef.end()};
}

std::vector<FourPLModel> FourPLStarts(std::span<const DataPoint> points,
                                      const FitOptions& options) {
  std::vector<DataPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const DataPoint& p, const DataPoint& q) { return p.x < q.x; });
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& p : sorted) {
    lo = std::min(lo, p.y);
    hi = std::max(hi, p.y);
  }
  const bool rising = sorted.back().y >= sorted.front().y;
  const double median_x = sorted.size() % 2 == 1
                              ? sorted[sorted.size() / 2].x
                              : 0.5 * (sorted[sorted.size() / 2 - 1].x +
                                       sorted[sorted.size() / 2].x);
  const double max_x = sorted.back().x;
  const double c_hi = std::max(options.c_min, options.c_max_factor * max_x);
  auto clamp_c = [&](double c) { return std::clamp(c, options.c_min, c_hi); };

  // With b > 0, a is the response at x = 0, so orientation follows the trend.
  const double a_trend = rising ? lo : hi;
  const double d_trend = rising ? hi : lo;
  static constexpr double kSlopes[] = {0.5, 1.0, 2.0, 5.0};
  static constexpr double kTrendScales[] = {1.0, 0.5, 2.0, 4.0, 0.25, 8.0};
  static constexpr double kReversedScales[] = {1.0, 0.5, 2.0, 4.0};

  std::vector<FourPLModel> starts;
  auto add = [&](double a, double d, double scale) {
    for (double b : kSlopes) {
      starts.push_back({a, std::clamp(b, options.b_min, options.b_max),
                        clamp_c(median_x * scale), d});
    }
  };
  add(a_trend, d_trend, kTrendScales[0]);
  // Near-linear data push c towards its upper bound, where the curve tends to
  // a + (d - a) (x / c)^b. Starting there with b = 1 and the least-squares
  // line saves a long crawl along that flat valley.
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : sorted) {
    mean_x += p.x;
    mean_y += p.y;
  }
  mean_x /= static_cast<double>(sorted.size());
  mean_y /= static_cast<double>(sorted.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : sorted) {
    sxy += (p.x - mean_x) * (p.y - mean_y);
    sxx += (p.x - mean_x) * (p.x - mean_x);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = mean_y - slope * mean_x;
  starts.push_back({intercept, std::clamp(1.0, options.b_min, options.b_max), c_hi,
                    intercept + slope * c_hi});
  for (std::size_t i = 1; i < std::size(kTrendScales); ++i) {
    add(a_trend, d_trend, kTrendScales[i]);
  }
  for (double s : kReversedScales) add(d_trend, a_trend, s);
  while (static_cast<int>(starts.size()) < options.multistart_count) {
    // Geometric sweep of c for callers asking for more starts.
    const double scale = std::pow(2.0, static_cast<double>(starts.size()) / 4.0 - 4.0);
    add(a_trend, d_trend, scale);
  }
  starts.resize(static_cast<std::size_t>(options.multistart_count));
  return starts;
}

double Rss4pl(std::span<const DataPoint> points, const FourPLModel& model) {
  double s = 0.0;
  for (const auto& p : points) {
    const double r = Eval4pl(model, p.x) - p.y;
    s += r * r;
  }
  return s;
}

FitResult Fit4pl(std::span<const DataPoint> points, const FitOptions& options) {
  options.Validate();
  CheckPoints(points, 4);
  for (const auto& p : points) {
    if (p.x < 0.0) Fail(ErrorCode::kInvalidArgument, "4PL requires x >= 0");
  }
  const FourPLProblem problem(points, options);
  const auto starts = FourPLStarts(points, options);

  LmOutcome best;
  best.rss = INFINITY;
  bool any_converged = false;
  for (const auto& start : starts) {
    const LmOutcome outcome = problem.Solve(start);
    any_converged = any_converged || outcome.converged;
    if (outcome.rss < best.rss) best = outcome;
  }

  FitResult fit;
  fit.model = best.model;
  fit.rss = best.rss;
  fit.k = 4;
  fit.converged = any_converged;
  fit.iterations = best.iterations;
  Score(fit, points);
  return fit;
}

FitResult FitQuartic(std::span<const DataPoint> points) {
  CheckPoints(points, 5);
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, std::abs(p.x));

  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd basis(n, 5);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = points[i].x / scale;
    double power = 1.0;
    for (int k = 0; k < 5; ++k) {
      basis(i, k) = power;
      power *= t;
    }
    y[i] = points[i].y;
  }
  const Eigen::VectorXd beta = basis.colPivHouseholderQr().solve(y);

  QuarticModel model;
  double unscale = 1.0;
  for (int k = 0; k < 5; ++k) {
    model.coef[k] = beta[k] / unscale;
    unscale *= scale;
  }
  FitResult fit;
  fit.model = model;
  fit.rss = (basis * beta - y).squaredNorm();
  fit.k = 5;
  fit.converged = true;
  fit.iterations = 1;
  Score(fit, points);
  return fit;
}

double RSquared(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size()) {
    Fail(ErrorCode::kLengthMismatch, "observations and predictions differ in length");
  }
  if (observed.size() < 2) Fail(ErrorCode::kTooFewPoints, "R^2 needs >= 2 points");
  double mean = 0.0;
  for (double y : observed) mean += y;
  mean /= static_cast<double>(observed.size());
  double rss = 0.0;
  double tss = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    rss += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    tss += (observed[i] - mean) * (observed[i] - mean);
  }
  if (!(tss > 0.0)) Fail(ErrorCode::kZeroTotalVariance, "observations are constant");
  return 1.0 - rss / tss;
}

double Aic(double rss, int n, int k) {
  if (!(rss > 0.0)) Fail(ErrorCode::kNonPositiveRss, "AIC needs rss > 0");
  if (n < 1 || k < 1) Fail(ErrorCode::kInvalidArgument, "AIC needs n >= 1 and k >= 1");
  const double nn = static_cast<double>(n);
  return nn * std::log(2.0 * std::numbers::pi * rss / nn) + nn + 2.0 * k;
}

Ranking CompareModels(std::span<const FitResult> fits) {
  if (fits.size() < 2) Fail(ErrorCode::kInvalidArgument, "need at least two fits");
  for (const auto& f : fits) {
    bool same = f.points.size() == fits.front().points.size();
    for (std::size_t i = 0; same && i < f.points.size(); ++i) {
      same = f.points[i].x == fits.front().points[i].x &&
             f.points[i].y == fits.front().points[i].y;
    }
    if (!same) Fail(ErrorCode::kMismatchedData, "fits were made on different points");
  }
  Ranking ranking;
  for (std::size_t i = 0; i < fits.size(); ++i) ranking.order.push_back(i);
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](std::size_t i, std::size_t j) {
                     const auto& p = fits[i];
                     const auto& q = fits[j];
                     if (p.aic != q.aic) return p.aic < q.aic;
                     if (p.k != q.k) return p.k < q.k;
                     return p.rss < q.rss;
                   });
  ranking.overfit_warning = fits[ranking.order.front()].interpolating;
  return ranking;
}

std::string FitResultToJson(const FitResult& fit) {
  nlohmann::ordered_json doc;
  doc["model_type"] = fit.type() == ModelType::kFourPL ? "4pl" : "quartic";
  static constexpr const char* kNames[] = {"a", "b", "c", "d", "e"};
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  const auto values = fit.Params();
  for (std::size_t i = 0; i < values.size(); ++i) params[kNames[i]] = values[i];
  doc["params"] = params;
  doc["rss"] = fit.rss;
  doc["r_squared"] = fit.r_squared;
  doc["aic"] = std::isfinite(fit.aic) ? nlohmann::ordered_json(fit.aic)
                                      : nlohmann::ordered_json(nullptr);
  doc["n"] = fit.n;
  doc["k"] = fit.k;
  doc["converged"] = fit.converged;
  doc["iterations"] = fit.iterations;
  doc["interpolating"] = fit.interpolating;
  return doc.dump(2);
}

}  // namespace barstress
