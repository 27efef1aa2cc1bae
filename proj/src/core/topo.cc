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

#include "core/topo.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "core/error.h"

namespace barstress {

namespace {

std::vector<const ChannelInfo*> EegElectrodes(const Montage& montage) {
  std::vector<const ChannelInfo*> out;
  for (const auto& e : montage.electrodes()) {
    if (e.kind == ChannelKind::kEeg) out.push_back(&e);
  }
  return out;
}

bool InsideDisc(ScalpPosition p) { return p.x * p.x + p.y * p.y <= 1.0; }

}  // namespace

TopoGrid::TopoGrid(std::size_t resolution, std::vector<double> values,
                   double palette_min, double palette_max)
    : resolution_(resolution),
      values_(std::move(values)),
      palette_min_(palette_min),
      palette_max_(palette_max) {
  if (resolution_ == 0 || values_.size() != resolution_ * resolution_) {
    Fail(ErrorCode::kLengthMismatch, "grid values do not match the resolution");
  }
}

bool TopoGrid::masked(std::size_t row, std::size_t col) const {
  return std::isnan(at(row, col));
}

TopoGrid TopoGrid::WithPaletteRange(double lo, double hi) const {
  return TopoGrid(resolution_, values_, lo, hi);
}

ScalpPosition TopoGrid::CellCenter(std::size_t row, std::size_t col, std::size_t n) {
  const double step = 2.0 / static_cast<double>(n);
  return {-1.0 + (static_cast<double>(col) + 0.5) * step,
          1.0 - (static_cast<double>(row) + 0.5) * step};
}

std::pair<std::size_t, std::size_t> TopoGrid::CellOf(ScalpPosition p, std::size_t n) {
  const double fn = static_cast<double>(n);
  auto index = [fn](double u) {
    const double i = std::floor(u * fn);
    return static_cast<std::size_t>(std::clamp(i, 0.0, fn - 1.0));
  };
  return {index((1.0 - p.y) / 2.0), index((p.x + 1.0) / 2.0)};
}

TopoGrid InterpolateScalp(std::span<const double> values, const Montage& montage,
                          std::size_t resolution) {
  const auto electrodes = EegElectrodes(montage);
  if (values.size() != electrodes.size()) {
    Fail(ErrorCode::kLengthMismatch,
         std::to_string(values.size()) + " values for " +
             std::to_string(electrodes.size()) + " EEG electrodes");
  }
  if (resolution == 0) Fail(ErrorCode::kInvalidArgument, "resolution must be >= 1");
  for (double v : values) {
    if (!std::isfinite(v)) Fail(ErrorCode::kNonFiniteSample, "topography value");
  }

  const std::size_t n = resolution;
  std::vector<double> grid(n * n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const ScalpPosition p = TopoGrid::CellCenter(r, c, n);
      if (!InsideDisc(p)) continue;
      double num = 0.0;
      double den = 0.0;
      bool exact = false;
      for (std::size_t i = 0; i < electrodes.size(); ++i) {
        const double dx = p.x - electrodes[i]->position.x;
        const double dy = p.y - electrodes[i]->position.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < 1e-24) {
          grid[r * n + c] = values[i];
          exact = true;
          break;
        }
        num += values[i] / d2;
        den += 1.0 / d2;
      }
      if (!exact) grid[r * n + c] = num / den;
    }
  }

  // Node exactness: each electrode's cell carries its value; when several
  // electrodes share a cell the one nearest the centre wins. Masked cells
  // stay masked.
  std::vector<double> best_d2(n * n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < electrodes.size(); ++i) {
    const auto [r, c] = TopoGrid::CellOf(electrodes[i]->position, n);
    const ScalpPosition center = TopoGrid::CellCenter(r, c, n);
    if (!InsideDisc(center)) continue;
    const double dx = center.x - electrodes[i]->position.x;
    const double dy = center.y - electrodes[i]->position.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2[r * n + c]) {
      best_d2[r * n + c] = d2;
      grid[r * n + c] = values[i];
    }
  }

  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double pmin = *lo;
  double pmax = *hi;
  if (!(pmin < pmax)) {
    pmin -= 1.0;
    pmax += 1.0;
  }
  return TopoGrid(n, std::move(grid), pmin, pmax);
}

double TopoSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kLengthMismatch, "topography vectors differ in length");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      Fail(ErrorCode::kNonFiniteSample, "topography value");
    }
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) Fail(ErrorCode::kZeroVector, "topography vector is zero");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

Rgb BlueRedColor(double t) {
  struct Stop {
    double t, r, g, b;
  };
  static constexpr Stop kStops[] = {{0.0, 0, 0, 255},
                                    {1.0 / 3.0, 0, 255, 255},
                                    {2.0 / 3.0, 255, 255, 0},
                                    {1.0, 255, 0, 0}};
  t = std::clamp(t, 0.0, 1.0);
  std::size_t i = 0;
  while (i + 2 < std::size(kStops) && t > kStops[i + 1].t) ++i;
  const Stop& s0 = kStops[i];
  const Stop& s1 = kStops[i + 1];
  const double u = (t - s0.t) / (s1.t - s0.t);
  auto mix = [u](double x, double y) {
    return static_cast<unsigned char>(std::lround(x + u * (y - x)));
  };
  return {mix(s0.r, s1.r), mix(s0.g, s1.g), mix(s0.b, s1.b)};
}

std::string RenderTopomap(const TopoGrid& grid, Palette palette) {
  const double lo = grid.palette_min();
  const double hi = grid.palette_max();
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    Fail(ErrorCode::kDegenerateRange, "palette range must satisfy min < max");
  }
  const std::size_t n = grid.resolution();
  const bool color = palette == Palette::kBlueRed;
  std::string out = std::string(color ? "P6\n" : "P5\n") + std::to_string(n) + " " +
                    std::to_string(n) + "\n255\n";
  out.reserve(out.size() + n * n * (color ? 3 : 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (grid.masked(r, c)) {
        out.append(color ? 3 : 1, static_cast<char>(255));
        continue;
      }
      const double t = (grid.at(r, c) - lo) / (hi - lo);
      if (color) {
        const Rgb rgb = BlueRedColor(t);
        out.push_back(static_cast<char>(rgb.r));
        out.push_back(static_cast<char>(rgb.g));
        out.push_back(static_cast<char>(rgb.b));
      } else {
        // 255 is reserved for the mask.
        out.push_back(static_cast<char>(std::lround(254.0 * std::clamp(t, 0.0, 1.0))));
      }
    }
  }
  return out;
}

std::string TopoGridToCsv(const TopoGrid& grid) {
  const std::size_t n = grid.resolution();
  std::string out;
  char buf[32];
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (c > 0) out.push_back(',');
      if (grid.masked(r, c)) continue;
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), grid.at(r, c));
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<double> TopoVectorFromPsd(const PsdEstimate& psd, const Montage& montage,
                                      TopoScalar scalar, const RatioBands& bands) {
  std::vector<double> out;
  for (const ChannelInfo* e : EegElectrodes(montage)) {
    std::size_t idx = psd.channels.size();
    for (std::size_t c = 0; c < psd.channels.size(); ++c) {
      if (psd.channels[c].label == e->label) idx = c;
    }
    if (idx == psd.channels.size()) {
      Fail(ErrorCode::kLengthMismatch, "PSD lacks montage electrode '" + e->label + "'");
    }
    const double num = ChannelBandPower(psd, idx, bands.numerator);
    out.push_back(scalar == TopoScalar::kBandPower
                      ? num
                      : PowerRatio(num, ChannelBandPower(psd, idx, bands.denominator)));
  }
  return out;
}

}  // namespace barstress
