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

// Scalp topography: inverse-distance-weighted interpolation of per-electrode
// values over the unit disc, the angle (cosine) similarity between two
// topographies, and PPM/PGM rendering.

#ifndef BARSTRESS_CORE_TOPO_H_
#define BARSTRESS_CORE_TOPO_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "core/signal.h"
#include "core/spectral.h"

namespace barstress {

inline constexpr std::size_t kDefaultTopoResolution = 64;

// N x N raster over [-1, 1]^2. Row 0 is the front of the head (+y), column 0
// the left side (-x). Cells whose centre falls outside the unit disc are
// masked and hold NaN; they never take part in any statistic.
class TopoGrid {
 public:
  TopoGrid(std::size_t resolution, std::vector<double> values, double palette_min,
           double palette_max);

  std::size_t resolution() const { return resolution_; }
  double at(std::size_t row, std::size_t col) const {
    return values_[row * resolution_ + col];
  }
  bool masked(std::size_t row, std::size_t col) const;
  const std::vector<double>& values() const { return values_; }

  double palette_min() const { return palette_min_; }
  double palette_max() const { return palette_max_; }
  TopoGrid WithPaletteRange(double lo, double hi) const;

  // Cell centre in disc coordinates.
  static ScalpPosition CellCenter(std::size_t row, std::size_t col, std::size_t n);
  // Cell containing a disc coordinate.
  static std::pair<std::size_t, std::size_t> CellOf(ScalpPosition p, std::size_t n);

 private:
  std::size_t resolution_;
  std::vector<double> values_;
  double palette_min_;
  double palette_max_;
};

// values are ordered as the montage's EEG electrodes. Power-2 IDW; an
// unmasked cell containing an electrode takes that electrode's value exactly.
// The palette range defaults to [min, max] of values (widened by +-1 when
// constant).
TopoGrid InterpolateScalp(std::span<const double> values, const Montage& montage,
                          std::size_t resolution = kDefaultTopoResolution);

// (A . B) / (|A| |B|), clamped to [-1, 1].
double TopoSimilarity(std::span<const double> a, std::span<const double> b);

enum class Palette { kBlueRed, kGray };

// kBlueRed -> binary PPM (P6), kGray -> binary PGM (P5). Masked cells are
// white. Throws kDegenerateRange unless palette_min < palette_max.
std::string RenderTopomap(const TopoGrid& grid, Palette palette);

struct Rgb {
  unsigned char r, g, b;
};
// Colour for t in [0, 1]: blue -> cyan -> yellow -> red.
Rgb BlueRedColor(double t);

// Row-major CSV, masked cells empty.
std::string TopoGridToCsv(const TopoGrid& grid);

enum class TopoScalar { kRatio, kBandPower };

// Per-electrode scalar in montage EEG order: the numerator/denominator
// power ratio, or the numerator band power alone.
std::vector<double> TopoVectorFromPsd(const PsdEstimate& psd, const Montage& montage,
                                      TopoScalar scalar, const RatioBands& bands);

}  // namespace barstress

#endif  // BARSTRESS_CORE_TOPO_H_
