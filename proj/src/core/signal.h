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

// Domain types shared by the whole pipeline: electrodes, montages, recordings,
// frequency bands, session protocol metadata and epochs.
//
// All types are immutable once constructed. Validation happens in the
// factories, so any value of these types satisfies its invariants.

#ifndef BARSTRESS_CORE_SIGNAL_H_
#define BARSTRESS_CORE_SIGNAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace barstress {

enum class ChannelKind { kEeg, kReference };

struct ScalpPosition {
  double x = 0.0;  // right is positive
  double y = 0.0;  // nose is positive
};

struct ChannelInfo {
  std::string label;
  ScalpPosition position;
  ChannelKind kind = ChannelKind::kEeg;
};

class Montage {
 public:
  // Throws kInvalidMontage when there is no EEG electrode or a position lies
  // outside the closed unit disc, kDuplicateChannelLabel on repeated labels.
  Montage(std::string name, std::vector<ChannelInfo> electrodes);

  const std::string& name() const { return name_; }
  const std::vector<ChannelInfo>& electrodes() const { return electrodes_; }

  // Index into electrodes(), or nullopt.
  std::optional<std::size_t> Find(std::string_view label) const;
  std::size_t EegCount() const;

  // The bundled 30-channel 10-20 layout plus two mastoid references.
  static const Montage& Default();

 private:
  std::string name_;
  std::vector<ChannelInfo> electrodes_;
};

// Multi-channel sampled EEG in microvolts.
class Recording {
 public:
  // Validates: sampling_rate > 0, equal per-channel sample counts, finite
  // samples, unique labels, positions inside the unit disc.
  Recording(std::vector<ChannelInfo> channels,
            std::vector<std::vector<double>> samples, double sampling_rate,
            double start_offset = 0.0);

  const std::vector<ChannelInfo>& channels() const { return channels_; }
  std::span<const double> channel(std::size_t index) const {
    return samples_.at(index);
  }
  const std::vector<std::vector<double>>& samples() const { return samples_; }
  std::size_t channel_count() const { return channels_.size(); }
  std::size_t sample_count() const {
    return samples_.empty() ? 0 : samples_.front().size();
  }
  double sampling_rate() const { return sampling_rate_; }
  double start_offset() const { return start_offset_; }
  double duration() const {
    return static_cast<double>(sample_count()) / sampling_rate_;
  }

  std::optional<std::size_t> Find(std::string_view label) const;
  // Indices of channels with kind kEeg, in channel order.
  std::vector<std::size_t> EegIndices() const;

 private:
  std::vector<ChannelInfo> channels_;
  std::vector<std::vector<double>> samples_;
  double sampling_rate_;
  double start_offset_;
};

struct BandDefinition {
  std::string name;  // delta, theta, alpha, beta or any custom name
  double f_low = 0.0;
  double f_high = 0.0;

  // Throws kBandOutOfRange unless 0 <= f_low < f_high <= nyquist.
  void Validate(double nyquist) const;
};

// delta 0.5-4, theta 4-8, alpha 8-13, beta 13-30 Hz.
const std::vector<BandDefinition>& StandardBands();
// Looks up one of StandardBands() by name.
std::optional<BandDefinition> StandardBand(std::string_view name);

enum class Phase { kBaseline, kDuringGameplay, kAfterGameplay };
enum class GameType { kPuzzle, kStrategic, kCombinational, kNone };
enum class GamerType { kGamer, kNonGamer };
// Relaxation music categories by dominant pitch: low < 200 Hz,
// medium 200-600 Hz, high > 600 Hz.
enum class MusicType { kLowPitch, kMediumPitch, kHighPitch, kNoMusic, kNone };

std::string_view ToString(Phase v);
std::string_view ToString(GameType v);
std::string_view ToString(GamerType v);
std::string_view ToString(MusicType v);
// Inverse of ToString; throw kInvalidArgument on unknown names.
Phase ParsePhase(std::string_view s);
GameType ParseGameType(std::string_view s);
GamerType ParseGamerType(std::string_view s);
MusicType ParseMusicType(std::string_view s);

struct SessionProtocol {
  Phase phase = Phase::kBaseline;
  GameType game_type = GameType::kNone;
  GamerType gamer_type = GamerType::kGamer;
  MusicType music_type = MusicType::kNone;
  // Seconds from phase start.
  std::vector<double> epoch_times;

  // Default schedule for a phase: during gameplay every 15 min up to one
  // hour, after gameplay every 3 min from 0 to 12 min, baseline at 0.
  static std::vector<double> DefaultEpochTimes(Phase phase);
  static SessionProtocol Defaults(Phase phase);

  // Music is only meaningful after gameplay; times must be finite,
  // non-negative and strictly increasing. Throws kInvalidArgument.
  void Validate() const;
};

struct Epoch {
  std::vector<ChannelInfo> channels;
  std::vector<std::vector<double>> samples;
  double sampling_rate = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;

  std::size_t sample_count() const {
    return samples.empty() ? 0 : samples.front().size();
  }
};

// One epoch of round(window_len * sampling_rate) samples per protocol time.
// Protocol times are relative to the phase start; the recording's first
// sample sits at start_offset seconds.
std::vector<Epoch> SliceEpochs(const Recording& recording,
                               const SessionProtocol& protocol,
                               double window_len);

// A single window starting at t_start seconds.
Epoch SliceWindow(const Recording& recording, double t_start,
                  double window_len);

}  // namespace barstress

#endif  // BARSTRESS_CORE_SIGNAL_H_
