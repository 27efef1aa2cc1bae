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

#include "core/signal.h"

#include <cmath>
#include <set>

#include "core/error.h"

namespace barstress {

namespace {

void CheckPosition(const ChannelInfo& ch, ErrorCode code) {
  const double r2 = ch.position.x * ch.position.x + ch.position.y * ch.position.y;
  if (!std::isfinite(r2) || r2 > 1.0 + 1e-12) {
    Fail(code, "electrode '" + ch.label + "' lies outside the unit disc");
  }
}

void CheckUniqueLabels(const std::vector<ChannelInfo>& channels) {
  std::set<std::string> seen;
  for (const auto& ch : channels) {
    if (ch.label.empty()) {
      Fail(ErrorCode::kInvalidArgument, "empty channel label");
    }
    if (!seen.insert(ch.label).second) {
      Fail(ErrorCode::kDuplicateChannelLabel, "label '" + ch.label + "'");
    }
  }
}

template <typename T>
std::optional<std::size_t> FindLabel(const std::vector<T>& items,
                                     std::string_view label) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].label == label) return i;
  }
  return std::nullopt;
}

}  // namespace

Montage::Montage(std::string name, std::vector<ChannelInfo> electrodes)
    : name_(std::move(name)), electrodes_(std::move(electrodes)) {
  CheckUniqueLabels(electrodes_);
  for (const auto& e : electrodes_) CheckPosition(e, ErrorCode::kInvalidMontage);
  if (EegCount() == 0) {
    Fail(ErrorCode::kInvalidMontage, "montage '" + name_ + "' has no EEG electrode");
  }
}

std::optional<std::size_t> Montage::Find(std::string_view label) const {
  return FindLabel(electrodes_, label);
}

std::size_t Montage::EegCount() const {
  std::size_t n = 0;
  for (const auto& e : electrodes_) n += e.kind == ChannelKind::kEeg;
  return n;
}

Recording::Recording(std::vector<ChannelInfo> channels,
                     std::vector<std::vector<double>> samples,
                     double sampling_rate, double start_offset)
    : channels_(std::move(channels)),
      samples_(std::move(samples)),
      sampling_rate_(sampling_rate),
      start_offset_(start_offset) {
  if (!(sampling_rate_ > 0.0) || !std::isfinite(sampling_rate_)) {
    Fail(ErrorCode::kInvalidArgument, "sampling rate must be positive");
  }
  if (!std::isfinite(start_offset_)) {
    Fail(ErrorCode::kInvalidArgument, "start offset must be finite");
  }
  if (channels_.size() != samples_.size()) {
    Fail(ErrorCode::kLengthMismatch, "channel list and sample matrix differ");
  }
  CheckUniqueLabels(channels_);
  for (const auto& ch : channels_) CheckPosition(ch, ErrorCode::kInvalidArgument);
  for (std::size_t c = 0; c < samples_.size(); ++c) {
    if (samples_[c].size() != samples_.front().size()) {
      Fail(ErrorCode::kLengthMismatch,
           "channel '" + channels_[c].label + "' has a different sample count");
    }
    for (double v : samples_[c]) {
      if (!std::isfinite(v)) {
        Fail(ErrorCode::kNonFiniteSample, "channel '" + channels_[c].label + "'");
      }
    }
  }
}

std::optional<std::size_t> Recording::Find(std::string_view label) const {
  return FindLabel(channels_, label);
}

std::vector<std::size_t> Recording::EegIndices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    if (channels_[i].kind == ChannelKind::kEeg) out.push_back(i);
  }
  return out;
}

void BandDefinition::Validate(double nyquist) const {
  if (!(f_low >= 0.0) || !(f_low < f_high) || !(f_high <= nyquist)) {
    Fail(ErrorCode::kBandOutOfRange,
         "band '" + name + "' [" + std::to_string(f_low) + ", " +
             std::to_string(f_high) + "] Hz outside [0, " +
             std::to_string(nyquist) + "]");
  }
}

const std::vector<BandDefinition>& StandardBands() {
  static const std::vector<BandDefinition> kBands = {
      {"delta", 0.5, 4.0},
      {"theta", 4.0, 8.0},
      {"alpha", 8.0, 13.0},
      {"beta", 13.0, 30.0},
  };
  return kBands;
}

std::optional<BandDefinition> StandardBand(std::string_view name) {
  for (const auto& b : StandardBands()) {
    if (b.name == name) return b;
  }
  return std::nullopt;
}

std::string_view ToString(Phase v) {
  switch (v) {
    case Phase::kBaseline: return "baseline";
    case Phase::kDuringGameplay: return "during_gameplay";
    case Phase::kAfterGameplay: return "after_gameplay";
  }
  return "baseline";
}

std::string_view ToString(GameType v) {
  switch (v) {
    case GameType::kPuzzle: return "puzzle";
    case GameType::kStrategic: return "strategic";
    case GameType::kCombinational: return "combinational";
    case GameType::kNone: return "none";
  }
  return "none";
}

std::string_view ToString(GamerType v) {
  return v == GamerType::kGamer ? "gamer" : "non_gamer";
}

std::string_view ToString(MusicType v) {
  switch (v) {
    case MusicType::kLowPitch: return "low_pitch";
    case MusicType::kMediumPitch: return "medium_pitch";
    case MusicType::kHighPitch: return "high_pitch";
    case MusicType::kNoMusic: return "no_music";
    case MusicType::kNone: return "none";
  }
  return "none";
}

namespace {

template <typename E, std::size_t N>
E ParseEnum(std::string_view s, const E (&values)[N], const char* what) {
  for (E v : values) {
    if (ToString(v) == s) return v;
  }
  Fail(ErrorCode::kInvalidArgument,
       std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

Phase ParsePhase(std::string_view s) {
  static constexpr Phase kAll[] = {Phase::kBaseline, Phase::kDuringGameplay,
                                   Phase::kAfterGameplay};
  return ParseEnum(s, kAll, "phase");
}

GameType ParseGameType(std::string_view s) {
  static constexpr GameType kAll[] = {GameType::kPuzzle, GameType::kStrategic,
                                      GameType::kCombinational, GameType::kNone};
  return ParseEnum(s, kAll, "game type");
}

GamerType ParseGamerType(std::string_view s) {
  static constexpr GamerType kAll[] = {GamerType::kGamer, GamerType::kNonGamer};
  return ParseEnum(s, kAll, "gamer type");
}

MusicType ParseMusicType(std::string_view s) {
  static constexpr MusicType kAll[] = {MusicType::kLowPitch, MusicType::kMediumPitch,
                                       MusicType::kHighPitch, MusicType::kNoMusic,
                                       MusicType::kNone};
  return ParseEnum(s, kAll, "music type");
}

std::vector<double> SessionProtocol::DefaultEpochTimes(Phase phase) {
  switch (phase) {
    case Phase::kDuringGameplay: return {900.0, 1800.0, 2700.0, 3600.0};
    case Phase::kAfterGameplay: return {0.0, 180.0, 360.0, 540.0, 720.0};
    case Phase::kBaseline: return {0.0};
  }
  return {0.0};
}

SessionProtocol SessionProtocol::Defaults(Phase phase) {
  SessionProtocol p;
  p.phase = phase;
  p.epoch_times = DefaultEpochTimes(phase);
  return p;
}

void SessionProtocol::Validate() const {
  if (music_type != MusicType::kNone && phase != Phase::kAfterGameplay) {
    Fail(ErrorCode::kInvalidArgument,
         "music type is only valid for the after-gameplay phase");
  }
  for (std::size_t i = 0; i < epoch_times.size(); ++i) {
    if (!std::isfinite(epoch_times[i]) || epoch_times[i] < 0.0) {
      Fail(ErrorCode::kInvalidArgument, "epoch times must be finite and >= 0");
    }
    if (i > 0 && !(epoch_times[i] > epoch_times[i - 1])) {
      Fail(ErrorCode::kInvalidArgument, "epoch times must be strictly increasing");
    }
  }
}

Epoch SliceWindow(const Recording& recording, double t_start, double window_len) {
  if (!(window_len > 0.0) || !std::isfinite(window_len)) {
    Fail(ErrorCode::kInvalidArgument, "window length must be positive");
  }
  const double fs = recording.sampling_rate();
  const double first = std::round((t_start - recording.start_offset()) * fs);
  const double count = std::round(window_len * fs);
  if (count < 1.0) {
    Fail(ErrorCode::kInvalidArgument, "window shorter than one sample");
  }
  if (!std::isfinite(first) || first < 0.0 ||
      first + count > static_cast<double>(recording.sample_count())) {
    Fail(ErrorCode::kEpochOutOfRange,
         "window at " + std::to_string(t_start) + " s of " +
             std::to_string(window_len) + " s exceeds the " +
             std::to_string(recording.duration()) + " s recording");
  }
  const auto begin = static_cast<std::ptrdiff_t>(first);
  const auto n = static_cast<std::ptrdiff_t>(count);

  Epoch epoch;
  epoch.channels = recording.channels();
  epoch.sampling_rate = fs;
  epoch.t_start = t_start;
  epoch.t_end = t_start + window_len;
  epoch.samples.reserve(recording.channel_count());
  for (const auto& ch : recording.samples()) {
    epoch.samples.emplace_back(ch.begin() + begin, ch.begin() + begin + n);
  }
  return epoch;
}

std::vector<Epoch> SliceEpochs(const Recording& recording,
                               const SessionProtocol& protocol,
                               double window_len) {
  if (protocol.epoch_times.empty()) {
    Fail(ErrorCode::kEmptyProtocol, "protocol has no epoch times");
  }
  protocol.Validate();
  std::vector<Epoch> epochs;
  epochs.reserve(protocol.epoch_times.size());
  for (double t : protocol.epoch_times) {
    epochs.push_back(SliceWindow(recording, t, window_len));
  }
  return epochs;
}

}  // namespace barstress
