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

#include "core/ingest.h"

#include <cmath>
#include <random>

#include "common/edf_builder.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace barstress {
namespace {

using testdata::BuildEdf;
using testdata::EdfSignalSpec;
using testdata::EdfSpec;

const Montage& M() { return Montage::Default(); }

TEST(ReadCsvTest, TwoChannelsThreeRows) {
  const Recording r = ReadCsv("Fz,Cz\n1,2\n3,4\n5,6\n", {}, 500.0, M());
  ASSERT_EQ(r.channel_count(), 2u);
  ASSERT_EQ(r.sample_count(), 3u);
  EXPECT_EQ(r.channels()[0].label, "Fz");
  EXPECT_EQ(r.samples()[0], (std::vector<double>{1, 3, 5}));
  EXPECT_EQ(r.samples()[1], (std::vector<double>{2, 4, 6}));
  EXPECT_EQ(r.sampling_rate(), 500.0);
}

TEST(ReadCsvTest, ChannelsFollowMontageOrder) {
  const Recording r = ReadCsv("Oz,Fp1\n1,2\n", {}, 100.0, M());
  EXPECT_EQ(r.channels()[0].label, "Fp1");
  EXPECT_EQ(r.channels()[1].label, "Oz");
  EXPECT_EQ(r.samples()[0][0], 2.0);
}

TEST(ReadCsvTest, AcceptsCrlfBomTimeColumnAndOtherDelimiters) {
  const Recording a = ReadCsv("\xEF\xBB\xBFt;Fz\r\n0;1.5\r\n0.002;-2.5\r\n\r\n",
                              {';', true, 0}, 500.0, M());
  ASSERT_EQ(a.channel_count(), 1u);
  EXPECT_EQ(a.samples()[0], (std::vector<double>{1.5, -2.5}));
  const Recording b = ReadCsv("Fz\tCz\n 1 \t+2\n", {'\t', true, {}}, 500.0, M());
  EXPECT_EQ(b.samples()[1][0], 2.0);
}

TEST(ReadCsvTest, HeaderlessUsesMontageOrder) {
  std::string row;
  for (int i = 0; i < 30; ++i) row += (i ? "," : "") + std::to_string(i);
  const Recording r = ReadCsv(row + "\n", {',', false, {}}, 500.0, M());
  ASSERT_EQ(r.channel_count(), 30u);
  EXPECT_EQ(r.channels()[0].label, "Fp1");
  EXPECT_EQ(r.samples()[29][0], 29.0);
  EXPECT_BS_ERROR(ReadCsv("1,2,3\n", {',', false, {}}, 500.0, M()),
                  ErrorCode::kMalformedRow);
}

TEST(ReadCsvTest, TypedErrors) {
  EXPECT_BS_ERROR(ReadCsv("Fz,Cz\n1,abc\n", {}, 500.0, M()), ErrorCode::kNonNumericSample);
  EXPECT_BS_ERROR(ReadCsv("Fz,Cz\n1,\n", {}, 500.0, M()), ErrorCode::kNonNumericSample);
  EXPECT_BS_ERROR(ReadCsv("Fz,Cz\n1,nan\n", {}, 500.0, M()), ErrorCode::kNonFiniteSample);
  EXPECT_BS_ERROR(ReadCsv("Fz,Cz\n1,2,3\n", {}, 500.0, M()), ErrorCode::kMalformedRow);
  EXPECT_BS_ERROR(ReadCsv("Fz,Cz\n1\n", {}, 500.0, M()), ErrorCode::kMalformedRow);
  EXPECT_BS_ERROR(ReadCsv("Fz,Xx\n1,2\n", {}, 500.0, M()), ErrorCode::kUnknownChannelLabel);
  EXPECT_BS_ERROR(ReadCsv("", {}, 500.0, M()), ErrorCode::kMalformedRow);
  EXPECT_BS_ERROR(ReadCsv("Fz,Fz\n1,2\n", {}, 500.0, M()),
                  ErrorCode::kDuplicateChannelLabel);
  EXPECT_BS_ERROR(ReadCsv("t,Fz\n1,2\n1,3\n", {',', true, 0}, 500.0, M()),
                  ErrorCode::kMalformedRow);
  EXPECT_BS_ERROR(ReadCsv("Fz\n1\n", {',', true, 3}, 500.0, M()), ErrorCode::kMalformedRow);
  EXPECT_BS_ERROR(ReadCsv("Fz\n1\n", {'7', true, {}}, 500.0, M()),
                  ErrorCode::kInvalidArgument);
  EXPECT_BS_ERROR(ReadCsv("Fz\n1\n", {}, 0.0, M()), ErrorCode::kInvalidArgument);
}

TEST(WriteCsvTest, Examples) {
  const Recording empty = testing::MakeRecording({"Cz"}, {{}}, 500.0);
  EXPECT_EQ(WriteCsv(empty, {}), "Cz\n");
  const Recording one = testing::MakeRecording({"Cz"}, {{1.5}}, 500.0);
  EXPECT_EQ(WriteCsv(one, {}), "Cz\n1.5\n");
}

TEST(WriteCsvTest, RandomRoundTripIsExact) {
  std::vector<std::vector<double>> s;
  for (unsigned c = 0; c < 4; ++c) s.push_back(testing::WhiteNoise(1000, 10 + c, 50.0));
  const Recording r = testing::MakeRecording({"Fz", "Cz", "Pz", "Oz"}, s, 500.0);
  for (const CsvLayout layout :
       {CsvLayout{}, CsvLayout{';', true, 0}, CsvLayout{',', true, 4}}) {
    const Recording back = ReadCsv(WriteCsv(r, layout), layout, 500.0, M());
    ASSERT_EQ(back.channel_count(), 4u);
    double max_err = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t i = 0; i < 1000; ++i) {
        max_err = std::max(max_err, std::abs(back.samples()[c][i] - s[c][i]));
      }
    }
    EXPECT_LT(max_err, 1e-7);
    EXPECT_EQ(max_err, 0.0);  // shortest round-trip text is exact
  }
}

TEST(WriteCsvTest, ThirtyColumnRoundTrip) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> s;
  for (const auto& e : M().electrodes()) {
    if (e.kind != ChannelKind::kEeg) continue;
    labels.push_back(e.label);
    s.push_back(testing::WhiteNoise(500, static_cast<unsigned>(s.size())));
  }
  const Recording r = testing::MakeRecording(labels, s, 500.0);
  const Recording back = ReadCsv(WriteCsv(r, {}), {}, 500.0, M());
  ASSERT_EQ(back.channel_count(), 30u);
  EXPECT_EQ(back.samples(), s);
}

TEST(ReadEdfTest, DigitalMaxMapsToPhysicalMax) {
  EdfSpec spec;
  spec.signals[0].phys_min = "-200";
  spec.signals[0].phys_max = "300";
  spec.data = {32767};
  const Recording r = ReadEdf(BuildEdf(spec), M());
  ASSERT_EQ(r.channel_count(), 1u);
  ASSERT_EQ(r.sample_count(), 1u);
  EXPECT_DOUBLE_EQ(r.samples()[0][0], 300.0);
  EXPECT_EQ(r.sampling_rate(), 1.0);
  spec.data = {-32768};
  EXPECT_DOUBLE_EQ(ReadEdf(BuildEdf(spec), M()).samples()[0][0], -200.0);
}

TEST(ReadEdfTest, RecordsConcatenateAndChannelsFollowMontage) {
  EdfSpec spec;
  spec.record_count = "2";
  spec.record_duration = "0.5";
  EdfSignalSpec oz{"Oz", "-32768", "32767", "-32768", "32767", "2"};
  EdfSignalSpec fz{"Fz", "-32768", "32767", "-32768", "32767", "2"};
  spec.signals = {oz, fz};
  spec.data = {1, 2, 10, 20, 3, 4, 30, 40};
  const Recording r = ReadEdf(BuildEdf(spec), M());
  EXPECT_EQ(r.sampling_rate(), 4.0);
  EXPECT_EQ(r.channels()[0].label, "Fz");
  EXPECT_EQ(r.samples()[0], (std::vector<double>{10, 20, 30, 40}));
  EXPECT_EQ(r.samples()[1], (std::vector<double>{1, 2, 3, 4}));
}

TEST(ReadEdfTest, TypedErrors) {
  EXPECT_BS_ERROR(ReadEdf(std::string(100, ' '), M()), ErrorCode::kTruncatedHeader);
  EdfSpec ok;
  ok.data = {0};
  {
    EdfSpec s = ok;
    s.version = "X";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kBadMagic);
  }
  {
    EdfSpec s = ok;
    s.signals.push_back({"Pz", "-1", "1", "-32768", "32767", "2"});
    s.data = {0, 0, 0};
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kMixedSamplingRates);
  }
  {
    EdfSpec s = ok;
    s.signals[0].dig_min = "5";
    s.signals[0].dig_max = "5";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kDigitalRangeDegenerate);
  }
  {
    EdfSpec s = ok;
    s.signals[0].phys_max = "-100";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kInvalidHeader);
  }
  {
    EdfSpec s = ok;
    s.record_count = "-1";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kInvalidHeader);
  }
  {
    EdfSpec s = ok;
    s.record_count = "3";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kTruncatedData);
  }
  {
    EdfSpec s = ok;
    s.header_bytes = "1024";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kInvalidHeader);
  }
  {
    EdfSpec s = ok;
    s.signal_count = "2";
    s.header_bytes = "768";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s).substr(0, 600), M()), ErrorCode::kTruncatedHeader);
  }
  {
    EdfSpec s = ok;
    s.signals[0].label = "Nope";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kUnknownChannelLabel);
  }
  {
    EdfSpec s = ok;
    s.signals[0].samples_per_record = "x";
    EXPECT_BS_ERROR(ReadEdf(BuildEdf(s), M()), ErrorCode::kInvalidHeader);
  }
}

TEST(WriteEdfTest, ThirtySignalRoundTripWithinOneQuantum) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> s;
  for (const auto& e : M().electrodes()) {
    labels.push_back(e.label);
    s.push_back(testing::WhiteNoise(1250, 100 + static_cast<unsigned>(s.size()), 20.0));
  }
  const Recording r = testing::MakeRecording(labels, s, 500.0);
  const std::string bytes = WriteEdf(r);
  const EdfHeader h = ParseEdfHeader(bytes);
  ASSERT_EQ(h.signal_count, 32);
  const Recording back = ReadEdf(bytes, M());
  ASSERT_EQ(back.channel_count(), 32u);
  ASSERT_EQ(back.sample_count(), 1250u);
  EXPECT_DOUBLE_EQ(back.sampling_rate(), 500.0);
  for (std::size_t c = 0; c < 32; ++c) {
    EXPECT_EQ(back.channels()[c].label, labels[c]);
    const double q = EdfQuantum(h.signals[c]);
    for (std::size_t i = 0; i < 1250; ++i) {
      ASSERT_LE(std::abs(back.samples()[c][i] - s[c][i]), q) << labels[c] << " " << i;
    }
  }
}

TEST(WriteEdfTest, ConstantChannelAndEmptyRecording) {
  const Recording r = testing::MakeRecording({"Cz"}, {std::vector<double>(10, 3.25)}, 10.0);
  const Recording back = ReadEdf(WriteEdf(r), M());
  for (double v : back.samples()[0]) EXPECT_NEAR(v, 3.25, 1e-9);
  EXPECT_BS_ERROR(WriteEdf(testing::MakeRecording({"Cz"}, {{}}, 10.0)),
                  ErrorCode::kInvalidArgument);
}

TEST(ParserFuzzTest, RandomMutationsYieldTypedErrorsOnly) {
  EdfSpec spec;
  spec.signals = {{"Fz", "-50", "50", "-2048", "2047", "4"},
                  {"Cz", "-50", "50", "-2048", "2047", "4"}};
  spec.record_count = "2";
  spec.data.assign(16, 7);
  const std::string edf = BuildEdf(spec);
  const std::string csv = "Fz,Cz\n1,2\n3,4\n";
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 2000; ++iter) {
    std::string e = edf;
    std::string c = csv;
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < edits; ++k) {
      e[rng() % 768] = static_cast<char>(rng() % 256);
      c[rng() % c.size()] = static_cast<char>(rng() % 256);
    }
    if (rng() % 4 == 0) e.resize(rng() % e.size());
    try {
      ReadEdf(e, M());
    } catch (const Error&) {
    }
    try {
      ReadCsv(c, {}, 100.0, M());
    } catch (const Error&) {
    }
  }
}

}  // namespace
}  // namespace barstress
