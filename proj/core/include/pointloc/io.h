// Copyright 2026 The pointloc Authors. All Rights Reserved.
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

#ifndef POINTLOC_IO_H_
#define POINTLOC_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pointloc/eval.h"
#include "pointloc/svm.h"
#include "pointloc/video.h"

namespace pointloc {

// Binary magics (8 bytes, no terminator).
inline constexpr std::string_view kFeatureMagic = "PSAL0001";
inline constexpr std::string_view kMassMagic = "PSALMASS";
inline constexpr std::string_view kModelMagic = "PSALMODL";

// Layout: magic, u32 rows, u32 dim, rows * dim little-endian f32.
std::string encode_features(const FeatureMatrix& features);
FeatureMatrix decode_features(std::string_view bytes);

// Layout: magic, u32 frames, u32 grid width, u32 grid height,
// u32 downsample, frame-major f32 grids.
std::string encode_mass_maps(const MassMaps& maps);
MassMaps decode_mass_maps(std::string_view bytes);

// Layout: magic, u32 dim, dim f32 weights, f32 bias. Weights are rounded to
// single precision.
std::string encode_model(const LinearModel& model);
LinearModel decode_model(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

// Dataset directory: manifest.json plus per-video files under videos/.
// Features are L2-normalized on load.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

// Per-video JSON documents, exposed for tests and external tooling.
std::string proposals_to_json(std::span<const Tube> tubes);
std::vector<Tube> proposals_from_json(std::string_view text);
std::string points_to_json(const PointTrack& points);
PointTrack points_from_json(std::string_view text);
std::string detections_to_json(const FrameDetections& detections);
FrameDetections detections_from_json(std::string_view text, int frame_count);

// Detection CSV, one row per detection; the tube is a ';'-separated list of
// space-separated boxes starting at start_frame.
inline constexpr std::string_view kDetectionsHeader =
    "# pointloc detections v1";
std::string detections_to_csv(std::span<const Detection> detections,
                              std::span<const std::string> actions);
std::vector<Detection> detections_from_csv(
    std::string_view text, std::span<const std::string> actions);

}  // namespace pointloc

#endif  // POINTLOC_IO_H_
