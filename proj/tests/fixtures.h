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

#ifndef POINTLOC_TESTS_FIXTURES_H_
#define POINTLOC_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "pointloc/geometry.h"
#include "pointloc/svm.h"
#include "pointloc/video.h"

namespace pointloc::fixture {

inline Tube constant_tube(int start, int length, const Box& box) {
  return Tube{start, std::vector<Box>(static_cast<size_t>(length), box)};
}

inline PointTrack centers(const Tube& tube) {
  PointTrack pts;
  for (int f = tube.start_frame; f <= tube.end_frame(); ++f)
    pts[f] = tube.at(f)->center();
  return pts;
}

// One-hot feature of the given dimension.
inline std::vector<float> one_hot(size_t dim, size_t hot) {
  std::vector<float> v(dim, 0.0f);
  v[hot] = 1.0f;
  return v;
}

inline Video make_video(std::string id, const VideoMeta& meta, int label,
                        std::vector<Tube> proposals,
                        const std::vector<std::vector<float>>& features,
                        Split split = Split::kTrain) {
  Video v;
  v.id = std::move(id);
  v.meta = meta;
  v.split = split;
  v.labels = {label};
  v.proposals = std::move(proposals);
  const size_t dim = features.empty() ? 0 : features.front().size();
  std::vector<float> flat;
  for (const auto& f : features) flat.insert(flat.end(), f.begin(), f.end());
  v.features = FeatureMatrix(features.size(), dim, std::move(flat));
  return v;
}

inline std::vector<const Video*> pointers(const std::vector<Video>& videos) {
  std::vector<const Video*> out;
  for (const Video& v : videos) out.push_back(&v);
  return out;
}

}  // namespace pointloc::fixture

#endif  // POINTLOC_TESTS_FIXTURES_H_
