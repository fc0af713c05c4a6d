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

#include "pointloc/io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pointloc/error.h"

namespace pointloc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class ByteWriter {
 public:
  explicit ByteWriter(std::string_view magic) : out_(magic) {}
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f32(float v) { u32(std::bit_cast<uint32_t>(v)); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string_view magic, const char* what)
      : bytes_(bytes), what_(what) {
    if (bytes.size() < magic.size() || bytes.substr(0, magic.size()) != magic)
      throw Error(std::string(what) + ": bad magic");
    pos_ = magic.size();
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  void need(size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(std::string(what_) + ": truncated");
  }
  void finish() const {
    if (pos_ != bytes_.size()) throw Error(std::string(what_) + ": trailing bytes");
  }

 private:
  std::string_view bytes_;
  const char* what_;
  size_t pos_ = 0;
};

}  // namespace

std::string encode_features(const FeatureMatrix& features) {
  ByteWriter w(kFeatureMagic);
  w.u32(static_cast<uint32_t>(features.rows()));
  w.u32(static_cast<uint32_t>(features.dim()));
  for (float v : features.values()) w.f32(v);
  return w.take();
}

FeatureMatrix decode_features(std::string_view bytes) {
  ByteReader r(bytes, kFeatureMagic, "feature file");
  const size_t rows = r.u32();
  const size_t dim = r.u32();
  r.need(rows * dim * 4);
  std::vector<float> values(rows * dim);
  for (float& v : values) v = r.f32();
  r.finish();
  return FeatureMatrix(rows, dim, std::move(values));
}

std::string encode_mass_maps(const MassMaps& maps) {
  if (maps.values.size() != maps.cells_per_frame() * maps.frame_count)
    throw Error("mass map value count does not match its shape");
  ByteWriter w(kMassMagic);
  w.u32(static_cast<uint32_t>(maps.frame_count));
  w.u32(static_cast<uint32_t>(maps.grid_width));
  w.u32(static_cast<uint32_t>(maps.grid_height));
  w.u32(static_cast<uint32_t>(maps.downsample));
  for (float v : maps.values) w.f32(v);
  return w.take();
}

MassMaps decode_mass_maps(std::string_view bytes) {
  ByteReader r(bytes, kMassMagic, "mass map file");
  MassMaps m;
  m.frame_count = static_cast<int>(r.u32());
  m.grid_width = static_cast<int>(r.u32());
  m.grid_height = static_cast<int>(r.u32());
  m.downsample = static_cast<int>(r.u32());
  if (m.downsample < 1) throw Error("mass map file: downsample factor must be positive");
  const size_t n = m.cells_per_frame() * static_cast<size_t>(m.frame_count);
  r.need(n * 4);
  m.values.resize(n);
  for (float& v : m.values) {
    v = r.f32();
    if (!(v >= 0.0f)) throw Error("mass map file: negative or NaN mass");
  }
  r.finish();
  return m;
}

std::string encode_model(const LinearModel& model) {
  ByteWriter w(kModelMagic);
  w.u32(static_cast<uint32_t>(model.dim()));
  for (double v : model.weights) w.f32(static_cast<float>(v));
  w.f32(static_cast<float>(model.bias));
  return w.take();
}

LinearModel decode_model(std::string_view bytes) {
  ByteReader r(bytes, kModelMagic, "model file");
  const size_t dim = r.u32();
  r.need(dim * 4 + 4);
  LinearModel m;
  m.weights.resize(dim);
  for (double& v : m.weights) v = r.f32();
  m.bias = r.f32();
  r.finish();
  return m;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

json box_json(const Box& b) { return json::array({b.xmin, b.ymin, b.xmax, b.ymax}); }

Box box_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error("box must be [xmin,ymin,xmax,ymax]");
  Box b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!b.valid()) throw Error("degenerate box in input");
  return b;
}

json tube_json(const Tube& t) {
  json boxes = json::array();
  for (const Box& b : t.boxes) boxes.push_back(box_json(b));
  return {{"start_frame", t.start_frame}, {"boxes", std::move(boxes)}};
}

Tube tube_from(const json& j) {
  Tube t;
  t.start_frame = j.at("start_frame").get<int>();
  for (const auto& b : j.at("boxes")) t.boxes.push_back(box_from(b));
  if (t.boxes.empty()) throw Error("tube without boxes");
  return t;
}

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
}

template <typename F>
auto schema(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string proposals_to_json(std::span<const Tube> tubes) {
  json arr = json::array();
  for (const Tube& t : tubes) arr.push_back(tube_json(t));
  return json{{"tubes", std::move(arr)}}.dump() + "\n";
}

std::vector<Tube> proposals_from_json(std::string_view text) {
  const json j = parse(text, "proposals");
  return schema("proposals", [&] {
    std::vector<Tube> out;
    for (const auto& t : j.at("tubes")) out.push_back(tube_from(t));
    return out;
  });
}

std::string points_to_json(const PointTrack& points) {
  json arr = json::array();
  for (const auto& [frame, p] : points)
    arr.push_back({{"frame", frame}, {"x", p.x}, {"y", p.y}});
  return json{{"points", std::move(arr)}}.dump() + "\n";
}

PointTrack points_from_json(std::string_view text) {
  const json j = parse(text, "points");
  return schema("points", [&] {
    PointTrack out;
    for (const auto& p : j.at("points")) {
      const int frame = p.at("frame").get<int>();
      if (!out.emplace(frame, Point{p.at("x").get<double>(), p.at("y").get<double>()}).second)
        throw Error("points: more than one point on frame " + std::to_string(frame));
    }
    return out;
  });
}

std::string detections_to_json(const FrameDetections& detections) {
  json arr = json::array();
  for (size_t f = 0; f < detections.size(); ++f) {
    for (const DetectionBox& d : detections[f])
      arr.push_back({{"frame", static_cast<int>(f) + 1},
                     {"box", box_json(d.box)},
                     {"confidence", d.confidence}});
  }
  return json{{"detections", std::move(arr)}}.dump() + "\n";
}

FrameDetections detections_from_json(std::string_view text, int frame_count) {
  const json j = parse(text, "detections");
  return schema("detections", [&] {
    FrameDetections out(static_cast<size_t>(frame_count));
    for (const auto& d : j.at("detections")) {
      const int frame = d.at("frame").get<int>();
      if (frame < 1 || frame > frame_count)
        throw Error("detections: frame " + std::to_string(frame) + " outside video");
      const double conf = d.at("confidence").get<double>();
      if (!std::isfinite(conf)) throw Error("detections: non-finite confidence");
      out[static_cast<size_t>(frame - 1)].push_back({box_from(d.at("box")), conf});
    }
    return out;
  });
}

namespace {

std::string gt_to_json(const Video& v, std::span<const std::string> actions) {
  json arr = json::array();
  for (const auto& inst : v.ground_truth)
    arr.push_back({{"action", actions[static_cast<size_t>(inst.action)]},
                   {"tube", tube_json(inst.tube)}});
  return json{{"instances", std::move(arr)}}.dump() + "\n";
}

std::vector<GroundTruthInstance> gt_from_json(std::string_view text,
                                              const Dataset& ds) {
  const json j = parse(text, "ground truth");
  return schema("ground truth", [&] {
    std::vector<GroundTruthInstance> out;
    for (const auto& inst : j.at("instances")) {
      const std::string name = inst.at("action").get<std::string>();
      const int a = ds.action_index(name);
      if (a < 0) throw Error("ground truth: unknown action '" + name + "'");
      out.push_back({a, tube_from(inst.at("tube"))});
    }
    return out;
  });
}

std::string_view split_name(Split s) { return s == Split::kTrain ? "train" : "test"; }

}  // namespace

void save_dataset(const Dataset& dataset, const fs::path& dir) {
  std::set<std::string> ids;
  json videos = json::array();
  for (const Video& v : dataset.videos) {
    if (!ids.insert(v.id).second) throw Error("duplicate video id '" + v.id + "'");
    const std::string stem = "videos/" + v.id;
    json files = {{"proposals", stem + ".proposals.json"},
                  {"features", stem + ".features.bin"},
                  {"points", stem + ".points.json"},
                  {"ground_truth", stem + ".gt.json"}};
    write_file_atomic(dir / (stem + ".proposals.json"), proposals_to_json(v.proposals));
    write_file_atomic(dir / (stem + ".features.bin"), encode_features(v.features));
    write_file_atomic(dir / (stem + ".points.json"), points_to_json(v.points));
    write_file_atomic(dir / (stem + ".gt.json"), gt_to_json(v, dataset.actions));
    if (v.detections) {
      files["detections"] = stem + ".detections.json";
      write_file_atomic(dir / (stem + ".detections.json"),
                        detections_to_json(*v.detections));
    }
    if (v.mass_maps) {
      files["mass_maps"] = stem + ".mass.bin";
      write_file_atomic(dir / (stem + ".mass.bin"), encode_mass_maps(*v.mass_maps));
    }
    json labels = json::array();
    for (int a : v.labels) labels.push_back(dataset.actions[static_cast<size_t>(a)]);
    videos.push_back({{"id", v.id},
                      {"meta",
                       {{"frame_count", v.meta.frame_count},
                        {"width", v.meta.width},
                        {"height", v.meta.height}}},
                      {"split", split_name(v.split)},
                      {"labels", std::move(labels)},
                      {"files", std::move(files)}});
  }
  const json manifest = {{"actions", dataset.actions}, {"videos", std::move(videos)}};
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

Dataset load_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path))
    throw Error("no manifest.json in " + dir.string());
  const json manifest = parse(read_file(manifest_path), "manifest");
  Dataset ds;
  schema("manifest", [&] {
    ds.actions = manifest.at("actions").get<std::vector<std::string>>();
    std::set<std::string> ids;
    size_t dim = 0;
    for (const auto& jv : manifest.at("videos")) {
      Video v;
      v.id = jv.at("id").get<std::string>();
      if (!ids.insert(v.id).second) throw Error("manifest: duplicate video id '" + v.id + "'");
      const auto& m = jv.at("meta");
      v.meta = {m.at("frame_count").get<int>(), m.at("width").get<int>(),
                m.at("height").get<int>()};
      if (!v.meta.valid()) throw Error("manifest: video " + v.id + " has invalid meta");
      const std::string split = jv.at("split").get<std::string>();
      if (split == "train") {
        v.split = Split::kTrain;
      } else if (split == "test") {
        v.split = Split::kTest;
      } else {
        throw Error("manifest: unknown split '" + split + "'");
      }
      for (const auto& name : jv.at("labels")) {
        const int a = ds.action_index(name.get<std::string>());
        if (a < 0) throw Error("manifest: unknown label for video " + v.id);
        v.labels.push_back(a);
      }
      const auto& files = jv.at("files");
      auto file = [&](const char* key) {
        const fs::path p = dir / files.at(key).get<std::string>();
        if (!fs::exists(p)) throw Error("missing file " + p.string());
        return read_file(p);
      };
      v.proposals = proposals_from_json(file("proposals"));
      v.features = decode_features(file("features"));
      v.features.normalize_rows();
      v.points = points_from_json(file("points"));
      v.ground_truth = gt_from_json(file("ground_truth"), ds);
      if (files.contains("detections"))
        v.detections = detections_from_json(file("detections"), v.meta.frame_count);
      if (files.contains("mass_maps")) {
        v.mass_maps = decode_mass_maps(file("mass_maps"));
        if (v.mass_maps->frame_count != v.meta.frame_count)
          throw Error("mass maps of " + v.id + " do not cover every frame");
      }
      if (v.proposals.size() != v.features.rows())
        throw Error("video " + v.id + ": " + std::to_string(v.proposals.size()) +
                    " proposals but " + std::to_string(v.features.rows()) +
                    " feature rows");
      if (v.features.rows() > 0) {
        if (dim == 0) dim = v.features.dim();
        if (v.features.dim() != dim)
          throw Error("video " + v.id + ": feature dimension " +
                      std::to_string(v.features.dim()) + " differs from " +
                      std::to_string(dim));
      }
      for (const Tube& t : v.proposals) check_tube(t, v.meta);
      for (const auto& g : v.ground_truth) check_tube(g.tube, v.meta);
      check_points(v.points, v.meta);
      ds.videos.push_back(std::move(v));
    }
    return 0;
  });
  return ds;
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, const char* what) {
  std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v))
    throw Error(std::string("detections csv: bad ") + what + " '" + copy + "'");
  return v;
}

}  // namespace

std::string detections_to_csv(std::span<const Detection> detections,
                              std::span<const std::string> actions) {
  std::string out(kDetectionsHeader);
  out += "\nvideo_id,action,score,proposal,start_frame,boxes\n";
  for (const Detection& d : detections) {
    out += d.video_id + "," + actions[static_cast<size_t>(d.action)] + "," +
           fmt_double(d.score) + "," + std::to_string(d.proposal) + "," +
           std::to_string(d.tube.start_frame) + ",";
    for (size_t i = 0; i < d.tube.boxes.size(); ++i) {
      const Box& b = d.tube.boxes[i];
      if (i > 0) out += ";";
      out += fmt_double(b.xmin) + " " + fmt_double(b.ymin) + " " +
             fmt_double(b.xmax) + " " + fmt_double(b.ymax);
    }
    out += "\n";
  }
  return out;
}

std::vector<Detection> detections_from_csv(std::string_view text,
                                           std::span<const std::string> actions) {
  std::vector<Detection> out;
  bool saw_header = false;
  for (std::string_view line : split_on(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != "video_id,action,score,proposal,start_frame,boxes")
        throw Error("detections csv: unexpected header");
      saw_header = true;
      continue;
    }
    const auto cols = split_on(line, ',');
    if (cols.size() != 6) throw Error("detections csv: expected 6 columns");
    Detection d;
    d.video_id = std::string(cols[0]);
    const auto it = std::find(actions.begin(), actions.end(), cols[1]);
    if (it == actions.end())
      throw Error("detections csv: unknown action '" + std::string(cols[1]) + "'");
    d.action = static_cast<int>(it - actions.begin());
    d.score = parse_double(cols[2], "score");
    d.proposal = static_cast<size_t>(parse_double(cols[3], "proposal"));
    d.tube.start_frame = static_cast<int>(parse_double(cols[4], "start_frame"));
    for (std::string_view b : split_on(cols[5], ';')) {
      const auto v = split_on(b, ' ');
      if (v.size() != 4) throw Error("detections csv: box needs 4 coordinates");
      Box box{parse_double(v[0], "box"), parse_double(v[1], "box"),
              parse_double(v[2], "box"), parse_double(v[3], "box")};
      if (!box.valid()) throw Error("detections csv: degenerate box");
      d.tube.boxes.push_back(box);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace pointloc
