// Copyright 2026 The transplant-bench Authors. All Rights Reserved.
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

#include "transplant/detector.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "transplant/error.hpp"
#include "transplant/image_io.hpp"

namespace transplant {

const std::vector<PaletteColor>& stub_palette() {
  static const std::vector<PaletteColor> kPalette = {
      {{1, "red"}, 255, 0, 0},      {{2, "green"}, 0, 255, 0},
      {{3, "blue"}, 0, 0, 255},     {{4, "yellow"}, 255, 255, 0},
      {{5, "cyan"}, 0, 255, 255},   {{6, "magenta"}, 255, 0, 255},
  };
  return kPalette;
}

namespace {

constexpr int kColorTolerance = 24;

int classify(const std::uint8_t* p) {
  const auto& palette = stub_palette();
  for (std::size_t i = 0; i < palette.size(); ++i) {
    const PaletteColor& c = palette[i];
    if (std::abs(p[0] - c.r) <= kColorTolerance && std::abs(p[1] - c.g) <= kColorTolerance &&
        std::abs(p[2] - c.b) <= kColorTolerance) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

DetectionSet StubDetector::detect(const ImageBuffer& image, std::string_view case_id) {
  const int w = image.width();
  const int h = image.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) label[static_cast<std::size_t>(y) * w + x] = classify(image.pixel(x, y));
  }

  DetectionSet out{std::string(case_id), id(), {}};
  std::vector<char> visited(label.size(), 0);
  std::vector<std::size_t> stack;
  const double image_area = static_cast<double>(w) * h;
  for (std::size_t start = 0; start < label.size(); ++start) {
    if (label[start] < 0 || visited[start]) continue;
    const int color = label[start];
    int x_min = w, y_min = h, x_max = -1, y_max = -1;
    long long count = 0;
    stack.assign(1, start);
    visited[start] = 1;
    while (!stack.empty()) {
      const std::size_t idx = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(idx % w);
      const int y = static_cast<int>(idx / w);
      ++count;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
      const auto visit = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
        const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
        if (visited[n] || label[n] != color) return;
        visited[n] = 1;
        stack.push_back(n);
      };
      visit(x - 1, y);
      visit(x + 1, y);
      visit(x, y - 1);
      visit(x, y + 1);
    }
    const long long box_area = static_cast<long long>(x_max - x_min + 1) * (y_max - y_min + 1);
    if (count != box_area) continue;  // not a filled rectangle
    Detection det;
    det.box = {static_cast<double>(x_min), static_cast<double>(y_min),
               static_cast<double>(x_max + 1), static_cast<double>(y_max + 1)};
    det.score = std::clamp(static_cast<double>(box_area) / image_area, kStubMinScore, kStubMaxScore);
    det.category = stub_palette()[static_cast<std::size_t>(color)].category;
    out.detections.push_back(det);
  }
  out.normalize();
  return out;
}

FileDetector::FileDetector(std::map<std::string, DetectionSet> sets)
    : sets_(sets.begin(), sets.end()) {}

FileDetector FileDetector::from_file(const std::filesystem::path& path) {
  return FileDetector(load_detections(path).sets);
}

bool FileDetector::contains(std::string_view case_id) const { return sets_.find(case_id) != sets_.end(); }

DetectionSet FileDetector::detect(const ImageBuffer&, std::string_view case_id) {
  const auto it = sets_.find(case_id);
  if (it == sets_.end()) {
    throw Error("detection file has no record for case " + std::string(case_id));
  }
  DetectionSet out = it->second;
  out.normalize();
  return out;
}

HttpDetectorOptions http_options_from_env() {
  HttpDetectorOptions opts;
  if (const char* env = std::getenv("TRANSPLANT_BENCH_HTTP_TIMEOUT_MS")) {
    char* end = nullptr;
    const long ms = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || ms <= 0) {
      throw ConfigError(std::string("TRANSPLANT_BENCH_HTTP_TIMEOUT_MS must be a positive integer, got '") +
                        env + "'");
    }
    opts.timeout = std::chrono::milliseconds(ms);
  }
  return opts;
}

HttpDetector::HttpDetector(std::string url, HttpDetectorOptions options)
    : url_(std::move(url)), options_(options) {
  if (options_.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
}

namespace {

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (const char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

}  // namespace

DetectionSet HttpDetector::detect(const ImageBuffer& image, std::string_view case_id) {
  const auto png = encode_png(image);
  const std::string body(png.begin(), png.end());
  const std::string path = "/detect?case_id=" + percent_encode(case_id);
  std::string last_error;
  for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    httplib::Client client(url_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    const auto res = client.Post(path, body, "image/png");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw FormatError("detector service answered HTTP " + std::to_string(res->status) + ": " +
                        res->body);
    }
    ParsedRecord rec = parse_exchange_record(res->body);
    if (!rec.rejected.empty()) {
      throw FormatError("detector service returned invalid detections: " + rec.rejected.front());
    }
    if (rec.set.case_id != case_id) {
      throw FormatError("detector service answered for case " + rec.set.case_id + ", expected " +
                        std::string(case_id));
    }
    rec.set.normalize();
    return rec.set;
  }
  throw IoError("detector service " + url_ + " unavailable: " + last_error);
}

std::unique_ptr<Detector> make_detector(const std::string& spec) {
  if (spec == "stub") return std::make_unique<StubDetector>();
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    if (path.empty()) throw ConfigError("file detector needs a path: file:PATH");
    return std::make_unique<FileDetector>(FileDetector::from_file(path));
  }
  if (spec.rfind("http:", 0) == 0) {
    std::string url = spec.rfind("http://", 0) == 0 ? spec : spec.substr(5);
    if (url.empty()) throw ConfigError("http detector needs an address: http:HOST:PORT");
    if (url.rfind("http://", 0) != 0) url = "http://" + url;
    return std::make_unique<HttpDetector>(url, http_options_from_env());
  }
  throw ConfigError("unknown detector backend '" + spec + "' (expected stub, file:PATH or http:URL)");
}

}  // namespace transplant
