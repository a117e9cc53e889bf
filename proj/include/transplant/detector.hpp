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

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "transplant/detection.hpp"
#include "transplant/image.hpp"

namespace transplant {

// Port through which every backend is reached.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual DetectionSet detect(const ImageBuffer& image, std::string_view case_id) = 0;
  virtual std::string id() const = 0;
};

// Rule-based detector for synthetic scenes: finds uniformly coloured,
// completely filled axis-aligned rectangles drawn in one of the palette
// colours. Anything else is background. Stateless and thread safe.
class StubDetector final : public Detector {
 public:
  static constexpr std::string_view kId = "stub-v1";

  DetectionSet detect(const ImageBuffer& image, std::string_view case_id) override;
  std::string id() const override { return std::string(kId); }
};

struct PaletteColor {
  Category category;
  unsigned char r, g, b;
};

// Colour table used by the stub detector (category ids start at 1).
const std::vector<PaletteColor>& stub_palette();

// Score is rectangle area / image area clamped to this range.
inline constexpr double kStubMinScore = 0.01;
inline constexpr double kStubMaxScore = 0.99;

// Serves pre-computed detections loaded from an exchange file.
class FileDetector final : public Detector {
 public:
  explicit FileDetector(std::map<std::string, DetectionSet> sets);
  static FileDetector from_file(const std::filesystem::path& path);

  // Throws Error when the case id has no record.
  DetectionSet detect(const ImageBuffer& image, std::string_view case_id) override;
  std::string id() const override { return "file"; }

  bool contains(std::string_view case_id) const;

 private:
  std::map<std::string, DetectionSet, std::less<>> sets_;
};

struct HttpDetectorOptions {
  std::chrono::milliseconds timeout{30000};
  int max_attempts = 3;
};

// Reads TRANSPLANT_BENCH_HTTP_TIMEOUT_MS when set.
HttpDetectorOptions http_options_from_env();

// Client for the inference service: POST /detect?case_id=... with a PNG
// body, answered by one exchange record. Safe to call from several threads.
class HttpDetector final : public Detector {
 public:
  // url like "http://host:port".
  explicit HttpDetector(std::string url, HttpDetectorOptions options = {});

  // Throws IoError when the service cannot be reached after all attempts,
  // FormatError on a bad response.
  DetectionSet detect(const ImageBuffer& image, std::string_view case_id) override;
  std::string id() const override { return "http:" + url_; }

 private:
  std::string url_;
  HttpDetectorOptions options_;
};

// Parses "stub", "file:PATH" or "http:URL". Throws ConfigError otherwise.
std::unique_ptr<Detector> make_detector(const std::string& spec);

}  // namespace transplant
