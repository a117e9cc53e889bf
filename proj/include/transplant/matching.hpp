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

#include <cstddef>
#include <functional>
#include <vector>

#include "transplant/detection.hpp"
#include "transplant/geometry.hpp"

namespace transplant {

// Intersection over union; 0 for disjoint boxes.
double iou(const Box& a, const Box& b);

// Intersection over the smaller area; an alternative overlap weight.
double intersection_over_min_area(const Box& a, const Box& b);

using OverlapFn = std::function<double(const Box&, const Box&)>;

struct MatchedPair {
  std::size_t modified = 0;  // index into the modified-image detections
  std::size_t original = 0;  // index into the original-image detections
  double weight = 0.0;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;  // sorted by (modified, original)
  double total_weight = 0.0;
  double score = 1.0;
  std::vector<std::size_t> unmatched_modified;
  std::vector<std::size_t> unmatched_original;
  bool class_constrained = true;
};

// Exact maximum-weight bipartite matching on a dense weight matrix
// (rows x cols, row-major, entries >= 0; 0 means "no edge"). Among optimal
// matchings the one whose sorted (row, col) list is lexicographically
// smallest is returned. Only positive-weight pairs are reported.
std::vector<MatchedPair> max_weight_matching(const std::vector<double>& weights, std::size_t rows,
                                             std::size_t cols);

// Optimal total weight only.
double max_matching_weight(const std::vector<double>& weights, std::size_t rows, std::size_t cols);

// Matches detections of the modified image against the original one. Edges
// carry overlap(b_mod, b_orig) and exist only when that is positive and, if
// class_constrained, the category ids agree.
MatchResult build_match(const DetectionSet& modified, const DetectionSet& original,
                        bool class_constrained, const OverlapFn& overlap = iou);

// S = total weight / max(n_mod - 1, n_orig); 1 when that denominator is <= 0.
double match_score(double total_weight, std::size_t n_mod, std::size_t n_orig);
double match_score(const MatchResult& m, std::size_t n_mod, std::size_t n_orig);

struct ClassDifference {
  std::vector<Category> new_categories;  // ascending
  std::size_t cardinality = 0;
};

// Categories detected on the modified image that are absent on the original.
ClassDifference class_set_difference(const DetectionSet& modified, const DetectionSet& original);

struct BoxCoverage {
  std::size_t original_index = 0;
  double coverage = 0.0;
};

struct CoverageReport {
  std::vector<BoxCoverage> per_box;
  double max_coverage = 0.0;
};

// area(b ∩ T) / area(b) for every original box b; max is 0 for an empty set.
CoverageReport coverage(const DetectionSet& original, const Box& transplanted_box);

}  // namespace transplant
