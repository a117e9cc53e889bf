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

#include "transplant/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>

namespace transplant {

double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

double intersection_over_min_area(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / std::min(a.area(), b.area());
}

namespace {

// Dense weight view restricted to a subset of rows and columns.
struct SubProblem {
  const std::vector<double>* weights;
  std::size_t stride;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  double w(std::size_t r, std::size_t c) const { return (*weights)[r * stride + c]; }
};

// Hungarian algorithm (shortest augmenting paths with potentials) on the
// square zero-padded cost matrix -w. Returns, for each local row, the local
// column assigned to it or npos for padding / zero-weight assignments.
std::vector<std::size_t> solve_assignment(const SubProblem& p) {
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  const std::size_t n = std::max(p.rows.size(), p.cols.size());
  std::vector<std::size_t> result(p.rows.size(), npos);
  if (p.rows.empty() || p.cols.empty()) return result;

  const auto cost = [&](std::size_t i, std::size_t j) {
    if (i >= p.rows.size() || j >= p.cols.size()) return 0.0;
    return -p.w(p.rows[i], p.cols[j]);
  };
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = owner[j] - 1;
    if (i < p.rows.size() && j - 1 < p.cols.size() && p.w(p.rows[i], p.cols[j - 1]) > 0.0) {
      result[i] = j - 1;
    }
  }
  return result;
}

double optimum(const SubProblem& p) {
  const auto assignment = solve_assignment(p);
  double total = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != std::numeric_limits<std::size_t>::max()) {
      total += p.w(p.rows[i], p.cols[assignment[i]]);
    }
  }
  return total;
}

SubProblem without(const SubProblem& p, std::size_t row, std::optional<std::size_t> col) {
  SubProblem q = p;
  q.rows.erase(std::remove(q.rows.begin(), q.rows.end(), row), q.rows.end());
  if (col) q.cols.erase(std::remove(q.cols.begin(), q.cols.end(), *col), q.cols.end());
  return q;
}

bool reaches(double value, double target) {
  return value >= target - 1e-12 * std::max(1.0, std::abs(target));
}

// Lexicographically smallest optimal matching of one connected component:
// rows in ascending order take the smallest column that still admits an
// optimal completion.
void solve_component(SubProblem p, std::vector<MatchedPair>& out) {
  double target = optimum(p);
  const std::vector<std::size_t> rows = p.rows;
  for (const std::size_t r : rows) {
    bool matched = false;
    for (const std::size_t c : p.cols) {
      const double w = p.w(r, c);
      if (w <= 0.0) continue;
      SubProblem rest = without(p, r, c);
      const double rest_opt = optimum(rest);
      if (reaches(w + rest_opt, target)) {
        out.push_back({r, c, w});
        p = std::move(rest);
        target = rest_opt;
        matched = true;
        break;
      }
    }
    if (!matched) {
      p = without(p, r, std::nullopt);
      target = optimum(p);
    }
  }
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<MatchedPair> max_weight_matching(const std::vector<double>& weights, std::size_t rows,
                                             std::size_t cols) {
  // Split into connected components of the positive-weight edge graph; the
  // optimum and its lexicographic tie-break both decompose over them.
  std::vector<std::size_t> parent(rows + cols);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (weights[r * cols + c] > 0.0) {
        parent[find_root(parent, r)] = find_root(parent, rows + c);
      }
    }
  }
  std::map<std::size_t, SubProblem> components;
  for (std::size_t r = 0; r < rows; ++r) {
    auto& comp = components.try_emplace(find_root(parent, r), SubProblem{&weights, cols, {}, {}})
                     .first->second;
    comp.rows.push_back(r);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    auto& comp =
        components.try_emplace(find_root(parent, rows + c), SubProblem{&weights, cols, {}, {}})
            .first->second;
    comp.cols.push_back(c);
  }

  std::vector<MatchedPair> out;
  for (auto& [root, comp] : components) {
    if (comp.rows.empty() || comp.cols.empty()) continue;
    solve_component(std::move(comp), out);
  }
  std::sort(out.begin(), out.end(), [](const MatchedPair& a, const MatchedPair& b) {
    return std::tie(a.modified, a.original) < std::tie(b.modified, b.original);
  });
  return out;
}

double max_matching_weight(const std::vector<double>& weights, std::size_t rows, std::size_t cols) {
  double total = 0.0;
  for (const MatchedPair& p : max_weight_matching(weights, rows, cols)) total += p.weight;
  return total;
}

MatchResult build_match(const DetectionSet& modified, const DetectionSet& original,
                        bool class_constrained, const OverlapFn& overlap) {
  const std::size_t n_mod = modified.detections.size();
  const std::size_t n_orig = original.detections.size();
  std::vector<double> weights(n_mod * n_orig, 0.0);
  for (std::size_t i = 0; i < n_mod; ++i) {
    const Detection& a = modified.detections[i];
    for (std::size_t j = 0; j < n_orig; ++j) {
      const Detection& b = original.detections[j];
      if (class_constrained && a.category.id != b.category.id) continue;
      const double w = overlap(a.box, b.box);
      if (w > 0.0) weights[i * n_orig + j] = w;
    }
  }

  MatchResult m;
  m.class_constrained = class_constrained;
  m.pairs = max_weight_matching(weights, n_mod, n_orig);
  std::vector<char> mod_used(n_mod, 0), orig_used(n_orig, 0);
  for (const MatchedPair& p : m.pairs) {
    m.total_weight += p.weight;
    mod_used[p.modified] = 1;
    orig_used[p.original] = 1;
  }
  for (std::size_t i = 0; i < n_mod; ++i) {
    if (!mod_used[i]) m.unmatched_modified.push_back(i);
  }
  for (std::size_t j = 0; j < n_orig; ++j) {
    if (!orig_used[j]) m.unmatched_original.push_back(j);
  }
  m.score = match_score(m.total_weight, n_mod, n_orig);
  return m;
}

double match_score(double total_weight, std::size_t n_mod, std::size_t n_orig) {
  // One detection of the modified image is credited to the transplanted object.
  const long long denominator =
      std::max(static_cast<long long>(n_mod) - 1, static_cast<long long>(n_orig));
  if (denominator <= 0) return 1.0;
  return total_weight / static_cast<double>(denominator);
}

double match_score(const MatchResult& m, std::size_t n_mod, std::size_t n_orig) {
  return match_score(m.total_weight, n_mod, n_orig);
}

ClassDifference class_set_difference(const DetectionSet& modified, const DetectionSet& original) {
  std::set<int> original_ids;
  for (const Detection& d : original.detections) original_ids.insert(d.category.id);
  std::map<int, std::string> fresh;
  for (const Detection& d : modified.detections) {
    if (!original_ids.contains(d.category.id)) fresh.try_emplace(d.category.id, d.category.name);
  }
  ClassDifference out;
  for (const auto& [id, name] : fresh) out.new_categories.push_back({id, name});
  out.cardinality = out.new_categories.size();
  return out;
}

CoverageReport coverage(const DetectionSet& original, const Box& transplanted_box) {
  CoverageReport out;
  for (std::size_t i = 0; i < original.detections.size(); ++i) {
    const Box& b = original.detections[i].box;
    const double area = b.area();
    const double c = area > 0.0 ? intersection_area(b, transplanted_box) / area : 0.0;
    out.per_box.push_back({i, c});
    out.max_coverage = std::max(out.max_coverage, c);
  }
  return out;
}

}  // namespace transplant
