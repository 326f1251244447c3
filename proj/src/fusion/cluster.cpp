// Copyright 2026 The Contextual Speed Controller Authors
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

#include "csc/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

namespace csc
{
namespace
{

struct CellKey
{
  std::int64_t x;
  std::int64_t y;
  std::int64_t z;

  bool operator==(const CellKey &) const = default;
};

struct CellKeyHash
{
  size_t operator()(const CellKey & k) const noexcept
  {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
    return static_cast<size_t>(h);
  }
};

/// Points bucketed into cubes of edge `cell`; any pair within `cell` lies in
/// the same or an adjacent cube.
class VoxelGrid
{
public:
  struct Cell
  {
    CellKey key;
    size_t begin;
    size_t end;
  };

  VoxelGrid(std::span<const Point3> points, double cell) : cell_(cell)
  {
    std::vector<CellKey> keys;
    keys.reserve(points.size());
    for (const auto & p : points) {
      keys.push_back(keyOf(p));
    }
    order_.resize(points.size());
    std::iota(order_.begin(), order_.end(), size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&keys](size_t a, size_t b) {
      const auto & ka = keys[a];
      const auto & kb = keys[b];
      if (ka.x != kb.x) return ka.x < kb.x;
      if (ka.y != kb.y) return ka.y < kb.y;
      return ka.z < kb.z;
    });
    for (size_t begin = 0; begin < order_.size();) {
      size_t end = begin + 1;
      while (end < order_.size() && keys[order_[end]] == keys[order_[begin]]) {
        ++end;
      }
      cells_.push_back({keys[order_[begin]], begin, end});
      begin = end;
    }
    index_.reserve(cells_.size());
    for (size_t c = 0; c < cells_.size(); ++c) {
      index_.emplace(cells_[c].key, c);
    }
  }

  size_t cellCount() const { return cells_.size(); }

  /// Calls fn(i, j) once for every unordered pair of points lying in cell `c`
  /// or in `c` and one of its 26 neighbours.
  template <typename Fn>
  void forEachCandidatePair(size_t c, Fn && fn) const
  {
    const Cell & home = cells_[c];
    for (size_t a = home.begin; a < home.end; ++a) {
      for (size_t b = a + 1; b < home.end; ++b) {
        fn(order_[a], order_[b]);
      }
    }
    // lexicographically positive offsets
    for (std::int64_t dx = 0; dx <= 1; ++dx) {
      for (std::int64_t dy = dx == 0 ? 0 : -1; dy <= 1; ++dy) {
        for (std::int64_t dz = (dx == 0 && dy == 0) ? 1 : -1; dz <= 1; ++dz) {
          const auto it = index_.find(CellKey{home.key.x + dx, home.key.y + dy, home.key.z + dz});
          if (it == index_.end()) {
            continue;
          }
          const Cell & other = cells_[it->second];
          for (size_t a = home.begin; a < home.end; ++a) {
            for (size_t b = other.begin; b < other.end; ++b) {
              fn(order_[a], order_[b]);
            }
          }
        }
      }
    }
  }

private:
  CellKey keyOf(const Point3 & p) const
  {
    return {
      static_cast<std::int64_t>(std::floor(p.x / cell_)),
      static_cast<std::int64_t>(std::floor(p.y / cell_)),
      static_cast<std::int64_t>(std::floor(p.z / cell_))};
  }

  double cell_;
  std::vector<size_t> order_;
  std::vector<Cell> cells_;
  std::unordered_map<CellKey, size_t, CellKeyHash> index_;
};

/// Union-find whose roots are always the smallest member index.
class MinRootForest
{
public:
  explicit MinRootForest(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  size_t find(size_t i)
  {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(size_t a, size_t b)
  {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

  size_t size() const { return parent_.size(); }

private:
  std::vector<size_t> parent_;
};

inline double squaredDistance(const Point3 & a, const Point3 & b)
{
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

void linkCell(
  std::span<const Point3> points, const VoxelGrid & grid, size_t c, double threshold_sq,
  MinRootForest & forest)
{
  grid.forEachCandidatePair(c, [&](size_t i, size_t j) {
    if (squaredDistance(points[i], points[j]) <= threshold_sq) {
      forest.unite(i, j);
    }
  });
}

void linkSerial(
  std::span<const Point3> points, const VoxelGrid & grid, double threshold_sq,
  MinRootForest & forest)
{
  for (size_t c = 0; c < grid.cellCount(); ++c) {
    linkCell(points, grid, c, threshold_sq, forest);
  }
}

/// Each thread links its share of cells into a private forest; the private
/// forests are then folded into `forest` one parent edge per merged point.
void linkParallel(
  std::span<const Point3> points, const VoxelGrid & grid, double threshold_sq,
  MinRootForest & forest)
{
  const auto cells = static_cast<std::ptrdiff_t>(grid.cellCount());
#pragma omp parallel
  {
    MinRootForest local(forest.size());
#pragma omp for schedule(dynamic, 16) nowait
    for (std::ptrdiff_t c = 0; c < cells; ++c) {
      linkCell(points, grid, static_cast<size_t>(c), threshold_sq, local);
    }
#pragma omp critical(csc_cluster_merge)
    {
      for (size_t i = 0; i < local.size(); ++i) {
        const size_t root = local.find(i);
        if (root != i) forest.unite(i, root);
      }
    }
  }
}

}  // namespace

std::vector<Cluster> euclideanCluster(
  std::span<const Point3> points, double distance_threshold, size_t min_cluster_size,
  ExecPolicy policy)
{
  if (!(distance_threshold > 0.0)) {
    throw std::invalid_argument("euclideanCluster: distance_threshold must be positive");
  }
  if (min_cluster_size < 1) {
    throw std::invalid_argument("euclideanCluster: min_cluster_size must be at least 1");
  }
  std::vector<Cluster> clusters;
  if (points.empty()) {
    return clusters;
  }

  const VoxelGrid grid(points, distance_threshold * (1.0 + 1e-9));
  MinRootForest forest(points.size());
  const double threshold_sq = distance_threshold * distance_threshold;
  if (policy == ExecPolicy::Serial) {
    linkSerial(points, grid, threshold_sq, forest);
  } else {
    linkParallel(points, grid, threshold_sq, forest);
  }

  std::vector<size_t> slot_of_root(points.size(), SIZE_MAX);
  std::vector<std::vector<size_t>> groups;
  for (size_t i = 0; i < points.size(); ++i) {
    const size_t root = forest.find(i);
    if (slot_of_root[root] == SIZE_MAX) {
      slot_of_root[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot_of_root[root]].push_back(i);
  }

  for (auto & members : groups) {
    if (members.size() < min_cluster_size) {
      continue;
    }
    Cluster c;
    c.id = static_cast<int>(clusters.size());
    c.points.reserve(members.size());
    for (size_t idx : members) {
      c.points.push_back(points[idx]);
    }
    c.indices = std::move(members);
    c.centroid = centroid(c.points);
    c.range = norm(c.centroid);
    clusters.push_back(std::move(c));
  }
  return clusters;
}

}  // namespace csc
