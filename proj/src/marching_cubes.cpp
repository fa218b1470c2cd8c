// SPDX-License-Identifier: Apache-2.0
#include "voxsil/marching_cubes.hpp"

#include <stdexcept>
#include <unordered_map>

#include <Eigen/Geometry>

namespace voxsil {

void TriangleMesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  for (const auto& t : triangles) {
    for (int i : t) {
      if (i < 0 || i >= n) throw std::invalid_argument("triangle index out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw std::invalid_argument("degenerate triangle");
    }
  }
}

namespace detail {

namespace {

Eigen::Vector3d corner_position(int c) {
  return {double(c & 1), double((c >> 1) & 1), double((c >> 2) & 1)};
}

std::array<std::array<int, 2>, 12> build_edges() {
  std::array<std::array<int, 2>, 12> edges{};
  int e = 0;
  for (int axis = 0; axis < 3; ++axis) {
    for (int c = 0; c < 8; ++c) {
      if (!(c & (1 << axis))) edges[e++] = {c, c | (1 << axis)};
    }
  }
  return edges;
}

int edge_between(int a, int b) {
  const auto& edges = marching_cubes_edges();
  for (int e = 0; e < 12; ++e) {
    if ((edges[e][0] == a && edges[e][1] == b) || (edges[e][0] == b && edges[e][1] == a)) return e;
  }
  throw std::logic_error("corners are not adjacent");
}

bool share_face(int e, int f) {
  const auto& edges = marching_cubes_edges();
  for (int axis = 0; axis < 3; ++axis) {
    const int bit = 1 << axis;
    const int a = edges[e][0], b = edges[e][1], c = edges[f][0], d = edges[f][1];
    if ((a & bit) == (b & bit) && (c & bit) == (d & bit) && (a & bit) == (c & bit)) return true;
  }
  return false;
}

// A fan diagonal lying inside a cube face would be duplicated by the
// neighboring cell, so pick an apex whose diagonals all cross the interior.
std::size_t fan_apex(const std::vector<int>& loop) {
  const std::size_t len = loop.size();
  for (std::size_t k = 0; k < len; ++k) {
    bool ok = true;
    for (std::size_t j = 2; j + 1 < len && ok; ++j) ok = !share_face(loop[k], loop[(k + j) % len]);
    if (ok) return k;
  }
  throw std::logic_error("marching cubes table: no valid fan");
}

// Walks the isoline segments on the six cube faces, orients each one so the
// inside corners lie to its left seen from outside the cube, chains the
// segments into closed loops and fans each loop into triangles. Faces with
// two diagonal inside corners always separate those corners, so neighboring
// cells agree on the shared face.
std::vector<std::array<int, 3>> triangulate_case(int mask) {
  const auto& edges = marching_cubes_edges();
  const auto inside = [mask](int c) { return (mask >> c) & 1; };
  std::array<int, 12> next;
  next.fill(-1);

  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3, v = (axis + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      const int base = side << axis;
      const int ring[4] = {base, base | (1 << u), base | (1 << u) | (1 << v), base | (1 << v)};
      Eigen::Vector3d normal = Eigen::Vector3d::Zero();
      normal[axis] = side ? 1.0 : -1.0;

      int crossed[4], count = 0;
      for (int j = 0; j < 4; ++j) {
        if (inside(ring[j]) != inside(ring[(j + 1) % 4])) crossed[count++] = j;
      }

      // Each segment joins ring edges ea and eb and cuts off the corner run
      // ring[ea + 1 .. eb].
      std::vector<std::array<int, 2>> segments;
      if (count == 2) {
        segments.push_back({crossed[0], crossed[1]});
      } else if (count == 4) {
        for (int j = 0; j < 4; ++j) {
          if (inside(ring[j])) segments.push_back({(j + 3) % 4, j});
        }
      }

      for (const auto& [ea, eb] : segments) {
        int from = edge_between(ring[ea], ring[(ea + 1) % 4]);
        int to = edge_between(ring[eb], ring[(eb + 1) % 4]);
        Eigen::Vector3d run = Eigen::Vector3d::Zero();
        int run_len = 0;
        for (int j = (ea + 1) % 4;; j = (j + 1) % 4) {
          run += corner_position(ring[j]);
          ++run_len;
          if (j == eb) break;
        }
        run /= run_len;
        const bool run_inside = inside(ring[eb]);
        const auto mid = [&](int e) -> Eigen::Vector3d {
          return 0.5 * (corner_position(edges[e][0]) + corner_position(edges[e][1]));
        };
        const Eigen::Vector3d p = mid(from), q = mid(to);
        const double side_sign = normal.dot((q - p).cross(run - p));
        if ((side_sign > 0.0) != static_cast<bool>(run_inside)) std::swap(from, to);
        if (next[from] != -1) throw std::logic_error("marching cubes table: edge reused");
        next[from] = to;
      }
    }
  }

  std::vector<std::array<int, 3>> tris;
  std::array<bool, 12> used{};
  for (int start = 0; start < 12; ++start) {
    if (next[start] == -1 || used[start]) continue;
    std::vector<int> loop;
    for (int e = start; !used[e]; e = next[e]) {
      used[e] = true;
      loop.push_back(e);
      if (next[e] == -1) throw std::logic_error("marching cubes table: open loop");
    }
    const std::size_t k = fan_apex(loop);
    const std::size_t len = loop.size();
    for (std::size_t i = 1; i + 1 < len; ++i) {
      tris.push_back({loop[k], loop[(k + i + 1) % len], loop[(k + i) % len]});
    }
  }
  return tris;
}

}  // namespace

const std::array<std::array<int, 2>, 12>& marching_cubes_edges() {
  static const auto edges = build_edges();
  return edges;
}

const std::array<std::vector<std::array<int, 3>>, 256>& marching_cubes_table() {
  static const auto table = [] {
    std::array<std::vector<std::array<int, 3>>, 256> t;
    for (int mask = 0; mask < 256; ++mask) t[mask] = triangulate_case(mask);
    return t;
  }();
  return table;
}

}  // namespace detail

TriangleMesh marching_cubes(const VoxelGrid& grid, double isolevel) {
  if (!(isolevel > 0.0 && isolevel < 1.0)) {
    throw std::invalid_argument("marching_cubes: isolevel must lie in (0, 1)");
  }
  const GridDims& dims = grid.dims();
  const auto& table = detail::marching_cubes_table();
  const auto& edges = detail::marching_cubes_edges();

  TriangleMesh mesh;
  std::unordered_map<std::size_t, int> vertex_of_edge;

  // Lattice edge key: lower endpoint index * 3 + axis.
  const auto vertex_on = [&](int n, int m, int l, int a, int b) {
    const int an = n + ((a >> 1) & 1), am = m + (a & 1), al = l + ((a >> 2) & 1);
    const int axis = (a ^ b) == 1 ? 0 : (a ^ b) == 2 ? 1 : 2;
    const std::size_t key = dims.index(an, am, al) * 3 + static_cast<std::size_t>(axis);
    const auto it = vertex_of_edge.find(key);
    if (it != vertex_of_edge.end()) return it->second;

    const int bn = n + ((b >> 1) & 1), bm = m + (b & 1), bl = l + ((b >> 2) & 1);
    const double va = grid(an, am, al), vb = grid(bn, bm, bl);
    const double t = (isolevel - va) / (vb - va);
    const Eigen::Vector3d qa(am, an, al), qb(bm, bn, bl);
    mesh.vertices.push_back(lattice_to_object(dims, qa + t * (qb - qa)));
    const int id = static_cast<int>(mesh.vertices.size()) - 1;
    vertex_of_edge.emplace(key, id);
    return id;
  };

  for (int n = 0; n + 1 < dims.h; ++n) {
    for (int m = 0; m + 1 < dims.w; ++m) {
      for (int l = 0; l + 1 < dims.d; ++l) {
        int mask = 0;
        for (int c = 0; c < 8; ++c) {
          if (grid(n + ((c >> 1) & 1), m + (c & 1), l + ((c >> 2) & 1)) >= isolevel) mask |= 1 << c;
        }
        for (const auto& tri : table[mask]) {
          std::array<int, 3> ids;
          for (int k = 0; k < 3; ++k) {
            const auto& e = edges[tri[k]];
            ids[k] = vertex_on(n, m, l, e[0], e[1]);
          }
          mesh.triangles.push_back(ids);
        }
      }
    }
  }
  return mesh;
}

}  // namespace voxsil
