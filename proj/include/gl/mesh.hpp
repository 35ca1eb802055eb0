#pragma once

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <vector>

namespace gl {

using Vec2 = Eigen::Vector2d;

/// Structured triangulation of the unit square at level k (h = 2^-k).
/// Every square cell is split along the same diagonal (lower-left to
/// upper-right), which makes uniform refinement produce nested meshes.
/// Vertices and elements are numbered lexicographically by (y,x).
struct TriMesh {
  int level = 0;
  int n = 1;  // cells per side, n = 2^level
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<std::vector<int>> vertex_to_elements;

  double h() const { return 1.0 / static_cast<double>(n); }
  double element_area() const { return 0.5 * h() * h(); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_elements() const { return static_cast<int>(triangles.size()); }
  int vertex_id(int i, int j) const { return j * (n + 1) + i; }

  std::array<Vec2, 3> coords(int e) const {
    const auto& t = triangles[e];
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
  }

  /// Element containing x (ties on edges resolved towards the lower triangle).
  int locate(const Vec2& x) const;

  /// Barycentric coordinates of x within element e.
  Eigen::Vector3d barycentric(int e, const Vec2& x) const;
};

TriMesh build_structured_mesh(int k);

/// ell-layer vertex-neighborhood patch around a coarse element.
struct Patch {
  int center_element = -1;
  int ell = 0;
  std::vector<int> coarse_elements;         // sorted ids
  std::vector<int> fine_elements;           // sorted ids, all descendants
  std::vector<int> fine_interior_vertices;  // patch-boundary vertices excluded
  std::vector<int> coarse_vertices_active;  // hats with support meeting the patch
};

struct MeshHierarchy {
  std::vector<TriMesh> levels;  // ordered coarse -> fine
  int coarse_level = 0;
  int fine_level = 0;
  // parent_of[l][e] = parent at level l of element e at level l+1
  std::vector<std::vector<int>> parent_of;
  std::vector<int> fine_to_coarse_element;
  std::vector<std::vector<int>> coarse_children_fine;

  const TriMesh& coarse() const { return levels[coarse_level]; }
  const TriMesh& fine() const { return levels[fine_level]; }
  int coarse_k() const { return coarse().level; }
  int fine_k() const { return fine().level; }

  /// Ancestor at an arbitrary coarser level index.
  int ancestor(int level_index, int fine_element) const;
};

/// Nested hierarchy with levels coarse_k..fine_k. Requires
/// 0 <= coarse_k < fine_k <= 12.
MeshHierarchy build_hierarchy(int coarse_k, int fine_k);

/// One layer of the vertex-sharing closure N(G).
std::vector<int> layer_closure(const TriMesh& mesh, const std::vector<int>& elems);

Patch make_patch(const MeshHierarchy& mh, int T, int ell);

/// Smallest ell >= 0 with S contained in N^ell(T).
int layer_distance(const TriMesh& mesh, int T, int S);

}  // namespace gl
