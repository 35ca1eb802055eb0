#include "gl/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace gl;

TEST_CASE("structured mesh counts") {
  const TriMesh m2 = build_structured_mesh(2);
  CHECK(m2.num_vertices() == 25);
  CHECK(m2.num_elements() == 32);
  CHECK(m2.h() == doctest::Approx(0.25));

  const TriMesh m3 = build_structured_mesh(3);
  CHECK(m3.num_vertices() == 81);
  CHECK(m3.num_elements() == 128);

  const TriMesh m7 = build_structured_mesh(7);
  CHECK(m7.num_vertices() == 16641);
  CHECK(m7.num_elements() == 32768);
}

TEST_CASE("elements are counterclockwise with constant area") {
  const TriMesh m = build_structured_mesh(3);
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto p = m.coords(e);
    const double twice_area =
        (p[1] - p[0]).x() * (p[2] - p[0]).y() - (p[1] - p[0]).y() * (p[2] - p[0]).x();
    CHECK(twice_area == doctest::Approx(2.0 * m.element_area()));
  }
}

TEST_CASE("locate and barycentric reconstruct points") {
  const TriMesh m = build_structured_mesh(3);
  const Vec2 pts[] = {{0.01, 0.02}, {0.5, 0.5}, {0.99, 0.33}, {0.0, 0.0}, {1.0, 1.0}, {0.125, 0.875}};
  for (const Vec2& x : pts) {
    const int e = m.locate(x);
    REQUIRE(e >= 0);
    REQUIRE(e < m.num_elements());
    const Eigen::Vector3d lam = m.barycentric(e, x);
    CHECK(lam.sum() == doctest::Approx(1.0));
    CHECK(lam.minCoeff() >= -1e-12);
    Vec2 rec = Vec2::Zero();
    for (int v = 0; v < 3; ++v) rec += lam[v] * m.vertices[m.triangles[e][v]];
    CHECK((rec - x).norm() <= 1e-14);
  }
}

TEST_CASE("hierarchy nesting: each parent has four children") {
  const MeshHierarchy mh = build_hierarchy(2, 4);
  CHECK(mh.coarse_k() == 2);
  CHECK(mh.fine_k() == 4);
  CHECK(mh.levels.size() == 3);
  std::vector<int> count(mh.coarse().num_elements(), 0);
  for (int e = 0; e < mh.fine().num_elements(); ++e) count[mh.fine_to_coarse_element[e]]++;
  for (int c : count) CHECK(c == 16);
  // children really live inside their parent
  for (int e = 0; e < mh.fine().num_elements(); ++e) {
    const auto p = mh.fine().coords(e);
    const Vec2 centroid = (p[0] + p[1] + p[2]) / 3.0;
    const int parent = mh.fine_to_coarse_element[e];
    const Eigen::Vector3d lam = mh.coarse().barycentric(parent, centroid);
    CHECK(lam.minCoeff() >= -1e-13);
  }
  CHECK_THROWS(build_hierarchy(3, 3));
  CHECK_THROWS(build_hierarchy(-1, 3));
  CHECK_THROWS(build_hierarchy(3, 13));
}

TEST_CASE("patch sizes match hand-counted closures") {
  const MeshHierarchy mh = build_hierarchy(3, 5);
  // interior element on the 8x8 coarse grid
  const int interior = 2 * (3 * 8 + 3);
  const Patch p1 = make_patch(mh, interior, 1);
  CHECK(p1.coarse_elements.size() == 13);
  // corner cell
  const Patch pc = make_patch(mh, 0, 1);
  CHECK(pc.coarse_elements.size() == 7);
  // saturated patch covers everything
  const Patch ps = make_patch(mh, interior, 8);
  CHECK(ps.coarse_elements.size() == 128);
  CHECK(ps.fine_elements.size() == static_cast<size_t>(mh.fine().num_elements()));
  // saturated patch has no interior boundary: every fine vertex is free
  CHECK(ps.fine_interior_vertices.size() == static_cast<size_t>(mh.fine().num_vertices()));
}

TEST_CASE("patch growth is quadratic until saturation") {
  const MeshHierarchy mh = build_hierarchy(4, 5);
  const int center = 2 * (8 * 16 + 8);
  size_t prev = 0;
  for (int ell = 1; ell <= 4; ++ell) {
    const Patch p = make_patch(mh, center, ell);
    CHECK(p.coarse_elements.size() > prev);
    prev = p.coarse_elements.size();
    // vertex-closure layers around one triangle grow like a hexagon:
    // 6*ell^2 + 6*ell + 1 triangles away from the boundary
    CHECK(p.coarse_elements.size() == static_cast<size_t>(6 * ell * ell + 6 * ell + 1));
  }
}

TEST_CASE("repeated one-layer closure equals the ell-layer patch") {
  const MeshHierarchy mh = build_hierarchy(3, 4);
  const int T = 2 * (5 * 8 + 2) + 1;
  std::vector<int> grown{T};
  for (int ell = 1; ell <= 3; ++ell) {
    grown = layer_closure(mh.coarse(), grown);
    std::sort(grown.begin(), grown.end());
    const Patch p = make_patch(mh, T, ell);
    CHECK(grown == p.coarse_elements);
  }
}

TEST_CASE("layer_distance is a patch membership certificate") {
  const TriMesh m = build_structured_mesh(3);
  const MeshHierarchy mh = build_hierarchy(3, 4);
  const int T = 2 * (4 * 8 + 4);
  CHECK(layer_distance(m, T, T) == 0);
  for (int ell = 1; ell <= 3; ++ell) {
    const Patch p = make_patch(mh, T, ell);
    for (int S : p.coarse_elements) CHECK(layer_distance(m, T, S) <= ell);
  }
  const Patch p2 = make_patch(mh, T, 2);
  std::set<int> inside(p2.coarse_elements.begin(), p2.coarse_elements.end());
  for (int S = 0; S < m.num_elements(); ++S)
    if (!inside.count(S)) CHECK(layer_distance(m, T, S) > 2);
}

TEST_CASE("ancestor chain is consistent across levels") {
  const MeshHierarchy mh = build_hierarchy(2, 5);
  for (int e = 0; e < mh.fine().num_elements(); e += 7) {
    int anc = mh.ancestor(0, e);
    CHECK(anc == mh.fine_to_coarse_element[e]);
    // centroid containment at the intermediate level too
    const auto p = mh.fine().coords(e);
    const Vec2 centroid = (p[0] + p[1] + p[2]) / 3.0;
    const int mid = mh.ancestor(1, e);
    CHECK(mh.levels[1].barycentric(mid, centroid).minCoeff() >= -1e-13);
  }
}
