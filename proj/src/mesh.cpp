#include "gl/mesh.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gl {

TriMesh build_structured_mesh(int k) {
  if (k < 0 || k > 12) throw std::invalid_argument("mesh level out of range [0,12]");
  TriMesh m;
  m.level = k;
  m.n = 1 << k;
  const int n = m.n;
  const double h = 1.0 / n;
  m.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(i * h, j * h);
  m.triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = m.vertex_id(i, j);
      const int v10 = m.vertex_id(i + 1, j);
      const int v01 = m.vertex_id(i, j + 1);
      const int v11 = m.vertex_id(i + 1, j + 1);
      m.triangles.push_back({v00, v10, v11});  // lower: x_loc >= y_loc
      m.triangles.push_back({v00, v11, v01});  // upper
    }
  }
  m.vertex_to_elements.resize(m.vertices.size());
  for (int e = 0; e < m.num_elements(); ++e)
    for (int v : m.triangles[e]) m.vertex_to_elements[v].push_back(e);
  return m;
}

int TriMesh::locate(const Vec2& x) const {
  int i = std::min(static_cast<int>(x.x() * n), n - 1);
  int j = std::min(static_cast<int>(x.y() * n), n - 1);
  i = std::max(i, 0);
  j = std::max(j, 0);
  const double xl = x.x() * n - i;
  const double yl = x.y() * n - j;
  const int cell = 2 * (j * n + i);
  return (xl >= yl) ? cell : cell + 1;
}

Eigen::Vector3d TriMesh::barycentric(int e, const Vec2& x) const {
  const auto p = coords(e);
  Eigen::Matrix2d J;
  J.col(0) = p[1] - p[0];
  J.col(1) = p[2] - p[0];
  const Vec2 lam = J.inverse() * (x - p[0]);
  return {1.0 - lam[0] - lam[1], lam[0], lam[1]};
}

int MeshHierarchy::ancestor(int level_index, int fine_element) const {
  int e = fine_element;
  for (int l = static_cast<int>(levels.size()) - 2; l >= level_index; --l)
    e = parent_of[l][e];
  return e;
}

MeshHierarchy build_hierarchy(int coarse_k, int fine_k) {
  if (coarse_k < 0 || fine_k > 12 || coarse_k >= fine_k)
    throw std::invalid_argument("build_hierarchy requires 0 <= coarse_k < fine_k <= 12");
  MeshHierarchy mh;
  for (int k = coarse_k; k <= fine_k; ++k) mh.levels.push_back(build_structured_mesh(k));
  mh.coarse_level = 0;
  mh.fine_level = static_cast<int>(mh.levels.size()) - 1;
  mh.parent_of.resize(mh.levels.size() - 1);
  for (size_t l = 0; l + 1 < mh.levels.size(); ++l) {
    const TriMesh& child = mh.levels[l + 1];
    const TriMesh& par = mh.levels[l];
    auto& map = mh.parent_of[l];
    map.resize(child.num_elements());
    for (int e = 0; e < child.num_elements(); ++e) {
      const auto p = child.coords(e);
      const Vec2 c = (p[0] + p[1] + p[2]) / 3.0;
      map[e] = par.locate(c);
    }
  }
  const int nf = mh.fine().num_elements();
  mh.fine_to_coarse_element.resize(nf);
  mh.coarse_children_fine.resize(mh.coarse().num_elements());
  for (int e = 0; e < nf; ++e) {
    const int a = mh.ancestor(0, e);
    mh.fine_to_coarse_element[e] = a;
    mh.coarse_children_fine[a].push_back(e);
  }
  return mh;
}

std::vector<int> layer_closure(const TriMesh& mesh, const std::vector<int>& elems) {
  std::set<int> out(elems.begin(), elems.end());
  for (int e : elems)
    for (int v : mesh.triangles[e])
      for (int nb : mesh.vertex_to_elements[v]) out.insert(nb);
  return {out.begin(), out.end()};
}

Patch make_patch(const MeshHierarchy& mh, int T, int ell) {
  const TriMesh& cm = mh.coarse();
  if (T < 0 || T >= cm.num_elements()) throw std::invalid_argument("patch: invalid element id");
  if (ell < 1) throw std::invalid_argument("patch: ell must be >= 1");
  Patch p;
  p.center_element = T;
  p.ell = ell;
  std::vector<int> cur = {T};
  for (int l = 0; l < ell; ++l) {
    std::vector<int> next = layer_closure(cm, cur);
    if (next.size() == cur.size()) {  // saturated at full domain
      cur = std::move(next);
      break;
    }
    cur = std::move(next);
  }
  p.coarse_elements = std::move(cur);

  std::set<int> fine_set;
  for (int ce : p.coarse_elements)
    for (int fe : mh.coarse_children_fine[ce]) fine_set.insert(fe);
  p.fine_elements.assign(fine_set.begin(), fine_set.end());

  // A fine vertex is interior iff every fine element containing it lies in
  // the patch. Vertices on the physical boundary inside the patch count as
  // interior (no boundary condition there).
  const TriMesh& fm = mh.fine();
  std::set<int> cand;
  for (int fe : p.fine_elements)
    for (int v : fm.triangles[fe]) cand.insert(v);
  for (int v : cand) {
    bool interior = true;
    for (int e : fm.vertex_to_elements[v])
      if (!fine_set.count(e)) {
        interior = false;
        break;
      }
    if (interior) p.fine_interior_vertices.push_back(v);
  }

  std::set<int> active;
  for (int ce : p.coarse_elements)
    for (int v : cm.triangles[ce]) active.insert(v);
  p.coarse_vertices_active.assign(active.begin(), active.end());
  return p;
}

int layer_distance(const TriMesh& mesh, int T, int S) {
  if (T < 0 || T >= mesh.num_elements() || S < 0 || S >= mesh.num_elements())
    throw std::invalid_argument("layer_distance: invalid element id");
  std::vector<int> cur = {T};
  int ell = 0;
  while (true) {
    if (std::binary_search(cur.begin(), cur.end(), S)) return ell;
    std::vector<int> next = layer_closure(mesh, cur);
    if (next.size() == cur.size())
      throw std::logic_error("layer_distance: saturated without reaching target");
    cur = std::move(next);
    ++ell;
  }
}

}  // namespace gl
