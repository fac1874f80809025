#include "lmn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace lmn::mesh {

namespace {

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

// Local vertex pairs (a, b) of a tetrahedron; faces a and b share the edge
// formed by the two remaining local vertices.
constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

std::array<int, 2> remaining(int a, int b) {
  std::array<int, 2> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v) {
    if (v != a && v != b) out[k++] = v;
  }
  return out;
}

}  // namespace

double TetMesh::tet_volume(int t) const {
  const auto& v = tets[t];
  return signed_volume(vertices[v[0]], vertices[v[1]], vertices[v[2]], vertices[v[3]]);
}

Vec3 TetMesh::tet_barycenter(int t) const {
  const auto& v = tets[t];
  return 0.25 * (vertices[v[0]] + vertices[v[1]] + vertices[v[2]] + vertices[v[3]]);
}

Vec3 TetMesh::face_barycenter(int f) const {
  const auto& v = faces[f].vertices;
  return (vertices[v[0]] + vertices[v[1]] + vertices[v[2]]) / 3.0;
}

TetMesh build_box_tet_mesh(int n, const Box& box) {
  if (n < 1) throw std::invalid_argument("build_box_tet_mesh: subdivision count must be >= 1");
  const Vec3 extent = box.hi - box.lo;
  if (!(extent.minCoeff() > 0.0) || !extent.allFinite()) {
    throw std::invalid_argument("build_box_tet_mesh: degenerate box");
  }

  TetMesh m;
  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };
  m.vertices.reserve(static_cast<std::size_t>(np) * np * np);
  for (int k = 0; k < np; ++k) {
    for (int j = 0; j < np; ++j) {
      for (int i = 0; i < np; ++i) {
        m.vertices.emplace_back(box.lo.x() + extent.x() * i / n, box.lo.y() + extent.y() * j / n,
                                box.lo.z() + extent.z() * k / n);
      }
    }
  }

  // Permutations of the axes, in lexicographic order. Each one is a monotone
  // path from corner (0,0,0) to (1,1,1) and hence one Kuhn tetrahedron.
  constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

  m.tets.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> tet{};
          tet[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            tet[s + 1] = vid(c[0], c[1], c[2]);
          }
          const double vol = signed_volume(m.vertices[tet[0]], m.vertices[tet[1]],
                                           m.vertices[tet[2]], m.vertices[tet[3]]);
          if (vol < 0.0) std::swap(tet[2], tet[3]);
          m.tets.push_back(tet);
        }
      }
    }
  }

  std::map<std::array<int, 3>, int> index;
  m.tet_faces.resize(m.tets.size());
  for (std::size_t t = 0; t < m.tets.size(); ++t) {
    for (int a = 0; a < 4; ++a) {
      std::array<int, 3> key{};
      int q = 0;
      for (int v = 0; v < 4; ++v) {
        if (v != a) key[q++] = m.tets[t][v];
      }
      std::sort(key.begin(), key.end());
      auto [it, inserted] = index.try_emplace(key, static_cast<int>(m.faces.size()));
      if (inserted) {
        Face f;
        f.vertices = key;
        f.tets[0] = static_cast<int>(t);
        m.faces.push_back(f);
      } else {
        Face& f = m.faces[it->second];
        if (f.tets[1] >= 0) throw TopologyError("face shared by more than two tetrahedra");
        f.tets[1] = static_cast<int>(t);
      }
      m.tet_faces[t][a] = it->second;
    }
  }
  return m;
}

std::array<Vec3, 4> p1_basis_gradients(const std::array<Vec3, 4>& x) {
  Mat3 jac;
  jac.col(0) = x[1] - x[0];
  jac.col(1) = x[2] - x[0];
  jac.col(2) = x[3] - x[0];
  const double det = jac.determinant();
  const double scale = std::max({jac.col(0).norm(), jac.col(1).norm(), jac.col(2).norm()});
  if (!(std::abs(det) > 1e-12 * scale * scale * scale)) {
    throw GeometryError("degenerate tetrahedron in P1 gradient");
  }
  const Mat3 inv = jac.inverse();
  std::array<Vec3, 4> g;
  g[1] = inv.row(0).transpose();
  g[2] = inv.row(1).transpose();
  g[3] = inv.row(2).transpose();
  g[0] = -(g[1] + g[2] + g[3]);
  return g;
}

double DualMesh::domain_volume() const {
  double s = 0.0;
  for (double v : elem_volume) s += v;
  return s;
}

DualMesh build_dual_mesh(TetMesh mesh) {
  DualMesh d;
  const int nf = static_cast<int>(mesh.faces.size());
  const int nt = static_cast<int>(mesh.tets.size());
  if (static_cast<int>(mesh.tet_faces.size()) != nt) {
    throw TopologyError("tet_faces size does not match tetrahedron count");
  }

  // Adjacency consistency: every face lists the tets that reference it.
  std::vector<int> refs(nf, 0);
  for (int t = 0; t < nt; ++t) {
    for (int a = 0; a < 4; ++a) {
      const int f = mesh.tet_faces[t][a];
      if (f < 0 || f >= nf) throw TopologyError("face index out of range");
      const auto& face = mesh.faces[f];
      if (face.tets[0] != t && face.tets[1] != t) {
        throw TopologyError("face adjacency does not reference its tetrahedron");
      }
      ++refs[f];
    }
  }
  for (int f = 0; f < nf; ++f) {
    const int expected = mesh.faces[f].is_boundary() ? 1 : 2;
    if (refs[f] != expected || mesh.faces[f].tets[0] < 0) {
      throw TopologyError("inconsistent face adjacency at face " + std::to_string(f));
    }
  }

  d.nodes.resize(nf);
  d.volume.assign(nf, 0.0);
  d.surface.assign(nf, 0.0);
  d.boundary.assign(nf, 0);
  d.boundary_eta.assign(nf, Vec3::Zero());
  for (int f = 0; f < nf; ++f) d.nodes[f] = mesh.face_barycenter(f);

  d.elem_grads.resize(nt);
  d.elem_volume.resize(nt);
  d.aux_nodes.resize(nt);
  d.aux_grads.resize(nt);
  d.interfaces.reserve(6 * static_cast<std::size_t>(nt));

  auto other_tet = [&](int f, int t) {
    const auto& face = mesh.faces[f];
    if (face.is_boundary()) return t;
    return face.tets[0] == t ? face.tets[1] : face.tets[0];
  };

  for (int t = 0; t < nt; ++t) {
    const auto& tv = mesh.tets[t];
    const auto& tf = mesh.tet_faces[t];
    const double vol = mesh.tet_volume(t);
    if (!(vol > 0.0)) throw GeometryError("nonpositive tetrahedron volume at " + std::to_string(t));
    d.elem_volume[t] = vol;
    const std::array<Vec3, 4> x{mesh.vertices[tv[0]], mesh.vertices[tv[1]], mesh.vertices[tv[2]],
                                mesh.vertices[tv[3]]};
    d.elem_grads[t] = p1_basis_gradients(x);
    const Vec3 bary = mesh.tet_barycenter(t);

    for (int a = 0; a < 4; ++a) {
      const int f = tf[a];
      // Cone from the barycenter onto face a.
      std::array<int, 3> fv{};
      int q = 0;
      for (int v = 0; v < 4; ++v) {
        if (v != a) fv[q++] = v;
      }
      d.volume[f] += std::abs(signed_volume(bary, x[fv[0]], x[fv[1]], x[fv[2]]));
      if (mesh.faces[f].is_boundary()) {
        Vec3 n = 0.5 * (x[fv[1]] - x[fv[0]]).cross(x[fv[2]] - x[fv[0]]);
        if (n.dot(x[a] - x[fv[0]]) > 0.0) n = -n;
        d.boundary[f] = 1;
        d.boundary_eta[f] = n;
      }
    }

    std::array<int, 4> an{tf[0], tf[1], tf[2], tf[3]};
    d.aux_nodes[t] = an;
    d.aux_grads[t] =
        p1_basis_gradients({d.nodes[an[0]], d.nodes[an[1]], d.nodes[an[2]], d.nodes[an[3]]});

    for (const auto& [a, b] : kPairs) {
      const auto [c, e] = remaining(a, b);
      Interface in;
      in.cell_i = tf[a];
      in.cell_j = tf[b];
      in.elem = t;
      in.elem_left = other_tet(tf[a], t);
      in.elem_right = other_tet(tf[b], t);
      // Face a contains local vertices b, c, e; its cone's face {B, c, e}
      // lies opposite vertex b.
      Vec3 n = 0.5 * (x[c] - bary).cross(x[e] - bary);
      if (n.dot(x[b] - bary) > 0.0) n = -n;
      in.eta = n;
      in.centroid = (bary + x[c] + x[e]) / 3.0;
      const double area = n.norm();
      in.distance = std::abs(n.dot(d.nodes[in.cell_i] - bary)) / area;
      in.subvolume = std::abs(signed_volume(d.nodes[in.cell_i], bary, x[c], x[e]));
      in.edge = {tv[c], tv[e]};
      in.opposite_i = tv[b];
      in.opposite_j = tv[a];
      d.interfaces.push_back(in);
    }
  }

  for (const auto& in : d.interfaces) {
    const double area = in.eta.norm();
    d.surface[in.cell_i] += area;
    d.surface[in.cell_j] += area;
  }
  d.length_scale.resize(nf);
  for (int f = 0; f < nf; ++f) {
    d.surface[f] += d.boundary_eta[f].norm();
    d.length_scale[f] = d.volume[f] / d.surface[f];
  }
  for (auto& in : d.interfaces) {
    in.length_scale = std::min(d.length_scale[in.cell_i], d.length_scale[in.cell_j]);
  }

  d.link_offsets.assign(nf + 1, 0);
  for (const auto& in : d.interfaces) {
    ++d.link_offsets[in.cell_i + 1];
    ++d.link_offsets[in.cell_j + 1];
  }
  for (int f = 0; f < nf; ++f) d.link_offsets[f + 1] += d.link_offsets[f];
  d.links.resize(d.link_offsets[nf]);
  std::vector<int> fill(d.link_offsets.begin(), d.link_offsets.end() - 1);
  for (int k = 0; k < static_cast<int>(d.interfaces.size()); ++k) {
    const auto& in = d.interfaces[k];
    d.links[fill[in.cell_i]++] = {k, in.cell_j, 1.0};
    d.links[fill[in.cell_j]++] = {k, in.cell_i, -1.0};
  }

  d.mesh = std::move(mesh);
  return d;
}

Vec3 p1_gradient(const DualMesh& dual, std::span<const double> nodal_values, int elem) {
  if (elem < 0 || elem >= static_cast<int>(dual.aux_nodes.size())) {
    throw GeometryError("auxiliary tetrahedron index out of range");
  }
  const auto& nodes = dual.aux_nodes[elem];
  const auto& g = dual.aux_grads[elem];
  Vec3 out = Vec3::Zero();
  for (int a = 0; a < 4; ++a) out += nodal_values[nodes[a]] * g[a];
  return out;
}

void write_mesh(std::ostream& out, const TetMesh& mesh) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << "VERTICES " << mesh.vertices.size() << '\n';
  for (const auto& v : mesh.vertices) s << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  s << "TETRAHEDRA " << mesh.tets.size() << '\n';
  for (const auto& t : mesh.tets) s << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  s << "FACES " << mesh.faces.size() << '\n';
  for (const auto& f : mesh.faces) {
    s << f.vertices[0] << ' ' << f.vertices[1] << ' ' << f.vertices[2] << ' ' << f.tets[0] << ' '
      << f.tets[1] << '\n';
  }
  out << s.str();
}

}  // namespace lmn::mesh
