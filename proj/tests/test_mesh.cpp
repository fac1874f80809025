#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "lmn/mesh.hpp"

using namespace lmn;
using namespace lmn::mesh;

TEST_CASE("box mesh counts") {
  for (int n : {1, 2, 4, 8}) {
    const auto m = build_box_tet_mesh(n);
    CHECK(m.tets.size() == static_cast<std::size_t>(6 * n * n * n));
    CHECK(m.vertices.size() == static_cast<std::size_t>((n + 1) * (n + 1) * (n + 1)));
    CHECK(m.faces.size() == static_cast<std::size_t>((24 * n * n * n + 12 * n * n) / 2));
  }
  const auto m4 = build_box_tet_mesh(4);
  CHECK(m4.tets.size() == 384);
  CHECK(m4.vertices.size() == 125);
  CHECK(m4.faces.size() == 864);
  const auto m8 = build_box_tet_mesh(8);
  CHECK(m8.tets.size() == 3072);
  CHECK(m8.vertices.size() == 729);
  CHECK(m8.faces.size() == 6528);
}

TEST_CASE("face count matches brute-force deduplication") {
  const auto m = build_box_tet_mesh(1);
  std::set<std::array<int, 3>> faces;
  for (const auto& t : m.tets) {
    for (int a = 0; a < 4; ++a) {
      std::array<int, 3> f{};
      int q = 0;
      for (int v = 0; v < 4; ++v) {
        if (v != a) f[q++] = t[v];
      }
      std::sort(f.begin(), f.end());
      faces.insert(f);
    }
  }
  CHECK(faces.size() == 18);
  CHECK(m.faces.size() == 18);
}

TEST_CASE("invalid mesh requests") {
  CHECK_THROWS_AS(build_box_tet_mesh(0), std::invalid_argument);
  Box flat;
  flat.hi = Vec3(1.0, 0.0, 1.0);
  CHECK_THROWS_AS(build_box_tet_mesh(2, flat), std::invalid_argument);
}

TEST_CASE("tetrahedra are positive and faces have one or two neighbours") {
  const auto m = build_box_tet_mesh(3);
  for (std::size_t t = 0; t < m.tets.size(); ++t) CHECK(m.tet_volume(static_cast<int>(t)) > 0.0);
  for (const auto& f : m.faces) {
    CHECK(f.tets[0] >= 0);
    const auto& v = f.vertices;
    CHECK((v[0] < v[1] && v[1] < v[2]));
  }
}

TEST_CASE("mesh generation is deterministic") {
  std::ostringstream a, b;
  write_mesh(a, build_box_tet_mesh(3));
  write_mesh(b, build_box_tet_mesh(3));
  CHECK(a.str() == b.str());
}

TEST_CASE("dual mesh geometric identities") {
  for (int n : {1, 2, 4, 8}) {
    CAPTURE(n);
    const auto d = build_dual_mesh(build_box_tet_mesh(n));
    double total = 0.0;
    for (double v : d.volume) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> sub(d.cells(), 0.0);
    std::vector<Vec3> closure(d.cells(), Vec3::Zero());
    for (const auto& f : d.interfaces) {
      CHECK(f.subvolume == doctest::Approx(f.distance * f.eta.norm() / 3.0).epsilon(1e-12));
      const double dj = std::abs(f.eta.dot(d.nodes[f.cell_j] - f.centroid)) / f.eta.norm();
      CHECK(dj == doctest::Approx(f.distance).epsilon(1e-12));
      sub[f.cell_i] += f.subvolume;
      sub[f.cell_j] += f.subvolume;
      closure[f.cell_i] += f.eta;
      closure[f.cell_j] -= f.eta;
    }
    for (std::size_t i = 0; i < d.cells(); ++i) {
      const auto links = d.links_of(static_cast<int>(i));
      CHECK(links.size() == (d.boundary[i] ? 3u : 6u));
      CHECK(sub[i] == doctest::Approx(d.volume[i]).epsilon(1e-12));
      const Vec3 c = closure[i] + d.boundary_eta[i];
      CHECK(c.norm() <= 1e-12 * d.surface[i]);
      CHECK(d.length_scale[i] == doctest::Approx(d.volume[i] / d.surface[i]));
    }
    // η_ji = −η_ij through the link orientation.
    for (std::size_t i = 0; i < d.cells(); ++i) {
      for (const auto& l : d.links_of(static_cast<int>(i))) {
        const auto& f = d.interfaces[l.interface];
        const int self = l.orientation > 0 ? f.cell_i : f.cell_j;
        CHECK(self == static_cast<int>(i));
        CHECK(l.neighbor == (l.orientation > 0 ? f.cell_j : f.cell_i));
      }
    }
  }
}

TEST_CASE("dual cell volume extremes on the coarsest mesh") {
  const auto d = build_dual_mesh(build_box_tet_mesh(4));
  CHECK(d.cells() == 864);
  const auto [lo, hi] = std::minmax_element(d.volume.begin(), d.volume.end());
  CHECK(*lo == doctest::Approx(6.51e-4).epsilon(5e-3));
  CHECK(*hi == doctest::Approx(1.30e-3).epsilon(5e-3));
}

TEST_CASE("nodes are face barycenters") {
  const auto d = build_dual_mesh(build_box_tet_mesh(2));
  for (std::size_t f = 0; f < d.cells(); ++f) {
    CHECK((d.nodes[f] - d.mesh.face_barycenter(static_cast<int>(f))).norm() < 1e-15);
  }
}

TEST_CASE("upwind auxiliary tetrahedra") {
  const auto d = build_dual_mesh(build_box_tet_mesh(3));
  for (const auto& f : d.interfaces) {
    const auto& an = d.aux_nodes[f.elem];
    CHECK(std::count(an.begin(), an.end(), f.cell_i) == 1);
    CHECK(std::count(an.begin(), an.end(), f.cell_j) == 1);
    const auto& left = d.aux_nodes[f.elem_left];
    CHECK(std::count(left.begin(), left.end(), f.cell_i) == 1);
    CHECK((f.elem_left == f.elem) == static_cast<bool>(d.boundary[f.cell_i]));
    CHECK((f.elem_right == f.elem) == static_cast<bool>(d.boundary[f.cell_j]));
  }
}

TEST_CASE("P1 gradient is exact for affine fields") {
  const auto d = build_dual_mesh(build_box_tet_mesh(4));
  std::vector<double> c(d.cells(), 5.0), x(d.cells()), g(d.cells());
  for (std::size_t i = 0; i < d.cells(); ++i) {
    x[i] = d.nodes[i].x();
    g[i] = 2.0 * d.nodes[i].x() + 3.0 * d.nodes[i].y() - d.nodes[i].z();
  }
  for (int e = 0; e < static_cast<int>(d.mesh.tets.size()); ++e) {
    CHECK(p1_gradient(d, c, e).norm() < 1e-12);
    CHECK((p1_gradient(d, x, e) - Vec3(1.0, 0.0, 0.0)).norm() < 1e-12);
    CHECK((p1_gradient(d, g, e) - Vec3(2.0, 3.0, -1.0)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(p1_gradient(d, c, -1), GeometryError);
}

TEST_CASE("degenerate tetrahedron gradient") {
  const std::array<Vec3, 4> flat{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)};
  CHECK_THROWS_AS(p1_basis_gradients(flat), GeometryError);
}
