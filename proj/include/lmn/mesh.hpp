#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "lmn/types.hpp"

namespace lmn::mesh {

struct Box {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};

  double volume() const { return (hi - lo).prod(); }
  static Box unit() { return {}; }
};

struct Face {
  std::array<int, 3> vertices;  // sorted ascending
  std::array<int, 2> tets{-1, -1};  // tets[1] == -1 on the boundary

  bool is_boundary() const { return tets[1] < 0; }
};

/// Conforming tetrahedral mesh. Local face `a` of a tetrahedron is the face
/// opposite its local vertex `a`.
struct TetMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<Face> faces;
  std::vector<std::array<int, 4>> tet_faces;

  double tet_volume(int t) const;
  Vec3 tet_barycenter(int t) const;
  Vec3 face_barycenter(int f) const;
};

/// Kuhn split of each of the n^3 sub-cubes into six tetrahedra along the main
/// diagonal. Throws std::invalid_argument for n < 1 or a degenerate box.
TetMesh build_box_tet_mesh(int n, const Box& box = Box::unit());

/// Interface Γ_ij between dual cells i and j, lying inside one element.
/// The area vector points out of cell i.
struct Interface {
  int cell_i = -1;
  int cell_j = -1;
  int elem = -1;        // T_ij: the element containing the interface
  int elem_left = -1;   // T_ijL: element across the originating face of cell i
  int elem_right = -1;  // T_ijR: element across the originating face of cell j
  Vec3 eta = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();  // N_ij
  double distance = 0.0;         // d_ij == d_ji
  double subvolume = 0.0;        // |C_ij| == |C_ji|
  double length_scale = 0.0;     // L_ij
  std::array<int, 2> edge{-1, -1};  // mesh vertices shared by faces i and j
  int opposite_i = -1;  // remaining vertex of face i
  int opposite_j = -1;  // remaining vertex of face j
};

/// A cell's view of one of its interfaces.
struct Link {
  int interface;
  int neighbor;
  double orientation;  // +1 if the stored area vector is outward for this cell
};

/// Face-type dual finite-volume mesh. Node i sits at the barycenter of mesh
/// face i; cell i is the union of the cones from the adjacent element
/// barycenters to that face.
struct DualMesh {
  TetMesh mesh;

  std::vector<Vec3> nodes;
  std::vector<double> volume;
  std::vector<double> surface;       // S(C_i), boundary face included
  std::vector<double> length_scale;  // L_i = |C_i| / S(C_i)
  std::vector<char> boundary;
  std::vector<Vec3> boundary_eta;  // outward area vector of the boundary face, zero inside

  std::vector<Interface> interfaces;
  std::vector<int> link_offsets;  // CSR over cells
  std::vector<Link> links;

  // Auxiliary tetrahedron of every element: its four face nodes, ordered as
  // the element's local faces, and the gradients of the matching P1 basis.
  std::vector<std::array<int, 4>> aux_nodes;
  std::vector<std::array<Vec3, 4>> aux_grads;

  // P1 basis gradients of each mesh element (vertex-based FEM).
  std::vector<std::array<Vec3, 4>> elem_grads;
  std::vector<double> elem_volume;

  std::size_t cells() const { return nodes.size(); }
  std::span<const Link> links_of(int cell) const {
    return {links.data() + link_offsets[cell],
            static_cast<std::size_t>(link_offsets[cell + 1] - link_offsets[cell])};
  }
  double domain_volume() const;
};

DualMesh build_dual_mesh(TetMesh mesh);

/// Gradient of the linear interpolant of `nodal_values` (one per FV node) on
/// the auxiliary tetrahedron of element `elem`.
Vec3 p1_gradient(const DualMesh& dual, std::span<const double> nodal_values, int elem);

/// Basis gradients of the tetrahedron with the given corners. Throws
/// GeometryError when the tetrahedron is degenerate.
std::array<Vec3, 4> p1_basis_gradients(const std::array<Vec3, 4>& corners);

/// Plain-text dump: VERTICES / TETRAHEDRA / FACES sections, 17 significant digits.
void write_mesh(std::ostream& out, const TetMesh& mesh);

}  // namespace lmn::mesh
