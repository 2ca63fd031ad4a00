#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qlmass/geometry.hpp"

// Structured tetrahedral meshes of balls, spherical shells and boxes in flat
// space. Coordinates are kept for export and for closed-form comparisons; the
// TetDomain built from them only sees edge lengths.
namespace qlmass::meshgen {

struct TetMesh {
  std::vector<Point3> points;
  std::vector<Tet> tets;
  std::vector<BoundaryTriangle> boundary;
};

// Ball of the given radius. Each radial layer is a prism layer over a
// geodesic icosphere whose base edges are split into `frequency` segments
// (20 * frequency^2 triangles); the innermost sphere is coned to the center.
// All boundary triangles are tagged outer.
TetMesh ball(double radius, std::size_t frequency, std::size_t layers);

// Shell r_in <= |x| <= r_out. Outer sphere tagged outer, inner sphere
// tagged with inner_tag.
TetMesh shell(double r_in, double r_out, std::size_t frequency, std::size_t layers,
              BoundaryTag inner_tag = BoundaryTag::horizon);

// Axis-aligned box [lo, hi] with nx x ny x nz cubes, six tets per cube.
TetMesh box(const Point3& lo, const Point3& hi, std::size_t nx, std::size_t ny, std::size_t nz);

// Free faces of a tet set, tagged by a predicate on the face centroid.
std::vector<BoundaryTriangle> free_faces(const std::vector<Point3>& points,
                                         const std::vector<Tet>& tets,
                                         const std::function<BoundaryTag(const Point3&)>& tag);

// Euclidean edge lengths of the mesh.
TetDomain to_domain(const TetMesh& mesh, std::vector<double> tet_scalar_curvature = {},
                    double tol = kDefaultTolerance);

}  // namespace qlmass::meshgen
