#ifndef STOCHELM_MESH_HPP
#define STOCHELM_MESH_HPP

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "stochelm/geometry.hpp"
#include "stochelm/ntcheck.hpp"

namespace stochelm
{

enum class BoundaryTag
{
  Dirichlet,  // Gamma_D, on the obstacle
  Truncation  // Gamma_R, on the circle |x| = R
};

struct BoundaryEdge
{
  std::array<int, 2> v;
  BoundaryTag tag;
};

//
// Conforming P1 triangulation of D_R = B_R \ closure(D_-). Triangles are counter-clockwise.
// Gamma_R edges are oriented counter-clockwise around the origin, Gamma_D edges follow the
// obstacle polygon (also counter-clockwise).
//
struct Mesh
{
  double R = 1.0;
  double h = 0.1;
  Obstacle obstacle;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  double triangle_area(std::size_t t) const;
  double total_area() const;
  // Smallest interior angle over all triangles, in degrees.
  double min_angle_degrees() const;
  std::size_t num_edges() const;

  // Per-vertex flags.
  std::vector<char> dirichlet_mask() const;
  std::vector<char> truncation_mask() const;
};

// Throws InputError when h > R/4, the obstacle is not inside B_{R/2}, or an obstacle edge is
// shorter than h/4.
Mesh build_mesh(double R, const Obstacle &obstacle, double h);

// Text format:
//   mesh 1
//   vertices N        followed by N lines "x y"
//   triangles M       followed by M lines "i j k"
//   edges E           followed by E lines "i j D|R"
void write_mesh(const Mesh &mesh, std::ostream &out);

// Appends "values N" and N lines "re im" after the mesh block.
void write_solution(const Mesh &mesh, std::span<const std::complex<double>> nodal,
                    std::ostream &out);

}  // namespace stochelm

#endif  // STOCHELM_MESH_HPP
