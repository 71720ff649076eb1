#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "stochelm/errors.hpp"
#include "stochelm/mesh.hpp"

using namespace stochelm;

namespace
{

Obstacle square(double half)
{
  return Obstacle::polygon({Vec2(-half, -half), Vec2(half, -half), Vec2(half, half), Vec2(-half, half)});
}

std::size_t count_tag(const Mesh &m, BoundaryTag tag)
{
  std::size_t n = 0;
  for (const auto &e : m.boundary_edges)
  {
    n += e.tag == tag;
  }
  return n;
}

}  // namespace

TEST_CASE("disk mesh without obstacle")
{
  const auto m = build_mesh(1.0, Obstacle::none(), 0.1);
  CHECK(count_tag(m, BoundaryTag::Dirichlet) == 0);
  const double expected = 2 * M_PI / 0.1;
  const double edges = static_cast<double>(count_tag(m, BoundaryTag::Truncation));
  CHECK(edges >= 0.7 * expected);
  CHECK(edges <= 1.3 * expected);
  for (std::size_t t = 0; t < m.num_triangles(); ++t)
  {
    REQUIRE(m.triangle_area(t) > 0.0);
  }
  // inscribed polygon area
  const double n = edges;
  CHECK(m.total_area() == doctest::Approx(0.5 * n * std::sin(2 * M_PI / n)).epsilon(1e-12));
  CHECK(m.min_angle_degrees() > 20.0);
  for (const auto &e : m.boundary_edges)
  {
    CHECK(m.vertices[e.v[0]].norm() == doctest::Approx(1.0).epsilon(1e-14));
    // counter-clockwise around the origin
    const Vec2 a = m.vertices[e.v[0]];
    const Vec2 b = m.vertices[e.v[1]];
    CHECK(a.x() * b.y() - a.y() * b.x() > 0.0);
  }
}

TEST_CASE("Euler characteristic")
{
  const auto disk = build_mesh(1.0, Obstacle::none(), 0.15);
  CHECK(static_cast<long>(disk.num_vertices()) - static_cast<long>(disk.num_edges()) +
            static_cast<long>(disk.num_triangles()) == 1);
  const auto annulus = build_mesh(1.0, square(0.2), 0.1);
  CHECK(static_cast<long>(annulus.num_vertices()) - static_cast<long>(annulus.num_edges()) +
            static_cast<long>(annulus.num_triangles()) == 0);
}

TEST_CASE("halving h multiplies the vertex count by about four")
{
  const auto coarse = build_mesh(1.0, Obstacle::none(), 0.1);
  const auto fine = build_mesh(1.0, Obstacle::none(), 0.05);
  const double ratio = static_cast<double>(fine.num_vertices()) / coarse.num_vertices();
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("square obstacle boundary is exact")
{
  const auto sq = square(0.2);
  const auto m = build_mesh(1.0, sq, 0.05);
  const auto mask = m.dirichlet_mask();
  std::size_t count = 0;
  for (std::size_t i = 0; i < m.num_vertices(); ++i)
  {
    if (!mask[i])
    {
      continue;
    }
    ++count;
    const Vec2 &v = m.vertices[i];
    CHECK(std::abs(std::max(std::abs(v.x()), std::abs(v.y())) - 0.2) < 1e-12);
  }
  CHECK(count == count_tag(m, BoundaryTag::Dirichlet));
  CHECK(m.total_area() < M_PI - 0.16);
  CHECK(m.total_area() > M_PI - 0.16 - 0.02);
  // no triangle centroid inside the obstacle
  for (const auto &t : m.triangles)
  {
    const Vec2 c = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) / 3.0;
    REQUIRE_FALSE(sq.contains(c));
  }
}

TEST_CASE("every interior edge is shared by exactly two triangles")
{
  const auto m = build_mesh(1.0, square(0.15), 0.08);
  std::map<std::pair<int, int>, int> uses;
  for (const auto &t : m.triangles)
  {
    for (int e = 0; e < 3; ++e)
    {
      int a = t[e];
      int b = t[(e + 1) % 3];
      uses[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  std::size_t boundary = 0;
  for (const auto &[edge, n] : uses)
  {
    REQUIRE(n <= 2);
    boundary += n == 1;
  }
  CHECK(boundary == m.boundary_edges.size());
}

TEST_CASE("build_mesh contracts")
{
  CHECK_THROWS_AS(build_mesh(1.0, Obstacle::none(), 0.3), InputError);
  CHECK_THROWS_AS(build_mesh(1.0, square(0.6), 0.1), InputError);
  CHECK_THROWS_AS(build_mesh(1.0, square(0.01), 0.1), InputError);
}

TEST_CASE("mesh and solution text export")
{
  const auto m = build_mesh(1.0, Obstacle::none(), 0.2);
  std::ostringstream out;
  write_mesh(m, out);
  std::istringstream in(out.str());
  std::string word;
  int version = 0;
  std::size_t n = 0;
  in >> word >> version;
  CHECK(word == "mesh");
  CHECK(version == 1);
  in >> word >> n;
  CHECK(word == "vertices");
  CHECK(n == m.num_vertices());

  std::vector<std::complex<double>> u(m.num_vertices(), {1.0, -2.0});
  std::ostringstream sol;
  write_solution(m, u, sol);
  CHECK(sol.str().find("values " + std::to_string(m.num_vertices())) != std::string::npos);
}
