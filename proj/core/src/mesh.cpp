#include "stochelm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "delaunay.hpp"
#include "stochelm/errors.hpp"

namespace stochelm
{

double Mesh::triangle_area(std::size_t t) const
{
  const auto &tri = triangles[t];
  return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double Mesh::total_area() const
{
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t)
  {
    a += triangle_area(t);
  }
  return a;
}

double Mesh::min_angle_degrees() const
{
  double worst = 180.0;
  for (const auto &tri : triangles)
  {
    for (int i = 0; i < 3; ++i)
    {
      const Vec2 a = vertices[tri[(i + 1) % 3]] - vertices[tri[i]];
      const Vec2 b = vertices[tri[(i + 2) % 3]] - vertices[tri[i]];
      const double angle = std::atan2(std::abs(a.x() * b.y() - a.y() * b.x()), a.dot(b));
      worst = std::min(worst, angle * 180.0 / std::numbers::pi);
    }
  }
  return worst;
}

std::size_t Mesh::num_edges() const
{
  std::set<std::pair<int, int>> edges;
  for (const auto &tri : triangles)
  {
    for (int i = 0; i < 3; ++i)
    {
      const int a = tri[i];
      const int b = tri[(i + 1) % 3];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return edges.size();
}

std::vector<char> Mesh::dirichlet_mask() const
{
  std::vector<char> mask(vertices.size(), 0);
  for (const auto &e : boundary_edges)
  {
    if (e.tag == BoundaryTag::Dirichlet)
    {
      mask[e.v[0]] = mask[e.v[1]] = 1;
    }
  }
  return mask;
}

std::vector<char> Mesh::truncation_mask() const
{
  std::vector<char> mask(vertices.size(), 0);
  for (const auto &e : boundary_edges)
  {
    if (e.tag == BoundaryTag::Truncation)
    {
      mask[e.v[0]] = mask[e.v[1]] = 1;
    }
  }
  return mask;
}

namespace
{

using EdgeKey = std::uint64_t;

EdgeKey edge_key(int a, int b)
{
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

// Working state of the generator: points, which of them are pinned to the boundary, and
// the obstacle boundary as a chain of point-index segments.
struct Generator
{
  double R;
  double h;
  const Obstacle &obstacle;
  std::vector<Vec2> pts;
  std::vector<char> pinned;
  int num_circle = 0;
  std::vector<std::array<int, 2>> obstacle_segments;
  std::vector<std::array<int, 3>> tris;

  bool admissible_interior(const Vec2 &x, double clearance) const
  {
    if (!(x.norm() < R - clearance))
    {
      return false;
    }
    if (obstacle.is_none())
    {
      return true;
    }
    return !obstacle.contains(x) && obstacle.boundary_distance(x) > clearance;
  }

  void seed_points()
  {
    num_circle = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * R / h)));
    for (int i = 0; i < num_circle; ++i)
    {
      const double theta = 2.0 * std::numbers::pi * i / num_circle;
      pts.emplace_back(R * std::cos(theta), R * std::sin(theta));
      pinned.push_back(1);
    }
    if (!obstacle.is_none())
    {
      const auto &v = obstacle.vertices();
      const int first = static_cast<int>(pts.size());
      for (std::size_t i = 0; i < v.size(); ++i)
      {
        const Vec2 a = v[i];
        const Vec2 b = v[(i + 1) % v.size()];
        const int m = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h)));
        for (int k = 0; k < m; ++k)
        {
          pts.push_back(k == 0 ? a : Vec2(a + (static_cast<double>(k) / m) * (b - a)));
          pinned.push_back(1);
        }
      }
      const int last = static_cast<int>(pts.size());
      for (int i = first; i < last; ++i)
      {
        obstacle_segments.push_back({i, i + 1 < last ? i + 1 : first});
      }
    }
    const double dy = h * std::sqrt(3.0) / 2.0;
    const int rows = static_cast<int>(std::ceil(R / dy)) + 1;
    const int cols = static_cast<int>(std::ceil(R / h)) + 1;
    for (int j = -rows; j <= rows; ++j)
    {
      const double offset = (std::abs(j) % 2 == 1) ? 0.5 * h : 0.0;
      for (int i = -cols; i <= cols; ++i)
      {
        const Vec2 x(i * h + offset, j * dy);
        if (admissible_interior(x, 0.55 * h))
        {
          pts.push_back(x);
          pinned.push_back(0);
        }
      }
    }
  }

  void triangulate()
  {
    auto all = detail::delaunay_triangulate(pts);
    tris.clear();
    tris.reserve(all.size());
    for (const auto &t : all)
    {
      const Vec2 c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
      if (!obstacle.contains(c))
      {
        tris.push_back(t);
      }
    }
  }

  // Splits obstacle segments missing from the triangulation. Returns true if any split
  // happened (the caller re-triangulates).
  bool recover_segments()
  {
    std::unordered_set<EdgeKey> present;
    for (const auto &t : tris)
    {
      for (int i = 0; i < 3; ++i)
      {
        present.insert(edge_key(t[i], t[(i + 1) % 3]));
      }
    }
    std::vector<std::array<int, 2>> next;
    bool split = false;
    for (const auto &s : obstacle_segments)
    {
      if (present.count(edge_key(s[0], s[1])))
      {
        next.push_back(s);
        continue;
      }
      split = true;
      const Vec2 mid = 0.5 * (pts[s[0]] + pts[s[1]]);
      const double half = 0.5 * (pts[s[1]] - pts[s[0]]).norm();
      // Free points encroaching on the two halves are removed.
      for (std::size_t i = 0; i < pts.size(); ++i)
      {
        if (!pinned[i] && (pts[i] - mid).norm() < 1.5 * half)
        {
          pinned[i] = 2;  // tombstone
        }
      }
      const int m = static_cast<int>(pts.size());
      pts.push_back(mid);
      pinned.push_back(1);
      next.push_back({s[0], m});
      next.push_back({m, s[1]});
    }
    obstacle_segments = std::move(next);
    if (split)
    {
      compact();
    }
    return split;
  }

  void compact()
  {
    std::vector<int> remap(pts.size(), -1);
    std::vector<Vec2> kept;
    std::vector<char> kept_pinned;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
      if (pinned[i] != 2)
      {
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(pts[i]);
        kept_pinned.push_back(pinned[i]);
      }
    }
    for (auto &s : obstacle_segments)
    {
      s = {remap[s[0]], remap[s[1]]};
    }
    pts = std::move(kept);
    pinned = std::move(kept_pinned);
    tris.clear();
  }

  void triangulate_conforming()
  {
    for (int attempt = 0; attempt < 64; ++attempt)
    {
      triangulate();
      if (!recover_segments())
      {
        return;
      }
    }
    throw InputError("build_mesh: could not recover the obstacle boundary");
  }

  void smooth(int iterations)
  {
    for (int it = 0; it < iterations; ++it)
    {
      std::vector<Vec2> sum(pts.size(), Vec2::Zero());
      std::vector<int> count(pts.size(), 0);
      std::unordered_set<EdgeKey> seen;
      for (const auto &t : tris)
      {
        for (int i = 0; i < 3; ++i)
        {
          const int a = t[i];
          const int b = t[(i + 1) % 3];
          if (!seen.insert(edge_key(a, b)).second)
          {
            continue;
          }
          sum[a] += pts[b];
          sum[b] += pts[a];
          ++count[a];
          ++count[b];
        }
      }
      for (std::size_t i = 0; i < pts.size(); ++i)
      {
        if (pinned[i] || count[i] == 0)
        {
          continue;
        }
        const Vec2 target = sum[i] / count[i];
        if (admissible_interior(target, 0.3 * h))
        {
          pts[i] = target;
        }
      }
      triangulate_conforming();
    }
  }
};

void validate_inputs(double R, const Obstacle &obstacle, double h)
{
  if (!(R > 0.0) || !std::isfinite(R))
  {
    throw InputError("build_mesh: R must be positive");
  }
  if (!(h > 0.0) || h > R / 4.0)
  {
    std::ostringstream msg;
    msg << "build_mesh: element size h = " << h << " must lie in (0, R/4]";
    throw InputError(msg.str());
  }
  if (obstacle.is_none())
  {
    return;
  }
  if (!(obstacle.max_radius() < R / 2.0))
  {
    throw InputError("build_mesh: obstacle must lie strictly inside B_{R/2}");
  }
  const auto &v = obstacle.vertices();
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    const double len = (v[(i + 1) % v.size()] - v[i]).norm();
    if (len < h / 4.0)
    {
      std::ostringstream msg;
      msg << "build_mesh: obstacle edge " << i << " has length " << len
          << " < h/4 = " << h / 4.0 << "; refine h or coarsen the polygon";
      throw InputError(msg.str());
    }
  }
}

}  // namespace

Mesh build_mesh(double R, const Obstacle &obstacle, double h)
{
  validate_inputs(R, obstacle, h);

  Generator gen{R, h, obstacle, {}, {}, 0, {}, {}};
  gen.seed_points();
  gen.triangulate_conforming();
  gen.smooth(6);

  Mesh mesh;
  mesh.R = R;
  mesh.h = h;
  mesh.obstacle = obstacle;

  // Drop points not referenced by any triangle.
  std::vector<int> remap(gen.pts.size(), -1);
  for (const auto &t : gen.tris)
  {
    for (int v : t)
    {
      remap[v] = 0;
    }
  }
  for (std::size_t i = 0; i < gen.pts.size(); ++i)
  {
    if (remap[i] == 0)
    {
      remap[i] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(gen.pts[i]);
    }
  }
  for (const auto &t : gen.tris)
  {
    mesh.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  }
  for (int i = 0; i < gen.num_circle; ++i)
  {
    mesh.boundary_edges.push_back(
        {{remap[i], remap[(i + 1) % gen.num_circle]}, BoundaryTag::Truncation});
  }
  for (const auto &s : gen.obstacle_segments)
  {
    mesh.boundary_edges.push_back({{remap[s[0]], remap[s[1]]}, BoundaryTag::Dirichlet});
  }
  return mesh;
}

void write_mesh(const Mesh &mesh, std::ostream &out)
{
  const auto old_precision = out.precision(17);
  out << "mesh 1\n";
  out << "vertices " << mesh.vertices.size() << "\n";
  for (const auto &v : mesh.vertices)
  {
    out << v.x() << " " << v.y() << "\n";
  }
  out << "triangles " << mesh.triangles.size() << "\n";
  for (const auto &t : mesh.triangles)
  {
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  out << "edges " << mesh.boundary_edges.size() << "\n";
  for (const auto &e : mesh.boundary_edges)
  {
    out << e.v[0] << " " << e.v[1] << " " << (e.tag == BoundaryTag::Dirichlet ? "D" : "R")
        << "\n";
  }
  out.precision(old_precision);
}

void write_solution(const Mesh &mesh, std::span<const std::complex<double>> nodal,
                    std::ostream &out)
{
  if (nodal.size() != mesh.vertices.size())
  {
    throw InputError("write_solution: nodal vector length does not match the mesh");
  }
  write_mesh(mesh, out);
  const auto old_precision = out.precision(17);
  out << "values " << nodal.size() << "\n";
  for (const auto &u : nodal)
  {
    out << u.real() << " " << u.imag() << "\n";
  }
  out.precision(old_precision);
}

}  // namespace stochelm
