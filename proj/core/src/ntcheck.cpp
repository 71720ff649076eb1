#include "stochelm/ntcheck.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "stochelm/errors.hpp"

namespace stochelm
{

namespace
{

double cross(const Vec2 &a, const Vec2 &b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Vec2 &p1, const Vec2 &p2, const Vec2 &q1, const Vec2 &q2)
{
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
  {
    return true;
  }
  auto on_segment = [](const Vec2 &a, const Vec2 &b, const Vec2 &p)
  {
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
  };
  return (d1 == 0 && on_segment(p1, p2, q1)) || (d2 == 0 && on_segment(p1, p2, q2)) ||
         (d3 == 0 && on_segment(q1, q2, p1)) || (d4 == 0 && on_segment(q1, q2, p2));
}

double segment_distance(const Vec2 &x, const Vec2 &a, const Vec2 &b)
{
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (x - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

bool point_in_polygon(const std::vector<Vec2> &poly, const Vec2 &x)
{
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
  {
    const Vec2 &a = poly[i];
    const Vec2 &b = poly[j];
    if ((a.y() > x.y()) != (b.y() > x.y()))
    {
      const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc)
      {
        inside = !inside;
      }
    }
  }
  return inside;
}

}  // namespace

Obstacle Obstacle::polygon(std::vector<Vec2> vertices)
{
  const std::size_t n = vertices.size();
  if (n < 3)
  {
    throw InputError("obstacle polygon needs at least 3 vertices");
  }
  for (const auto &v : vertices)
  {
    if (!v.allFinite())
    {
      throw InputError("obstacle polygon has non-finite vertices");
    }
  }
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    twice_area += cross(vertices[i], vertices[(i + 1) % n]);
  }
  if (!(twice_area > 0.0))
  {
    throw InputError("obstacle polygon must be ordered counter-clockwise");
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = i + 1; j < n; ++j)
    {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent)
      {
        continue;
      }
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                             vertices[(j + 1) % n]))
      {
        std::ostringstream msg;
        msg << "obstacle polygon is not simple: edges " << i << " and " << j << " intersect";
        throw InputError(msg.str());
      }
    }
  }
  Obstacle obs;
  obs.kind_ = Kind::Polygon;
  obs.vertices_ = std::move(vertices);
  if (!obs.contains(Vec2::Zero()) || obs.boundary_distance(Vec2::Zero()) == 0.0)
  {
    throw InputError("obstacle polygon must contain the origin strictly inside");
  }
  return obs;
}

bool Obstacle::contains(const Vec2 &x) const
{
  if (kind_ == Kind::None)
  {
    return false;
  }
  return point_in_polygon(vertices_, x) && boundary_distance(x) > 0.0;
}

double Obstacle::boundary_distance(const Vec2 &x) const
{
  if (kind_ == Kind::None)
  {
    return std::numeric_limits<double>::infinity();
  }
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    d = std::min(d, segment_distance(x, vertices_[i], vertices_[(i + 1) % n]));
  }
  return d;
}

double Obstacle::max_radius() const
{
  double r = 0.0;
  for (const auto &v : vertices_)
  {
    r = std::max(r, v.norm());
  }
  return r;
}

double Obstacle::area() const
{
  double twice = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    twice += cross(vertices_[i], vertices_[(i + 1) % n]);
  }
  return 0.5 * twice;
}

double Obstacle::perimeter() const
{
  double p = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    p += (vertices_[(i + 1) % n] - vertices_[i]).norm();
  }
  return p;
}

void Obstacle::check_inside_ball(double R) const
{
  if (kind_ != Kind::None && !(max_radius() < R))
  {
    throw InputError("obstacle vertices must lie strictly inside B_R");
  }
}

NontrapCertificate certify_nontrapping(const Medium &medium, double R, int resolution,
                                       const Obstacle &obstacle, NontrapMode mode)
{
  if (resolution < 32)
  {
    throw InputError("certify_nontrapping: resolution " + std::to_string(resolution) +
                     " < 32");
  }
  NontrapCertificate cert;
  cert.grid_resolution = resolution;
  cert.mode = mode;
  double mu1 = std::numeric_limits<double>::infinity();
  double mu2 = mu1;
  for (const auto &x : disk_grid(R, resolution))
  {
    if (obstacle.contains(x))
    {
      continue;
    }
    const auto g = medium.grad_A(x);
    const Mat2 radial_A = x.x() * g[0] + x.y() * g[1];
    const Mat2 a = medium.A(x);
    const double nv = medium.n(x);
    const double radial_n = x.dot(medium.grad_n(x));

    if (mode == NontrapMode::ImprovedA && nv != 1.0)
    {
      throw InputError("certify_nontrapping: improved matrix condition requires n = 1");
    }
    if (mode == NontrapMode::ImprovedN && a != Mat2::Identity())
    {
      throw InputError("certify_nontrapping: improved scalar condition requires A = I");
    }

    const double lam = min_eigenvalue((mode == NontrapMode::ImprovedA ? 2.0 * a : a) - radial_A);
    const double s = (mode == NontrapMode::ImprovedN ? 2.0 * nv : nv) + radial_n;
    if (lam < mu1)
    {
      mu1 = lam;
      cert.worst_point_A = x;
    }
    if (s < mu2)
    {
      mu2 = s;
      cert.worst_point_n = x;
    }
  }
  cert.mu1_hat = mu1;
  cert.mu2_hat = mu2;
  cert.pass = mu1 > 0.0 && mu2 > 0.0;
  return cert;
}

bool check_star_shaped(const Obstacle &obstacle)
{
  if (obstacle.is_none())
  {
    return true;
  }
  const auto &v = obstacle.vertices();
  const std::size_t n = v.size();
  bool star = true;
  for (std::size_t i = 0; i < n; ++i)
  {
    const Vec2 edge = v[(i + 1) % n] - v[i];
    const double len = edge.norm();
    if (!(len > 0.0))
    {
      throw InputError("check_star_shaped: zero-length edge at vertex " + std::to_string(i));
    }
    // x . nu is constant along a straight edge.
    const Vec2 normal(edge.y() / len, -edge.x() / len);
    if (v[i].dot(normal) < 0.0)
    {
      star = false;
    }
  }
  return star;
}

RadialProfile radial_profile_of(const Medium &medium)
{
  return {[&medium](double r) { return medium.n(Vec2(r, 0.0)); },
          [&medium](double r) { return medium.grad_n(Vec2(r, 0.0)).x(); }};
}

RadialTrappingResult check_radial_trapping(const RadialProfile &profile, double r_max,
                                           int samples)
{
  if (!(r_max > 0.0) || samples < 1)
  {
    throw InputError("check_radial_trapping: r_max must be positive and samples >= 1");
  }
  RadialTrappingResult result;
  result.min_value = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= samples; ++i)
  {
    const double r = r_max * i / samples;
    const double value = 2.0 * profile.n(r) + r * profile.dn(r);
    if (value < result.min_value)
    {
      result.min_value = value;
      result.argmin_r = r;
    }
    if (value < 0.0 && !result.witness_r)
    {
      result.witness_r = r;
    }
  }
  result.is_trapping = result.witness_r.has_value();
  return result;
}

}  // namespace stochelm
