#ifndef STOCHELM_GEOMETRY_HPP
#define STOCHELM_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace stochelm
{

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Eigenvalues of a symmetric 2x2 matrix, closed form. Only the lower triangle is read.
inline double min_eigenvalue(const Mat2 &m)
{
  const double mean = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  return mean - std::hypot(half_diff, m(1, 0));
}

inline double max_eigenvalue(const Mat2 &m)
{
  const double mean = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  return mean + std::hypot(half_diff, m(1, 0));
}

// Spectral norm of a symmetric 2x2 matrix.
inline double spectral_norm(const Mat2 &m)
{
  return std::max(std::abs(min_eigenvalue(m)), std::abs(max_eigenvalue(m)));
}

// Signed area of the triangle (a, b, c); positive for counter-clockwise order.
inline double signed_area(const Vec2 &a, const Vec2 &b, const Vec2 &c)
{
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

// Nodes of the (resolution+1)^2 tensor grid on [-R, R]^2 that fall in the closed disk of
// radius R. Spacing is 2R/resolution, so grids with resolution 2^p are nested.
std::vector<Vec2> disk_grid(double R, int resolution);

}  // namespace stochelm

#endif  // STOCHELM_GEOMETRY_HPP
