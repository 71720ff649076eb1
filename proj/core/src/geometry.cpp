#include "stochelm/geometry.hpp"

namespace stochelm
{

std::vector<Vec2> disk_grid(double R, int resolution)
{
  std::vector<Vec2> points;
  points.reserve(static_cast<std::size_t>(resolution + 1) * (resolution + 1));
  const double step = 2.0 * R / resolution;
  for (int j = 0; j <= resolution; ++j)
  {
    for (int i = 0; i <= resolution; ++i)
    {
      const Vec2 x(-R + step * i, -R + step * j);
      if (x.squaredNorm() <= R * R)
      {
        points.push_back(x);
      }
    }
  }
  return points;
}

}  // namespace stochelm
