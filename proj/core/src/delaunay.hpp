#ifndef STOCHELM_DELAUNAY_HPP
#define STOCHELM_DELAUNAY_HPP

#include <array>
#include <vector>

#include "stochelm/geometry.hpp"

namespace stochelm::detail
{

// Bowyer-Watson Delaunay triangulation of distinct points. Triangles are returned
// counter-clockwise, indexing into `points`.
std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Vec2> &points);

}  // namespace stochelm::detail

#endif  // STOCHELM_DELAUNAY_HPP
