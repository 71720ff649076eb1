#include "delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace stochelm::detail
{

namespace
{

struct Tri
{
  std::array<int, 3> v;
  std::array<int, 3> nbr;  // nbr[i] lies across the edge opposite v[i]
  bool alive = true;
};

long double orient(const Vec2 &a, const Vec2 &b, const Vec2 &c)
{
  const long double abx = static_cast<long double>(b.x()) - a.x();
  const long double aby = static_cast<long double>(b.y()) - a.y();
  const long double acx = static_cast<long double>(c.x()) - a.x();
  const long double acy = static_cast<long double>(c.y()) - a.y();
  return abx * acy - aby * acx;
}

// > 0 when d lies strictly inside the circumcircle of the counter-clockwise triangle abc.
long double incircle(const Vec2 &a, const Vec2 &b, const Vec2 &c, const Vec2 &d)
{
  const long double adx = static_cast<long double>(a.x()) - d.x();
  const long double ady = static_cast<long double>(a.y()) - d.y();
  const long double bdx = static_cast<long double>(b.x()) - d.x();
  const long double bdy = static_cast<long double>(b.y()) - d.y();
  const long double cdx = static_cast<long double>(c.x()) - d.x();
  const long double cdy = static_cast<long double>(c.y()) - d.y();
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

// Spatially coherent insertion order: rows of cells, alternating direction.
std::vector<int> insertion_order(const std::vector<Vec2> &pts, const Vec2 &lo, double extent)
{
  const int n = static_cast<int>(pts.size());
  const int cells = std::max(1, static_cast<int>(std::sqrt(n / 4.0)));
  std::vector<std::int64_t> keys(n);
  for (int i = 0; i < n; ++i)
  {
    int cx = static_cast<int>((pts[i].x() - lo.x()) / extent * cells);
    int cy = static_cast<int>((pts[i].y() - lo.y()) / extent * cells);
    cx = std::clamp(cx, 0, cells - 1);
    cy = std::clamp(cy, 0, cells - 1);
    if (cy % 2 == 1)
    {
      cx = cells - 1 - cx;
    }
    keys[i] = static_cast<std::int64_t>(cy) * cells + cx;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  return order;
}

class Triangulator
{
public:
  explicit Triangulator(const std::vector<Vec2> &points) : pts_(points)
  {
    Vec2 lo = points.front();
    Vec2 hi = points.front();
    for (const auto &p : points)
    {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Vec2 mid = 0.5 * (lo + hi);
    extent_ = std::max((hi - lo).maxCoeff(), 1e-300);
    lo_ = lo;
    const double big = 1e4 * extent_;
    const int n = static_cast<int>(points.size());
    pts_.push_back(mid + Vec2(-big, -big));
    pts_.push_back(mid + Vec2(big, -big));
    pts_.push_back(mid + Vec2(0.0, big));
    tris_.push_back({{n, n + 1, n + 2}, {-1, -1, -1}});
    num_real_ = n;
  }

  void run()
  {
    last_ = 0;
    for (int p : insertion_order(std::vector<Vec2>(pts_.begin(), pts_.begin() + num_real_), lo_,
                                 extent_))
    {
      insert(p);
    }
  }

  std::vector<std::array<int, 3>> result() const
  {
    std::vector<std::array<int, 3>> out;
    for (const auto &t : tris_)
    {
      if (!t.alive || t.v[0] >= num_real_ || t.v[1] >= num_real_ || t.v[2] >= num_real_)
      {
        continue;
      }
      out.push_back(t.v);
    }
    return out;
  }

private:
  int locate(const Vec2 &p)
  {
    int t = last_;
    if (!tris_[t].alive)
    {
      t = static_cast<int>(tris_.size()) - 1;
      while (!tris_[t].alive)
      {
        --t;
      }
    }
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step)
    {
      const Tri &tri = tris_[t];
      int next = -1;
      const int start = static_cast<int>(step % 3);
      for (int k = 0; k < 3; ++k)
      {
        const int i = (start + k) % 3;
        if (orient(pts_[tri.v[(i + 1) % 3]], pts_[tri.v[(i + 2) % 3]], p) < 0)
        {
          next = tri.nbr[i];
          break;
        }
      }
      if (next < 0)
      {
        return t;
      }
      t = next;
    }
    // Walk cycled (p on an edge, both sides negative after rounding): take the triangle
    // p violates least.
    int best = -1;
    long double best_score = -std::numeric_limits<long double>::infinity();
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i)
    {
      if (!tris_[i].alive)
      {
        continue;
      }
      const Tri &tri = tris_[i];
      long double score = std::numeric_limits<long double>::infinity();
      for (int k = 0; k < 3; ++k)
      {
        score = std::min(score, orient(pts_[tri.v[(k + 1) % 3]], pts_[tri.v[(k + 2) % 3]], p));
      }
      if (score > best_score)
      {
        best_score = score;
        best = i;
      }
    }
    if (best < 0)
    {
      throw std::logic_error("delaunay: point location failed");
    }
    return best;
  }

  bool in_circle(int t, const Vec2 &p) const
  {
    const Tri &tri = tris_[t];
    return incircle(pts_[tri.v[0]], pts_[tri.v[1]], pts_[tri.v[2]], p) > 0;
  }

  void insert(int p)
  {
    const Vec2 &x = pts_[p];
    const int start = locate(x);

    std::vector<int> cavity{start};
    // Cavity membership, cleared again for the touched triangles before returning.
    mark_.resize(tris_.size(), 0);
    auto &mark = mark_;
    mark[start] = 1;
    for (std::size_t q = 0; q < cavity.size(); ++q)
    {
      const Tri &tri = tris_[cavity[q]];
      for (int i = 0; i < 3; ++i)
      {
        const int nb = tri.nbr[i];
        if (nb >= 0 && !mark[nb] && in_circle(nb, x))
        {
          mark[nb] = 1;
          cavity.push_back(nb);
        }
      }
    }

    // The cavity must be star-shaped from x; drop triangles whose outer edge is not visible.
    struct Boundary
    {
      int a, b, outside;
    };
    std::vector<Boundary> boundary;
    for (bool changed = true; changed;)
    {
      changed = false;
      boundary.clear();
      for (int t : cavity)
      {
        if (!mark[t])
        {
          continue;
        }
        const Tri &tri = tris_[t];
        for (int i = 0; i < 3; ++i)
        {
          const int nb = tri.nbr[i];
          if (nb >= 0 && mark[nb])
          {
            continue;
          }
          const int a = tri.v[(i + 1) % 3];
          const int b = tri.v[(i + 2) % 3];
          if (orient(pts_[a], pts_[b], x) <= 0 && t != start)
          {
            mark[t] = 0;
            changed = true;
            break;
          }
          boundary.push_back({a, b, nb});
        }
        if (changed)
        {
          break;
        }
      }
    }

    std::vector<int> new_ids;
    new_ids.reserve(boundary.size());
    std::unordered_map<int, int> starts_at;  // vertex a -> new triangle (a, b, p)
    for (const auto &e : boundary)
    {
      const int id = static_cast<int>(tris_.size());
      tris_.push_back({{e.a, e.b, p}, {-1, -1, e.outside}});
      new_ids.push_back(id);
      starts_at[e.a] = id;
      if (e.outside >= 0)
      {
        Tri &out = tris_[e.outside];
        for (int i = 0; i < 3; ++i)
        {
          if (out.v[(i + 1) % 3] == e.b && out.v[(i + 2) % 3] == e.a)
          {
            out.nbr[i] = id;
          }
        }
      }
    }
    for (int id : new_ids)
    {
      Tri &tri = tris_[id];
      // Edge (b, p) is opposite a: neighbour starts at b.  Edge (p, a) is opposite b:
      // neighbour is the triangle (c, a, p), which has a as its second vertex.
      tri.nbr[0] = starts_at.at(tri.v[1]);
    }
    for (int id : new_ids)
    {
      const int across = tris_[id].nbr[0];
      tris_[across].nbr[1] = id;
    }
    for (int t : cavity)
    {
      if (mark[t])
      {
        tris_[t].alive = false;
      }
      mark[t] = 0;
    }
    last_ = new_ids.empty() ? last_ : new_ids.back();
  }

  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::vector<char> mark_;
  int num_real_ = 0;
  int last_ = 0;
  Vec2 lo_;
  double extent_ = 1.0;
};

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Vec2> &points)
{
  if (points.size() < 3)
  {
    return {};
  }
  Triangulator tri(points);
  tri.run();
  return tri.result();
}

}  // namespace stochelm::detail
