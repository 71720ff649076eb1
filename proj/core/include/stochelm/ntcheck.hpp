#ifndef STOCHELM_NTCHECK_HPP
#define STOCHELM_NTCHECK_HPP

#include <functional>
#include <optional>
#include <vector>

#include "stochelm/fields.hpp"

namespace stochelm
{

// Sound-soft obstacle D_- : absent or a simple counter-clockwise polygon around the origin.
class Obstacle
{
public:
  enum class Kind
  {
    None,
    Polygon
  };

  Obstacle() = default;

  static Obstacle none() { return {}; }

  // Throws InputError unless the polygon has >= 3 vertices, is counter-clockwise, simple,
  // and contains the origin strictly inside.
  static Obstacle polygon(std::vector<Vec2> vertices);

  Kind kind() const { return kind_; }
  bool is_none() const { return kind_ == Kind::None; }
  const std::vector<Vec2> &vertices() const { return vertices_; }

  // Strictly interior points; boundary points count as outside.
  bool contains(const Vec2 &x) const;

  // Distance from x to the polygon boundary (infinity when absent).
  double boundary_distance(const Vec2 &x) const;

  double max_radius() const;
  double area() const;
  double perimeter() const;

  // Throws InputError if some vertex is not strictly inside B_R.
  void check_inside_ball(double R) const;

private:
  Kind kind_ = Kind::None;
  std::vector<Vec2> vertices_;
};

enum class NontrapMode
{
  Standard,   // A - (x.grad)A >= mu1,  n + x.grad n >= mu2
  ImprovedA,  // 2A - (x.grad)A >= mu1, valid when n = 1
  ImprovedN   // 2n + x.grad n >= mu2, valid when A = I
};

struct NontrapCertificate
{
  double mu1_hat = 0.0;
  double mu2_hat = 0.0;
  int grid_resolution = 0;
  bool pass = false;
  Vec2 worst_point_A = Vec2::Zero();
  Vec2 worst_point_n = Vec2::Zero();
  NontrapMode mode = NontrapMode::Standard;
};

// Grid minima of lambda_min of the matrix condition and of the scalar condition over the
// nodes of disk_grid(R, resolution) that lie in D_R. Throws InputError for
// resolution < 32, or when an improved mode is requested for a medium that does not meet
// its side condition on the grid.
NontrapCertificate certify_nontrapping(const Medium &medium, double R, int resolution,
                                       const Obstacle &obstacle = Obstacle::none(),
                                       NontrapMode mode = NontrapMode::Standard);

inline NontrapCertificate certify_nontrapping(const CoefficientSample &s, int resolution,
                                              const Obstacle &obstacle = Obstacle::none(),
                                              NontrapMode mode = NontrapMode::Standard)
{
  return certify_nontrapping(s, s.spec().R(), resolution, obstacle, mode);
}

// True iff x . nu >= 0 on every edge (nu the outward unit normal). Absent obstacles are
// star-shaped. Throws InputError on a zero-length edge.
bool check_star_shaped(const Obstacle &obstacle);

struct RadialProfile
{
  std::function<double(double)> n;
  std::function<double(double)> dn;
};

// Restriction of a medium's n to the ray {(r, 0)}.
RadialProfile radial_profile_of(const Medium &medium);

struct RadialTrappingResult
{
  bool is_trapping = false;
  std::optional<double> witness_r;  // first grid radius with 2n + r n' < 0
  double min_value = 0.0;           // min over the scan of 2n + r n'
  double argmin_r = 0.0;
};

// Scans r_i = r_max i / samples, i = 1..samples, for a sign violation of 2n + r n'.
RadialTrappingResult check_radial_trapping(const RadialProfile &profile, double r_max,
                                           int samples = 4096);

}  // namespace stochelm

#endif  // STOCHELM_NTCHECK_HPP
