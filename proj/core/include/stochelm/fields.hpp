#ifndef STOCHELM_FIELDS_HPP
#define STOCHELM_FIELDS_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stochelm/geometry.hpp"

namespace stochelm
{

//
// Compactly supported C^1 building blocks for coefficient fields. Every shape has peak
// value 1 at its center and vanishes identically for |x - center| >= radius; the
// amplitude scales the shape.
//
enum class PrimitiveKind
{
  QuarticBump,      // (1 - s^2)^2
  GaussianCutoff,   // exp(-2 s^2) (1 - s^2)^2
  PolynomialRadial  // (1 - s)^4 (4 s + 1), Wendland C^2
};

std::string to_string(PrimitiveKind kind);
PrimitiveKind primitive_kind_from_string(const std::string &name);

struct FieldPrimitive
{
  PrimitiveKind kind = PrimitiveKind::QuarticBump;
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
  double amplitude = 1.0;

  double value(const Vec2 &x) const;
  Vec2 gradient(const Vec2 &x) const;

  // sup |value| over the plane.
  double peak() const { return std::abs(amplitude); }

  // Radius of the smallest origin-centred ball containing the support.
  double support_extent() const { return center.norm() + radius; }

  bool operator==(const FieldPrimitive &) const = default;
};

// Rank-structured matrix term: scalar primitive times a constant symmetric matrix.
struct MatrixTerm
{
  FieldPrimitive primitive;
  Mat2 direction = Mat2::Identity();

  Mat2 value(const Vec2 &x) const { return primitive.value(x) * direction; }

  bool operator==(const MatrixTerm &) const = default;
};

// A0 = I + sum_i terms_i.
struct BaseMatrixField
{
  std::vector<MatrixTerm> terms;

  bool operator==(const BaseMatrixField &) const = default;
};

// n0 = 1 + sum_i terms_i.
struct BaseScalarField
{
  std::vector<FieldPrimitive> terms;

  bool operator==(const BaseScalarField &) const = default;
};

//
// Evaluation interface shared by random samples and deterministic media. Gradients are
// analytic; the nontrapping combinations are derived from them.
//
class Medium
{
public:
  virtual ~Medium() = default;

  virtual Mat2 A(const Vec2 &x) const = 0;
  virtual double n(const Vec2 &x) const = 0;

  // Partial derivatives (d/dx, d/dy) of A and of n.
  virtual std::array<Mat2, 2> grad_A(const Vec2 &x) const = 0;
  virtual Vec2 grad_n(const Vec2 &x) const = 0;

  // A - (x . grad) A
  Mat2 nontrap_A(const Vec2 &x) const
  {
    const auto g = grad_A(x);
    return A(x) - (x.x() * g[0] + x.y() * g[1]);
  }

  // n + x . grad n
  double nontrap_n(const Vec2 &x) const { return n(x) + x.dot(grad_n(x)); }
};

class RandomFieldSpec
{
public:
  // Throws InputError when a support leaves the open ball B_R, a direction matrix is not
  // symmetric, or a primitive has nonpositive radius.
  RandomFieldSpec(double R, BaseMatrixField A0, BaseScalarField n0,
                  std::vector<MatrixTerm> matrix_perturbations,
                  std::vector<FieldPrimitive> scalar_perturbations, std::uint64_t seed);

  double R() const { return R_; }
  std::uint64_t seed() const { return seed_; }
  const BaseMatrixField &A0() const { return A0_; }
  const BaseScalarField &n0() const { return n0_; }
  const std::vector<MatrixTerm> &matrix_perturbations() const { return matrix_perturbations_; }
  const std::vector<FieldPrimitive> &scalar_perturbations() const
  {
    return scalar_perturbations_;
  }
  std::size_t J_A() const { return matrix_perturbations_.size(); }
  std::size_t J_n() const { return scalar_perturbations_.size(); }

  // Largest support extent over base terms and perturbations (0 when all are trivial).
  double max_support_extent() const;

  // Same spec with a different seed.
  RandomFieldSpec with_seed(std::uint64_t seed) const;

  bool operator==(const RandomFieldSpec &) const = default;

private:
  double R_;
  BaseMatrixField A0_;
  BaseScalarField n0_;
  std::vector<MatrixTerm> matrix_perturbations_;
  std::vector<FieldPrimitive> scalar_perturbations_;
  std::uint64_t seed_;
};

// One realization omega: A(omega, x) = A0(x) + sum_j y_j Psi_j(x), n(omega, x) = n0(x) + sum_j
// z_j psi_j(x).
class CoefficientSample final : public Medium
{
public:
  CoefficientSample(std::shared_ptr<const RandomFieldSpec> spec, std::vector<double> y,
                    std::vector<double> z, std::int64_t sample_index);

  const RandomFieldSpec &spec() const { return *spec_; }
  const std::shared_ptr<const RandomFieldSpec> &spec_ptr() const { return spec_; }
  const std::vector<double> &y() const { return y_; }
  const std::vector<double> &z() const { return z_; }
  // -1 for injected realizations.
  std::int64_t sample_index() const { return sample_index_; }

  Mat2 A(const Vec2 &x) const override;
  double n(const Vec2 &x) const override;
  std::array<Mat2, 2> grad_A(const Vec2 &x) const override;
  Vec2 grad_n(const Vec2 &x) const override;

private:
  std::shared_ptr<const RandomFieldSpec> spec_;
  std::vector<double> y_;
  std::vector<double> z_;
  std::int64_t sample_index_;
};

// y_j, z_j i.i.d. Unif(-1/2, 1/2) from the stream keyed on (seed, sample_index).
CoefficientSample draw_sample(const std::shared_ptr<const RandomFieldSpec> &spec,
                              std::int64_t sample_index);

// Throws InputError on a length mismatch or an entry outside [-1/2, 1/2].
CoefficientSample realize_with(const std::shared_ptr<const RandomFieldSpec> &spec,
                               std::span<const double> y, std::span<const double> z);

inline Mat2 eval_A(const Medium &s, const Vec2 &x) { return s.A(x); }
inline double eval_n(const Medium &s, const Vec2 &x) { return s.n(x); }
inline Mat2 eval_nontrap_A(const Medium &s, const Vec2 &x) { return s.nontrap_A(x); }
inline double eval_nontrap_n(const Medium &s, const Vec2 &x) { return s.nontrap_n(x); }

struct ConditionReport
{
  int grid_resolution = 0;
  double delta = 0.0;
  double safety_margin = 0.02;

  // Base-field constants: grid minima of lambda_min(A0), n0, and the nontrapping
  // constants mu1, mu2 (supplied or measured).
  double A0_min = 0.0;
  double n0_min = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  bool mu_supplied = false;
  // Grid minima of lambda_min(A0 - (x.grad)A0) and n0 + x.grad n0; a supplied mu larger
  // than these means the base fields are not in the claimed class.
  double base_nontrap_A_min = 0.0;
  double base_nontrap_n_min = 0.0;
  bool base_in_class = false;

  // Computed sums against their thresholds.
  double sum_A_sup = 0.0;        // sum_j sup ||Psi_j||_2        vs 2 A0_min
  double sum_n_sup = 0.0;        // sum_j sup |psi_j|            vs 2 n0_min
  double sum_A_nontrap = 0.0;    // sum_j sup ||Psi_j - (x.grad)Psi_j||_2 vs 2 delta mu1
  double sum_n_nontrap = 0.0;    // sum_j sup |psi_j + x.grad psi_j|      vs 2 delta mu2
  bool A_positive = false;
  bool n_positive = false;
  bool A_nontrap = false;
  bool n_nontrap = false;
  bool pass = false;

  // (1 - delta) mu on pass; mu itself when the corresponding series is empty.
  std::optional<double> certified_mu1;
  std::optional<double> certified_mu2;
};

// Grid-maximization audit of the series conditions. Pass thresholds are reduced by the
// safety margin. Throws InputError for grid_resolution < 16 or delta outside (0, 1).
ConditionReport check_series_conditions(const RandomFieldSpec &spec, double delta,
                                        int grid_resolution,
                                        std::optional<double> mu1 = std::nullopt,
                                        std::optional<double> mu2 = std::nullopt,
                                        double safety_margin = 0.02);

}  // namespace stochelm

#endif  // STOCHELM_FIELDS_HPP
