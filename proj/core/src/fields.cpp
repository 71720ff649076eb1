#include "stochelm/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stochelm/errors.hpp"
#include "stochelm/rng.hpp"

namespace stochelm
{

std::string to_string(PrimitiveKind kind)
{
  switch (kind)
  {
    case PrimitiveKind::QuarticBump:
      return "quartic-bump";
    case PrimitiveKind::GaussianCutoff:
      return "gaussian-cutoff";
    case PrimitiveKind::PolynomialRadial:
      return "polynomial-radial";
  }
  return "unknown";
}

PrimitiveKind primitive_kind_from_string(const std::string &name)
{
  if (name == "quartic-bump")
  {
    return PrimitiveKind::QuarticBump;
  }
  if (name == "gaussian-cutoff")
  {
    return PrimitiveKind::GaussianCutoff;
  }
  if (name == "polynomial-radial")
  {
    return PrimitiveKind::PolynomialRadial;
  }
  throw InputError("unknown primitive kind '" + name + "'");
}

namespace
{

constexpr double kGaussianRate = 2.0;

}  // namespace

double FieldPrimitive::value(const Vec2 &x) const
{
  const Vec2 d = x - center;
  const double s2 = d.squaredNorm() / (radius * radius);
  if (s2 >= 1.0)
  {
    return 0.0;
  }
  const double t = 1.0 - s2;
  switch (kind)
  {
    case PrimitiveKind::QuarticBump:
      return amplitude * t * t;
    case PrimitiveKind::GaussianCutoff:
      return amplitude * std::exp(-kGaussianRate * s2) * t * t;
    case PrimitiveKind::PolynomialRadial:
    {
      const double s = std::sqrt(s2);
      const double u = 1.0 - s;
      return amplitude * u * u * u * u * (4.0 * s + 1.0);
    }
  }
  return 0.0;
}

Vec2 FieldPrimitive::gradient(const Vec2 &x) const
{
  const Vec2 d = x - center;
  const double r2 = radius * radius;
  const double s2 = d.squaredNorm() / r2;
  if (s2 >= 1.0)
  {
    return Vec2::Zero();
  }
  const double t = 1.0 - s2;
  switch (kind)
  {
    case PrimitiveKind::QuarticBump:
      return (-4.0 * amplitude * t / r2) * d;
    case PrimitiveKind::GaussianCutoff:
    {
      const double e = std::exp(-kGaussianRate * s2);
      return (-amplitude * e * (2.0 * kGaussianRate * t * t + 4.0 * t) / r2) * d;
    }
    case PrimitiveKind::PolynomialRadial:
    {
      const double u = 1.0 - std::sqrt(s2);
      return (-20.0 * amplitude * u * u * u / r2) * d;
    }
  }
  return Vec2::Zero();
}

namespace
{

void validate_primitive(const FieldPrimitive &p, double R, const std::string &where)
{
  if (!(p.radius > 0.0) || !std::isfinite(p.radius))
  {
    throw InputError(where + ": primitive radius must be positive");
  }
  if (!std::isfinite(p.amplitude) || !p.center.allFinite())
  {
    throw InputError(where + ": primitive has non-finite data");
  }
  if (!(p.support_extent() < R))
  {
    std::ostringstream msg;
    msg << where << ": support |c| + r = " << p.support_extent()
        << " is not inside the open ball of radius R = " << R;
    throw InputError(msg.str());
  }
}

void validate_direction(const Mat2 &m, const std::string &where)
{
  if (!m.allFinite())
  {
    throw InputError(where + ": direction matrix has non-finite entries");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (std::abs(m(0, 1) - m(1, 0)) > 1e-14 * scale)
  {
    throw InputError(where + ": direction matrix is not symmetric");
  }
}

}  // namespace

RandomFieldSpec::RandomFieldSpec(double R, BaseMatrixField A0, BaseScalarField n0,
                                 std::vector<MatrixTerm> matrix_perturbations,
                                 std::vector<FieldPrimitive> scalar_perturbations,
                                 std::uint64_t seed)
  : R_(R), A0_(std::move(A0)), n0_(std::move(n0)),
    matrix_perturbations_(std::move(matrix_perturbations)),
    scalar_perturbations_(std::move(scalar_perturbations)), seed_(seed)
{
  if (!(R_ > 0.0) || !std::isfinite(R_))
  {
    throw InputError("field spec: R must be positive");
  }
  for (std::size_t i = 0; i < A0_.terms.size(); ++i)
  {
    const auto where = "A0 term " + std::to_string(i);
    validate_primitive(A0_.terms[i].primitive, R_, where);
    validate_direction(A0_.terms[i].direction, where);
  }
  for (std::size_t i = 0; i < n0_.terms.size(); ++i)
  {
    validate_primitive(n0_.terms[i], R_, "n0 term " + std::to_string(i));
  }
  for (std::size_t j = 0; j < matrix_perturbations_.size(); ++j)
  {
    const auto where = "matrix perturbation " + std::to_string(j);
    validate_primitive(matrix_perturbations_[j].primitive, R_, where);
    validate_direction(matrix_perturbations_[j].direction, where);
  }
  for (std::size_t j = 0; j < scalar_perturbations_.size(); ++j)
  {
    validate_primitive(scalar_perturbations_[j], R_, "scalar perturbation " + std::to_string(j));
  }
}

double RandomFieldSpec::max_support_extent() const
{
  double extent = 0.0;
  for (const auto &t : A0_.terms)
  {
    extent = std::max(extent, t.primitive.support_extent());
  }
  for (const auto &t : n0_.terms)
  {
    extent = std::max(extent, t.support_extent());
  }
  for (const auto &t : matrix_perturbations_)
  {
    extent = std::max(extent, t.primitive.support_extent());
  }
  for (const auto &t : scalar_perturbations_)
  {
    extent = std::max(extent, t.support_extent());
  }
  return extent;
}

RandomFieldSpec RandomFieldSpec::with_seed(std::uint64_t seed) const
{
  RandomFieldSpec copy = *this;
  copy.seed_ = seed;
  return copy;
}

CoefficientSample::CoefficientSample(std::shared_ptr<const RandomFieldSpec> spec,
                                     std::vector<double> y, std::vector<double> z,
                                     std::int64_t sample_index)
  : spec_(std::move(spec)), y_(std::move(y)), z_(std::move(z)), sample_index_(sample_index)
{
  if (!spec_)
  {
    throw InputError("coefficient sample: null field spec");
  }
  if (y_.size() != spec_->J_A() || z_.size() != spec_->J_n())
  {
    std::ostringstream msg;
    msg << "coefficient sample: expected " << spec_->J_A() << " matrix and " << spec_->J_n()
        << " scalar coefficients, got " << y_.size() << " and " << z_.size();
    throw InputError(msg.str());
  }
  auto in_range = [](double v) { return v >= -0.5 && v <= 0.5; };
  for (std::size_t j = 0; j < y_.size(); ++j)
  {
    if (!in_range(y_[j]))
    {
      throw InputError("coefficient sample: y[" + std::to_string(j) + "] outside [-1/2, 1/2]");
    }
  }
  for (std::size_t j = 0; j < z_.size(); ++j)
  {
    if (!in_range(z_[j]))
    {
      throw InputError("coefficient sample: z[" + std::to_string(j) + "] outside [-1/2, 1/2]");
    }
  }
}

Mat2 CoefficientSample::A(const Vec2 &x) const
{
  Mat2 a = Mat2::Identity();
  for (const auto &t : spec_->A0().terms)
  {
    const double v = t.primitive.value(x);
    if (v != 0.0)
    {
      a += v * t.direction;
    }
  }
  const auto &terms = spec_->matrix_perturbations();
  for (std::size_t j = 0; j < terms.size(); ++j)
  {
    const double v = terms[j].primitive.value(x);
    if (v != 0.0)
    {
      a += (y_[j] * v) * terms[j].direction;
    }
  }
  return a;
}

double CoefficientSample::n(const Vec2 &x) const
{
  double v = 1.0;
  for (const auto &t : spec_->n0().terms)
  {
    v += t.value(x);
  }
  const auto &terms = spec_->scalar_perturbations();
  for (std::size_t j = 0; j < terms.size(); ++j)
  {
    v += z_[j] * terms[j].value(x);
  }
  return v;
}

std::array<Mat2, 2> CoefficientSample::grad_A(const Vec2 &x) const
{
  std::array<Mat2, 2> g{Mat2::Zero(), Mat2::Zero()};
  auto add = [&](const MatrixTerm &t, double weight)
  {
    const Vec2 d = t.primitive.gradient(x);
    g[0] += (weight * d.x()) * t.direction;
    g[1] += (weight * d.y()) * t.direction;
  };
  for (const auto &t : spec_->A0().terms)
  {
    add(t, 1.0);
  }
  const auto &terms = spec_->matrix_perturbations();
  for (std::size_t j = 0; j < terms.size(); ++j)
  {
    add(terms[j], y_[j]);
  }
  return g;
}

Vec2 CoefficientSample::grad_n(const Vec2 &x) const
{
  Vec2 g = Vec2::Zero();
  for (const auto &t : spec_->n0().terms)
  {
    g += t.gradient(x);
  }
  const auto &terms = spec_->scalar_perturbations();
  for (std::size_t j = 0; j < terms.size(); ++j)
  {
    g += z_[j] * terms[j].gradient(x);
  }
  return g;
}

CoefficientSample draw_sample(const std::shared_ptr<const RandomFieldSpec> &spec,
                              std::int64_t sample_index)
{
  if (!spec)
  {
    throw InputError("draw_sample: null field spec");
  }
  KeyedStream stream(spec->seed(), static_cast<std::uint64_t>(sample_index), kCoefficientStream);
  std::vector<double> y(spec->J_A());
  std::vector<double> z(spec->J_n());
  for (auto &v : y)
  {
    v = stream.next_centered_uniform();
  }
  for (auto &v : z)
  {
    v = stream.next_centered_uniform();
  }
  return CoefficientSample(spec, std::move(y), std::move(z), sample_index);
}

CoefficientSample realize_with(const std::shared_ptr<const RandomFieldSpec> &spec,
                               std::span<const double> y, std::span<const double> z)
{
  return CoefficientSample(spec, std::vector<double>(y.begin(), y.end()),
                           std::vector<double>(z.begin(), z.end()), -1);
}

ConditionReport check_series_conditions(const RandomFieldSpec &spec, double delta,
                                        int grid_resolution, std::optional<double> mu1,
                                        std::optional<double> mu2, double safety_margin)
{
  if (grid_resolution < 16)
  {
    throw InputError("check_series_conditions: grid_resolution " +
                     std::to_string(grid_resolution) + " < 16 is too coarse");
  }
  if (!(delta > 0.0 && delta < 1.0))
  {
    throw InputError("check_series_conditions: delta must lie in (0, 1)");
  }
  if ((mu1 && !(*mu1 > 0.0)) || (mu2 && !(*mu2 > 0.0)))
  {
    throw InputError("check_series_conditions: supplied mu must be positive");
  }

  ConditionReport report;
  report.grid_resolution = grid_resolution;
  report.delta = delta;
  report.safety_margin = safety_margin;

  // Suprema of the primitives are attained at their centres, so those are probed too.
  std::vector<Vec2> probes = disk_grid(spec.R(), grid_resolution);
  for (const auto &t : spec.matrix_perturbations())
  {
    probes.push_back(t.primitive.center);
  }
  for (const auto &t : spec.scalar_perturbations())
  {
    probes.push_back(t.center);
  }

  auto base = std::make_shared<const RandomFieldSpec>(spec);
  const CoefficientSample base_sample(base, std::vector<double>(spec.J_A(), 0.0),
                                      std::vector<double>(spec.J_n(), 0.0), -1);

  double A0_min = std::numeric_limits<double>::infinity();
  double n0_min = A0_min;
  double ntA_min = A0_min;
  double ntn_min = A0_min;
  for (const auto &x : probes)
  {
    A0_min = std::min(A0_min, min_eigenvalue(base_sample.A(x)));
    n0_min = std::min(n0_min, base_sample.n(x));
    ntA_min = std::min(ntA_min, min_eigenvalue(base_sample.nontrap_A(x)));
    ntn_min = std::min(ntn_min, base_sample.nontrap_n(x));
  }
  report.A0_min = A0_min;
  report.n0_min = n0_min;
  report.base_nontrap_A_min = ntA_min;
  report.base_nontrap_n_min = ntn_min;
  report.mu_supplied = mu1.has_value() || mu2.has_value();
  report.mu1 = mu1.value_or(ntA_min);
  report.mu2 = mu2.value_or(ntn_min);
  constexpr double kClassTolerance = 1e-12;
  report.base_in_class = report.mu1 > 0.0 && report.mu2 > 0.0 &&
                         ntA_min >= report.mu1 - kClassTolerance &&
                         ntn_min >= report.mu2 - kClassTolerance;

  for (const auto &t : spec.matrix_perturbations())
  {
    const double dnorm = spectral_norm(t.direction);
    double sup = 0.0;
    double sup_nt = 0.0;
    for (const auto &x : probes)
    {
      const double v = t.primitive.value(x);
      const double radial = x.dot(t.primitive.gradient(x));
      sup = std::max(sup, std::abs(v) * dnorm);
      sup_nt = std::max(sup_nt, std::abs(v - radial) * dnorm);
    }
    report.sum_A_sup += sup;
    report.sum_A_nontrap += sup_nt;
  }
  for (const auto &t : spec.scalar_perturbations())
  {
    double sup = 0.0;
    double sup_nt = 0.0;
    for (const auto &x : probes)
    {
      const double v = t.value(x);
      sup = std::max(sup, std::abs(v));
      sup_nt = std::max(sup_nt, std::abs(v + x.dot(t.gradient(x))));
    }
    report.sum_n_sup += sup;
    report.sum_n_nontrap += sup_nt;
  }

  const double keep = 1.0 - safety_margin;
  report.A_positive = report.sum_A_sup < keep * 2.0 * A0_min;
  report.n_positive = report.sum_n_sup < keep * 2.0 * n0_min;
  report.A_nontrap = report.sum_A_nontrap <= keep * 2.0 * delta * report.mu1;
  report.n_nontrap = report.sum_n_nontrap <= keep * 2.0 * delta * report.mu2;
  report.pass = report.base_in_class && report.A_positive && report.n_positive &&
                report.A_nontrap && report.n_nontrap;
  if (report.pass)
  {
    report.certified_mu1 = spec.J_A() == 0 ? report.mu1 : (1.0 - delta) * report.mu1;
    report.certified_mu2 = spec.J_n() == 0 ? report.mu2 : (1.0 - delta) * report.mu2;
  }
  return report;
}

}  // namespace stochelm
