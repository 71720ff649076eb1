#include "stochelm/uqdriver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "stochelm/errors.hpp"
#include "stochelm/mesh.hpp"
#include "stochelm/rng.hpp"

namespace stochelm
{

namespace
{

// Runs task(i) for i in [0, count) on `workers` threads. Every index is attempted; the
// exception of the lowest failing index is rethrown.
template <class Task>
void parallel_for(std::size_t count, int workers, Task task)
{
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto body = [&]
  {
    for (std::size_t i = next++; i < count; i = next++)
    {
      try
      {
        task(i);
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, workers));
  if (n == 1 || count <= 1)
  {
    body();
  }
  else
  {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(n, count); ++w)
    {
      pool.emplace_back(body);
    }
    for (auto &t : pool)
    {
      t.join();
    }
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

int resolve_workers(int requested)
{
  if (requested > 0)
  {
    return requested;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string point_string(const Vec2 &p)
{
  std::ostringstream s;
  s.precision(6);
  s << "(" << p.x() << ", " << p.y() << ")";
  return s.str();
}

}  // namespace

MCReport aggregate_mc(std::vector<SampleRecord> samples, const std::vector<double> &c1_samples,
                      const MCOptions &options)
{
  if (samples.empty())
  {
    throw InputError("aggregate_mc: no samples");
  }
  if (c1_samples.size() != samples.size())
  {
    throw InputError("aggregate_mc: one C1 value per sample required");
  }
  MCReport r;
  r.N = static_cast<int>(samples.size());
  r.k = options.k;
  r.k0 = options.k0;
  r.h = options.h;
  r.formula = options.formula;
  r.fem_tolerance = options.fem_tolerance;

  const double N = static_cast<double>(samples.size());
  std::vector<double> f_values;
  f_values.reserve(samples.size());
  double sum_w = 0.0;
  double sum_f = 0.0;
  int passed = 0;
  for (const auto &s : samples)
  {
    sum_w += s.weighted_norm_sq;
    sum_f += s.f_norm_sq;
    f_values.push_back(s.f_norm_sq);
    passed += s.pass ? 1 : 0;
  }
  r.mean_weighted_norm_sq = sum_w / N;
  r.mean_f_norm_sq = sum_f / N;
  r.pass_fraction = passed / N;

  // Shifted two-pass variance: identical samples give exactly zero.
  if (samples.size() > 1)
  {
    const double shift = samples.front().weighted_norm_sq;
    double sum_d = 0.0;
    for (const auto &s : samples)
    {
      sum_d += s.weighted_norm_sq - shift;
    }
    const double mean_d = sum_d / N;
    double ss = 0.0;
    for (const auto &s : samples)
    {
      const double e = (s.weighted_norm_sq - shift) - mean_d;
      ss += e * e;
    }
    r.standard_error = std::sqrt(ss / (N - 1.0)) / std::sqrt(N);
  }

  double sum_c = 0.0;
  double sum_c2 = 0.0;
  for (double c : c1_samples)
  {
    sum_c += c;
    sum_c2 += c * c;
  }
  r.c1_mean = sum_c / N;
  r.c1_rms = std::sqrt(sum_c2 / N);
  r.bound_rhs_independent = stochastic_rhs_independent(c1_samples, f_values);
  r.bound_rhs_dependent = stochastic_rhs_dependent(c1_samples, f_values);
  r.bound_holds = r.mean_weighted_norm_sq <= r.bound_rhs_independent + 2.0 * r.standard_error +
                                                 options.fem_tolerance * r.bound_rhs_independent;
  r.per_sample = std::move(samples);
  return r;
}

MCReport run_mc(std::shared_ptr<const RandomFieldSpec> spec, const Obstacle &obstacle,
                const SourceField &f, const MCOptions &options)
{
  if (!spec)
  {
    throw InputError("run_mc: null field spec");
  }
  if (options.N < 1)
  {
    throw InputError("run_mc: N must be at least 1");
  }
  if (!(options.k >= options.k0))
  {
    std::ostringstream msg;
    msg << "bound hypothesis k >= k0 violated (k = " << options.k << ", k0 = " << options.k0
        << ")";
    throw InputError(msg.str());
  }
  if (!(options.k0 > 0.0))
  {
    throw InputError("run_mc: k0 must be positive");
  }
  if (options.k * options.h > 0.5 + 1e-12)
  {
    std::ostringstream msg;
    msg << "mesh too coarse for the wavenumber: k h = " << options.k * options.h
        << " exceeds 0.5";
    throw InputError(msg.str());
  }
  if (!check_star_shaped(obstacle))
  {
    throw HypothesisViolation("obstacle is not star-shaped with respect to the origin");
  }

  ConditionReport conditions = check_series_conditions(
      *spec, options.delta, options.condition_resolution, options.mu1, options.mu2);
  if (!conditions.pass)
  {
    std::ostringstream msg;
    msg << "series conditions fail: sum sup|Psi| = " << conditions.sum_A_sup
        << ", sum sup|psi| = " << conditions.sum_n_sup
        << ", sum sup|Psi - x.grad Psi| = " << conditions.sum_A_nontrap
        << ", sum sup|psi + x.grad psi| = " << conditions.sum_n_nontrap
        << (conditions.base_in_class ? "" : "; base fields outside the claimed class");
    throw HypothesisViolation(msg.str());
  }

  const double R = spec->R();
  auto mesh = std::make_shared<const Mesh>(build_mesh(R, obstacle, options.h));
  const auto count = static_cast<std::size_t>(options.N);
  std::vector<SampleRecord> records(count);

  parallel_for(count, resolve_workers(options.workers),
               [&](std::size_t i)
               {
                 const auto index = static_cast<std::int64_t>(i);
                 const CoefficientSample sample = draw_sample(spec, index);
                 SampleRecord rec;
                 rec.sample_index = index;
                 rec.certificate = certify_nontrapping(sample, options.certify_resolution,
                                                       obstacle);
                 if (!rec.certificate.pass)
                 {
                   std::ostringstream msg;
                   msg << "sample " << index << " fails nontrapping certification: mu1_hat = "
                       << rec.certificate.mu1_hat << " at "
                       << point_string(rec.certificate.worst_point_A)
                       << ", mu2_hat = " << rec.certificate.mu2_hat << " at "
                       << point_string(rec.certificate.worst_point_n);
                   throw HypothesisViolation(msg.str());
                 }
                 if (options.source_mode == SourceMode::RandomAmplitude)
                 {
                   const KeyedStream amp(spec->seed(), static_cast<std::uint64_t>(index),
                                         kSourceAmplitudeStream);
                   rec.source_amplitude = 1.0 + amp.centered_uniform(0);
                 }
                 const SourceField fs = rec.source_amplitude == 1.0
                                            ? f
                                            : f.scaled(rec.source_amplitude);
                 const auto system = assemble(mesh, sample, options.k, fs, options.closure);
                 const SolveReport solved = solve(system);
                 rec.grad_norm_sq = solved.grad_norm_sq;
                 rec.l2_norm_sq = solved.l2_norm_sq;
                 rec.weighted_norm_sq = solved.weighted_norm_sq;
                 rec.f_norm_sq = solved.f_norm_sq;
                 rec.residual = solved.residual;
                 rec.quasi_resonance = solved.quasi_resonance;
                 rec.bound = check_bound_deterministic(solved, rec.certificate.mu1_hat,
                                                       rec.certificate.mu2_hat, R, 2,
                                                       options.k0);
                 rec.pass = !rec.quasi_resonance && rec.bound.holds(options.fem_tolerance);
                 records[i] = std::move(rec);
               });

  std::vector<double> c1(count);
  for (std::size_t i = 0; i < count; ++i)
  {
    if (options.aggregate_constants == AggregateConstants::PerSample)
    {
      c1[i] = c1_stochastic(records[i].certificate.mu1_hat, records[i].certificate.mu2_hat, R,
                            2, options.k0, options.formula);
    }
    else
    {
      c1[i] = c1_stochastic(*conditions.certified_mu1, *conditions.certified_mu2, R, 2,
                            options.k0, options.formula);
    }
  }
  MCReport report = aggregate_mc(std::move(records), c1, options);
  report.num_vertices = mesh->num_vertices();
  const double m1 = *conditions.certified_mu1;
  const double m2 = *conditions.certified_mu2;
  report.c1_formula_ratio = c1_stochastic(m1, m2, R, 2, options.k0, C1Formula::FourOverMin) /
                            c1_stochastic(m1, m2, R, 2, options.k0, C1Formula::MaxInverse);
  report.conditions = std::move(conditions);
  return report;
}

std::size_t SweepReport::peak_index() const
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < norm_curve.size(); ++i)
  {
    if (norm_curve[i] > norm_curve[best])
    {
      best = i;
    }
  }
  return best;
}

SweepReport k_sweep(const Medium &medium, const Obstacle &obstacle, const SourceField &f,
                    const std::vector<double> &k_list, const SweepOptions &options)
{
  if (k_list.empty())
  {
    throw InputError("k_sweep: empty wavenumber list");
  }
  for (std::size_t i = 1; i < k_list.size(); ++i)
  {
    if (!(k_list[i] > k_list[i - 1]))
    {
      throw InputError("k_sweep: wavenumbers must be strictly increasing");
    }
  }
  const double k0 = options.k0.value_or(k_list.front());
  const bool with_bound = options.tau1.has_value() && options.tau2.has_value();
  const double c1 =
      with_bound ? c1_deterministic(*options.tau1, *options.tau2, options.R, 2, k0) : 0.0;

  SweepReport report;
  report.medium_label = options.medium_label;
  for (double k : k_list)
  {
    SweepPoint p;
    p.k = k;
    p.h = options.policy.size_for(k, options.n_max);
    auto mesh = std::make_shared<const Mesh>(build_mesh(options.R, obstacle, p.h));
    p.num_vertices = mesh->num_vertices();
    const BoundaryClosure closure = options.closure == BoundaryClosure::Kind::DtN
                                        ? BoundaryClosure::dtn_default(k, options.R)
                                        : BoundaryClosure::impedance();
    const SolveReport s = solve(assemble(mesh, medium, k, f, closure));
    p.weighted_norm_sq = s.weighted_norm_sq;
    p.f_norm_sq = s.f_norm_sq;
    p.residual = s.residual;
    p.quasi_resonance = s.quasi_resonance;
    report.k_values.push_back(k);
    report.norm_curve.push_back(std::sqrt(s.weighted_norm_sq));
    report.bound_curve.push_back(with_bound ? std::sqrt(c1 * s.f_norm_sq)
                                            : std::numeric_limits<double>::quiet_NaN());
    report.points.push_back(p);
  }
  return report;
}

void gauss_legendre_unit(int n, std::vector<double> &nodes, std::vector<double> &weights)
{
  if (n < 1)
  {
    throw InputError("Gauss-Legendre rule needs at least one node");
  }
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
  {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j)
      {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    nodes[n - 1 - i] = 0.5 * (x + 1.0);
    weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2 / ((1 - x^2) P'^2), halved
  }
}

NoncompactnessReport noncompactness_demo(int M, int quadrature_points, double domain_measure)
{
  if (M < 2)
  {
    throw InputError("noncompactness demo needs M >= 2");
  }
  if (quadrature_points < 8)
  {
    throw InputError("noncompactness demo needs at least 8 quadrature points");
  }
  if (!(domain_measure > 0.0))
  {
    throw InputError("domain measure must be positive");
  }
  std::vector<double> x, w;
  gauss_legendre_unit(quadrature_points, x, w);

  NoncompactnessReport r;
  r.M = M;
  r.quadrature_points = quadrature_points;
  r.domain_measure = domain_measure;
  auto f = [](int m, double omega) { return std::sqrt(2.0) * std::sin(m * std::numbers::pi * omega); };

  r.norm_sq.resize(M);
  for (int m = 1; m <= M; ++m)
  {
    double s = 0.0;
    for (int q = 0; q < quadrature_points; ++q)
    {
      const double v = f(m, x[q]);
      s += w[q] * v * v;
    }
    // The integrand is constant in x over D.
    r.norm_sq[m - 1] = domain_measure * s;
  }
  r.distance_sq.assign(M, std::vector<double>(M, 0.0));
  r.min_off_diagonal = std::numeric_limits<double>::infinity();
  r.max_off_diagonal = -std::numeric_limits<double>::infinity();
  for (int m = 1; m <= M; ++m)
  {
    for (int n = 1; n <= M; ++n)
    {
      if (m == n)
      {
        continue;
      }
      double s = 0.0;
      for (int q = 0; q < quadrature_points; ++q)
      {
        const double d = f(m, x[q]) - f(n, x[q]);
        s += w[q] * d * d;
      }
      const double value = domain_measure * s;
      r.distance_sq[m - 1][n - 1] = value;
      r.min_off_diagonal = std::min(r.min_off_diagonal, value);
      r.max_off_diagonal = std::max(r.max_off_diagonal, value);
    }
  }
  r.alternative_norm_sq = domain_measure * domain_measure;
  r.alternative_distance_sq = 2.0 * domain_measure * domain_measure;
  r.convention_note =
      "direct integration gives ||u_m||^2 = lambda(D) and ||u_m - u_n||^2 = 2 lambda(D); the "
      "values lambda(D)^2 and 2 lambda(D)^2 carry an extra factor lambda(D). They agree when "
      "lambda(D) = 1, and the sequence has no convergent subsequence under either convention";
  return r;
}

}  // namespace stochelm
