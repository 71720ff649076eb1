#ifndef STOCHELM_UQDRIVER_HPP
#define STOCHELM_UQDRIVER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stochelm/bounds.hpp"
#include "stochelm/fields.hpp"
#include "stochelm/helmsolve.hpp"
#include "stochelm/ntcheck.hpp"

namespace stochelm
{

enum class SourceMode
{
  Deterministic,   // f as given for every sample
  RandomAmplitude  // f scaled by 1 + U, U ~ Unif(-1/2, 1/2) drawn independently of the medium
};

// Which nontrapping constants enter C1(omega) in the aggregate estimate.
enum class AggregateConstants
{
  SpecCertified,  // (1 - delta) mu from the series conditions, the same for every sample
  PerSample       // the grid constants mu1_hat, mu2_hat of each sample
};

struct MCOptions
{
  double k = 5.0;
  double k0 = 1.0;
  int N = 50;
  double h = 0.05;
  BoundaryClosure closure = BoundaryClosure::impedance();
  SourceMode source_mode = SourceMode::Deterministic;

  // Series-condition audit feeding the aggregate constants.
  double delta = 0.1;
  std::optional<double> mu1;
  std::optional<double> mu2;
  int condition_resolution = 128;

  int certify_resolution = 64;
  C1Formula formula = C1Formula::FourOverMin;
  AggregateConstants aggregate_constants = AggregateConstants::SpecCertified;
  double fem_tolerance = 0.05;
  // 0 selects std::thread::hardware_concurrency().
  int workers = 0;
};

struct SampleRecord
{
  std::int64_t sample_index = 0;
  double source_amplitude = 1.0;
  NontrapCertificate certificate;
  double grad_norm_sq = 0.0;
  double l2_norm_sq = 0.0;
  double weighted_norm_sq = 0.0;
  double f_norm_sq = 0.0;
  double residual = 0.0;
  bool quasi_resonance = false;
  // Per-sample deterministic bound with tau = (mu1_hat, mu2_hat).
  BoundReport bound;
  bool pass = false;
};

struct MCReport
{
  int N = 0;
  double k = 0.0;
  double k0 = 0.0;
  double h = 0.0;
  std::size_t num_vertices = 0;
  C1Formula formula = C1Formula::FourOverMin;
  double fem_tolerance = 0.05;

  double mean_weighted_norm_sq = 0.0;
  double standard_error = 0.0;  // sample stddev / sqrt(N), 0 for N = 1
  double mean_f_norm_sq = 0.0;
  double c1_mean = 0.0;
  double c1_rms = 0.0;
  double bound_rhs_independent = 0.0;
  double bound_rhs_dependent = 0.0;
  // mean_weighted_norm_sq <= rhs + 2 SE + fem_tolerance rhs, rhs the independent estimate.
  bool bound_holds = false;
  double pass_fraction = 0.0;
  // four-over-min / max-inverse at the aggregate constants.
  double c1_formula_ratio = 0.0;

  std::optional<ConditionReport> conditions;
  std::vector<SampleRecord> per_sample;
};

// Aggregate statistics over per-sample records, folded in the order given. c1_samples holds
// C1(omega) for each record.
MCReport aggregate_mc(std::vector<SampleRecord> samples, const std::vector<double> &c1_samples,
                      const MCOptions &options);

// Draw -> certify -> assemble -> solve -> bound per sample on a worker pool; the mesh is
// built once. Throws InputError for k < k0, k h > 0.5, or N < 1; HypothesisViolation when
// the obstacle is not star-shaped, the series conditions fail, or some sample fails
// certification (reported for the lowest failing index, with its witness point).
MCReport run_mc(std::shared_ptr<const RandomFieldSpec> spec, const Obstacle &obstacle,
                const SourceField &f, const MCOptions &options);

struct SweepOptions
{
  double R = 1.0;
  MeshPolicy policy;
  BoundaryClosure::Kind closure = BoundaryClosure::Kind::Impedance;
  std::string medium_label = "nontrapping";
  // Reference line sqrt(C1 ||f||^2) with C1 from the deterministic constant (tau1, tau2); left
  // as NaN when absent.
  std::optional<double> tau1;
  std::optional<double> tau2;
  // Defaults to the first k.
  std::optional<double> k0;
  // Upper bound of n used by the pollution policy.
  double n_max = 1.0;
};

struct SweepPoint
{
  double k = 0.0;
  double h = 0.0;
  std::size_t num_vertices = 0;
  double weighted_norm_sq = 0.0;
  double f_norm_sq = 0.0;
  double residual = 0.0;
  bool quasi_resonance = false;
};

struct SweepReport
{
  std::string medium_label;
  std::vector<double> k_values;
  std::vector<double> norm_curve;   // sqrt(weighted_norm_sq)
  std::vector<double> bound_curve;  // sqrt(C1 ||f||^2)
  std::vector<SweepPoint> points;

  // Index of the largest norm.
  std::size_t peak_index() const;
};

// One solve per k with h from the pollution policy. Throws InputError unless k_list is
// nonempty and strictly increasing.
SweepReport k_sweep(const Medium &medium, const Obstacle &obstacle, const SourceField &f,
                    const std::vector<double> &k_list, const SweepOptions &options);

struct NoncompactnessReport
{
  int M = 0;
  int quadrature_points = 0;
  double domain_measure = 1.0;
  // distance_sq[m][n] = ||u_m - u_n||^2 in L2(Omega; L2(D)), 1-based modes m, n.
  std::vector<std::vector<double>> distance_sq;
  std::vector<double> norm_sq;
  double min_off_diagonal = 0.0;
  double max_off_diagonal = 0.0;
  // The squared-measure convention some statements use: lambda(D)^2 and 2 lambda(D)^2.
  double alternative_norm_sq = 0.0;
  double alternative_distance_sq = 0.0;
  std::string convention_note;
};

// u_m(omega, x) = sqrt(2) sin(m pi omega) on D with Lebesgue measure domain_measure, omega
// uniform on [0, 1]; integrals by Gauss-Legendre. Throws InputError for M < 2 or fewer than
// 8 quadrature points.
NoncompactnessReport noncompactness_demo(int M, int quadrature_points = 64,
                                         double domain_measure = 1.0);

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double> &nodes, std::vector<double> &weights);

}  // namespace stochelm

#endif  // STOCHELM_UQDRIVER_HPP
