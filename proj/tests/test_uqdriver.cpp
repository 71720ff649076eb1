#include <doctest.h>

#include <cmath>
#include <memory>

#include "stochelm/errors.hpp"
#include "stochelm/field_io.hpp"
#include "stochelm/uqdriver.hpp"

using namespace stochelm;

namespace
{

std::shared_ptr<const RandomFieldSpec> nontrapping()
{
  return std::make_shared<const RandomFieldSpec>(
      load_field_spec(std::string(STOCHELM_TEST_CONFIG_DIR) + "/nontrapping_spec.json"));
}

std::shared_ptr<const RandomFieldSpec> deterministic()
{
  BaseScalarField n0{{FieldPrimitive{PrimitiveKind::QuarticBump, Vec2(0.1, 0.0), 0.4, 0.05}}};
  return std::make_shared<const RandomFieldSpec>(1.0, BaseMatrixField{}, n0,
                                                 std::vector<MatrixTerm>{},
                                                 std::vector<FieldPrimitive>{}, 5);
}

SourceField source()
{
  return SourceField::from_primitive(FieldPrimitive{PrimitiveKind::QuarticBump, Vec2(0.2, 0.1), 0.3, 1.0});
}

MCOptions quick(int N, bool supply_mu = true)
{
  MCOptions o;
  o.k = 3.0;
  o.N = N;
  o.h = 0.1;
  if (supply_mu)
  {
    o.mu1 = 1.0;
    o.mu2 = 1.0;
  }
  o.condition_resolution = 64;
  o.certify_resolution = 32;
  o.workers = 2;
  return o;
}

void same_records(const SampleRecord &a, const SampleRecord &b)
{
  CHECK(a.sample_index == b.sample_index);
  CHECK(a.source_amplitude == b.source_amplitude);
  CHECK(a.certificate.mu1_hat == b.certificate.mu1_hat);
  CHECK(a.certificate.mu2_hat == b.certificate.mu2_hat);
  CHECK(a.weighted_norm_sq == b.weighted_norm_sq);
  CHECK(a.f_norm_sq == b.f_norm_sq);
  CHECK(a.bound.slack == b.bound.slack);
}

}  // namespace

TEST_CASE("zero source: all norms vanish and the bound holds")
{
  const auto r = run_mc(nontrapping(), Obstacle::none(), SourceField::zero(), quick(4));
  CHECK(r.mean_weighted_norm_sq == 0.0);
  CHECK(r.standard_error == 0.0);
  CHECK(r.bound_rhs_independent == 0.0);
  CHECK(r.bound_holds);
  CHECK(r.pass_fraction == 1.0);
}

TEST_CASE("deterministic medium: every sample equals the single solve")
{
  auto spec = deterministic();
  const auto mesh = std::make_shared<const Mesh>(build_mesh(1.0, Obstacle::none(), 0.1));
  const auto single = solve(assemble(mesh, draw_sample(spec, 0), 3.0, source()));
  for (int N : {1, 3, 8})
  {
    const auto r = run_mc(spec, Obstacle::none(), source(), quick(N, false));
    CHECK(r.N == N);
    CHECK(r.mean_weighted_norm_sq == doctest::Approx(single.weighted_norm_sq).epsilon(1e-13));
    CHECK(r.standard_error == 0.0);
    for (const auto &s : r.per_sample)
    {
      CHECK(s.weighted_norm_sq == r.per_sample[0].weighted_norm_sq);
    }
    // constant C1: aggregate equals C1 times the mean source norm
    CHECK(r.c1_mean == doctest::Approx(r.c1_rms).epsilon(1e-15));
    CHECK(r.bound_rhs_independent == doctest::Approx(r.c1_mean * r.mean_f_norm_sq).epsilon(1e-15));
    CHECK(r.bound_rhs_dependent == doctest::Approx(r.bound_rhs_independent).epsilon(1e-14));
  }
}

TEST_CASE("mean and standard error are the plain sample statistics")
{
  const auto r = run_mc(nontrapping(), Obstacle::none(), source(), quick(12));
  double sum = 0.0;
  for (const auto &s : r.per_sample)
  {
    sum += s.weighted_norm_sq;
  }
  const double mean = sum / 12;
  double ss = 0.0;
  for (const auto &s : r.per_sample)
  {
    ss += (s.weighted_norm_sq - mean) * (s.weighted_norm_sq - mean);
  }
  CHECK(r.mean_weighted_norm_sq == doctest::Approx(mean).epsilon(1e-15));
  CHECK(r.standard_error == doctest::Approx(std::sqrt(ss / 11) / std::sqrt(12.0)).epsilon(1e-12));
  CHECK(r.standard_error > 0.0);
  CHECK(r.pass_fraction == 1.0);
  CHECK(r.bound_holds);
  REQUIRE(r.conditions);
  CHECK(r.conditions->pass);
  CHECK(r.c1_formula_ratio > 2.0);

  // spec-certified constants: C1 = four-over-min at 0.9
  CHECK(r.c1_mean == doctest::Approx(c1_stochastic(0.9, 0.9, 1.0, 2, 1.0, C1Formula::FourOverMin)));
}

TEST_CASE("aggregate_mc statistics")
{
  std::vector<SampleRecord> recs(3);
  recs[0].weighted_norm_sq = 1.0;
  recs[1].weighted_norm_sq = 2.0;
  recs[2].weighted_norm_sq = 6.0;
  for (auto &s : recs)
  {
    s.f_norm_sq = 0.5;
    s.pass = true;
  }
  recs[2].pass = false;
  MCOptions o;
  const auto r = aggregate_mc(recs, {4.0, 4.0, 4.0}, o);
  CHECK(r.mean_weighted_norm_sq == 3.0);
  CHECK(r.standard_error == doctest::Approx(std::sqrt(7.0 / 3.0)));
  CHECK(r.bound_rhs_independent == 2.0);
  CHECK(r.pass_fraction == doctest::Approx(2.0 / 3.0));
  // 3 <= 2 + 2 sqrt(7/3) + 0.05 * 2
  CHECK(r.bound_holds);

  const auto one = aggregate_mc({recs[0]}, {4.0}, o);
  CHECK(one.standard_error == 0.0);
  CHECK_THROWS_AS(aggregate_mc({}, {}, o), InputError);
  CHECK_THROWS_AS(aggregate_mc(recs, {1.0}, o), InputError);
}

TEST_CASE("prefix consistency and scheduling independence")
{
  auto spec = nontrapping();
  auto o = quick(10);
  o.workers = 1;
  const auto a = run_mc(spec, Obstacle::none(), source(), o);
  o.N = 16;
  o.workers = 3;
  const auto b = run_mc(spec, Obstacle::none(), source(), o);
  for (int i = 0; i < 10; ++i)
  {
    same_records(a.per_sample[i], b.per_sample[i]);
  }
  o.N = 10;
  const auto c = run_mc(spec, Obstacle::none(), source(), o);
  CHECK(c.mean_weighted_norm_sq == a.mean_weighted_norm_sq);
  CHECK(c.standard_error == a.standard_error);
}

TEST_CASE("random source amplitudes")
{
  auto o = quick(20, false);
  o.source_mode = SourceMode::RandomAmplitude;
  const auto r = run_mc(deterministic(), Obstacle::none(), source(), o);
  const double f0 = r.per_sample[0].f_norm_sq / std::pow(r.per_sample[0].source_amplitude, 2);
  double lo = 2.0;
  double hi = 0.0;
  for (const auto &s : r.per_sample)
  {
    REQUIRE(s.source_amplitude >= 0.5);
    REQUIRE(s.source_amplitude <= 1.5);
    lo = std::min(lo, s.source_amplitude);
    hi = std::max(hi, s.source_amplitude);
    CHECK(s.f_norm_sq == doctest::Approx(f0 * s.source_amplitude * s.source_amplitude).epsilon(1e-12));
  }
  CHECK(hi - lo > 0.3);
  CHECK(r.standard_error > 0.0);
  const auto again = run_mc(deterministic(), Obstacle::none(), source(), o);
  CHECK(again.per_sample[7].source_amplitude == r.per_sample[7].source_amplitude);
}

TEST_CASE("run_mc with a star-shaped obstacle")
{
  const auto sq = Obstacle::polygon({Vec2(-0.15, -0.15), Vec2(0.15, -0.15), Vec2(0.15, 0.15), Vec2(-0.15, 0.15)});
  const auto src = SourceField::from_primitive(FieldPrimitive{PrimitiveKind::QuarticBump, Vec2(0.5, 0.2), 0.2, 1.0});
  const auto r = run_mc(nontrapping(), sq, src, quick(3));
  CHECK(r.pass_fraction == 1.0);
}

TEST_CASE("run_mc hypotheses and contracts")
{
  auto spec = nontrapping();
  auto o = quick(2);
  SUBCASE("k below k0")
  {
    o.k0 = 4.0;
    CHECK_THROWS_WITH_AS(run_mc(spec, Obstacle::none(), source(), o), doctest::Contains("k >= k0"),
                         InputError);
  }
  SUBCASE("under-resolved mesh")
  {
    o.h = 0.2;
    CHECK_THROWS_AS(run_mc(spec, Obstacle::none(), source(), o), InputError);
  }
  SUBCASE("no samples")
  {
    o.N = 0;
    CHECK_THROWS_AS(run_mc(spec, Obstacle::none(), source(), o), InputError);
  }
  SUBCASE("obstacle not star-shaped")
  {
    const auto L = Obstacle::polygon({Vec2(-0.3, -0.3), Vec2(0.3, -0.3), Vec2(0.3, -0.1),
                                      Vec2(0.1, -0.1), Vec2(0.1, 0.3), Vec2(-0.3, 0.3)});
    CHECK_THROWS_AS(run_mc(spec, L, source(), o), HypothesisViolation);
  }
  SUBCASE("series conditions fail")
  {
    auto big = std::make_shared<const RandomFieldSpec>(
        1.0, BaseMatrixField{}, BaseScalarField{}, std::vector<MatrixTerm>{},
        std::vector<FieldPrimitive>{FieldPrimitive{PrimitiveKind::QuarticBump, Vec2(0.0, 0.0), 0.4, 0.8}}, 1);
    CHECK_THROWS_AS(run_mc(big, Obstacle::none(), source(), o), HypothesisViolation);
  }
}

TEST_CASE("k sweeps")
{
  auto med = draw_sample(deterministic(), 0);
  SweepOptions o;
  o.tau1 = 1.0;
  o.tau2 = 1.0;
  const auto one = k_sweep(med, Obstacle::none(), source(), {3.0}, o);
  CHECK(one.k_values.size() == 1);
  CHECK(one.norm_curve.size() == 1);
  CHECK(one.bound_curve.size() == 1);
  CHECK(one.peak_index() == 0);
  CHECK(one.norm_curve[0] == doctest::Approx(std::sqrt(one.points[0].weighted_norm_sq)));
  CHECK(one.bound_curve[0] ==
        doctest::Approx(std::sqrt(c1_deterministic(1, 1, 1, 2, 3.0) * one.points[0].f_norm_sq)));

  const auto three = k_sweep(med, Obstacle::none(), source(), {2.0, 4.0, 6.0}, o);
  CHECK(three.points.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
  {
    CHECK(three.points[i].h == doctest::Approx(o.policy.size_for(three.k_values[i])));
    CHECK(three.norm_curve[i] <= three.bound_curve[i]);
  }

  SweepOptions bare;
  const auto nb = k_sweep(med, Obstacle::none(), source(), {2.0}, bare);
  CHECK(std::isnan(nb.bound_curve[0]));

  CHECK_THROWS_AS(k_sweep(med, Obstacle::none(), source(), {}, o), InputError);
  CHECK_THROWS_AS(k_sweep(med, Obstacle::none(), source(), {3.0, 2.0}, o), InputError);
  CHECK_THROWS_AS(k_sweep(med, Obstacle::none(), source(), {3.0, 3.0}, o), InputError);
}

TEST_CASE("Gauss-Legendre on the unit interval")
{
  std::vector<double> x, w;
  gauss_legendre_unit(10, x, w);
  REQUIRE(x.size() == 10);
  for (int p = 0; p < 20; ++p)
  {
    double s = 0.0;
    for (int i = 0; i < 10; ++i)
    {
      s += w[i] * std::pow(x[i], p);
    }
    CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-14));
  }
}

TEST_CASE("noncompactness demonstration")
{
  const auto r = noncompactness_demo(8, 64);
  REQUIRE(r.distance_sq.size() == 8);
  for (int m = 0; m < 8; ++m)
  {
    CHECK(r.distance_sq[m][m] == 0.0);
    CHECK(std::abs(r.norm_sq[m] - 1.0) < 1e-8);
    for (int n = 0; n < 8; ++n)
    {
      if (n != m)
      {
        CHECK(std::abs(r.distance_sq[m][n] - 2.0) < 1e-6);
        CHECK(r.distance_sq[m][n] == r.distance_sq[n][m]);
      }
    }
  }
  CHECK(r.max_off_diagonal / r.min_off_diagonal <= 1.0 + 1e-6);

  const auto scaled = noncompactness_demo(4, 64, 0.25);
  CHECK(scaled.norm_sq[2] == doctest::Approx(0.25));
  CHECK(scaled.distance_sq[0][3] == doctest::Approx(0.5));
  CHECK(scaled.alternative_norm_sq == doctest::Approx(0.0625));
  CHECK(scaled.alternative_distance_sq == doctest::Approx(0.125));
  CHECK_FALSE(scaled.convention_note.empty());

  CHECK_THROWS_AS(noncompactness_demo(1), InputError);
  CHECK_THROWS_AS(noncompactness_demo(4, 4), InputError);
}
