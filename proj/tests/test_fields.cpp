#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "stochelm/errors.hpp"
#include "stochelm/field_io.hpp"
#include "stochelm/fields.hpp"
#include "stochelm/rng.hpp"

using namespace stochelm;

namespace
{

std::shared_ptr<const RandomFieldSpec> make_spec(std::vector<MatrixTerm> mp,
                                                 std::vector<FieldPrimitive> sp,
                                                 std::uint64_t seed = 11,
                                                 BaseScalarField n0 = {})
{
  return std::make_shared<const RandomFieldSpec>(1.0, BaseMatrixField{}, std::move(n0),
                                                 std::move(mp), std::move(sp), seed);
}

FieldPrimitive bump(Vec2 c, double r, double a, PrimitiveKind kind = PrimitiveKind::QuarticBump)
{
  return FieldPrimitive{kind, c, r, a};
}

}  // namespace

TEST_CASE("primitives peak at the center and vanish outside the support")
{
  for (auto kind : {PrimitiveKind::QuarticBump, PrimitiveKind::GaussianCutoff,
                    PrimitiveKind::PolynomialRadial})
  {
    const auto p = bump(Vec2(0.1, -0.2), 0.3, 0.7, kind);
    CHECK(p.value(p.center) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(p.value(Vec2(0.4, -0.2)) == 0.0);
    CHECK(p.value(Vec2(0.5, 0.3)) == 0.0);
    CHECK(p.gradient(Vec2(0.5, 0.3)).norm() == 0.0);
    CHECK(p.gradient(p.center).norm() < 1e-14);
  }
}

TEST_CASE("quartic bump gradient matches the hand-differentiated closed form")
{
  // (1 - s^2)^2, s = |x - c| / r  ->  grad = -4 (1 - s^2) (x - c) / r^2
  const auto p = bump(Vec2(0.2, 0.1), 0.5, 1.3);
  const Vec2 x(0.35, -0.05);
  const Vec2 d = x - p.center;
  const double s2 = d.squaredNorm() / 0.25;
  const Vec2 expected = -4.0 * 1.3 * (1.0 - s2) * d / 0.25;
  CHECK((p.gradient(x) - expected).norm() < 1e-14);
  CHECK(p.value(x) == doctest::Approx(1.3 * (1 - s2) * (1 - s2)).epsilon(1e-14));
}

TEST_CASE("analytic gradients agree with central differences at random points")
{
  auto spec = make_spec(
      {MatrixTerm{bump(Vec2(0.2, 0.1), 0.4, 0.3), Mat2{{1.0, 0.4}, {0.4, 0.2}}},
       MatrixTerm{bump(Vec2(-0.3, 0.0), 0.5, 0.2, PrimitiveKind::PolynomialRadial),
                  Mat2::Identity()}},
      {bump(Vec2(0.0, 0.3), 0.4, 0.5, PrimitiveKind::GaussianCutoff),
       bump(Vec2(-0.1, -0.2), 0.6, 0.4)});
  const auto s = draw_sample(spec, 3);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> coord(-0.8, 0.8);
  const double eps = 1e-5;
  for (int i = 0; i < 100; ++i)
  {
    const Vec2 x(coord(gen), coord(gen));
    const Vec2 ex(eps, 0.0);
    const Vec2 ey(0.0, eps);
    const Vec2 fd_n((s.n(x + ex) - s.n(x - ex)) / (2 * eps), (s.n(x + ey) - s.n(x - ey)) / (2 * eps));
    CHECK((s.grad_n(x) - fd_n).norm() < 1e-7);
    const auto g = s.grad_A(x);
    const Mat2 fd_ax = (s.A(x + ex) - s.A(x - ex)) / (2 * eps);
    const Mat2 fd_ay = (s.A(x + ey) - s.A(x - ey)) / (2 * eps);
    CHECK((g[0] - fd_ax).norm() < 1e-7);
    CHECK((g[1] - fd_ay).norm() < 1e-7);
  }
}

TEST_CASE("empty series reproduces the base fields")
{
  BaseScalarField n0{{bump(Vec2(0.1, 0.1), 0.3, 0.5)}};
  auto spec = make_spec({}, {}, 2, n0);
  const auto s = draw_sample(spec, 17);
  CHECK(s.y().empty());
  CHECK(s.z().empty());
  for (const Vec2 &x : {Vec2(0.0, 0.0), Vec2(0.1, 0.1), Vec2(0.3, -0.6)})
  {
    CHECK((s.A(x) - Mat2::Identity()).norm() == 0.0);
    CHECK(s.n(x) == doctest::Approx(1.0 + n0.terms[0].value(x)).epsilon(1e-15));
  }
}

TEST_CASE("zero coefficients give A0 and n0")
{
  auto spec = make_spec({MatrixTerm{bump(Vec2(0.2, 0.0), 0.3, 0.4), Mat2::Identity()}},
                        {bump(Vec2(-0.2, 0.0), 0.3, 0.4)});
  const std::vector<double> y{0.0};
  const std::vector<double> z{0.0};
  const auto s = realize_with(spec, y, z);
  CHECK(s.sample_index() == -1);
  CHECK((s.A(Vec2(0.2, 0.0)) - Mat2::Identity()).norm() == 0.0);
  CHECK(s.n(Vec2(-0.2, 0.0)) == 1.0);
}

TEST_CASE("coefficient one half at the bump center")
{
  const Mat2 M{{1.0, 0.3}, {0.3, 0.5}};
  auto spec = make_spec({MatrixTerm{bump(Vec2(0.2, 0.1), 0.3, 0.6), M}},
                        {bump(Vec2(-0.3, 0.2), 0.3, 0.4)});
  const std::vector<double> y{0.5};
  const std::vector<double> z{0.5};
  const auto s = realize_with(spec, y, z);
  CHECK((s.A(Vec2(0.2, 0.1)) - (Mat2::Identity() + 0.3 * M)).norm() < 1e-15);
  CHECK(s.n(Vec2(-0.3, 0.2)) == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("realize_with rejects bad coefficient vectors")
{
  auto spec = make_spec({MatrixTerm{bump(Vec2(0.2, 0.0), 0.3, 0.4), Mat2::Identity()}}, {});
  const std::vector<double> two{0.1, 0.2};
  const std::vector<double> none;
  const std::vector<double> big{0.6};
  CHECK_THROWS_AS(realize_with(spec, two, none), InputError);
  CHECK_THROWS_AS(realize_with(spec, big, none), InputError);
}

TEST_CASE("spec validation")
{
  CHECK_THROWS_AS(make_spec({}, {bump(Vec2(0.8, 0.0), 0.3, 0.1)}), InputError);
  CHECK_THROWS_AS(make_spec({}, {bump(Vec2(0.0, 0.0), 0.0, 0.1)}), InputError);
  CHECK_THROWS_AS(
      make_spec({MatrixTerm{bump(Vec2(0.0, 0.0), 0.3, 0.1), Mat2{{1.0, 0.2}, {0.0, 1.0}}}}, {}),
      InputError);
}

TEST_CASE("outside every support the fields are the identity and one")
{
  auto spec = make_spec({MatrixTerm{bump(Vec2(0.2, 0.1), 0.3, 0.5), Mat2::Identity()}},
                        {bump(Vec2(-0.2, 0.1), 0.3, 0.5)});
  const auto s = draw_sample(spec, 4);
  const double rho = spec->max_support_extent();
  CHECK(rho == doctest::Approx(std::hypot(0.2, 0.1) + 0.3));
  for (int i = 0; i < 32; ++i)
  {
    const double t = 2 * M_PI * i / 32;
    const Vec2 x = (rho + 1e-9) * Vec2(std::cos(t), std::sin(t));
    CHECK((s.A(x) - Mat2::Identity()).norm() == 0.0);
    CHECK(s.n(x) == 1.0);
  }
}

TEST_CASE("draws are uniform on the centered unit interval")
{
  auto spec = make_spec({}, {bump(Vec2(0.0, 0.0), 0.5, 0.1)}, 99);
  const int N = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < N; ++i)
  {
    const double z = draw_sample(spec, i).z()[0];
    REQUIRE(std::abs(z) <= 0.5);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / N;
  const double var = sum_sq / N - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
}

TEST_CASE("draws are a pure function of seed and index")
{
  auto spec = make_spec({MatrixTerm{bump(Vec2(0.0, 0.0), 0.5, 0.1), Mat2::Identity()}},
                        {bump(Vec2(0.0, 0.0), 0.5, 0.1)}, 123);
  const auto a = draw_sample(spec, 41);
  draw_sample(spec, 7);
  const auto b = draw_sample(spec, 41);
  CHECK(a.y() == b.y());
  CHECK(a.z() == b.z());
  const auto other = draw_sample(std::make_shared<const RandomFieldSpec>(spec->with_seed(124)), 41);
  CHECK(other.y() != a.y());

  KeyedStream s1(1, 2, kCoefficientStream);
  KeyedStream s2(1, 2, kSourceAmplitudeStream);
  CHECK(s1.bits(0) != s2.bits(0));
  CHECK(s1.next_centered_uniform() == s1.centered_uniform(0));
}

TEST_CASE("n stays above the triangle-inequality floor")
{
  BaseScalarField n0{{bump(Vec2(0.0, 0.0), 0.7, 0.5)}};
  auto spec = make_spec({}, {bump(Vec2(0.2, 0.0), 0.4, 0.6), bump(Vec2(-0.2, 0.2), 0.4, 0.8)}, 3, n0);
  const double floor = 1.0 - 0.5 * (0.6 + 0.8);
  for (int i = 0; i < 20; ++i)
  {
    const auto s = draw_sample(spec, i);
    for (const auto &x : disk_grid(1.0, 64))
    {
      REQUIRE(s.n(x) >= floor - 1e-15);
    }
  }
}

TEST_CASE("series conditions: zero perturbations")
{
  auto spec = make_spec({}, {});
  const auto r = check_series_conditions(*spec, 0.1, 32, 1.0, 1.0);
  CHECK(r.sum_A_sup == 0.0);
  CHECK(r.sum_n_nontrap == 0.0);
  CHECK(r.pass);
  REQUIRE(r.certified_mu1);
  CHECK(*r.certified_mu1 == 1.0);
  CHECK(*r.certified_mu2 == 1.0);
}

TEST_CASE("series conditions: a scalar bump of peak 2.5 breaks positivity")
{
  auto spec = make_spec({}, {bump(Vec2(0.0, 0.0), 0.5, 2.5)});
  const auto r = check_series_conditions(*spec, 0.1, 64);
  CHECK(r.sum_n_sup == doctest::Approx(2.5));
  CHECK_FALSE(r.n_positive);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.certified_mu2);
}

TEST_CASE("series conditions: a small matrix bump passes with certified 0.9")
{
  // For (1 - s^2)^2 I the nontrapping combination is (1 - s^2)(1 + 3 s^2), with sup 4/3.
  auto spec = make_spec({MatrixTerm{bump(Vec2(0.0, 0.0), 0.5, 0.135), Mat2::Identity()}}, {});
  const auto r = check_series_conditions(*spec, 0.1, 256, 1.0, 1.0);
  CHECK(r.sum_A_nontrap == doctest::Approx(0.18).epsilon(2e-3));
  CHECK(r.sum_A_nontrap <= 0.18 + 1e-12);
  CHECK(r.A_nontrap);
  CHECK(r.pass);
  REQUIRE(r.certified_mu1);
  CHECK(*r.certified_mu1 == doctest::Approx(0.9));

  auto too_big = make_spec({MatrixTerm{bump(Vec2(0.0, 0.0), 0.5, 0.16), Mat2::Identity()}}, {});
  CHECK_FALSE(check_series_conditions(*too_big, 0.1, 256, 1.0, 1.0).pass);
}

TEST_CASE("series conditions reject bad parameters")
{
  auto spec = make_spec({}, {});
  CHECK_THROWS_AS(check_series_conditions(*spec, 0.0, 64), InputError);
  CHECK_THROWS_AS(check_series_conditions(*spec, 1.0, 64), InputError);
  CHECK_THROWS_AS(check_series_conditions(*spec, 0.1, 8), InputError);
}

TEST_CASE("field spec JSON round trip is lossless")
{
  auto spec = make_spec({MatrixTerm{bump(Vec2(0.1, 0.2), 0.3, 0.1 / 3.0), Mat2{{1.0, 0.3}, {0.3, 0.5}}}},
                        {bump(Vec2(-0.2, 0.1), 0.35, 0.035, PrimitiveKind::GaussianCutoff)}, 77);
  const auto text = field_spec_to_json(*spec);
  const auto back = field_spec_from_json(text);
  CHECK(back == *spec);
  CHECK(field_spec_to_json(back) == text);
}

TEST_CASE("field spec JSON diagnostics")
{
  CHECK_THROWS_AS(field_spec_from_json("{\"R\": 1.0,"), InputError);
  CHECK_THROWS_AS(field_spec_from_json("{\"seed\": 1}"), InputError);
  CHECK_THROWS_AS(field_spec_from_json(
                      R"({"R": 1, "J_n": 2, "scalar_perturbations": [{"kind": "quartic-bump",
                          "center": [0, 0], "radius": 0.3, "amplitude": 0.1}]})"),
                  InputError);
  CHECK_THROWS_AS(field_spec_from_json(
                      R"({"R": 1, "scalar_perturbations": [{"kind": "cone",
                          "center": [0, 0], "radius": 0.3, "amplitude": 0.1}]})"),
                  InputError);
}

TEST_CASE("bundled spec configs load")
{
  const std::string dir = STOCHELM_TEST_CONFIG_DIR;
  const auto nt = load_field_spec(dir + "/nontrapping_spec.json");
  CHECK(nt.J_A() == 2);
  CHECK(nt.J_n() == 2);
  const auto r = check_series_conditions(nt, 0.1, 128, 1.0, 1.0);
  CHECK(r.pass);
  const auto trap = load_field_spec(dir + "/trapping_spec.json");
  CHECK(trap.n0().terms.size() == 1);
}
