#ifndef STOCHELM_TOOLS_RUN_CONFIG_HPP
#define STOCHELM_TOOLS_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stochelm/bounds.hpp"
#include "stochelm/fields.hpp"
#include "stochelm/helmsolve.hpp"
#include "stochelm/ntcheck.hpp"
#include "stochelm/uqdriver.hpp"

namespace stochelm::tools
{

enum class Subcommand
{
  Certify,
  Solve,
  MC,
  Sweep,
  DemoNoncompact
};

std::string to_string(Subcommand s);
Subcommand subcommand_from_string(const std::string &name);

//
// One experiment. Loaded from a single JSON document; relative paths inside it are
// resolved against the directory of the config file.
//
struct RunConfig
{
  Subcommand subcommand = Subcommand::Certify;
  // As written in the document, if at all.
  std::optional<Subcommand> declared_subcommand;
  std::filesystem::path base_dir = ".";

  std::optional<std::filesystem::path> field_spec_path;
  std::optional<RandomFieldSpec> field_spec;
  std::optional<std::uint64_t> seed;  // overrides the field spec seed
  // Realization to certify / solve / sweep; the base fields (all coefficients 0) when unset.
  std::optional<std::int64_t> sample_index;

  Obstacle obstacle;

  double k = 5.0;
  double k0 = 1.0;
  int N = 50;
  std::optional<double> h;  // the pollution policy when unset
  MeshPolicy policy;
  BoundaryClosure::Kind closure = BoundaryClosure::Kind::Impedance;
  std::optional<int> fourier_modes;

  double delta = 0.1;
  std::optional<double> mu1;
  std::optional<double> mu2;
  int resolution = 64;
  int condition_resolution = 128;
  NontrapMode mode = NontrapMode::Standard;

  FieldPrimitive source{PrimitiveKind::QuarticBump, Vec2(0.2, 0.1), 0.3, 1.0};
  bool zero_source = false;
  SourceMode source_mode = SourceMode::Deterministic;

  C1Formula formula = C1Formula::FourOverMin;
  AggregateConstants aggregate_constants = AggregateConstants::SpecCertified;
  double fem_tolerance = 0.05;

  std::vector<double> k_values;
  std::optional<double> tau1;
  std::optional<double> tau2;
  std::string medium_label = "nontrapping";

  int M = 8;
  int quadrature_points = 64;
  double domain_measure = 1.0;

  std::filesystem::path output_dir = "out";
  bool export_mesh = false;
  bool export_solution = false;
  int workers = 0;

  // Field spec with the seed override applied; throws InputError when absent.
  std::shared_ptr<const RandomFieldSpec> spec() const;
  SourceField source_field() const;
};

// Throws InputError with a line/column or field-path diagnostic.
RunConfig parse_run_config(const std::string &text, const std::filesystem::path &base_dir);
RunConfig load_run_config(const std::filesystem::path &path);

}  // namespace stochelm::tools

#endif  // STOCHELM_TOOLS_RUN_CONFIG_HPP
