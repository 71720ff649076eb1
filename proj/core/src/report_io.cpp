#include "stochelm/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stochelm/errors.hpp"

namespace stochelm
{

using ojson = nlohmann::ordered_json;

void write_file_atomically(const std::filesystem::path &path, const std::string &contents)
{
  if (path.has_parent_path())
  {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw InputError("cannot write '" + tmp.string() + "'");
    }
    out << contents;
    out.flush();
    if (!out)
    {
      throw InputError("failed writing '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string format_double(double value)
{
  if (std::isnan(value))
  {
    return "nan";
  }
  if (std::isinf(value))
  {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_string(NontrapMode mode)
{
  switch (mode)
  {
    case NontrapMode::Standard:
      return "standard";
    case NontrapMode::ImprovedA:
      return "improved-a";
    case NontrapMode::ImprovedN:
      return "improved-n";
  }
  return "unknown";
}

NontrapMode nontrap_mode_from_string(const std::string &name)
{
  if (name == "standard")
  {
    return NontrapMode::Standard;
  }
  if (name == "improved-a")
  {
    return NontrapMode::ImprovedA;
  }
  if (name == "improved-n")
  {
    return NontrapMode::ImprovedN;
  }
  throw InputError("unknown nontrapping mode '" + name +
                   "' (expected standard, improved-a or improved-n)");
}

namespace
{

ojson point(const Vec2 &p) { return ojson::array({p.x(), p.y()}); }

ojson optional_number(const std::optional<double> &v)
{
  return v ? ojson(*v) : ojson(nullptr);
}

ojson certificate_object(const NontrapCertificate &c)
{
  ojson j;
  j["mode"] = to_string(c.mode);
  j["grid_resolution"] = c.grid_resolution;
  j["mu1_hat"] = c.mu1_hat;
  j["mu2_hat"] = c.mu2_hat;
  j["worst_point_A"] = point(c.worst_point_A);
  j["worst_point_n"] = point(c.worst_point_n);
  j["pass"] = c.pass;
  return j;
}

ojson condition_object(const ConditionReport &r)
{
  ojson j;
  j["grid_resolution"] = r.grid_resolution;
  j["delta"] = r.delta;
  j["safety_margin"] = r.safety_margin;
  j["A0_min"] = r.A0_min;
  j["n0_min"] = r.n0_min;
  j["mu1"] = r.mu1;
  j["mu2"] = r.mu2;
  j["mu_supplied"] = r.mu_supplied;
  j["base_nontrap_A_min"] = r.base_nontrap_A_min;
  j["base_nontrap_n_min"] = r.base_nontrap_n_min;
  j["base_in_class"] = r.base_in_class;
  j["sum_A_sup"] = r.sum_A_sup;
  j["threshold_A_sup"] = 2.0 * r.A0_min;
  j["sum_n_sup"] = r.sum_n_sup;
  j["threshold_n_sup"] = 2.0 * r.n0_min;
  j["sum_A_nontrap"] = r.sum_A_nontrap;
  j["threshold_A_nontrap"] = 2.0 * r.delta * r.mu1;
  j["sum_n_nontrap"] = r.sum_n_nontrap;
  j["threshold_n_nontrap"] = 2.0 * r.delta * r.mu2;
  j["A_positive"] = r.A_positive;
  j["n_positive"] = r.n_positive;
  j["A_nontrap"] = r.A_nontrap;
  j["n_nontrap"] = r.n_nontrap;
  j["pass"] = r.pass;
  j["certified_mu1"] = optional_number(r.certified_mu1);
  j["certified_mu2"] = optional_number(r.certified_mu2);
  return j;
}

ojson bound_object(const BoundReport &b)
{
  ojson j;
  j["variant"] = to_string(b.variant);
  j["lhs"] = b.lhs;
  j["rhs"] = b.rhs;
  j["slack"] = b.slack;
  j["C1"] = b.constant;
  const bool deterministic = b.variant == BoundVariant::Deterministic;
  j[deterministic ? "tau1" : "mu1"] = b.parameters.c1;
  j[deterministic ? "tau2" : "mu2"] = b.parameters.c2;
  j["R"] = b.parameters.R;
  j["d"] = b.parameters.d;
  j["k0"] = b.parameters.k0;
  j["k"] = b.parameters.k;
  return j;
}

std::string dump(const ojson &j) { return j.dump(2) + "\n"; }

}  // namespace

std::string certificate_json(const NontrapCertificate &certificate)
{
  return dump(certificate_object(certificate));
}

std::string condition_report_json(const ConditionReport &report)
{
  return dump(condition_object(report));
}

std::string bound_report_json(const BoundReport &report) { return dump(bound_object(report)); }

std::string mc_report_json(const MCReport &r)
{
  ojson j;
  j["N"] = r.N;
  j["k"] = r.k;
  j["k0"] = r.k0;
  j["h"] = r.h;
  j["num_vertices"] = r.num_vertices;
  j["C1_formula"] = to_string(r.formula);
  j["fem_tolerance"] = r.fem_tolerance;
  j["mean_weighted_norm_sq"] = r.mean_weighted_norm_sq;
  j["standard_error"] = r.standard_error;
  j["mean_f_norm_sq"] = r.mean_f_norm_sq;
  j["C1_mean"] = r.c1_mean;
  j["C1_rms"] = r.c1_rms;
  j["bound_rhs_independent"] = r.bound_rhs_independent;
  j["bound_rhs_dependent"] = r.bound_rhs_dependent;
  j["bound_holds"] = r.bound_holds;
  j["pass_fraction"] = r.pass_fraction;
  ojson flag;
  flag["four_over_min_to_max_inverse"] = r.c1_formula_ratio;
  flag["note"] = "the two C1 expressions are not a fixed multiple of each other; "
                 "the ratio recorded here is evaluated at the aggregate constants";
  j["C1_formula_discrepancy"] = flag;
  j["conditions"] = r.conditions ? condition_object(*r.conditions) : ojson(nullptr);
  ojson samples = ojson::array();
  for (const auto &s : r.per_sample)
  {
    ojson row;
    row["sample_index"] = s.sample_index;
    row["source_amplitude"] = s.source_amplitude;
    row["certificate"] = certificate_object(s.certificate);
    row["grad_norm_sq"] = s.grad_norm_sq;
    row["l2_norm_sq"] = s.l2_norm_sq;
    row["weighted_norm_sq"] = s.weighted_norm_sq;
    row["f_norm_sq"] = s.f_norm_sq;
    row["residual"] = s.residual;
    row["quasi_resonance"] = s.quasi_resonance;
    row["bound"] = bound_object(s.bound);
    row["pass"] = s.pass;
    samples.push_back(std::move(row));
  }
  j["per_sample"] = std::move(samples);
  return dump(j);
}

std::string sweep_report_json(const SweepReport &r)
{
  ojson j;
  j["medium_label"] = r.medium_label;
  j["k_values"] = r.k_values;
  j["norm_curve"] = r.norm_curve;
  j["bound_curve"] = r.bound_curve;
  if (!r.norm_curve.empty())
  {
    const auto p = r.peak_index();
    j["peak_k"] = r.k_values[p];
    j["peak_norm"] = r.norm_curve[p];
  }
  ojson points = ojson::array();
  for (const auto &p : r.points)
  {
    ojson row;
    row["k"] = p.k;
    row["h"] = p.h;
    row["num_vertices"] = p.num_vertices;
    row["weighted_norm_sq"] = p.weighted_norm_sq;
    row["f_norm_sq"] = p.f_norm_sq;
    row["residual"] = p.residual;
    row["quasi_resonance"] = p.quasi_resonance;
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  return dump(j);
}

std::string noncompactness_json(const NoncompactnessReport &r)
{
  ojson j;
  j["M"] = r.M;
  j["quadrature_points"] = r.quadrature_points;
  j["domain_measure"] = r.domain_measure;
  j["norm_sq"] = r.norm_sq;
  j["distance_sq"] = r.distance_sq;
  j["min_off_diagonal"] = r.min_off_diagonal;
  j["max_off_diagonal"] = r.max_off_diagonal;
  ojson flag;
  flag["computed_norm_sq"] = r.domain_measure;
  flag["computed_distance_sq"] = 2.0 * r.domain_measure;
  flag["alternative_norm_sq"] = r.alternative_norm_sq;
  flag["alternative_distance_sq"] = r.alternative_distance_sq;
  flag["note"] = r.convention_note;
  j["measure_convention"] = flag;
  return dump(j);
}

std::string samples_tsv(const MCReport &r)
{
  std::ostringstream out;
  out << "index\tamplitude\tmu1_hat\tmu2_hat\tgrad_norm_sq\tl2_norm_sq\tweighted_norm_sq\t"
         "f_norm_sq\tresidual\tquasi_resonance\tC1\tlhs\trhs\tslack\tpass\n";
  for (const auto &s : r.per_sample)
  {
    out << s.sample_index << '\t' << format_double(s.source_amplitude) << '\t'
        << format_double(s.certificate.mu1_hat) << '\t' << format_double(s.certificate.mu2_hat)
        << '\t' << format_double(s.grad_norm_sq) << '\t' << format_double(s.l2_norm_sq) << '\t'
        << format_double(s.weighted_norm_sq) << '\t' << format_double(s.f_norm_sq) << '\t'
        << format_double(s.residual) << '\t' << (s.quasi_resonance ? 1 : 0) << '\t'
        << format_double(s.bound.constant) << '\t' << format_double(s.bound.lhs) << '\t'
        << format_double(s.bound.rhs) << '\t' << format_double(s.bound.slack) << '\t'
        << (s.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string sweep_tsv(const SweepReport &r)
{
  std::ostringstream out;
  out << "k\th\tvertices\tweighted_norm_sq\tnorm\tbound\tf_norm_sq\tresidual\tquasi_resonance\n";
  for (std::size_t i = 0; i < r.points.size(); ++i)
  {
    const auto &p = r.points[i];
    out << format_double(p.k) << '\t' << format_double(p.h) << '\t' << p.num_vertices << '\t'
        << format_double(p.weighted_norm_sq) << '\t' << format_double(r.norm_curve[i]) << '\t'
        << format_double(r.bound_curve[i]) << '\t' << format_double(p.f_norm_sq) << '\t'
        << format_double(p.residual) << '\t' << (p.quasi_resonance ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string noncompactness_tsv(const NoncompactnessReport &r)
{
  std::ostringstream out;
  out << "m";
  for (int n = 1; n <= r.M; ++n)
  {
    out << '\t' << n;
  }
  out << '\n';
  for (int m = 1; m <= r.M; ++m)
  {
    out << m;
    for (int n = 1; n <= r.M; ++n)
    {
      out << '\t' << format_double(r.distance_sq[m - 1][n - 1]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace stochelm
