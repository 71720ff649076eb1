#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stochelm/errors.hpp"
#include "stochelm/mesh.hpp"
#include "stochelm/report_io.hpp"

namespace stochelm::tools
{

using ojson = nlohmann::ordered_json;

namespace
{

std::string utc_now()
{
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string dump(const ojson &j) { return j.dump(2) + "\n"; }

ojson parse(const std::string &text) { return ojson::parse(text); }

// The medium a single-realization subcommand works on.
CoefficientSample select_medium(const RunConfig &c)
{
  const auto spec = c.spec();
  if (c.sample_index)
  {
    return draw_sample(spec, *c.sample_index);
  }
  const std::vector<double> y(spec->J_A(), 0.0);
  const std::vector<double> z(spec->J_n(), 0.0);
  return realize_with(spec, y, z);
}

double grid_max_n(const Medium &medium, double R)
{
  double n_max = 1.0;
  for (const auto &x : disk_grid(R, 128))
  {
    n_max = std::max(n_max, medium.n(x));
  }
  return n_max;
}

BoundaryClosure closure_for(const RunConfig &c, double k, double R)
{
  if (c.closure == BoundaryClosure::Kind::Impedance)
  {
    return BoundaryClosure::impedance();
  }
  return c.fourier_modes ? BoundaryClosure::dtn(*c.fourier_modes)
                         : BoundaryClosure::dtn_default(k, R);
}

void require_k_at_least_k0(double k, double k0)
{
  if (k < k0)
  {
    std::ostringstream msg;
    msg << "bound hypothesis k >= k0 violated (k = " << k << ", k0 = " << k0 << ")";
    throw InputError(msg.str());
  }
}

ojson medium_json(const RunConfig &c)
{
  ojson j;
  j["field_spec"] = c.field_spec_path ? ojson(c.field_spec_path->filename().string())
                                      : ojson("inline");
  j["seed"] = c.spec()->seed();
  j["sample_index"] = c.sample_index ? ojson(*c.sample_index) : ojson("base");
  return j;
}

struct Outcome
{
  int status = kExitOk;
  std::string message;
};

Outcome run_certify(const RunConfig &c, std::ostream &out)
{
  const auto spec = c.spec();
  c.obstacle.check_inside_ball(spec->R());
  const CoefficientSample medium = select_medium(c);
  const bool star = check_star_shaped(c.obstacle);
  const ConditionReport conditions =
      check_series_conditions(*spec, c.delta, c.condition_resolution, c.mu1, c.mu2);
  const NontrapCertificate cert =
      certify_nontrapping(medium, spec->R(), c.resolution, c.obstacle, c.mode);
  const RadialTrappingResult radial = check_radial_trapping(radial_profile_of(medium), spec->R());

  ojson doc;
  doc["subcommand"] = "certify";
  doc["medium"] = medium_json(c);
  doc["star_shaped"] = star;
  doc["certificate"] = parse(certificate_json(cert));
  doc["series_conditions"] = parse(condition_report_json(conditions));
  ojson rj;
  rj["ray"] = "positive x-axis";
  rj["is_trapping"] = radial.is_trapping;
  rj["witness_r"] = radial.witness_r ? ojson(*radial.witness_r) : ojson(nullptr);
  rj["min_2n_plus_r_dn"] = radial.min_value;
  rj["argmin_r"] = radial.argmin_r;
  doc["radial_check"] = rj;
  write_file_atomically(c.output_dir / "certificate.json", dump(doc));

  out << "mu1_hat " << format_double(cert.mu1_hat) << "\nmu2_hat " << format_double(cert.mu2_hat)
      << "\ncertificate " << (cert.pass ? "pass" : "fail") << "\nseries_conditions "
      << (conditions.pass ? "pass" : "fail") << "\nstar_shaped " << (star ? "yes" : "no")
      << "\n";

  if (!star)
  {
    return {kExitHypothesis, "obstacle is not star-shaped with respect to the origin"};
  }
  if (!cert.pass)
  {
    std::ostringstream msg;
    msg << "nontrapping certification fails: mu1_hat = " << cert.mu1_hat << ", mu2_hat = "
        << cert.mu2_hat;
    return {kExitHypothesis, msg.str()};
  }
  if (!conditions.pass)
  {
    return {kExitHypothesis, "series conditions fail"};
  }
  return {};
}

Outcome run_solve(const RunConfig &c, std::ostream &out)
{
  const auto spec = c.spec();
  require_k_at_least_k0(c.k, c.k0);
  const CoefficientSample medium = select_medium(c);
  const double R = spec->R();
  const double h = c.h.value_or(c.policy.size_for(c.k, grid_max_n(medium, R)));
  auto mesh = std::make_shared<const Mesh>(build_mesh(R, c.obstacle, h));
  const SolveReport s = solve(assemble(mesh, medium, c.k, c.source_field(), closure_for(c, c.k, R)));
  const NontrapCertificate cert = certify_nontrapping(medium, R, c.resolution, c.obstacle);
  const bool star = check_star_shaped(c.obstacle);

  ojson doc;
  doc["subcommand"] = "solve";
  doc["medium"] = medium_json(c);
  doc["k"] = c.k;
  doc["h"] = h;
  doc["closure"] = c.closure == BoundaryClosure::Kind::DtN ? "dtn" : "impedance";
  doc["num_vertices"] = mesh->num_vertices();
  doc["num_triangles"] = mesh->num_triangles();
  doc["grad_norm_sq"] = s.grad_norm_sq;
  doc["l2_norm_sq"] = s.l2_norm_sq;
  doc["weighted_norm_sq"] = s.weighted_norm_sq;
  doc["f_norm_sq"] = s.f_norm_sq;
  doc["residual"] = s.residual;
  doc["quasi_resonance"] = s.quasi_resonance;
  doc["certificate"] = parse(certificate_json(cert));
  const bool hypotheses = star && cert.pass;
  doc["bound_hypotheses_met"] = hypotheses;
  if (hypotheses)
  {
    doc["bound"] = parse(bound_report_json(
        check_bound_deterministic(s, cert.mu1_hat, cert.mu2_hat, R, 2, c.k0)));
  }
  else
  {
    doc["bound"] = nullptr;
  }
  write_file_atomically(c.output_dir / "solve.json", dump(doc));
  if (c.export_mesh)
  {
    std::ostringstream m;
    write_mesh(*mesh, m);
    write_file_atomically(c.output_dir / "mesh.txt", m.str());
  }
  if (c.export_solution)
  {
    std::ostringstream m;
    write_solution(*mesh, std::span<const Complex>(s.u.data(), static_cast<std::size_t>(s.u.size())), m);
    write_file_atomically(c.output_dir / "solution.txt", m.str());
  }
  out << "weighted_norm_sq " << format_double(s.weighted_norm_sq) << "\nf_norm_sq "
      << format_double(s.f_norm_sq) << "\nresidual " << format_double(s.residual) << "\n";
  if (s.quasi_resonance)
  {
    out << "quasi-resonance: the discrete system is numerically singular\n";
  }
  return {};
}

Outcome run_mc_command(const RunConfig &c, std::ostream &out)
{
  require_k_at_least_k0(c.k, c.k0);
  const auto spec = c.spec();
  MCOptions o;
  o.k = c.k;
  o.k0 = c.k0;
  o.N = c.N;
  o.h = c.h.value_or(c.policy.size_for(c.k));
  o.closure = closure_for(c, c.k, spec->R());
  o.source_mode = c.source_mode;
  o.delta = c.delta;
  o.mu1 = c.mu1;
  o.mu2 = c.mu2;
  o.condition_resolution = c.condition_resolution;
  o.certify_resolution = c.resolution;
  o.formula = c.formula;
  o.aggregate_constants = c.aggregate_constants;
  o.fem_tolerance = c.fem_tolerance;
  o.workers = c.workers;
  const MCReport report = run_mc(spec, c.obstacle, c.source_field(), o);

  ojson doc;
  doc["subcommand"] = "mc";
  doc["medium"] = medium_json(c);
  doc["report"] = parse(mc_report_json(report));
  write_file_atomically(c.output_dir / "run.json", dump(doc));
  write_file_atomically(c.output_dir / "samples.tsv", samples_tsv(report));

  out << "N " << report.N << "\nmean_weighted_norm_sq " << format_double(report.mean_weighted_norm_sq)
      << "\nstandard_error " << format_double(report.standard_error) << "\nbound_rhs "
      << format_double(report.bound_rhs_independent) << "\nbound "
      << (report.bound_holds ? "holds" : "violated") << "\npass_fraction "
      << format_double(report.pass_fraction) << "\n";
  return {};
}

Outcome run_sweep(const RunConfig &c, std::ostream &out)
{
  const auto spec = c.spec();
  const CoefficientSample medium = select_medium(c);
  std::vector<double> ks = c.k_values;
  if (ks.empty())
  {
    for (int k = 2; k <= 20; ++k)
    {
      ks.push_back(k);
    }
  }
  SweepOptions o;
  o.R = spec->R();
  o.policy = c.policy;
  o.closure = c.closure;
  o.medium_label = c.medium_label;
  o.tau1 = c.tau1;
  o.tau2 = c.tau2;
  o.n_max = grid_max_n(medium, spec->R());
  if (c.tau1 && c.tau2)
  {
    require_k_at_least_k0(ks.front(), c.k0);
    o.k0 = c.k0;
  }
  const SweepReport report = k_sweep(medium, c.obstacle, c.source_field(), ks, o);

  ojson doc;
  doc["subcommand"] = "sweep";
  doc["medium"] = medium_json(c);
  doc["report"] = parse(sweep_report_json(report));
  write_file_atomically(c.output_dir / "run.json", dump(doc));
  write_file_atomically(c.output_dir / "sweep.tsv", sweep_tsv(report));
  const auto p = report.peak_index();
  out << "peak_k " << format_double(report.k_values[p]) << "\npeak_norm "
      << format_double(report.norm_curve[p]) << "\n";
  return {};
}

Outcome run_demo(const RunConfig &c, std::ostream &out)
{
  const NoncompactnessReport report =
      noncompactness_demo(c.M, c.quadrature_points, c.domain_measure);
  ojson doc;
  doc["subcommand"] = "demo-noncompact";
  doc["report"] = parse(noncompactness_json(report));
  write_file_atomically(c.output_dir / "run.json", dump(doc));
  const std::string table = noncompactness_tsv(report);
  write_file_atomically(c.output_dir / "noncompact.tsv", table);
  out << table;
  out << "norm_sq";
  for (double v : report.norm_sq)
  {
    out << '\t' << format_double(v);
  }
  out << "\nnote: " << report.convention_note << "\n";
  return {};
}

}  // namespace

int run(const RunConfig &config, std::ostream &out, std::ostream &err)
{
  const std::string started = utc_now();
  Outcome outcome;
  try
  {
    switch (config.subcommand)
    {
      case Subcommand::Certify:
        outcome = run_certify(config, out);
        break;
      case Subcommand::Solve:
        outcome = run_solve(config, out);
        break;
      case Subcommand::MC:
        outcome = run_mc_command(config, out);
        break;
      case Subcommand::Sweep:
        outcome = run_sweep(config, out);
        break;
      case Subcommand::DemoNoncompact:
        outcome = run_demo(config, out);
        break;
    }
  }
  catch (const HypothesisViolation &e)
  {
    outcome = {kExitHypothesis, e.what()};
  }
  catch (const InputError &e)
  {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  catch (const std::exception &e)
  {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  if (outcome.status == kExitHypothesis)
  {
    err << "hypothesis violation: " << outcome.message << "\n";
  }

  ojson meta;
  meta["subcommand"] = to_string(config.subcommand);
  meta["version"] = STOCHELM_VERSION_STRING;
  meta["started_utc"] = started;
  meta["finished_utc"] = utc_now();
  meta["exit_status"] = outcome.status;
  try
  {
    write_file_atomically(config.output_dir / "metadata.json", dump(meta));
  }
  catch (const std::exception &e)
  {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return outcome.status;
}

int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Random-media Helmholtz laboratory: certify, solve, mc, sweep, demo-noncompact"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int workers = -1;
  int M = -1;
  int quadrature_points = -1;

  const std::vector<std::pair<Subcommand, std::string>> commands{
      {Subcommand::Certify, "Certify the nontrapping conditions of a medium"},
      {Subcommand::Solve, "Solve one realization"},
      {Subcommand::MC, "Monte-Carlo estimate of the stochastic bound"},
      {Subcommand::Sweep, "Wavenumber sweep"},
      {Subcommand::DemoNoncompact, "Non-compactness demonstration"}};
  std::vector<CLI::App *> subs;
  for (const auto &[cmd, help] : commands)
  {
    auto *sub = app.add_subcommand(to_string(cmd), help);
    auto *opt = sub->add_option("--config", config_path, "JSON run configuration");
    if (cmd != Subcommand::DemoNoncompact)
    {
      opt->required();
    }
    sub->add_option("--output-dir", output_dir, "Override the configured output directory");
    if (cmd == Subcommand::MC)
    {
      sub->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
    }
    if (cmd == Subcommand::DemoNoncompact)
    {
      sub->add_option("--M", M, "Number of modes")->check(CLI::PositiveNumber);
      sub->add_option("--quadrature-points", quadrature_points, "Gauss-Legendre nodes");
    }
    subs.push_back(sub);
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  Subcommand cmd = Subcommand::Certify;
  for (std::size_t i = 0; i < subs.size(); ++i)
  {
    if (subs[i]->parsed())
    {
      cmd = commands[i].first;
    }
  }

  RunConfig config;
  try
  {
    if (!config_path.empty())
    {
      if (!std::filesystem::exists(config_path))
      {
        throw InputError("config file '" + config_path + "' does not exist");
      }
      config = load_run_config(config_path);
      if (config.declared_subcommand && *config.declared_subcommand != cmd)
      {
        throw InputError("config declares subcommand '" + to_string(config.subcommand) +
                         "' but '" + to_string(cmd) + "' was requested");
      }
    }
    config.subcommand = cmd;
    if (!output_dir.empty())
    {
      config.output_dir = output_dir;
    }
    if (workers >= 0)
    {
      config.workers = workers;
    }
    if (M > 0)
    {
      config.M = M;
    }
    if (quadrature_points > 0)
    {
      config.quadrature_points = quadrature_points;
    }
  }
  catch (const InputError &e)
  {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return run(config, out, err);
}

}  // namespace stochelm::tools
