#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stochelm/errors.hpp"
#include "stochelm/field_io.hpp"
#include "stochelm/report_io.hpp"

namespace stochelm::tools
{

using json = nlohmann::json;

std::string to_string(Subcommand s)
{
  switch (s)
  {
    case Subcommand::Certify:
      return "certify";
    case Subcommand::Solve:
      return "solve";
    case Subcommand::MC:
      return "mc";
    case Subcommand::Sweep:
      return "sweep";
    case Subcommand::DemoNoncompact:
      return "demo-noncompact";
  }
  return "unknown";
}

Subcommand subcommand_from_string(const std::string &name)
{
  for (auto s : {Subcommand::Certify, Subcommand::Solve, Subcommand::MC, Subcommand::Sweep,
                 Subcommand::DemoNoncompact})
  {
    if (to_string(s) == name)
    {
      return s;
    }
  }
  throw InputError("unknown subcommand '" + name +
                   "' (expected certify, solve, mc, sweep or demo-noncompact)");
}

std::shared_ptr<const RandomFieldSpec> RunConfig::spec() const
{
  if (!field_spec)
  {
    throw InputError("config field 'field_spec' is required for '" + to_string(subcommand) +
                     "'");
  }
  if (seed)
  {
    return std::make_shared<const RandomFieldSpec>(field_spec->with_seed(*seed));
  }
  return std::make_shared<const RandomFieldSpec>(*field_spec);
}

SourceField RunConfig::source_field() const
{
  return zero_source ? SourceField::zero() : SourceField::from_primitive(source);
}

namespace
{

struct Reader
{
  const json &obj;
  std::string where;

  bool has(const char *key) const { return obj.contains(key) && !obj.at(key).is_null(); }

  std::string field(const char *key) const
  {
    return where.empty() ? std::string(key) : where + "." + key;
  }

  [[noreturn]] void fail(const char *key, const std::string &what) const
  {
    throw InputError("config field '" + field(key) + "': " + what);
  }

  double number(const char *key, double fallback) const
  {
    if (!has(key))
    {
      return fallback;
    }
    if (!obj.at(key).is_number())
    {
      fail(key, "expected a number");
    }
    return obj.at(key).get<double>();
  }

  std::optional<double> optional_number(const char *key) const
  {
    if (!has(key))
    {
      return std::nullopt;
    }
    return number(key, 0.0);
  }

  double positive(const char *key, double fallback) const
  {
    const double v = number(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v))
    {
      fail(key, "must be positive");
    }
    return v;
  }

  std::int64_t integer(const char *key, std::int64_t fallback) const
  {
    if (!has(key))
    {
      return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_number_integer())
    {
      fail(key, "expected an integer");
    }
    return v.get<std::int64_t>();
  }

  bool boolean(const char *key, bool fallback) const
  {
    if (!has(key))
    {
      return fallback;
    }
    if (!obj.at(key).is_boolean())
    {
      fail(key, "expected true or false");
    }
    return obj.at(key).get<bool>();
  }

  std::string string(const char *key, const std::string &fallback) const
  {
    if (!has(key))
    {
      return fallback;
    }
    if (!obj.at(key).is_string())
    {
      fail(key, "expected a string");
    }
    return obj.at(key).get<std::string>();
  }

  Vec2 point(const char *key, const Vec2 &fallback) const
  {
    if (!has(key))
    {
      return fallback;
    }
    const auto &v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    {
      fail(key, "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  void only(const std::set<std::string> &allowed) const
  {
    for (const auto &[key, value] : obj.items())
    {
      if (!allowed.count(key))
      {
        throw InputError("config field '" + field(key.c_str()) + "': unknown field");
      }
    }
  }

  // Wraps an equivalent error from a lower layer with the field path.
  template <class F>
  auto guarded(const char *key, F &&f) const
  {
    try
    {
      return f();
    }
    catch (const InputError &e)
    {
      fail(key, e.what());
    }
  }
};

Obstacle parse_obstacle(const json &v)
{
  if (v.is_string())
  {
    if (v.get<std::string>() == "none")
    {
      return Obstacle::none();
    }
    throw InputError("config field 'obstacle': expected \"none\" or an object");
  }
  if (!v.is_object())
  {
    throw InputError("config field 'obstacle': expected \"none\" or an object");
  }
  Reader r{v, "obstacle"};
  r.only({"kind", "vertices"});
  const std::string kind = r.string("kind", "none");
  if (kind == "none")
  {
    return Obstacle::none();
  }
  if (kind != "polygon")
  {
    r.fail("kind", "expected none or polygon");
  }
  if (!r.has("vertices") || !v.at("vertices").is_array())
  {
    r.fail("vertices", "expected an array of [x, y] points");
  }
  std::vector<Vec2> vertices;
  for (std::size_t i = 0; i < v.at("vertices").size(); ++i)
  {
    const auto &p = v.at("vertices")[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
    {
      throw InputError("config field 'obstacle.vertices[" + std::to_string(i) +
                       "]': expected [x, y]");
    }
    vertices.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return r.guarded("vertices", [&] { return Obstacle::polygon(std::move(vertices)); });
}

void parse_source(const json &v, RunConfig &c)
{
  if (v.is_string() && v.get<std::string>() == "zero")
  {
    c.zero_source = true;
    return;
  }
  if (!v.is_object())
  {
    throw InputError("config field 'source': expected \"zero\" or an object");
  }
  Reader r{v, "source"};
  r.only({"kind", "center", "radius", "amplitude", "mode"});
  c.source.kind =
      r.guarded("kind", [&] { return primitive_kind_from_string(r.string("kind", "quartic-bump")); });
  c.source.center = r.point("center", c.source.center);
  c.source.radius = r.positive("radius", c.source.radius);
  c.source.amplitude = r.number("amplitude", c.source.amplitude);
  const std::string mode = r.string("mode", "deterministic");
  if (mode == "deterministic")
  {
    c.source_mode = SourceMode::Deterministic;
  }
  else if (mode == "random-amplitude")
  {
    c.source_mode = SourceMode::RandomAmplitude;
  }
  else
  {
    r.fail("mode", "expected deterministic or random-amplitude");
  }
}

std::vector<double> parse_k_values(const Reader &r)
{
  std::vector<double> ks;
  if (r.has("k_values"))
  {
    const auto &v = r.obj.at("k_values");
    if (!v.is_array())
    {
      r.fail("k_values", "expected an array of numbers");
    }
    for (const auto &x : v)
    {
      if (!x.is_number())
      {
        r.fail("k_values", "expected an array of numbers");
      }
      ks.push_back(x.get<double>());
    }
  }
  if (r.has("k_range"))
  {
    if (!ks.empty())
    {
      r.fail("k_range", "give either k_values or k_range, not both");
    }
    Reader kr{r.obj.at("k_range"), "k_range"};
    if (!kr.obj.is_object())
    {
      r.fail("k_range", "expected {\"start\", \"stop\", \"step\"}");
    }
    kr.only({"start", "stop", "step"});
    const double start = kr.positive("start", 2.0);
    const double stop = kr.positive("stop", 20.0);
    const double step = kr.positive("step", 1.0);
    if (stop < start)
    {
      r.fail("k_range", "stop must not be below start");
    }
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
    {
      ks.push_back(start + i * step);
    }
  }
  return ks;
}

}  // namespace

RunConfig parse_run_config(const std::string &text, const std::filesystem::path &base_dir)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    // The parser's message carries the line and column.
    throw InputError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object())
  {
    throw InputError("malformed config: top level must be an object");
  }

  RunConfig c;
  c.base_dir = base_dir;
  Reader r{doc, ""};
  r.only({"subcommand", "field_spec", "seed", "sample_index", "obstacle", "k", "k0", "N", "h",
          "pollution", "closure", "fourier_modes", "delta", "mu1", "mu2", "resolution",
          "condition_resolution", "mode", "source", "C1_formula", "aggregate_constants",
          "fem_tolerance", "k_values", "k_range", "tau1", "tau2", "medium_label", "M",
          "quadrature_points", "domain_measure", "output_dir", "export_mesh",
          "export_solution", "workers"});

  if (r.has("subcommand"))
  {
    c.subcommand = r.guarded("subcommand",
                             [&] { return subcommand_from_string(r.string("subcommand", "")); });
    c.declared_subcommand = c.subcommand;
  }
  if (r.has("field_spec"))
  {
    const auto &fs = doc.at("field_spec");
    if (fs.is_string())
    {
      auto path = std::filesystem::path(fs.get<std::string>());
      if (path.is_relative())
      {
        path = base_dir / path;
      }
      if (!std::filesystem::exists(path))
      {
        r.fail("field_spec", "file '" + path.string() + "' does not exist");
      }
      c.field_spec_path = path;
      c.field_spec = r.guarded("field_spec", [&] { return load_field_spec(path); });
    }
    else if (fs.is_object())
    {
      c.field_spec = r.guarded("field_spec", [&] { return field_spec_from_json(fs.dump()); });
    }
    else
    {
      r.fail("field_spec", "expected a path or an inline field spec object");
    }
  }
  if (r.has("seed"))
  {
    if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
    {
      r.fail("seed", "expected a nonnegative integer");
    }
    if (doc.at("seed").is_number_integer() && doc.at("seed").get<std::int64_t>() < 0)
    {
      r.fail("seed", "expected a nonnegative integer");
    }
    c.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (r.has("sample_index"))
  {
    c.sample_index = r.integer("sample_index", 0);
    if (*c.sample_index < 0)
    {
      r.fail("sample_index", "must be nonnegative");
    }
  }
  if (r.has("obstacle"))
  {
    c.obstacle = parse_obstacle(doc.at("obstacle"));
  }

  c.k = r.positive("k", c.k);
  c.k0 = r.positive("k0", c.k0);
  c.N = static_cast<int>(r.integer("N", c.N));
  if (c.N < 1)
  {
    r.fail("N", "must be at least 1");
  }
  if (r.has("h"))
  {
    c.h = r.positive("h", 0.0);
  }
  if (r.has("pollution"))
  {
    Reader p{doc.at("pollution"), "pollution"};
    if (!p.obj.is_object())
    {
      r.fail("pollution", "expected an object");
    }
    p.only({"h_max", "kh_max", "constant"});
    c.policy.h_max = p.positive("h_max", c.policy.h_max);
    c.policy.kh_max = p.positive("kh_max", c.policy.kh_max);
    c.policy.pollution_constant = p.positive("constant", c.policy.pollution_constant);
  }
  const std::string closure = r.string("closure", "impedance");
  if (closure == "impedance")
  {
    c.closure = BoundaryClosure::Kind::Impedance;
  }
  else if (closure == "dtn")
  {
    c.closure = BoundaryClosure::Kind::DtN;
  }
  else
  {
    r.fail("closure", "expected impedance or dtn");
  }
  if (r.has("fourier_modes"))
  {
    c.fourier_modes = static_cast<int>(r.integer("fourier_modes", 0));
    if (*c.fourier_modes < 8)
    {
      r.fail("fourier_modes", "must be at least 8");
    }
  }

  c.delta = r.number("delta", c.delta);
  if (!(c.delta > 0.0 && c.delta < 1.0))
  {
    r.fail("delta", "must lie in (0, 1)");
  }
  if (r.has("mu1"))
  {
    c.mu1 = r.positive("mu1", 1.0);
  }
  if (r.has("mu2"))
  {
    c.mu2 = r.positive("mu2", 1.0);
  }
  c.resolution = static_cast<int>(r.integer("resolution", c.resolution));
  if (c.resolution < 32)
  {
    r.fail("resolution", "must be at least 32");
  }
  c.condition_resolution = static_cast<int>(r.integer("condition_resolution", c.condition_resolution));
  if (c.condition_resolution < 16)
  {
    r.fail("condition_resolution", "must be at least 16");
  }
  if (r.has("mode"))
  {
    c.mode = r.guarded("mode", [&] { return nontrap_mode_from_string(r.string("mode", "")); });
  }
  if (r.has("source"))
  {
    parse_source(doc.at("source"), c);
  }
  if (r.has("C1_formula"))
  {
    c.formula =
        r.guarded("C1_formula", [&] { return c1_formula_from_string(r.string("C1_formula", "")); });
  }
  const std::string agg = r.string("aggregate_constants", "spec-certified");
  if (agg == "spec-certified")
  {
    c.aggregate_constants = AggregateConstants::SpecCertified;
  }
  else if (agg == "per-sample")
  {
    c.aggregate_constants = AggregateConstants::PerSample;
  }
  else
  {
    r.fail("aggregate_constants", "expected spec-certified or per-sample");
  }
  c.fem_tolerance = r.number("fem_tolerance", c.fem_tolerance);
  if (!(c.fem_tolerance >= 0.0))
  {
    r.fail("fem_tolerance", "must be nonnegative");
  }

  c.k_values = parse_k_values(r);
  if (r.has("tau1"))
  {
    c.tau1 = r.positive("tau1", 1.0);
  }
  if (r.has("tau2"))
  {
    c.tau2 = r.positive("tau2", 1.0);
  }
  c.medium_label = r.string("medium_label", c.medium_label);

  c.M = static_cast<int>(r.integer("M", c.M));
  c.quadrature_points = static_cast<int>(r.integer("quadrature_points", c.quadrature_points));
  c.domain_measure = r.positive("domain_measure", c.domain_measure);

  if (r.has("output_dir"))
  {
    auto out = std::filesystem::path(r.string("output_dir", "out"));
    c.output_dir = out.is_relative() ? base_dir / out : out;
  }
  else
  {
    c.output_dir = base_dir / "out";
  }
  c.export_mesh = r.boolean("export_mesh", false);
  c.export_solution = r.boolean("export_solution", false);
  c.workers = static_cast<int>(r.integer("workers", 0));
  if (c.workers < 0)
  {
    r.fail("workers", "must be nonnegative (0 selects the hardware concurrency)");
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw InputError("cannot read config '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return parse_run_config(buf.str(), dir);
}

}  // namespace stochelm::tools
