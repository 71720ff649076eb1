#include "stochelm/field_io.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "stochelm/report_io.hpp"

namespace stochelm
{

namespace detail
{

std::string read_text_file(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw InputError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

namespace
{

using detail::json;

json primitive_json(const FieldPrimitive &p)
{
  return json{{"kind", to_string(p.kind)},
              {"center", detail::point_json(p.center)},
              {"radius", p.radius},
              {"amplitude", p.amplitude}};
}

FieldPrimitive parse_primitive(const json &v, const std::string &where)
{
  FieldPrimitive p;
  const auto &kind = detail::require(v, "kind", where);
  if (!kind.is_string())
  {
    throw InputError(where + ".kind: expected a string");
  }
  try
  {
    p.kind = primitive_kind_from_string(kind.get<std::string>());
  }
  catch (const InputError &e)
  {
    throw InputError(where + ".kind: " + e.what());
  }
  p.center = detail::as_point(detail::require(v, "center", where), where + ".center");
  p.radius = detail::as_number(detail::require(v, "radius", where), where + ".radius");
  p.amplitude = detail::as_number(detail::require(v, "amplitude", where), where + ".amplitude");
  return p;
}

std::vector<FieldPrimitive> parse_scalar_terms(const json &doc, const char *key)
{
  std::vector<FieldPrimitive> terms;
  if (!doc.contains(key))
  {
    return terms;
  }
  const auto &arr = doc.at(key);
  if (!arr.is_array())
  {
    throw InputError(std::string(key) + ": expected an array");
  }
  for (std::size_t i = 0; i < arr.size(); ++i)
  {
    terms.push_back(parse_primitive(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return terms;
}

std::vector<MatrixTerm> parse_matrix_terms(const json &doc, const char *key)
{
  std::vector<MatrixTerm> terms;
  if (!doc.contains(key))
  {
    return terms;
  }
  const auto &arr = doc.at(key);
  if (!arr.is_array())
  {
    throw InputError(std::string(key) + ": expected an array");
  }
  for (std::size_t i = 0; i < arr.size(); ++i)
  {
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    MatrixTerm t;
    t.primitive = parse_primitive(arr[i], where);
    t.direction = detail::as_matrix(detail::require(arr[i], "matrix", where), where + ".matrix");
    terms.push_back(t);
  }
  return terms;
}

json matrix_terms_json(const std::vector<MatrixTerm> &terms)
{
  json arr = json::array();
  for (const auto &t : terms)
  {
    json entry = primitive_json(t.primitive);
    entry["matrix"] = detail::matrix_json(t.direction);
    arr.push_back(entry);
  }
  return arr;
}

json scalar_terms_json(const std::vector<FieldPrimitive> &terms)
{
  json arr = json::array();
  for (const auto &t : terms)
  {
    arr.push_back(primitive_json(t));
  }
  return arr;
}

}  // namespace

std::string field_spec_to_json(const RandomFieldSpec &spec)
{
  json doc;
  doc["R"] = spec.R();
  doc["seed"] = spec.seed();
  doc["J_A"] = spec.J_A();
  doc["J_n"] = spec.J_n();
  doc["A0"] = matrix_terms_json(spec.A0().terms);
  doc["n0"] = scalar_terms_json(spec.n0().terms);
  doc["matrix_perturbations"] = matrix_terms_json(spec.matrix_perturbations());
  doc["scalar_perturbations"] = scalar_terms_json(spec.scalar_perturbations());
  return doc.dump(2) + "\n";
}

RandomFieldSpec field_spec_from_json(const std::string &text)
{
  const json doc = detail::parse_document(text, "field spec");
  if (!doc.is_object())
  {
    throw InputError("field spec: expected a JSON object");
  }
  const double R = detail::as_number(detail::require(doc, "R", "field spec"), "R");
  std::uint64_t seed = 0;
  if (doc.contains("seed"))
  {
    const auto &s = doc.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                   s.get<std::int64_t>() < 0))
    {
      throw InputError("seed: expected a non-negative integer");
    }
    seed = s.get<std::uint64_t>();
  }
  BaseMatrixField A0{parse_matrix_terms(doc, "A0")};
  BaseScalarField n0{parse_scalar_terms(doc, "n0")};
  auto mp = parse_matrix_terms(doc, "matrix_perturbations");
  auto sp = parse_scalar_terms(doc, "scalar_perturbations");
  auto check_count = [&](const char *key, std::size_t actual)
  {
    if (!doc.contains(key))
    {
      return;
    }
    const auto &v = doc.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() != static_cast<std::int64_t>(actual))
    {
      throw InputError(std::string(key) + ": declared count does not match the number of terms (" +
                       std::to_string(actual) + ")");
    }
  };
  check_count("J_A", mp.size());
  check_count("J_n", sp.size());
  return RandomFieldSpec(R, std::move(A0), std::move(n0), std::move(mp), std::move(sp), seed);
}

RandomFieldSpec load_field_spec(const std::filesystem::path &path)
{
  try
  {
    return field_spec_from_json(detail::read_text_file(path));
  }
  catch (const InputError &e)
  {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save_field_spec(const RandomFieldSpec &spec, const std::filesystem::path &path)
{
  write_file_atomically(path, field_spec_to_json(spec));
}

}  // namespace stochelm
