#ifndef STOCHELM_JSON_UTIL_HPP
#define STOCHELM_JSON_UTIL_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "stochelm/errors.hpp"
#include "stochelm/geometry.hpp"

namespace stochelm::detail
{

using json = nlohmann::json;

inline const json &require(const json &obj, const char *key, const std::string &where)
{
  if (!obj.is_object() || !obj.contains(key))
  {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

inline double as_number(const json &v, const std::string &where)
{
  if (!v.is_number())
  {
    throw InputError(where + ": expected a number");
  }
  return v.get<double>();
}

inline Vec2 as_point(const json &v, const std::string &where)
{
  if (!v.is_array() || v.size() != 2)
  {
    throw InputError(where + ": expected a 2-element array");
  }
  return {as_number(v[0], where + "[0]"), as_number(v[1], where + "[1]")};
}

inline json point_json(const Vec2 &p) { return json::array({p.x(), p.y()}); }

inline Mat2 as_matrix(const json &v, const std::string &where)
{
  if (!v.is_array() || v.size() != 2)
  {
    throw InputError(where + ": expected a 2x2 nested array");
  }
  Mat2 m;
  for (int i = 0; i < 2; ++i)
  {
    const Vec2 row = as_point(v[i], where + "[" + std::to_string(i) + "]");
    m(i, 0) = row.x();
    m(i, 1) = row.y();
  }
  return m;
}

inline json matrix_json(const Mat2 &m)
{
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

inline json parse_document(const std::string &text, const std::string &where)
{
  try
  {
    return json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw InputError(where + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path &path);

}  // namespace stochelm::detail

#endif  // STOCHELM_JSON_UTIL_HPP
