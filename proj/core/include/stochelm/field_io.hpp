#ifndef STOCHELM_FIELD_IO_HPP
#define STOCHELM_FIELD_IO_HPP

#include <filesystem>
#include <string>

#include "stochelm/fields.hpp"

namespace stochelm
{

// JSON document layout:
//   { "R": 1.0, "seed": 7, "J_A": 1, "J_n": 1,
//     "A0": [ {"kind": "quartic-bump", "center": [x, y], "radius": r, "amplitude": a,
//              "matrix": [[m00, m01], [m10, m11]]}, ... ],
//     "n0": [ {"kind": ..., "center": ..., "radius": ..., "amplitude": ...}, ... ],
//     "matrix_perturbations": [ same as A0 entries ],
//     "scalar_perturbations": [ same as n0 entries ] }
// Missing arrays are empty; J_A / J_n are optional and must match the array lengths.
// Doubles are written in shortest round-trip form, so save/load is lossless.
std::string field_spec_to_json(const RandomFieldSpec &spec);
RandomFieldSpec field_spec_from_json(const std::string &text);

RandomFieldSpec load_field_spec(const std::filesystem::path &path);
void save_field_spec(const RandomFieldSpec &spec, const std::filesystem::path &path);

}  // namespace stochelm

#endif  // STOCHELM_FIELD_IO_HPP
