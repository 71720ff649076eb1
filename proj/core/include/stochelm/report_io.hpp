#ifndef STOCHELM_REPORT_IO_HPP
#define STOCHELM_REPORT_IO_HPP

#include <filesystem>
#include <string>

#include "stochelm/bounds.hpp"
#include "stochelm/fields.hpp"
#include "stochelm/ntcheck.hpp"
#include "stochelm/uqdriver.hpp"

namespace stochelm
{

// Writes to a sibling temporary file and renames it into place.
void write_file_atomically(const std::filesystem::path &path, const std::string &contents);

// "%.17g"; nan and inf spelled as such.
std::string format_double(double value);

std::string to_string(NontrapMode mode);
NontrapMode nontrap_mode_from_string(const std::string &name);

// JSON documents (two-space indentation, keys in a fixed order). Doubles are written in
// shortest round-trip form, so identical inputs give identical bytes.
std::string certificate_json(const NontrapCertificate &certificate);
std::string condition_report_json(const ConditionReport &report);
std::string bound_report_json(const BoundReport &report);
std::string mc_report_json(const MCReport &report);
std::string sweep_report_json(const SweepReport &report);
std::string noncompactness_json(const NoncompactnessReport &report);

// Tab-separated tables with a header row.
//   samples: index, amplitude, mu1_hat, mu2_hat, grad, l2, weighted, f, residual,
//            quasi_resonance, C1, lhs, rhs, slack, pass
//   sweep:   k, h, vertices, weighted_norm_sq, norm, bound, f_norm_sq, residual,
//            quasi_resonance
//   noncompactness: m followed by the M columns of the distance matrix
std::string samples_tsv(const MCReport &report);
std::string sweep_tsv(const SweepReport &report);
std::string noncompactness_tsv(const NoncompactnessReport &report);

}  // namespace stochelm

#endif  // STOCHELM_REPORT_IO_HPP
