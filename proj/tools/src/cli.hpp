#ifndef STOCHELM_TOOLS_CLI_HPP
#define STOCHELM_TOOLS_CLI_HPP

#include <iosfwd>

#include "run_config.hpp"

namespace stochelm::tools
{

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesis = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

// Executes one subcommand and writes its reports under config.output_dir:
//   certify          certificate.json
//   solve            solve.json [mesh.txt] [solution.txt]
//   mc               run.json, samples.tsv
//   sweep            run.json, sweep.tsv
//   demo-noncompact  run.json, noncompact.tsv
// plus metadata.json (timestamps) for every subcommand. All files are written atomically.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

// Command-line entry: `stochelm <subcommand> --config FILE [options]`.
int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace stochelm::tools

#endif  // STOCHELM_TOOLS_CLI_HPP
