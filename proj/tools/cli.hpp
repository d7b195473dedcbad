#ifndef SFWG_TOOLS_CLI_HPP
#define SFWG_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace sfwg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitNumerical = 4;

/// Runs the batch front-end. Results go to `out` (or the --out file),
/// one-line diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfwg::cli

#endif
