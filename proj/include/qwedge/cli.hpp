#ifndef QWEDGE_CLI_HPP
#define QWEDGE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qwedge {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point of `qwalk-edge`. `args` excludes the program name.
/// Returns 0 on success, 2 on bad flags, 1 on I/O failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args);

}  // namespace qwedge

#endif  // QWEDGE_CLI_HPP
