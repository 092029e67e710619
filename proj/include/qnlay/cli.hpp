#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace qnlay {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;    // verification failed / game not won
inline constexpr int kExitInput = 2;     // bad input or recognition failure
inline constexpr int kExitUsage = 64;    // unknown flag or subcommand
inline constexpr int kExitInternal = 70;

/// Entry point of the `qnlay` tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

/// Reads QNLAY_LOG (trace, debug, info, warn, error, critical, off) and
/// points the default logger at stderr.
void configure_logging();

}  // namespace qnlay
