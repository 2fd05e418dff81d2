#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace inflogic::cli {

// Exit statuses.
inline constexpr int kDecided = 0;
inline constexpr int kError = 1;
inline constexpr int kUnknown = 2;

// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Which subcommand reaches which library operation.
struct CoverageEntry {
  std::string module;
  std::string operation;
  std::string subcommand;
  std::string flags;  // the flags selecting the operation, if any
};

const std::vector<CoverageEntry>& coverage_table();

// Names of the registered subcommands, read off the argument parser.
std::vector<std::string> subcommand_names();

}  // namespace inflogic::cli
