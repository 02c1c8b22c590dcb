// Copyright 2026 The jpegfp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JPEGFP_CLI_H_
#define JPEGFP_CLI_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jpegfp/entropy_scanner.h"

namespace jpegfp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitFormat = 2,
  kExitVerify = 3,
};

enum class Command { kEncrypt, kDecrypt, kStats, kVerify, kDump };
enum class ReportFormat { kJson, kTable };

struct CliConfig {
  Command command = Command::kStats;
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> output;
  std::string key_hex;
  std::string tweak_hex;
  Target target = Target::kBoth;
  ReportFormat format = ReportFormat::kTable;
  bool in_place = false;
};

// Environment variables consulted when --key / --tweak are absent.
inline constexpr char kKeyEnv[] = "JPEGFP_KEY";
inline constexpr char kTweakEnv[] = "JPEGFP_TWEAK";

// Executes a validated configuration. Reports go to `out`, diagnostics to
// `err`.
int Run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (argv[0] is the program name) and runs the command.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace jpegfp::cli

#endif  // JPEGFP_CLI_H_
