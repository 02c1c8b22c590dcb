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

#include "jpegfp/cli.h"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "CLI11.hpp"
#include "jpegfp/analysis.h"
#include "jpegfp/cipher.h"
#include "jpegfp/document.h"
#include "jpegfp/error.h"

namespace jpegfp::cli {

namespace fs = std::filesystem;

namespace {

// Thrown for problems the user can fix on the command line (exit 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<uint8_t> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

// Writes next to the destination and renames, so readers never observe a
// partial file.
void WriteFileAtomic(const fs::path& path, const std::vector<uint8_t>& bytes) {
  const fs::path tmp =
      path.string() + ".jpegfp-tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw UsageError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw UsageError("cannot replace " + path.string());
  }
}

bool IsJpegName(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".jpg" || ext == ".jpeg";
}

// Regular JPEG files under `dir`, sorted for deterministic output.
std::vector<fs::path> JpegFilesUnder(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && IsJpegName(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

bool SamePath(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  if (fs::exists(a, ec) && fs::exists(b, ec)) return fs::equivalent(a, b, ec);
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

SecretKey KeyFrom(const CliConfig& config) {
  if (config.key_hex.empty()) {
    throw UsageError(std::string("a key is required (--key or ") + kKeyEnv + ")");
  }
  try {
    return SecretKey::FromHex(config.key_hex, config.tweak_hex);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

int RunTransform(const CliConfig& config, std::ostream& err) {
  if (config.inputs.size() != 1) {
    throw UsageError("expected exactly one input path");
  }
  const SecretKey key = KeyFrom(config);
  const fs::path& input = config.inputs.front();
  fs::path output;
  if (config.in_place) {
    if (config.output.has_value() && !SamePath(*config.output, input)) {
      throw UsageError("--in-place takes no separate output path");
    }
    output = input;
  } else {
    if (!config.output.has_value()) {
      throw UsageError("an output path is required (or pass --in-place)");
    }
    output = *config.output;
    if (SamePath(input, output)) {
      throw UsageError("output path equals input path; pass --in-place");
    }
  }

  std::vector<std::pair<fs::path, fs::path>> jobs;
  if (fs::is_directory(input)) {
    for (const fs::path& file : JpegFilesUnder(input)) {
      jobs.emplace_back(file, output / fs::relative(file, input));
    }
  } else {
    jobs.emplace_back(input, output);
  }

  const bool encrypt = config.command == Command::kEncrypt;
  int status = kExitOk;
  for (const auto& [in, out] : jobs) {
    try {
      const std::vector<uint8_t> bytes = ReadFile(in);
      const std::vector<uint8_t> result =
          encrypt ? EncryptFile(bytes, key, config.target)
                  : DecryptFile(bytes, key, config.target);
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      WriteFileAtomic(out, result);
      err << (encrypt ? "encrypted " : "decrypted ") << in.string() << " -> "
          << out.string() << " (" << result.size() << " bytes, target "
          << TargetName(config.target) << ")\n";
    } catch (const Error& e) {
      err << "error: " << in.string() << ": " << e.what() << "\n";
      status = std::max(status, static_cast<int>(kExitFormat));
    }
  }
  return status;
}

int RunStats(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.empty() || config.inputs.size() > 2) {
    throw UsageError("stats takes an input and an optional encrypted file");
  }
  // Without a key the report still reflects the real classification; the
  // all-zero key only serves to produce the encrypted size.
  const SecretKey key = config.key_hex.empty()
                            ? SecretKey(std::vector<uint8_t>(16, 0))
                            : KeyFrom(config);
  std::vector<fs::path> files;
  if (config.inputs.size() == 1 && fs::is_directory(config.inputs[0])) {
    files = JpegFilesUnder(config.inputs[0]);
  } else {
    files.push_back(config.inputs[0]);
  }

  int status = kExitOk;
  for (const fs::path& file : files) {
    try {
      const std::vector<uint8_t> original = ReadFile(file);
      const std::vector<uint8_t> encrypted =
          config.inputs.size() == 2 ? ReadFile(config.inputs[1])
                                    : EncryptFile(original, key, config.target);
      const ScanReport report = ComputeReport(original, encrypted);
      if (config.format == ReportFormat::kJson) {
        nlohmann::json j = ReportToJson(report);
        j["file"] = file.string();
        out << j.dump() << "\n";
      } else {
        out << "== " << file.string() << "\n" << ReportToTable(report);
      }
    } catch (const Error& e) {
      err << "error: " << file.string() << ": " << e.what() << "\n";
      status = std::max(status, static_cast<int>(kExitFormat));
    }
  }
  return status;
}

int RunVerify(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.size() != 2) {
    throw UsageError("verify takes ORIGINAL and ENCRYPTED");
  }
  const std::vector<uint8_t> original = ReadFile(config.inputs[0]);
  const std::vector<uint8_t> encrypted = ReadFile(config.inputs[1]);
  try {
    ParseDocument(original);
  } catch (const Error& e) {
    err << "error: " << config.inputs[0].string() << ": " << e.what() << "\n";
    return kExitFormat;
  }
  std::optional<StructureMismatch> mismatch;
  try {
    mismatch = CompareStructure(original, encrypted);
  } catch (const Error& e) {
    err << "verify failed: " << config.inputs[1].string() << ": " << e.what()
        << "\n";
    return kExitVerify;
  }
  if (mismatch.has_value()) {
    err << "verify failed at byte offset " << mismatch->offset << ": "
        << mismatch->description << "\n";
    return kExitVerify;
  }
  out << "ok: " << original.size() << " bytes, identical structure\n";
  return kExitOk;
}

int RunDump(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.size() != 1) {
    throw UsageError("dump takes exactly one input file");
  }
  const fs::path& file = config.inputs.front();
  try {
    const std::vector<uint8_t> bytes = ReadFile(file);
    const auto format = config.format == ReportFormat::kJson ? DumpFormat::kJson
                                                             : DumpFormat::kText;
    for (const LabeledSpan& span : LabelDocument(ParseDocument(bytes))) {
      for (const ByteClass& c : ClassifyEntropyBytes(span.labels, config.target)) {
        out << FormatByteClass(span.labels, c, format) << "\n";
      }
    }
  } catch (const Error& e) {
    err << "error: " << file.string() << ": " << e.what() << "\n";
    return kExitFormat;
  }
  return kExitOk;
}

}  // namespace

int Run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::kEncrypt:
      case Command::kDecrypt: return RunTransform(config, err);
      case Command::kStats: return RunStats(config, out, err);
      case Command::kVerify: return RunVerify(config, out, err);
      case Command::kDump: return RunDump(config, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{
      "Size-preserving selective encryption of baseline JPEG files.\n"
      "Only additional bits inside the entropy-coded data are changed; the\n"
      "output keeps the exact byte length and decodes with any JPEG decoder."};
  app.require_subcommand(1);

  CliConfig config;
  std::string target_name = "both";
  std::string format_name;
  std::vector<std::string> positional;

  auto add_key = [&](CLI::App* sub) {
    sub->add_option("--key", config.key_hex,
                    std::string("128-bit key as 32 hex digits (default: $") +
                        kKeyEnv + ")");
    sub->add_option("--tweak", config.tweak_hex,
                    std::string("64-bit tweak as 16 hex digits (default: $") +
                        kTweakEnv + " or zero)");
  };
  auto add_target = [&](CLI::App* sub) {
    sub->add_option("--target", target_name,
                    "coefficients to encrypt: dc, ac or both. Files carry no "
                    "mode marker: decrypt with the same target used to encrypt")
        ->check(CLI::IsMember({"dc", "ac", "both"}, CLI::ignore_case))
        ->capture_default_str();
  };

  CLI::App* encrypt = app.add_subcommand("encrypt", "encrypt a file or directory");
  CLI::App* decrypt = app.add_subcommand("decrypt", "decrypt a file or directory");
  for (CLI::App* sub : {encrypt, decrypt}) {
    add_key(sub);
    add_target(sub);
    sub->add_flag("--in-place", config.in_place, "overwrite the input");
    sub->add_option("paths", positional, "INPUT [OUTPUT]")
        ->required()
        ->expected(1, 2);
  }

  CLI::App* stats = app.add_subcommand(
      "stats", "byte classification and size report for a file or directory");
  add_key(stats);
  stats->add_option("--format", format_name, "json or table")
      ->check(CLI::IsMember({"json", "table"}, CLI::ignore_case));
  stats->add_option("paths", positional, "INPUT [ENCRYPTED]")
      ->required()
      ->expected(1, 2);

  CLI::App* verify = app.add_subcommand(
      "verify", "exit 0 iff ENCRYPTED has ORIGINAL's size and structure");
  verify->add_option("paths", positional, "ORIGINAL ENCRYPTED")
      ->required()
      ->expected(2);

  CLI::App* dump =
      app.add_subcommand("dump", "per-byte classification of the scan data");
  add_target(dump);
  dump->add_option("--format", format_name, "json or table")
      ->check(CLI::IsMember({"json", "table"}, CLI::ignore_case));
  dump->add_option("paths", positional, "INPUT")->required()->expected(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (encrypt->parsed()) config.command = Command::kEncrypt;
  if (decrypt->parsed()) config.command = Command::kDecrypt;
  if (stats->parsed()) config.command = Command::kStats;
  if (verify->parsed()) config.command = Command::kVerify;
  if (dump->parsed()) config.command = Command::kDump;

  config.target = *ParseTarget(target_name);
  std::transform(format_name.begin(), format_name.end(), format_name.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  config.format = format_name == "json" ? ReportFormat::kJson : ReportFormat::kTable;
  if (config.key_hex.empty()) {
    if (const char* env = std::getenv(kKeyEnv)) config.key_hex = env;
  }
  if (config.tweak_hex.empty()) {
    if (const char* env = std::getenv(kTweakEnv)) config.tweak_hex = env;
  }

  const bool transform = config.command == Command::kEncrypt ||
                         config.command == Command::kDecrypt;
  if (transform && positional.size() == 2) {
    config.output = positional[1];
    positional.pop_back();
  }
  config.inputs.assign(positional.begin(), positional.end());
  return Run(config, out, err);
}

}  // namespace jpegfp::cli
