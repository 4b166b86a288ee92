#ifndef ASC_TOOLS_COMMANDS_HPP
#define ASC_TOOLS_COMMANDS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "asc/complex.hpp"
#include "asc/walk.hpp"

namespace asc::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Environment variable that redirects relative output paths.
inline constexpr const char* kOutputDirEnv = "ASC_OUTPUT_DIR";

/// Everything needed to regenerate an output artifact byte for byte.
struct RunManifest {
  std::string command;
  int n = 0;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::vector<std::string> outputs;
  std::string version = kToolVersion;

  nlohmann::ordered_json to_json() const;
  /// Single '#'-prefixed line for text and CSV headers.
  std::string comment_line() const;
};

/// Relative paths are placed under $ASC_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& path);

struct SampleOptions {
  int n = 3;
  std::string algorithm = "balanced";  // balanced | kahle
  std::vector<double> p;               // Kahle level probabilities; empty means all ½
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  std::string out = "samples.txt";
  std::string logprob_out;  // optional CSV of per-sample log-probabilities
};

struct WalkOptions {
  int n = 6;
  std::size_t steps = 5000;
  std::string start = "central";  // corner | central | file:PATH
  double lambda = 1.0;
  std::uint64_t seed = 1;
  std::string out = "trace.csv";
  std::string report = "report.json";
  std::string observable = "delta";
};

struct EnumerateOptions {
  int n = 3;
  std::string out = "states.txt";
  std::string summary = "summary.json";
  bool allow_large = false;
};

struct BinOptions {
  std::string in;
  std::string out = "bins.csv";
  std::string residuals = "residuals.csv";
};

struct DiagnoseOptions {
  std::string in;
  std::string observable = "delta";
  std::string out = "report.json";
  std::size_t k_max = 0;  // 0 selects the default
};

struct CompareOptions {
  int n = 6;
  std::size_t budget = 5000;
  std::uint64_t seed = 1;
  std::string out_dir = "compare";
};

void cmd_sample(const SampleOptions& opt, std::ostream& log);
void cmd_walk(const WalkOptions& opt, std::ostream& log);
void cmd_enumerate(const EnumerateOptions& opt, std::ostream& log);
void cmd_bin(const BinOptions& opt, std::ostream& log);
void cmd_diagnose(const DiagnoseOptions& opt, std::ostream& log);
void cmd_compare(const CompareOptions& opt, std::ostream& log);

/// Parses a start specification: corner, central or file:PATH.
LabeledComplex parse_start(const std::string& spec, int n);

/// Reads the transition columns back from a walk trace CSV.
std::vector<WalkTransition> read_trace_csv(std::istream& in);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace asc::cli

#endif  // ASC_TOOLS_COMMANDS_HPP
