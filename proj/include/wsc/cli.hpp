#ifndef WSC_CLI_HPP
#define WSC_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wsc/scalar.hpp"

namespace wsc::cli {

enum class Command { build_convex, counterexample, verify, extend, demo_linf };

const char* to_string(Command command);
Command parse_command(const std::string& text);

// Exit codes.
inline constexpr int kPass = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kInputError = 2;

struct RunConfig {
  Command command = Command::counterexample;
  std::string input_path;  // plan.json for verify / extend
  Precision precision = Precision::Rational;
  std::size_t depth = 8;
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  // counterexample
  std::string family = "c0-partial-sums";  // family kind or a JSON file
  std::string probe = "canonical";         // canonical | decreasing | JSON file
  std::string case_choice = "auto";        // auto | 1..4 | case name
  std::optional<std::string> q;
  std::string target_z = "1/2";
  std::size_t terms = 0;  // family members to scan; 0 grows the scan until the depth fits
  std::size_t trials = 1000;
  std::optional<std::string> gap_floor;

  // build-convex
  std::string sequence;
  std::string mode = "prop41";  // prop41 | lemma | plan
  std::string knots;            // lemma mode
  std::optional<std::string> limit_z;

  // verify
  std::vector<std::string> checks;  // empty runs every applicable check
  std::optional<std::string> quotients_path;

  // extend
  std::size_t dimension = 5;
  std::string direction_h;  // empty picks the standard unit vector

  // demo-linf
  std::size_t n_max = 50;
};

// Executes one command, writing artifacts into out_dir (or $WSC_FORGE_OUT).
// Summary lines go to out, diagnostics to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int run(const RunConfig& config);

// Parses argv with the wsc_forge flag set and calls run.
int main(int argc, const char* const* argv);

}  // namespace wsc::cli

#endif  // WSC_CLI_HPP
