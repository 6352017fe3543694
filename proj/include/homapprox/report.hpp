#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "homapprox/approx.hpp"
#include "homapprox/series.hpp"
#include "homapprox/verify.hpp"

namespace homapprox {

enum class Mode { kBoth, kNonautonomous, kAutonomous };
enum class Format { kText, kLatex, kJson };

Mode parse_mode(std::string_view text);
Format parse_format(std::string_view text);

struct JobConfig {
  std::filesystem::path input;
  std::optional<int> max_order;
  Mode mode = Mode::kBoth;
  Format format = Format::kText;
  bool verify = false;
  std::optional<std::filesystem::path> out_dir;
  int verbosity = 0;
};

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kInputError = 2;
inline constexpr int kNotAccessible = 3;
inline constexpr int kNoAutonomous = 4;
inline constexpr int kInternal = 5;
}  // namespace exit_code

inline constexpr int kMaxDimension = 10;

// System description:
//   n = 3
//   a1 = 0
//   b1 = -cos(x1)
//   ...
// One assignment per line, every a_i and b_i present exactly once, '#'
// starts a comment. Throws InputError (or ParseError) on malformed input.
ControlSystem parse_system(std::string_view text);
ControlSystem read_system_file(const std::filesystem::path& path);

// The same format; parse_system(format_system(s)) reproduces s after simplification.
std::string format_system(const ControlSystem& sys);
std::string format_system(const PolynomialSystem& sys);

std::string render_text(const ControlSystem& sys, const ApproximationResult& result, Mode mode,
                        const VerificationReport* verification);
std::string render_latex(const ControlSystem& sys, const ApproximationResult& result, Mode mode,
                         const VerificationReport* verification);
nlohmann::ordered_json render_json(const ControlSystem& sys, const ApproximationResult& result, Mode mode,
                                   const VerificationReport* verification);

// Runs a job end to end; the report goes to `out` or to a file in
// cfg.out_dir, diagnostics go to `err`. Returns one of the exit codes above.
int run(const JobConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace homapprox
