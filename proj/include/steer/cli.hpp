#pragma once

// Command implementations behind the `steer` executable. Argument parsing
// lives in tools/; everything here takes a validated RunConfig and writes to
// a stream, so the commands are testable without a process boundary.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "steer/criteria.hpp"
#include "steer/radii.hpp"

namespace steer::cli {

enum class Command { Radii, Verify, ConjectureScan, Bound };
enum class OutputFormat { Csv, Json };
enum class Level { Two, Projective };

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kInputError = 2,
  kSolverFailure = 3,
};

struct ToleranceOverrides {
  std::optional<double> feasibility;  // SDP feasibility gap for `bound`
};

inline constexpr int kScalarDimMax = 100000;
inline constexpr int kMatrixDimMax = 8;

struct RunConfig {
  Command command = Command::Radii;
  int d_min = 2;
  int d_max = 2;
  std::vector<radii::FamilyKind> families{radii::FamilyKind::Werner};
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 20240601;
  std::size_t samples = 100000;
  ToleranceOverrides tolerances;
  criteria::IsotropicDenominator isotropic_denominator = criteria::IsotropicDenominator::AsPrinted;
  std::string state_file;
  radii::FamilyKind anchor = radii::FamilyKind::Werner;
  Level level = Level::Two;
  std::string out_file;  // empty: stdout
};

/// Throws std::invalid_argument on out-of-range settings.
void validate(const RunConfig& config);

inline constexpr const char* kRadiiSchema = "steer-radii/1";
inline constexpr const char* kScanSchema = "steer-conjecture-scan/1";

void radii_table(const RunConfig& config, std::ostream& out);
void conjecture_scan(const RunConfig& config, std::ostream& out);
/// Returns false if any property failed.
bool verify_report(const RunConfig& config, std::ostream& out);
void bound_report(const RunConfig& config, std::ostream& out);

/// Validates, dispatches and maps exceptions to exit codes. Diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

Level parse_level(const std::string& text);
std::string to_string(Level level);

}  // namespace steer::cli
