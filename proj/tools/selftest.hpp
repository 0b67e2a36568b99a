#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace thinwg::selftest {

/// Pass/fail thresholds of the acceptance suite.
namespace tol {
inline constexpr double kFreeSpaceAbs = 1e-6;
inline constexpr double kDecaySlope = -5.0;
inline constexpr double kNonResonantRel = 0.05;
inline constexpr double kResonantRel = 0.1;
inline constexpr double kNonResonantOrder = 2.0;
inline constexpr double kNonResonantOrderBand = 0.4;
inline constexpr double kResonantOrderMin = 1.1;
inline constexpr double kTable1Khat = 0.005;
inline constexpr double kTable1Nbar = 0.005;
inline constexpr double kTable1X0 = 0.05;
inline constexpr double kTable1Alpha = 0.15;
inline constexpr double kTable1HPeak = 0.25;
inline constexpr double kTable2HPeak = 0.10;
inline constexpr double kTable2HLin = 0.25;
inline constexpr double kPeakLawR2 = 0.9;
inline constexpr double kPeakLawC = 0.11824;
inline constexpr double kPeakLawCRel = 0.30;
inline constexpr double kReciprocityRel = 1e-6;
inline constexpr double kParityRel = 1e-9;
inline constexpr double kImageSumRel = 1e-13;
inline constexpr double kHelmholtzRel = 1e-4;
}  // namespace tol

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id = 0;
  std::string title;
  std::function<Outcome()> run;
};

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Criteria 1 to 9 in order.
const std::vector<Criterion>& criteria();

/// Runs the selected criteria (all when ids is empty) and prints one
/// "criterion N [PASS|FAIL] title: detail (Ts)" line per criterion to out.
/// An exception inside a criterion counts as a failure.
std::vector<Result> run(std::span<const int> ids, std::ostream& out);

std::string format_line(const Result& result);

/// Checks that serialized reports carry the fixed top-level keys with the
/// expected JSON types, for an empty and a fully populated report.
Outcome report_schema();

}  // namespace thinwg::selftest
