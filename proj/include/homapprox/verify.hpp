#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "homapprox/algebra.hpp"
#include "homapprox/approx.hpp"
#include "homapprox/series.hpp"

namespace homapprox {

// Piecewise constant control with equal pieces over whatever horizon it is
// applied on: on [0, theta], u(s) = values[floor(s / theta * pieces)].
class ControlSignal {
 public:
  explicit ControlSignal(std::vector<double> values);
  static ControlSignal constant(double value) { return ControlSignal({value}); }
  // 4 to 16 pieces with values in {-1, -0.5, 0.5, 1}.
  static ControlSignal random(std::mt19937_64& rng);

  std::size_t pieces() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double piece_value(std::size_t k) const { return values_[k]; }

 private:
  std::vector<double> values_;
};

struct MomentValues {
  double theta = 0;
  std::map<Word, double> values;

  double at(const Word& w) const;
  // Linear extension; the empty word counts as 1.
  double evaluate(const AlgElem& e) const;
};

// Fixed-step RK4 with at least `min_steps` steps over [0, theta], aligned to
// the control pieces.
inline constexpr int kDefaultSteps = 2000;

MomentValues evaluate_moments(const ControlSignal& u, double theta, int max_order, int min_steps = kDefaultSteps);

// x(0) for x' = a + b u integrated backward from x(theta) = 0. Throws
// NumericalError when the state stops being finite.
std::vector<double> backward_endpoint(const ControlSystem& sys, const ControlSignal& u, double theta,
                                      int min_steps = kDefaultSteps);

// Sum of v_w xi_w over all words of the table.
std::vector<double> series_endpoint(const SeriesTable& table, const MomentValues& moments);

struct OrderCheck {
  std::vector<double> thetas;
  std::vector<double> residuals;
  std::vector<bool> used;  // false for residuals at floating noise level
  double slope = 0;        // NaN when fewer than two residuals are usable

  nlohmann::ordered_json to_json() const;
};

inline constexpr double kNoiseFloor = 1e-14;

OrderCheck order_check(const ControlSystem& sys, const SeriesTable& table, const ControlSignal& u,
                       const std::vector<double>& thetas);

// theta_0 * 2^-j for j = 0 .. count-1.
std::vector<double> geometric_thetas(double theta0 = 0.2, int count = 6);

// Component k of the output system's series equals ell_tilde[k] at order
// w_k and vanishes below it. Returns the first mismatch as text, or empty.
std::string self_consistency_error(const PolynomialSystem& output, const Projection& proj);

struct VerificationReport {
  struct Run {
    std::vector<double> controls;
    OrderCheck check;
    bool pass = false;
  };
  int order = 0;
  double slope_threshold = 0;
  std::vector<Run> original;
  // Output systems against their own truncated series (machine noise).
  double nonautonomous_residual = 0;
  std::optional<double> autonomous_residual;
  std::string nonautonomous_consistency;  // empty when consistent
  std::optional<std::string> autonomous_consistency;
  bool pass = false;

  nlohmann::ordered_json to_json() const;
};

inline constexpr double kSlopeMargin = 0.7;
inline constexpr double kSelfResidualTolerance = 1e-12;

VerificationReport verify_result(const ControlSystem& sys, const ApproximationResult& result, int controls = 10,
                                 std::uint64_t seed = 1);

}  // namespace homapprox
