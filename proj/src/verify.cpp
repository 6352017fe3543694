#include "homapprox/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homapprox/error.hpp"

namespace homapprox {

// --- controls -------------------------------------------------------------

ControlSignal::ControlSignal(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("a control needs at least one piece");
  for (double v : values_) {
    if (!std::isfinite(v) || std::abs(v) > 1) throw InputError("admissible controls satisfy |u| <= 1");
  }
}

ControlSignal ControlSignal::random(std::mt19937_64& rng) {
  static constexpr double kLevels[] = {-1.0, -0.5, 0.5, 1.0};
  std::uniform_int_distribution<int> pieces(4, 16);
  std::uniform_int_distribution<int> level(0, 3);
  std::vector<double> values(pieces(rng));
  for (auto& v : values) v = kLevels[level(rng)];
  return ControlSignal(std::move(values));
}

// --- moments --------------------------------------------------------------

double MomentValues::at(const Word& w) const {
  if (w.empty()) return 1.0;
  auto it = values.find(w);
  if (it == values.end()) throw InputError("no moment value for " + w.to_string());
  return it->second;
}

double MomentValues::evaluate(const AlgElem& e) const {
  double total = 0;
  for (const auto& [w, c] : e.terms()) total += c.get_d() * at(w);
  return total;
}

namespace {

// Classical RK4 over [from, to] (either direction) with the control
// constant on each piece; f(s, y, u, dy) writes the derivative.
template <class F>
void integrate(std::vector<double>& y, const ControlSignal& u, double theta, int min_steps, bool backward, F f) {
  const std::size_t pieces = u.pieces();
  const int per_piece = std::max(1, static_cast<int>((min_steps + pieces - 1) / pieces));
  const double width = theta / static_cast<double>(pieces);
  const double h = (backward ? -width : width) / per_piece;
  const std::size_t dim = y.size();
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  for (std::size_t step = 0; step < pieces; ++step) {
    const std::size_t p = backward ? pieces - 1 - step : step;
    const double value = u.piece_value(p);
    const double start = backward ? (p + 1) * width : p * width;
    for (int j = 0; j < per_piece; ++j) {
      const double s = start + j * h;
      f(s, y, value, k1);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      f(s + 0.5 * h, tmp, value, k2);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      f(s + 0.5 * h, tmp, value, k3);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
      f(s + h, tmp, value, k4);
      for (std::size_t i = 0; i < dim; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
  }
}

}  // namespace

MomentValues evaluate_moments(const ControlSignal& u, double theta, int max_order, int min_steps) {
  if (!(theta > 0)) throw InputError("horizon must be positive");
  if (max_order < 1) throw InputError("moment order must be at least 1");

  std::vector<Word> words;
  for (int m = 1; m <= max_order; ++m) {
    auto block = enumerate_basis(m);
    words.insert(words.end(), block.begin(), block.end());
  }
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);
  // d xi_w / ds = s^{m1} u(s) xi_{tail}(s)
  std::vector<int> head(words.size());
  std::vector<std::ptrdiff_t> tail(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    head[i] = words[i].first();
    tail[i] = words[i].length() == 1 ? -1 : static_cast<std::ptrdiff_t>(index.at(words[i].suffix(1)));
  }

  std::vector<double> y(words.size(), 0.0);
  std::vector<double> powers(max_order);
  integrate(y, u, theta, min_steps, false, [&](double s, const std::vector<double>& state, double value,
                                               std::vector<double>& dy) {
    powers[0] = 1;
    for (int k = 1; k < max_order; ++k) powers[k] = powers[k - 1] * s;
    for (std::size_t i = 0; i < state.size(); ++i) {
      dy[i] = powers[head[i]] * value * (tail[i] < 0 ? 1.0 : state[tail[i]]);
    }
  });

  MomentValues out;
  out.theta = theta;
  for (std::size_t i = 0; i < words.size(); ++i) out.values.emplace(words[i], y[i]);
  return out;
}

std::vector<double> backward_endpoint(const ControlSystem& sys, const ControlSignal& u, double theta, int min_steps) {
  if (!(theta > 0)) throw InputError("horizon must be positive");
  std::vector<double> x(sys.n, 0.0);
  integrate(x, u, theta, min_steps, true, [&](double s, const std::vector<double>& state, double value,
                                              std::vector<double>& dx) {
    for (int i = 0; i < sys.n; ++i) {
      dx[i] = evaluate(sys.a[i], s, state) + evaluate(sys.b[i], s, state) * value;
    }
  });
  for (double v : x) {
    if (!std::isfinite(v)) throw NumericalError("backward integration left the finite range");
  }
  return x;
}

std::vector<double> series_endpoint(const SeriesTable& table, const MomentValues& moments) {
  std::vector<double> x(table.n, 0.0);
  for (const auto& [w, v] : table.coeffs) {
    if (is_zero(v)) continue;
    const double xi = moments.at(w);
    for (int i = 0; i < table.n; ++i) {
      if (v[i] != 0) x[i] += v[i].get_d() * xi;
    }
  }
  return x;
}

// --- order check ----------------------------------------------------------

nlohmann::ordered_json OrderCheck::to_json() const {
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    runs.push_back({{"theta", thetas[i]}, {"residual", residuals[i]}, {"used", static_cast<bool>(used[i])}});
  }
  nlohmann::ordered_json out;
  out["runs"] = runs;
  if (std::isnan(slope)) {
    out["slope"] = nullptr;
  } else {
    out["slope"] = slope;
  }
  return out;
}

OrderCheck order_check(const ControlSystem& sys, const SeriesTable& table, const ControlSignal& u,
                       const std::vector<double>& thetas) {
  OrderCheck out;
  std::vector<double> lx, ly;
  for (double theta : thetas) {
    MomentValues moments = evaluate_moments(u, theta, table.max_order);
    std::vector<double> series = series_endpoint(table, moments);
    std::vector<double> exact = backward_endpoint(sys, u, theta);
    double r = 0;
    for (int i = 0; i < sys.n; ++i) r = std::max(r, std::abs(series[i] - exact[i]));
    bool use = r > kNoiseFloor;
    out.thetas.push_back(theta);
    out.residuals.push_back(r);
    out.used.push_back(use);
    if (use) {
      lx.push_back(std::log(theta));
      ly.push_back(std::log(r));
    }
  }
  if (lx.size() < 2) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double k = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / k;
    my += ly[i] / k;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  out.slope = sxy / sxx;
  return out;
}

std::vector<double> geometric_thetas(double theta0, int count) {
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(theta0 * std::ldexp(1.0, -j));
  return out;
}

// --- output systems -------------------------------------------------------

std::string self_consistency_error(const PolynomialSystem& output, const Projection& proj) {
  const int n = output.n;
  const int top = *std::max_element(proj.orders.begin(), proj.orders.end());
  SeriesTable table = series_up_to(output.to_control_system(), top);
  for (int k = 0; k < n; ++k) {
    AlgElem component = series_component(table, k);
    AlgElem at_order;
    for (const auto& [w, c] : component.terms()) {
      if (w.order() < proj.orders[k]) {
        return "component " + std::to_string(k + 1) + " has a term " + to_string(c) + "*" + w.to_string() +
               " below order " + std::to_string(proj.orders[k]);
      }
      if (w.order() == proj.orders[k]) at_order.add(w, c);
    }
    if (!(at_order == proj.ell_tilde[k])) {
      return "component " + std::to_string(k + 1) + " is " + at_order.to_string() + " instead of " +
             proj.ell_tilde[k].to_string();
    }
  }
  return {};
}

namespace {

double self_residual(const PolynomialSystem& output, int top, const std::vector<ControlSignal>& controls,
                     const std::vector<double>& thetas) {
  ControlSystem sys = output.to_control_system();
  SeriesTable table = series_up_to(sys, top);
  double worst = 0;
  for (const auto& u : controls) {
    for (double theta : thetas) {
      auto series = series_endpoint(table, evaluate_moments(u, theta, top));
      auto exact = backward_endpoint(sys, u, theta);
      for (int i = 0; i < sys.n; ++i) worst = std::max(worst, std::abs(series[i] - exact[i]));
    }
  }
  return worst;
}

}  // namespace

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& r : original) {
    runs.push_back({{"control", r.controls}, {"order_check", r.check.to_json()}, {"pass", r.pass}});
  }
  nlohmann::ordered_json out;
  out["order"] = order;
  out["slope_threshold"] = slope_threshold;
  out["original"] = runs;
  out["nonautonomous"] = {{"self_residual", nonautonomous_residual},
                          {"consistent", nonautonomous_consistency.empty()},
                          {"detail", nonautonomous_consistency}};
  if (autonomous_residual) {
    out["autonomous"] = {{"self_residual", *autonomous_residual},
                         {"consistent", autonomous_consistency->empty()},
                         {"detail", *autonomous_consistency}};
  }
  out["pass"] = pass;
  return out;
}

VerificationReport verify_result(const ControlSystem& sys, const ApproximationResult& result, int controls,
                                 std::uint64_t seed) {
  VerificationReport report;
  report.order = result.max_order;
  report.slope_threshold = result.max_order + kSlopeMargin;
  const auto thetas = geometric_thetas();

  std::mt19937_64 rng(seed);
  std::vector<ControlSignal> signals;
  for (int c = 0; c < controls; ++c) signals.push_back(ControlSignal::random(rng));

  bool pass = true;
  for (const auto& u : signals) {
    VerificationReport::Run run;
    run.controls = u.values();
    run.check = order_check(sys, result.series, u, thetas);
    run.pass = std::isnan(run.check.slope) || run.check.slope >= report.slope_threshold;
    pass = pass && run.pass;
    report.original.push_back(std::move(run));
  }

  const int top = *std::max_element(result.projection.orders.begin(), result.projection.orders.end());
  report.nonautonomous_residual = self_residual(result.nonautonomous, top, signals, thetas);
  report.nonautonomous_consistency = self_consistency_error(result.nonautonomous, result.projection);
  pass = pass && report.nonautonomous_residual <= kSelfResidualTolerance && report.nonautonomous_consistency.empty();
  if (const auto* autonomous = std::get_if<PolynomialSystem>(&result.autonomous)) {
    report.autonomous_residual = self_residual(*autonomous, top, signals, thetas);
    report.autonomous_consistency = self_consistency_error(*autonomous, result.projection);
    pass = pass && *report.autonomous_residual <= kSelfResidualTolerance && report.autonomous_consistency->empty();
  }
  report.pass = pass;
  return report;
}

}  // namespace homapprox
