// Copyright 2026 The qpi Authors
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

#include "qpi/qram.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "qpi/errors.hpp"

namespace qpi {

namespace {

constexpr double kHighlightN = 1e3;
constexpr double kHighlightInfidelity = 1e-3;

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::abs(b); }

std::vector<double> with_value(std::span<const double> values, double v) {
  std::vector<double> out(values.begin(), values.end());
  if (std::none_of(out.begin(), out.end(), [v](double x) { return near(x, v); })) {
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double query_log(double n, LogBase base) {
  if (!(n >= 2.0)) throw InvalidArgument("QRAM size N must be >= 2");
  return base == LogBase::Two ? std::log2(n) : std::log(n);
}

void QramHardwareParams::validate() const {
  if (!(g_d > 0.0) || !(nu > 0.0) || !(c_d > 0.0)) {
    throw InvalidArgument("g_d, nu and c_d must be positive");
  }
  if (!(g_d < nu)) throw InvalidArgument("g_d must be below the free spectral range nu");
  if (!(kappa_plus_gamma >= 0.0)) throw InvalidArgument("kappa + gamma must be >= 0");
}

double infidelity(double epsilon, double n, LogBase base) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  const double t = query_log(n, base);
  return 0.25 * epsilon * t * t;
}

double epsilon_bound(double one_minus_f, double n, LogBase base) {
  if (!(one_minus_f > 0.0 && one_minus_f < 1.0)) {
    throw InvalidArgument("1 - F must lie in (0, 1)");
  }
  const double t = query_log(n, base);
  return 4.0 * one_minus_f / (t * t);
}

double coupling_floor(const QramHardwareParams& hw) {
  hw.validate();
  const double ratio = hw.g_d / hw.nu;
  return ratio * ratio;
}

double epsilon_from_hardware(const QramHardwareParams& hw) {
  return hw.kappa_plus_gamma * hw.c_d * std::numbers::pi / (2.0 * hw.g_d) + coupling_floor(hw);
}

double decoherence_budget(double epsilon_target, const QramHardwareParams& hw) {
  const double floor = coupling_floor(hw);
  if (epsilon_target < floor) {
    std::ostringstream msg;
    msg << "target error " << epsilon_target << " is below the coupling floor (g_d/nu)^2 = "
        << floor;
    throw InfeasibleError(msg.str());
  }
  return (epsilon_target - floor) * 2.0 * hw.g_d / (hw.c_d * std::numbers::pi);
}

double parse_angular_rate(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  const std::string original = s;
  bool two_pi = false;
  for (const std::string tag : {"*2pi", "2pi*"}) {
    const auto at = s.find(tag);
    if (at != std::string::npos) {
      s.erase(at, tag.size());
      two_pi = true;
      break;
    }
  }
  double scale = 1.0;
  const std::pair<std::string_view, double> units[] = {
      {"GHz", 1e9}, {"MHz", 1e6}, {"kHz", 1e3}, {"Hz", 1.0}};
  for (const auto& [sfx, factor] : units) {
    if (s.size() > sfx.size() && s.ends_with(sfx)) {
      s.resize(s.size() - sfx.size());
      scale = factor;
      break;
    }
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw InvalidArgument("cannot parse rate '" + original + "'");
  }
  return v * scale * (two_pi ? 2.0 * std::numbers::pi : 1.0);
}

std::vector<double> log_space(double lo, double hi, int count) {
  if (count < 1) throw InvalidArgument("range needs at least one point");
  if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("log range needs 0 < lo <= hi");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * k / (count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<FeasibilityCell> feasibility_grid(std::span<const double> n_values,
                                              std::span<const double> one_minus_f_values,
                                              const QramHardwareParams& hw, LogBase base) {
  if (n_values.empty() || one_minus_f_values.empty()) {
    throw InvalidArgument("feasibility grid ranges must be non-empty");
  }
  hw.validate();
  const auto ns = with_value(n_values, kHighlightN);
  const auto fs = with_value(one_minus_f_values, kHighlightInfidelity);
  const double floor = coupling_floor(hw);
  std::vector<FeasibilityCell> grid;
  grid.reserve(ns.size() * fs.size());
  for (double n : ns) {
    for (double f : fs) {
      FeasibilityCell cell{n, f, epsilon_bound(f, n, base), 0.0, false, false};
      if (cell.epsilon >= floor) {
        cell.kappa_plus_gamma = decoherence_budget(cell.epsilon, hw);
        cell.feasible = cell.kappa_plus_gamma >= hw.kappa_plus_gamma;
      }
      cell.highlighted = near(n, kHighlightN) || near(f, kHighlightInfidelity);
      grid.push_back(cell);
    }
  }
  return grid;
}

void write_feasibility_csv(std::ostream& os, std::span<const FeasibilityCell> grid) {
  const auto old = os.precision(17);
  os << "N,one_minus_F,epsilon,kappa_plus_gamma,feasible,highlight\n";
  for (const auto& c : grid) {
    os << c.n << ',' << c.one_minus_f << ',' << c.epsilon << ',' << c.kappa_plus_gamma << ','
       << (c.feasible ? 1 : 0) << ',' << (c.highlighted ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace qpi
