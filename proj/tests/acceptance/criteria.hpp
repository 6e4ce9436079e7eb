#pragma once

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace abho::acceptance {

struct Verdict {
  bool pass = false;
  std::string summary;
  std::vector<std::string> info;
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Verdict()> run;
};

std::vector<Criterion> flow_criteria();        // A1-A4
std::vector<Criterion> kernel_criteria();      // A5, A8, A9
std::vector<Criterion> asymptotic_criteria();  // A6, A7, A10, A11

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

inline std::string join(const std::vector<double>& v, const char* f = "%.3g") {
  std::string out;
  for (const double x : v) out += (out.empty() ? "" : " ") + fmt(f, x);
  return out;
}

// The Gaussian eta-disk of kernel_u0 around eta* stays 20% clear of the collision manifold
// y^eta = b, whose distance from eta* is w |y^x| / (|sin wt| |y|).
inline bool clear_of_manifold(Vec2 x, Vec2 y, const Config& cfg, double tail_tol = 1e-10) {
  const double reach = std::sqrt(cfg.alpha / cfg.damping_B) * std::sqrt(2.0 * std::log(1.0 / tail_tol));
  return std::abs(wedge(y, x)) / norm(y) > 1.2 * reach;
}

// Successive ratios e[k+1]/e[k].
inline std::vector<double> ratios(const std::vector<double>& e) {
  std::vector<double> r;
  for (std::size_t k = 1; k < e.size(); ++k) r.push_back(e[k] / e[k - 1]);
  return r;
}

inline bool all_within(const std::vector<double>& v, double lo, double hi) {
  for (const double x : v) {
    if (!(x >= lo && x <= hi)) return false;
  }
  return true;
}

}  // namespace abho::acceptance
