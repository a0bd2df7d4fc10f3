// Copyright 2026 The LqHV Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Closed-form upper bounds on the maximal quantum violation of general
 * S-setting Bell inequalities by N-qudit states, and the bounds reported
 * elsewhere for comparison.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lqhv/errors.hpp"

namespace lqhv {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static constexpr Interval point(double v) { return {v, v}; }
  bool is_point() const { return lo == hi; }
};

/// Real Grothendieck constant; its exact value is unknown.
inline constexpr Interval kGrothendieckReal{1.676, 1.783};
/// Real Grothendieck constant of order 3; lower end is sqrt(2).
inline constexpr Interval kGrothendieckRealOrder3{1.41421356, 1.5164};

struct BoundComponent {
  std::string name;
  std::optional<Interval> value;  // empty for bounds known only up to a constant
  std::string source;
  bool exact = true;
};

namespace detail {

inline double int_pow(double base, int exp) {
  double out = 1.0;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

inline void check_bound_args(int num_sites, int local_dim, int num_settings) {
  if (num_sites < 2 || local_dim < 2 || num_settings < 1) {
    throw ValidationError("bounds need N >= 2, d >= 2, S >= 1");
  }
}

}  // namespace detail

/// Bound on the total-variation norm of the constructed distribution:
/// d^{(N-1)/2} for S = 2, d^{S(N-1)/2} for S >= 3, and 1 for S = 1.
inline double lqhv_norm_bound(int num_sites, int local_dim, int num_settings) {
  detail::check_bound_args(num_sites, local_dim, num_settings);
  if (num_settings == 1) return 1.0;
  const int half_powers = num_settings == 2 ? num_sites - 1 : num_settings * (num_sites - 1);
  // Integer powers of d are exact; only odd half-powers pick up a sqrt(d).
  const double whole = detail::int_pow(local_dim, half_powers / 2);
  return half_powers % 2 == 0 ? whole : whole * std::sqrt(static_cast<double>(local_dim));
}

struct CombinedBound {
  double value = 0.0;
  std::vector<BoundComponent> components;
};

inline CombinedBound combined_bound(int num_sites, int local_dim, int num_settings) {
  const double norm = lqhv_norm_bound(num_sites, local_dim, num_settings);
  CombinedBound out;
  out.components.push_back({"lqhv-norm", Interval::point(norm), "lqhv", true});
  out.components.push_back({"(2S-1)^(N-1)", Interval::point(detail::int_pow(2.0 * num_settings - 1, num_sites - 1)),
                            "settings", true});
  if (num_settings >= 3) {
    const double dims = detail::int_pow(2.0 * local_dim, num_sites - 1) - detail::int_pow(2.0, num_sites - 1) + 1.0;
    out.components.push_back({"(2d)^(N-1)-2^(N-1)+1", Interval::point(dims), "dimension", true});
  }
  out.value = out.components.front().value->lo;
  for (const auto& c : out.components) out.value = std::min(out.value, c.value->lo);
  return out;
}

/// Bounds from other approaches applicable to (N, d, S). Grothendieck-based
/// entries are intervals; approximate entries carry no value.
inline std::vector<BoundComponent> literature_bounds(int num_sites, int local_dim, int num_settings) {
  detail::check_bound_args(num_sites, local_dim, num_settings);
  const double d = local_dim;
  std::vector<BoundComponent> out;
  if (num_sites == 2) {
    if (local_dim == 2) {
      out.push_back({"2K_G+1", Interval{2 * kGrothendieckReal.lo + 1, 2 * kGrothendieckReal.hi + 1}, "kaplan", true});
    } else {
      out.push_back({"2d^2(K_G+1)-1",
                     Interval{2 * d * d * (kGrothendieckReal.lo + 1) - 1, 2 * d * d * (kGrothendieckReal.hi + 1) - 1},
                     "kaplan", true});
    }
    out.push_back({"2d", Interval::point(2 * d), "operator-space", true});
    out.push_back({"~min(d,S)", std::nullopt, "operator-space", false});
    out.push_back({"~d/ln(d)", std::nullopt, "operator-space", false});
  } else if (num_sites == 3) {
    out.push_back({"4d^2", Interval::point(4 * d * d), "operator-space", true});
  } else {
    out.push_back({"(2d)^(N-1)", Interval::point(detail::int_pow(2 * d, num_sites - 1)), "operator-space", true});
  }
  return out;
}

struct BoundReport {
  int num_sites = 0;
  int local_dim = 0;
  int num_settings = 0;
  double lqhv_norm_bound = 0.0;
  double combined_bound = 0.0;
  std::vector<BoundComponent> component_bounds;
  std::vector<BoundComponent> literature;
  Interval grothendieck_real = kGrothendieckReal;
  Interval grothendieck_real_order3 = kGrothendieckRealOrder3;

  /// True when combined_bound is strictly below the lower end of every exact literature bound.
  bool improves_on_literature() const {
    for (const auto& b : literature) {
      if (b.exact && b.value && !(combined_bound < b.value->lo)) return false;
    }
    return true;
  }
};

inline BoundReport make_bound_report(int num_sites, int local_dim, int num_settings) {
  BoundReport r;
  r.num_sites = num_sites;
  r.local_dim = local_dim;
  r.num_settings = num_settings;
  r.lqhv_norm_bound = lqhv_norm_bound(num_sites, local_dim, num_settings);
  CombinedBound combined = combined_bound(num_sites, local_dim, num_settings);
  r.combined_bound = combined.value;
  r.component_bounds = std::move(combined.components);
  r.literature = literature_bounds(num_sites, local_dim, num_settings);
  return r;
}

struct IntRange {
  int first = 0;
  int last = 0;
};

/// One report per (N, d, S) triple, N slowest and S fastest.
inline std::vector<BoundReport> bounds_table(IntRange sites, IntRange dims, IntRange settings) {
  if (sites.first > sites.last || dims.first > dims.last || settings.first > settings.last) {
    throw ValidationError("empty bounds range");
  }
  std::vector<BoundReport> out;
  for (int n = sites.first; n <= sites.last; ++n)
    for (int d = dims.first; d <= dims.last; ++d)
      for (int s = settings.first; s <= settings.last; ++s) out.push_back(make_bound_report(n, d, s));
  return out;
}

}  // namespace lqhv
