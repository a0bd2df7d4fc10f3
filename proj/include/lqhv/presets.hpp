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

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lqhv/bell.hpp"
#include "lqhv/qlinalg.hpp"
#include "lqhv/scenario.hpp"

namespace lqhv {

/// cos(phi) sigma_x + sin(phi) sigma_y.
inline Matrix equatorial_observable(double phi) { return std::cos(phi) * pauli_x() + std::sin(phi) * pauli_y(); }

/// Singlet settings reaching CHSH = 2 sqrt(2): A = (Z, X), B = -(Z + X)/sqrt2, -(Z - X)/sqrt2.
inline Settings chsh_singlet_settings() {
  const double r = std::numbers::sqrt2 / 2.0;
  return make_settings({{pauli_z(), pauli_x()}, {-r * (pauli_z() + pauli_x()), -r * (pauli_z() - pauli_x())}});
}

/// GHZ settings reaching the Mermin-Klyshko value 2^{(N-1)/2}: every site
/// measures equatorial observables at angles (delta, delta + pi/2) with
/// delta = -(N-1) pi / (4N).
inline Settings mermin_klyshko_ghz_settings(int num_sites) {
  const double delta = -(num_sites - 1) * std::numbers::pi / (4.0 * num_sites);
  std::vector<std::vector<Matrix>> matrices(
      num_sites, {equatorial_observable(delta), equatorial_observable(delta + std::numbers::pi / 2.0)});
  return make_settings(matrices);
}

/// Named functionals: chsh, ch, mk2 ... mk10.
inline std::optional<BellFunctional> functional_preset(const std::string& name) {
  if (name == "chsh") return chsh();
  if (name == "ch") return ch();
  if (name.size() > 2 && name.rfind("mk", 0) == 0) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(name.substr(2), &used);
      if (used == name.size() - 2) return mermin_klyshko(n);
    } catch (const std::logic_error&) {
    }
  }
  return std::nullopt;
}

struct CasePreset {
  std::string name;
  StateSpec state;
  int local_dim = 2;
  Settings settings;
  std::optional<BellFunctional> functional;
};

/// singlet-chsh, singlet-ch and ghzN-mkN for N = 2..6.
inline std::optional<CasePreset> case_preset(const std::string& name) {
  if (name == "singlet-chsh") return CasePreset{name, SingletState{}, 2, chsh_singlet_settings(), chsh()};
  if (name == "singlet-ch") return CasePreset{name, SingletState{}, 2, chsh_singlet_settings(), ch()};
  for (int n = 2; n <= 6; ++n) {
    const std::string k = std::to_string(n);
    if (name == "ghz" + k + "-mk" + k) {
      return CasePreset{name, GhzState{n, 2}, 2, mermin_klyshko_ghz_settings(n), mermin_klyshko(n)};
    }
  }
  return std::nullopt;
}

inline std::vector<std::string> case_preset_names() {
  return {"singlet-chsh", "singlet-ch", "ghz2-mk2", "ghz3-mk3", "ghz4-mk4", "ghz5-mk5", "ghz6-mk6"};
}

}  // namespace lqhv
