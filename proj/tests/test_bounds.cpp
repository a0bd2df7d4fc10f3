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

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"
#include "lqhv/bounds.hpp"

using namespace lqhv;

namespace {

const BoundComponent* find(const std::vector<BoundComponent>& list, const std::string& name) {
  for (const auto& c : list)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST(NormBound, Examples) {
  EXPECT_NEAR(lqhv_norm_bound(2, 2, 2), std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(lqhv_norm_bound(3, 2, 3), 8.0);
  EXPECT_DOUBLE_EQ(lqhv_norm_bound(2, 4, 3), 8.0);
  EXPECT_DOUBLE_EQ(lqhv_norm_bound(4, 3, 1), 1.0);
  EXPECT_DOUBLE_EQ(lqhv_norm_bound(3, 5, 2), 5.0);
}

TEST(NormBound, RejectsBadArguments) {
  EXPECT_THROW(lqhv_norm_bound(1, 2, 2), ValidationError);
  EXPECT_THROW(lqhv_norm_bound(2, 1, 2), ValidationError);
  EXPECT_THROW(lqhv_norm_bound(2, 2, 0), ValidationError);
}

TEST(CombinedBound, Examples) {
  EXPECT_DOUBLE_EQ(combined_bound(3, 2, 2).value, 2.0);
  EXPECT_DOUBLE_EQ(combined_bound(3, 2, 3).value, 8.0);
  EXPECT_DOUBLE_EQ(combined_bound(3, 2, 5).value, 13.0);
  EXPECT_DOUBLE_EQ(combined_bound(3, 2, 6).value, 13.0);
  for (int d = 2; d <= 20; ++d) EXPECT_NEAR(combined_bound(2, d, 2).value, std::min(std::sqrt(d), 3.0), 1e-12) << d;
}

TEST(CombinedBound, ComponentsListed) {
  const auto two = combined_bound(2, 4, 2);
  EXPECT_EQ(two.components.size(), 2u);
  const auto three = combined_bound(3, 2, 4);
  ASSERT_EQ(three.components.size(), 3u);
  EXPECT_DOUBLE_EQ(find(three.components, "(2S-1)^(N-1)")->value->lo, 49.0);
  EXPECT_DOUBLE_EQ(find(three.components, "(2d)^(N-1)-2^(N-1)+1")->value->lo, 13.0);
  EXPECT_DOUBLE_EQ(find(three.components, "lqhv-norm")->value->lo, 16.0);
  EXPECT_DOUBLE_EQ(three.value, 13.0);
}

TEST(LiteratureBounds, Bipartite) {
  const auto q = literature_bounds(2, 2, 3);
  const auto* kaplan = find(q, "2K_G+1");
  ASSERT_NE(kaplan, nullptr);
  EXPECT_NEAR(kaplan->value->lo, 4.352, 1e-12);
  EXPECT_NEAR(kaplan->value->hi, 4.566, 1e-12);
  EXPECT_DOUBLE_EQ(find(q, "2d")->value->lo, 4.0);
  EXPECT_FALSE(find(q, "~min(d,S)")->exact);
  EXPECT_FALSE(find(q, "~d/ln(d)")->value.has_value());

  const auto* higher = find(literature_bounds(2, 3, 2), "2d^2(K_G+1)-1");
  ASSERT_NE(higher, nullptr);
  EXPECT_NEAR(higher->value->lo, 18 * 2.676 - 1, 1e-12);
  EXPECT_NEAR(higher->value->hi, 18 * 2.783 - 1, 1e-12);
}

TEST(LiteratureBounds, MultipartiteAndGrothendieckIntervals) {
  EXPECT_DOUBLE_EQ(find(literature_bounds(3, 2, 2), "4d^2")->value->lo, 16.0);
  EXPECT_EQ(literature_bounds(3, 2, 2).size(), 1u);
  EXPECT_EQ(find(literature_bounds(4, 2, 2), "4d^2"), nullptr);
  EXPECT_DOUBLE_EQ(find(literature_bounds(4, 3, 2), "(2d)^(N-1)")->value->lo, 216.0);
  const BoundReport r = make_bound_report(2, 2, 2);
  EXPECT_DOUBLE_EQ(r.grothendieck_real.lo, 1.676);
  EXPECT_DOUBLE_EQ(r.grothendieck_real.hi, 1.783);
  EXPECT_DOUBLE_EQ(r.grothendieck_real_order3.lo, 1.41421356);
  EXPECT_DOUBLE_EQ(r.grothendieck_real_order3.hi, 1.5164);
}

TEST(BoundsTable, RowsAndImprovements) {
  const auto rows = bounds_table({2, 3}, {2, 2}, {2, 6});
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows.front().num_settings, 2);
  EXPECT_EQ(rows.back().num_sites, 3);
  for (const auto& r : rows) EXPECT_TRUE(r.improves_on_literature()) << r.num_sites << r.local_dim << r.num_settings;
  EXPECT_LT(rows[0].combined_bound, 4.352);
  EXPECT_DOUBLE_EQ(rows[6].combined_bound, 8.0);
  EXPECT_DOUBLE_EQ(rows[9].combined_bound, 13.0);
  EXPECT_THROW(bounds_table({3, 2}, {2, 2}, {2, 2}), ValidationError);
}

TEST(BoundsGrid, ComponentInequalities) {
  for (int n = 2; n <= 6; ++n)
    for (int d = 2; d <= 8; ++d)
      for (int s = 2; s <= 8; ++s) {
        const BoundReport r = make_bound_report(n, d, s);
        EXPECT_LE(r.combined_bound, r.lqhv_norm_bound);
        EXPECT_LE(r.combined_bound, std::pow(2.0 * s - 1, n - 1));
        if (s >= 3) {
          EXPECT_LE(r.combined_bound, std::pow(2.0 * d, n - 1) - std::pow(2.0, n - 1) + 1);
        }
        double lowest = r.component_bounds.front().value->lo;
        for (const auto& c : r.component_bounds) lowest = std::min(lowest, c.value->lo);
        EXPECT_EQ(r.combined_bound, lowest);
      }
}

TEST(BoundsGrid, ImprovesOnEveryExactLiteratureBound) {
  for (int n = 2; n <= 6; ++n)
    for (int d = 2; d <= 8; ++d)
      for (int s = 2; s <= 8; ++s) {
        const BoundReport r = make_bound_report(n, d, s);
        for (const auto& b : r.literature) {
          if (b.exact && b.value) {
            EXPECT_LT(r.combined_bound, b.value->lo) << n << " " << d << " " << s << " " << b.name;
          }
        }
        EXPECT_TRUE(r.improves_on_literature());
      }
}

TEST(BoundsGrid, NormBoundMonotone) {
  for (int n = 2; n <= 6; ++n)
    for (int d = 2; d <= 8; ++d)
      for (int s = 3; s <= 8; ++s) {
        const double v = lqhv_norm_bound(n, d, s);
        if (n < 6) {
          EXPECT_LE(v, lqhv_norm_bound(n + 1, d, s));
        }
        if (d < 8) {
          EXPECT_LE(v, lqhv_norm_bound(n, d + 1, s));
        }
        if (s < 8) {
          EXPECT_LE(v, lqhv_norm_bound(n, d, s + 1));
        }
      }
}
