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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace lqhv {

namespace detail {

template <typename F>
double pairwise_reduce(std::span<const double> values, F&& transform) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double acc = 0.0;
    for (double v : values) acc += transform(v);
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_reduce(values.first(half), transform) +
         pairwise_reduce(values.subspan(half), transform);
}

}  // namespace detail

/// Pairwise (tree) summation; error grows as O(log n) rather than O(n).
inline double pairwise_sum(std::span<const double> values) {
  return detail::pairwise_reduce(values, [](double v) { return v; });
}

inline double pairwise_abs_sum(std::span<const double> values) {
  return detail::pairwise_reduce(values, [](double v) { return std::abs(v); });
}

/// Worker count from LQHV_THREADS, else the hardware concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("LQHV_THREADS")) {
    try {
      const long parsed = std::stol(env);
      if (parsed > 0) return static_cast<unsigned>(parsed);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into contiguous chunks and runs body(begin, end) on each.
/// Chunk boundaries depend only on count and threads, so writes to disjoint
/// slots are reproducible.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

/// Row-major mixed-radix counter; the last digit varies fastest.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<int> radices) : radices_(std::move(radices)) {
    strides_.assign(radices_.size(), 1);
    size_ = 1;
    for (std::size_t i = radices_.size(); i-- > 0;) {
      strides_[i] = size_;
      size_ *= static_cast<std::size_t>(radices_[i]);
    }
  }

  std::size_t size() const { return size_; }
  std::size_t digits() const { return radices_.size(); }
  const std::vector<int>& radices() const { return radices_; }
  std::size_t stride(std::size_t digit) const { return strides_[digit]; }

  std::vector<int> decode(std::size_t index) const {
    std::vector<int> out(radices_.size());
    for (std::size_t i = 0; i < radices_.size(); ++i) {
      out[i] = static_cast<int>((index / strides_[i]) % static_cast<std::size_t>(radices_[i]));
    }
    return out;
  }

  std::size_t encode(std::span<const int> digits) const {
    std::size_t index = 0;
    for (std::size_t i = 0; i < radices_.size(); ++i) {
      index += static_cast<std::size_t>(digits[i]) * strides_[i];
    }
    return index;
  }

 private:
  std::vector<int> radices_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

}  // namespace lqhv
