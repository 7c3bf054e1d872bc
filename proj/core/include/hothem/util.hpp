// Copyright 2026 The Hot Hem Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hothem::util {

// Deterministic random stream. Built on mt19937_64 (whose output sequence is
// fixed by the standard) with hand-rolled distributions, so draws are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a; stable seed derivation from names.
std::uint64_t fnv1a(std::string_view s);

// Shortest decimal representation that round-trips exactly.
std::string format_exact(double v);
// printf-style "%.<digits>g".
std::string format_sig(double v, int digits);
// Fixed decimals, e.g. format_fixed(0.053, 4) == "0.0530".
std::string format_fixed(double v, int decimals);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Minimal RFC-4180 CSV: quoted fields may contain separators and quotes.
std::vector<std::string> parse_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

// Reads a whole text file; throws DataError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);
// Writes atomically enough for our purposes; throws DataError on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

// Population mean and standard deviation in fixed summation order.
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(std::span<const double> values);

// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Each
// index is handled exactly once, so per-index outputs are order-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t min_chunk = 256);

}  // namespace hothem::util
