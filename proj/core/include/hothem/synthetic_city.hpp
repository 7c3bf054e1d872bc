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

namespace hothem::synthetic {

// Small deterministic city: a jittered street grid around a hot built-up
// core with a cooler green ring, parks and a river. Street trees cool
// individual intersections; the cooling shows in street-level imagery but
// not in the satellite layers.
struct CityOptions {
  int grid = 30;              // nodes per side
  double spacing_deg = 0.0005;
  double center_lon = 106.7000;
  double center_lat = 10.7800;
  int scenes = 3;
  int label_size = 64;        // label map side, pixels
  std::uint64_t seed = 7;
};

// Writes every input file plus "config.ini" (relative paths, output dir
// "out") into dir and returns the config path.
std::filesystem::path write_city(const std::filesystem::path& dir, const CityOptions& options = {});

}  // namespace hothem::synthetic
