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

#include <optional>
#include <vector>

#include "hothem/grid.hpp"

namespace hothem::raster {

enum class CompositeStat { Max, Mean };

// Landsat Collection-2 QA_PIXEL: an observation is unusable when bit 3
// (cloud) or bit 4 (cloud shadow) is set. Nodata QA cells are unusable too.
bool qa_observation_valid(double qa_value);

// Per-cell aggregate over scenes. Cells with no usable observation become
// nodata. Each band is masked independently by its own QA stack.
Grid composite(const GridStack& scenes, CompositeStat stat);
Grid composite(const GridStack& scenes, const GridStack& qa, CompositeStat stat);

// value * scale + offset, e.g. Collection-2 DN to Kelvin or reflectance.
Grid linear_rescale(const Grid& g, double scale, double offset);

// (nir - red) / (nir + red); nodata where either input is nodata or the
// denominator is zero.
Grid ndvi(const Grid& red, const Grid& nir);

Grid kelvin_to_celsius(const Grid& lst);

inline constexpr double kPalsarCalibrationDb = -83.0;

// 10 * log10(DN^2) + calibration; DN <= 0 becomes nodata.
Grid sar_dn_to_db(const Grid& dn, double calibration_db = kPalsarCalibrationDb);

// a - b per cell (used for the dB-domain cross-polarisation ratio).
Grid difference(const Grid& a, const Grid& b);

struct GlcmOffset {
  int dx = 0;  // columns, east positive
  int dy = 0;  // rows, south positive
};

struct GlcmParams {
  int window = 5;
  int levels = 32;
  std::vector<GlcmOffset> offsets = {{1, 0}, {0, 1}};
};

struct GlcmTextures {
  Grid contrast;
  Grid homogeneity;
  Grid energy;
};

// Equal-width quantisation over the valid data range into [0, levels).
// Nodata cells map to -1.
std::vector<int> quantize(const Grid& g, int levels);

// Sliding-window grey-level co-occurrence textures. For every cell the
// window (truncated at borders) yields a symmetric co-occurrence matrix per
// offset; each is normalised and the matrices are averaged over the offsets
// that produced at least one pair. Cells whose window has no valid pair are
// nodata in all three outputs.
GlcmTextures glcm_features(const Grid& g, const GlcmParams& params = {});

struct SvfParams {
  double radius_m = 100.0;
  int azimuths = 16;
  double meters_per_degree = 111320.0;
};

// Sky view factor, 1 - mean(sin(horizon angle)) over evenly spaced
// azimuths. Horizons are found by marching outward cell by cell up to the
// search radius; negative horizons count as zero.
Grid sky_view_factor(const Grid& dsm, const SvfParams& params = {});

// Separable Gaussian smoothing with radius ceil(3 sigma). Weights are
// renormalised over in-bounds valid cells; nodata cells stay nodata.
Grid gaussian_blur(const Grid& g, double sigma);

enum class SampleMethod { Nearest, Bilinear };

// Point query. Bilinear uses the four surrounding cell centres and falls
// back to nearest when a needed neighbour is nodata or off-grid.
std::optional<double> sample(const Grid& g, double lon, double lat, SampleMethod method);

}  // namespace hothem::raster
