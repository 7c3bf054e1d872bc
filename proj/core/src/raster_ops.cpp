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

#include "hothem/raster_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "hothem/error.hpp"

namespace hothem::raster {
namespace {

void require_same_geometry(const Grid& a, const Grid& b, const char* op) {
  if (!(a.geometry() == b.geometry())) {
    throw ConfigError(std::string(op) + ": input grids differ in geometry");
  }
}

template <typename F>
Grid map_cells(const Grid& g, F&& f) {
  Grid out(g.geometry(), g.nodata());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.valid(i)) out.set(i, f(g[i]));
  }
  return out;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

bool qa_observation_valid(double qa_value) {
  if (!std::isfinite(qa_value) || qa_value < 0.0) return false;
  const auto bits = static_cast<std::uint64_t>(qa_value);
  constexpr std::uint64_t kCloud = 1u << 3;
  constexpr std::uint64_t kShadow = 1u << 4;
  return (bits & (kCloud | kShadow)) == 0;
}

namespace {

Grid composite_impl(const GridStack& scenes, const GridStack* qa, CompositeStat stat) {
  if (scenes.empty()) throw ConfigError("composite: no scenes");
  if (qa) {
    if (qa->size() != scenes.size()) {
      throw ConfigError("composite: QA stack has " + std::to_string(qa->size()) +
                        " layers but scene stack has " + std::to_string(scenes.size()));
    }
    if (!(qa->geometry() == scenes.geometry())) {
      throw ConfigError("composite: QA geometry differs from scene geometry");
    }
  }
  const Grid& first = scenes[0];
  Grid out(first.geometry(), first.nodata());
  for (std::size_t i = 0; i < first.size(); ++i) {
    double acc = stat == CompositeStat::Max ? -std::numeric_limits<double>::infinity() : 0.0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      const Grid& scene = scenes[s];
      if (!scene.valid(i)) continue;
      if (qa) {
        const Grid& q = (*qa)[s];
        if (!q.valid(i) || !qa_observation_valid(q[i])) continue;
      }
      if (stat == CompositeStat::Max) {
        acc = std::max(acc, scene[i]);
      } else {
        acc += scene[i];
      }
      ++count;
    }
    if (count == 0) continue;
    out.set(i, stat == CompositeStat::Max ? acc : acc / static_cast<double>(count));
  }
  return out;
}

}  // namespace

Grid composite(const GridStack& scenes, CompositeStat stat) {
  return composite_impl(scenes, nullptr, stat);
}

Grid composite(const GridStack& scenes, const GridStack& qa, CompositeStat stat) {
  return composite_impl(scenes, &qa, stat);
}

Grid linear_rescale(const Grid& g, double scale, double offset) {
  return map_cells(g, [&](double v) { return v * scale + offset; });
}

Grid ndvi(const Grid& red, const Grid& nir) {
  require_same_geometry(red, nir, "ndvi");
  Grid out(red.geometry(), red.nodata());
  for (std::size_t i = 0; i < red.size(); ++i) {
    if (!red.valid(i) || !nir.valid(i)) continue;
    const double denom = nir[i] + red[i];
    if (denom == 0.0) continue;
    out.set(i, std::clamp((nir[i] - red[i]) / denom, -1.0, 1.0));
  }
  return out;
}

Grid kelvin_to_celsius(const Grid& lst) {
  return map_cells(lst, [](double k) { return k - 273.15; });
}

Grid sar_dn_to_db(const Grid& dn, double calibration_db) {
  Grid out(dn.geometry(), dn.nodata());
  for (std::size_t i = 0; i < dn.size(); ++i) {
    if (!dn.valid(i) || dn[i] <= 0.0) continue;
    out.set(i, 10.0 * std::log10(dn[i] * dn[i]) + calibration_db);
  }
  return out;
}

Grid difference(const Grid& a, const Grid& b) {
  require_same_geometry(a, b, "difference");
  Grid out(a.geometry(), a.nodata());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.valid(i) && b.valid(i)) out.set(i, a[i] - b[i]);
  }
  return out;
}

std::vector<int> quantize(const Grid& g, int levels) {
  if (levels < 2) throw ConfigError("quantize: levels must be >= 2");
  std::vector<int> q(g.size(), -1);
  const auto range = g.valid_range();
  if (!range) return q;
  const auto [lo, hi] = *range;
  const double span = hi - lo;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.valid(i)) continue;
    if (span <= 0.0) {
      q[i] = 0;
      continue;
    }
    const int level = static_cast<int>(std::floor((g[i] - lo) / span * levels));
    q[i] = std::clamp(level, 0, levels - 1);
  }
  return q;
}

GlcmTextures glcm_features(const Grid& g, const GlcmParams& params) {
  if (params.window < 3 || params.window % 2 == 0) {
    throw ConfigError("glcm: window must be odd and >= 3");
  }
  if (params.levels < 2) throw ConfigError("glcm: levels must be >= 2");
  if (params.offsets.empty()) throw ConfigError("glcm: at least one offset required");

  const int w = g.width();
  const int h = g.height();
  const int half = params.window / 2;
  const int levels = params.levels;
  const std::vector<int> q = quantize(g, levels);

  GlcmTextures out{Grid(g.geometry(), g.nodata()), Grid(g.geometry(), g.nodata()),
                   Grid(g.geometry(), g.nodata())};

  // Integer pair counts per offset. Each probability is formed with a single
  // division per offset so a one-cell matrix comes out as exactly 1.
  std::vector<std::vector<int>> counts(
      params.offsets.size(), std::vector<int>(static_cast<std::size_t>(levels) * levels, 0));
  std::vector<char> marked(static_cast<std::size_t>(levels) * levels, 0);
  std::vector<int> touched;
  std::vector<std::vector<std::pair<int, int>>> pairs(params.offsets.size());

  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const int c0 = std::max(0, col - half), c1 = std::min(w - 1, col + half);
      const int r0 = std::max(0, row - half), r1 = std::min(h - 1, row + half);
      std::size_t offsets_used = 0;
      for (std::size_t o = 0; o < params.offsets.size(); ++o) {
        auto& list = pairs[o];
        list.clear();
        const auto [dx, dy] = params.offsets[o];
        for (int y = r0; y <= r1; ++y) {
          const int y2 = y + dy;
          if (y2 < r0 || y2 > r1) continue;
          for (int x = c0; x <= c1; ++x) {
            const int x2 = x + dx;
            if (x2 < c0 || x2 > c1) continue;
            const int a = q[static_cast<std::size_t>(y) * w + x];
            const int b = q[static_cast<std::size_t>(y2) * w + x2];
            if (a < 0 || b < 0) continue;
            list.emplace_back(a, b);
          }
        }
        if (!list.empty()) ++offsets_used;
      }
      if (offsets_used == 0) continue;

      for (std::size_t o = 0; o < pairs.size(); ++o) {
        for (const auto& [a, b] : pairs[o]) {
          for (const int idx : {a * levels + b, b * levels + a}) {
            if (!marked[idx]) {
              marked[idx] = 1;
              touched.push_back(idx);
            }
            ++counts[o][idx];
          }
        }
      }

      double contrast = 0.0, homogeneity = 0.0, energy = 0.0;
      for (const int idx : touched) {
        double p = 0.0;
        for (std::size_t o = 0; o < pairs.size(); ++o) {
          if (pairs[o].empty()) continue;
          p += static_cast<double>(counts[o][idx]) / (2.0 * static_cast<double>(pairs[o].size()));
          counts[o][idx] = 0;
        }
        p /= static_cast<double>(offsets_used);
        const int d = idx / levels - idx % levels;
        contrast += p * d * d;
        homogeneity += p / (1.0 + d * d);
        energy += p * p;
        marked[idx] = 0;
      }
      homogeneity = std::min(homogeneity, 1.0);
      energy = std::min(energy, 1.0);
      touched.clear();
      out.contrast.set(col, row, contrast);
      out.homogeneity.set(col, row, homogeneity);
      out.energy.set(col, row, energy);
    }
  }
  return out;
}

Grid sky_view_factor(const Grid& dsm, const SvfParams& params) {
  if (params.azimuths < 4) throw ConfigError("sky_view_factor: need at least 4 azimuths");
  if (!(params.radius_m > 0.0)) throw ConfigError("sky_view_factor: radius must be positive");
  const auto& geom = dsm.geometry();
  const double center_lat = geom.origin_lat + geom.height * geom.cell_size / 2.0;
  const double dy_m = geom.cell_size * params.meters_per_degree;
  const double dx_m = dy_m * std::cos(center_lat * std::numbers::pi / 180.0);
  const double step = std::min(dx_m, dy_m);

  std::vector<double> sin_az(params.azimuths), cos_az(params.azimuths);
  for (int a = 0; a < params.azimuths; ++a) {
    const double az = 2.0 * std::numbers::pi * a / params.azimuths;
    sin_az[a] = std::sin(az);
    cos_az[a] = std::cos(az);
  }

  Grid out(geom, dsm.nodata());
  for (int row = 0; row < geom.height; ++row) {
    for (int col = 0; col < geom.width; ++col) {
      if (!dsm.valid(col, row)) continue;
      const double h0 = dsm.at(col, row);
      double sum_sin = 0.0;
      for (int a = 0; a < params.azimuths; ++a) {
        double horizon = 0.0;
        int prev_col = col, prev_row = row;
        for (int k = 1;; ++k) {
          const double dist = k * step;
          if (dist > params.radius_m) break;
          const int c = col + static_cast<int>(std::lround(dist * sin_az[a] / dx_m));
          const int r = row - static_cast<int>(std::lround(dist * cos_az[a] / dy_m));
          if (!geom.in_bounds(c, r)) break;
          if ((c == prev_col && r == prev_row) || (c == col && r == row)) continue;
          prev_col = c;
          prev_row = r;
          if (!dsm.valid(c, r)) continue;
          const double horiz = std::hypot((c - col) * dx_m, (r - row) * dy_m);
          if (horiz > params.radius_m) continue;
          horizon = std::max(horizon, std::atan2(dsm.at(c, r) - h0, horiz));
        }
        sum_sin += std::sin(horizon);
      }
      out.set(col, row, std::clamp(1.0 - sum_sin / params.azimuths, 0.0, 1.0));
    }
  }
  return out;
}

Grid gaussian_blur(const Grid& g, double sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0) return g;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-(k * k) / (2.0 * sigma * sigma));
  }
  const int w = g.width();
  const int h = g.height();

  // NaN marks "no support" in the intermediate pass.
  std::vector<double> src(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) src[i] = g.valid(i) ? g[i] : kNaN;

  auto pass = [&](const std::vector<double>& in, bool horizontal) {
    std::vector<double> res(in.size(), kNaN);
    for (int row = 0; row < h; ++row) {
      for (int col = 0; col < w; ++col) {
        double num = 0.0, den = 0.0;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int k = -radius; k <= radius; ++k) {
          const int c = horizontal ? col + k : col;
          const int r = horizontal ? row : row + k;
          if (c < 0 || c >= w || r < 0 || r >= h) continue;
          const double v = in[static_cast<std::size_t>(r) * w + c];
          if (std::isnan(v)) continue;
          num += kernel[k + radius] * v;
          den += kernel[k + radius];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        // A weighted mean lies within its inputs; the clamp only absorbs rounding.
        if (den > 0.0) res[static_cast<std::size_t>(row) * w + col] = std::clamp(num / den, lo, hi);
      }
    }
    return res;
  };

  const std::vector<double> blurred = pass(pass(src, true), false);
  Grid out(g.geometry(), g.nodata());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.valid(i) && !std::isnan(blurred[i])) out.set(i, blurred[i]);
  }
  return out;
}

std::optional<double> sample(const Grid& g, double lon, double lat, SampleMethod method) {
  const auto& geom = g.geometry();
  const auto cell = geom.cell_at(lon, lat);
  if (!cell) return std::nullopt;
  const auto nearest = [&]() -> std::optional<double> {
    if (!g.valid(cell->col, cell->row)) return std::nullopt;
    return g.at(cell->col, cell->row);
  };
  if (method == SampleMethod::Nearest) return nearest();

  const double colf = (lon - geom.origin_lon) / geom.cell_size - 0.5;
  const double rowf = (geom.north() - lat) / geom.cell_size - 0.5;
  const int c0 = static_cast<int>(std::floor(colf));
  const int r0 = static_cast<int>(std::floor(rowf));
  const double tx = colf - c0;
  const double ty = rowf - r0;
  const std::array<std::pair<Cell, double>, 4> taps{{
      {{c0, r0}, (1.0 - tx) * (1.0 - ty)},
      {{c0 + 1, r0}, tx * (1.0 - ty)},
      {{c0, r0 + 1}, (1.0 - tx) * ty},
      {{c0 + 1, r0 + 1}, tx * ty},
  }};
  double acc = 0.0;
  for (const auto& [c, weight] : taps) {
    if (weight == 0.0) continue;
    if (!geom.in_bounds(c.col, c.row) || !g.valid(c.col, c.row)) return nearest();
    acc += weight * g.at(c.col, c.row);
  }
  return acc;
}

}  // namespace hothem::raster
