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

#include "hothem/synthetic_city.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hothem/error.hpp"
#include "hothem/grid.hpp"
#include "hothem/streetscape.hpp"
#include "hothem/surface.hpp"
#include "hothem/util.hpp"

namespace hothem::synthetic {

namespace fs = std::filesystem;
using raster::Grid;
using raster::GridGeometry;

namespace {

constexpr double kMetersPerDegree = 111320.0;
constexpr double kQaClear = 21824.0;
constexpr double kQaCloud = 21824.0 + 8.0;

// Mapillary Vistas class ids used in the label maps.
constexpr std::uint8_t kSky = 27, kBuilding = 17, kRoad = 13, kSidewalk = 15, kVegetation = 30,
                       kCar = 55, kPole = 45, kWater = 31, kWall = 6;

struct Intersection {
  std::int64_t id;
  double lon;
  double lat;
  double trees;  // street-tree canopy in [0, 1]
};

class City {
 public:
  explicit City(const CityOptions& o) : o_(o), rng_(o.seed) {
    half_ = o.spacing_deg * (o.grid - 1) / 2.0;
    const double west = o.center_lon - half_, south = o.center_lat - half_;
    for (int r = 0; r < o.grid; ++r) {
      for (int c = 0; c < o.grid; ++c) {
        Intersection n;
        n.id = 5000000000LL + 7LL * (r * o.grid + c);
        n.lon = west + c * o.spacing_deg + rng_.uniform(-0.12, 0.12) * o.spacing_deg;
        n.lat = south + r * o.spacing_deg + rng_.uniform(-0.12, 0.12) * o.spacing_deg;
        const double u = rng_.uniform();
        n.trees = u * u;
        nodes_.push_back(n);
      }
    }
    parks_ = {{o.center_lon + 0.55 * half_, o.center_lat + 0.45 * half_, 0.18 * half_},
              {o.center_lon - 0.6 * half_, o.center_lat - 0.1 * half_, 0.14 * half_}};
  }

  const CityOptions& options() const { return o_; }
  const std::vector<Intersection>& nodes() const { return nodes_; }
  double half() const { return half_; }
  util::Rng& rng() { return rng_; }

  double urban(double lon, double lat) const {
    const double dx = (lon - o_.center_lon) / half_;
    const double dy = (lat - o_.center_lat) / half_;
    return std::clamp(1.25 - std::hypot(dx, dy), 0.0, 1.0);
  }
  double park(double lon, double lat) const {
    double p = 0.0;
    for (const auto& k : parks_) {
      const double d2 = (lon - k[0]) * (lon - k[0]) + (lat - k[1]) * (lat - k[1]);
      p = std::max(p, std::exp(-d2 / (2.0 * k[2] * k[2])));
    }
    return p;
  }
  bool water(double lon, double lat) const {
    const double axis = o_.center_lat - 0.55 * half_ +
                        0.08 * half_ * std::sin((lon - o_.center_lon) / half_ * 3.0);
    return std::abs(lat - axis) < 0.0004;
  }
  double green(double lon, double lat) const {
    return std::clamp(1.0 - urban(lon, lat) + 0.9 * park(lon, lat), 0.0, 1.0);
  }
  // Surface temperature in degrees C, without the street-tree cooling.
  double base_lst(double lon, double lat) const {
    double t = 35.0 + 7.0 * urban(lon, lat) - 3.0 * green(lon, lat);
    if (water(lon, lat)) t -= 3.5;
    return t + 0.4 * std::sin(lon * 9000.0) * std::cos(lat * 7000.0);
  }
  // Cooling under street trees, centred on intersections.
  double tree_cooling(double lon, double lat) const {
    const double sigma = 0.6 * o_.spacing_deg / 2.0;
    double c = 0.0;
    const double west = o_.center_lon - half_, south = o_.center_lat - half_;
    const int col = static_cast<int>(std::lround((lon - west) / o_.spacing_deg));
    const int row = static_cast<int>(std::lround((lat - south) / o_.spacing_deg));
    for (int r = row - 1; r <= row + 1; ++r) {
      for (int k = col - 1; k <= col + 1; ++k) {
        if (r < 0 || k < 0 || r >= o_.grid || k >= o_.grid) continue;
        const auto& n = nodes_[r * o_.grid + k];
        const double d2 = (lon - n.lon) * (lon - n.lon) + (lat - n.lat) * (lat - n.lat);
        c += 3.0 * n.trees * std::exp(-d2 / (2.0 * sigma * sigma));
      }
    }
    return c;
  }
  double lst(double lon, double lat) const { return base_lst(lon, lat) - tree_cooling(lon, lat); }
  double vegetation(double lon, double lat) const {
    if (water(lon, lat)) return 0.0;
    return std::clamp(0.1 + 0.8 * green(lon, lat), 0.0, 1.0);
  }

 private:
  CityOptions o_;
  util::Rng rng_;
  double half_ = 0.0;
  std::vector<Intersection> nodes_;
  std::vector<std::array<double, 3>> parks_;
};

GridGeometry geometry(const City& city, double cell) {
  const auto& o = city.options();
  const double margin = 0.002;
  GridGeometry g;
  g.cell_size = cell;
  g.origin_lon = o.center_lon - city.half() - margin;
  g.origin_lat = o.center_lat - city.half() - margin;
  g.width = static_cast<int>(std::ceil((2.0 * (city.half() + margin)) / cell));
  g.height = g.width;
  return g;
}

template <typename F>
Grid make_grid(const GridGeometry& g, F&& f) {
  Grid out(g);
  for (int row = 0; row < g.height; ++row) {
    for (int col = 0; col < g.width; ++col) {
      const auto c = g.cell_center(col, row);
      out.set(col, row, f(c.lon, c.lat, col, row));
    }
  }
  return out;
}

double lst_dn(double celsius) { return std::round((celsius + 273.15 - 149.0) / 0.00341802); }
double reflectance_dn(double r) { return std::round((r + 0.2) / 0.0000275); }
double sar_dn(double db) { return std::sqrt(std::pow(10.0, (db + 83.0) / 10.0)); }

struct Cloud {
  double lon, lat, radius;
};

streetscape::LabelMap label_map(const City& city, const Intersection& n, int size, util::Rng& rng) {
  const double u = city.urban(n.lon, n.lat);
  const double g = city.green(n.lon, n.lat);
  const bool river = city.water(n.lon, n.lat);
  const std::size_t total = static_cast<std::size_t>(size) * size;
  std::vector<std::pair<std::uint8_t, double>> parts = {
      {kSky, std::max(0.05, 0.38 - 0.25 * u - 0.15 * n.trees + rng.uniform(-0.03, 0.03))},
      {kBuilding, 0.04 + 0.34 * u + rng.uniform(0.0, 0.03)},
      {kVegetation, 0.04 + 0.5 * n.trees + 0.08 * g + rng.uniform(0.0, 0.03)},
      {kCar, 0.01 + 0.06 * u},
      {kPole, 0.01},
      {kWall, 0.01 * rng.uniform()},
      {kWater, river ? 0.12 : 0.0},
      {kSidewalk, 0.06},
  };
  streetscape::LabelMap m{size, size, std::vector<std::uint8_t>(total, kRoad)};
  std::size_t at = 0;
  for (const auto& [label, frac] : parts) {
    const auto count = static_cast<std::size_t>(std::lround(std::clamp(frac, 0.0, 1.0) * total));
    for (std::size_t i = 0; i < count && at < total; ++i) m.labels[at++] = label;
  }
  return m;
}

std::string fmt(double v) { return util::format_exact(v); }

}  // namespace

fs::path write_city(const fs::path& dir, const CityOptions& options) {
  if (options.grid < 4 || options.scenes < 1 || options.label_size < 4) {
    throw ConfigError("synthetic city options out of range");
  }
  City city(options);
  const auto& o = city.options();
  const auto landsat = geometry(city, 0.0002);
  const auto fine = geometry(city, 0.0001);
  auto& rng = city.rng();

  std::vector<Cloud> clouds;
  for (int s = 0; s < o.scenes; ++s) {
    clouds.push_back({o.center_lon + rng.uniform(-0.8, 0.8) * city.half(),
                      o.center_lat + rng.uniform(-0.8, 0.8) * city.half(),
                      s == 0 ? 0.0 : 0.0015 + 0.001 * rng.uniform()});
  }
  auto cloudy = [&](int s, double lon, double lat) {
    const auto& c = clouds[s];
    return std::hypot(lon - c.lon, lat - c.lat) < c.radius;
  };

  std::ostringstream lst_list, qa_list, red_list, nir_list, emis_list;
  for (int s = 0; s < o.scenes; ++s) {
    const double offset = s == 0 ? 0.0 : -0.3 - 0.5 * s;
    const std::string tag = std::to_string(s + 1);
    const auto lst = make_grid(landsat, [&](double lon, double lat, int, int) {
      return cloudy(s, lon, lat) ? lst_dn(18.0) : lst_dn(city.lst(lon, lat) + offset);
    });
    const auto qa = make_grid(landsat, [&](double lon, double lat, int, int) {
      return cloudy(s, lon, lat) ? kQaCloud : kQaClear;
    });
    const auto red = make_grid(landsat, [&](double lon, double lat, int, int) {
      if (cloudy(s, lon, lat)) return reflectance_dn(0.6);
      if (city.water(lon, lat)) return reflectance_dn(0.05);
      return reflectance_dn(0.16 - 0.11 * city.vegetation(lon, lat));
    });
    const auto nir = make_grid(landsat, [&](double lon, double lat, int, int) {
      if (cloudy(s, lon, lat)) return reflectance_dn(0.62);
      if (city.water(lon, lat)) return reflectance_dn(0.03);
      return reflectance_dn(0.2 + 0.28 * city.vegetation(lon, lat));
    });
    const auto emis = make_grid(landsat, [&](double lon, double lat, int, int) {
      if (city.water(lon, lat)) return 9900.0;
      return std::round((0.94 + 0.045 * city.vegetation(lon, lat)) / 0.0001);
    });
    raster::write_ascii_grid(lst, dir / "landsat" / ("lst_" + tag + ".asc"));
    raster::write_ascii_grid(qa, dir / "landsat" / ("qa_" + tag + ".asc"));
    raster::write_ascii_grid(red, dir / "landsat" / ("red_" + tag + ".asc"));
    raster::write_ascii_grid(nir, dir / "landsat" / ("nir_" + tag + ".asc"));
    raster::write_ascii_grid(emis, dir / "landsat" / ("emissivity_" + tag + ".asc"));
    const char* sep = s ? "," : "";
    lst_list << sep << "landsat/lst_" << tag << ".asc";
    qa_list << sep << "landsat/qa_" << tag << ".asc";
    red_list << sep << "landsat/red_" << tag << ".asc";
    nir_list << sep << "landsat/nir_" << tag << ".asc";
    emis_list << sep << "landsat/emissivity_" << tag << ".asc";
  }

  std::vector<double> speckle(landsat.cell_count());
  for (auto& v : speckle) v = rng.normal();
  const auto hh = make_grid(landsat, [&](double lon, double lat, int col, int row) {
    const double db = city.water(lon, lat) ? -22.0
                                           : -13.0 + 9.0 * city.urban(lon, lat) +
                                                 1.5 * speckle[static_cast<std::size_t>(row) * landsat.width + col];
    return sar_dn(db);
  });
  const auto hv = make_grid(landsat, [&](double lon, double lat, int col, int row) {
    const double db = city.water(lon, lat) ? -28.0
                                           : -21.0 + 6.0 * city.vegetation(lon, lat) + 2.0 * city.urban(lon, lat) +
                                                 1.0 * speckle[(static_cast<std::size_t>(row) * 7 + col) % speckle.size()];
    return sar_dn(db);
  });
  raster::write_ascii_grid(hh, dir / "palsar" / "hh.asc");
  raster::write_ascii_grid(hv, dir / "palsar" / "hv.asc");

  std::vector<double> block_height(static_cast<std::size_t>((fine.width / 4 + 1) * (fine.height / 4 + 1)));
  for (auto& h : block_height) h = rng.uniform();
  const auto dsm = make_grid(fine, [&](double lon, double lat, int col, int row) {
    double z = 4.0 + 2.0 * city.urban(lon, lat);
    if (city.water(lon, lat)) return 1.0;
    const double u = city.urban(lon, lat);
    const double b = block_height[static_cast<std::size_t>(row / 4) * (fine.width / 4 + 1) + col / 4];
    if (u > 0.3 && (col % 4) != 0 && (row % 4) != 0) z += 6.0 + 34.0 * u * b;
    if (city.green(lon, lat) > 0.7 && b > 0.5) z += 8.0 * b;
    return z;
  });
  raster::write_ascii_grid(dsm, dir / "dsm.asc");
  const auto landcover = make_grid(landsat, [&](double lon, double lat, int, int) {
    if (city.water(lon, lat)) return 3.0;
    if (city.urban(lon, lat) > 0.5) return 1.0;
    if (city.green(lon, lat) > 0.6) return 2.0;
    return 4.0;
  });
  raster::write_ascii_grid(landcover, dir / "landcover.asc");

  // Street graph.
  std::ostringstream nodes_csv, edges_csv;
  nodes_csv << "node_id,lon,lat\n";
  for (const auto& n : city.nodes()) nodes_csv << n.id << ',' << fmt(n.lon) << ',' << fmt(n.lat) << '\n';
  edges_csv << "u,v,length_m\n";
  auto length_m = [&](const Intersection& a, const Intersection& b) {
    const double k = std::cos(o.center_lat * std::acos(-1.0) / 180.0);
    return std::hypot((a.lon - b.lon) * k, a.lat - b.lat) * kMetersPerDegree;
  };
  const auto& ns = city.nodes();
  for (int r = 0; r < o.grid; ++r) {
    for (int c = 0; c < o.grid; ++c) {
      const auto& a = ns[r * o.grid + c];
      auto link = [&](int r2, int c2) {
        const auto& b = ns[r2 * o.grid + c2];
        edges_csv << a.id << ',' << b.id << ',' << util::format_sig(length_m(a, b), 10) << '\n';
      };
      if (c + 1 < o.grid) link(r, c + 1);
      if (r + 1 < o.grid) link(r + 1, c);
      if (r + 1 < o.grid && c + 1 < o.grid && rng.uniform() < 0.12) link(r + 1, c + 1);
    }
  }
  util::write_file(dir / "network" / "nodes.csv", nodes_csv.str());
  util::write_file(dir / "network" / "edges.csv", edges_csv.str());

  // Wards: squares of intersections; the last one is the held-out ward.
  struct WardBox {
    const char* name;
    int r0, c0, size;
  };
  const int g = o.grid;
  const std::vector<WardBox> boxes = {
      {"Ben Nghe", g / 2 - 4, g / 2 - 4, 8},
      {"Da Kao", g - 9, 2, 8},
      {"Tan Dinh", g - 9, g - 10, 8},
      {"Ben Thanh", 1, g / 2 - 3, 8},
      {"An Phu", g / 2 - 3, g - 9, 8},
  };
  std::vector<surface::WardPolygon> wards;
  const double west = o.center_lon - city.half(), south = o.center_lat - city.half();
  for (const auto& b : boxes) {
    const double pad = 0.45 * o.spacing_deg;
    const double w = west + b.c0 * o.spacing_deg - pad, e = west + (b.c0 + b.size - 1) * o.spacing_deg + pad;
    const double s = south + b.r0 * o.spacing_deg - pad, n = south + (b.r0 + b.size - 1) * o.spacing_deg + pad;
    wards.push_back({b.name, {{w, s}, {e, s}, {e, n}, {w, n}, {w, s}}});
  }
  surface::write_wards(wards, dir / "wards.csv");

  // Street-level label maps for intersections inside wards; about one in
  // ten has no imagery and one index entry points at a missing file.
  std::ostringstream index;
  index << "point_id,lon,lat,label_path\n";
  bool broken_written = false;
  for (const auto& n : ns) {
    if (!surface::point_in_ward(n.lon, n.lat, wards)) continue;
    if (rng.uniform() < 0.1) continue;
    const std::string name = "labels/" + std::to_string(n.id) + ".pgm";
    if (!broken_written) {
      broken_written = true;
      index << n.id << ',' << fmt(n.lon) << ',' << fmt(n.lat) << ",labels/missing.pgm\n";
      continue;
    }
    streetscape::write_pgm(label_map(city, n, o.label_size, rng), dir / name);
    index << n.id << ',' << fmt(n.lon) << ',' << fmt(n.lat) << ',' << name << '\n';
  }
  util::write_file(dir / "gsv_index.csv", index.str());
  util::write_file(dir / "superclass_table.txt",
                   streetscape::format_superclass_table(streetscape::mapillary_superclass_map()));

  std::ostringstream cfg;
  cfg << "# Synthetic city fixture\n"
      << "[inputs]\n"
      << "lst_scenes = " << lst_list.str() << '\n'
      << "qa_scenes = " << qa_list.str() << '\n'
      << "red_scenes = " << red_list.str() << '\n'
      << "nir_scenes = " << nir_list.str() << '\n'
      << "emissivity_scenes = " << emis_list.str() << '\n'
      << "palsar_hh = palsar/hh.asc\n"
      << "palsar_hv = palsar/hv.asc\n"
      << "dsm = dsm.asc\n"
      << "landcover = landcover.asc\n"
      << "superclass_table = superclass_table.txt\n"
      << "gsv_index = gsv_index.csv\n"
      << "nodes = network/nodes.csv\n"
      << "edges = network/edges.csv\n"
      << "wards = wards.csv\n\n"
      << "[train]\n"
      << "seed = 42\n"
      << "holdout_ward = An Phu\n\n"
      << "[routing]\n"
      << "lambda_cool = 10\n"
      << "lambda_hot = 10\n"
      << "edge_lst_source = nodes\n\n"
      << "[output]\n"
      << "dir = out\n";
  const auto config_path = dir / "config.ini";
  util::write_file(config_path, cfg.str());
  return config_path;
}

}  // namespace hothem::synthetic
