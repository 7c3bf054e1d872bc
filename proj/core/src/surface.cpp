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

#include "hothem/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "hothem/error.hpp"
#include "hothem/raster_ops.hpp"
#include "hothem/util.hpp"

namespace hothem::surface {

using features::FeatureRow;
using raster::Grid;
using raster::GridGeometry;
using raster::LonLat;

std::vector<WardPolygon> read_wards(std::istream& in) {
  std::vector<WardPolygon> wards;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = util::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = util::parse_csv_line(t);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 3 && fields[0] == "ward") continue;
    }
    if (fields.size() != 3) {
      throw DataError("ward file line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const auto lon = util::parse_double(fields[1]);
    const auto lat = util::parse_double(fields[2]);
    if (!lon || !lat) throw DataError("ward file line " + std::to_string(line_no) + ": bad coordinate");
    if (wards.empty() || wards.back().name != fields[0]) {
      for (const auto& w : wards) {
        if (w.name == fields[0]) {
          throw DataError("ward '" + fields[0] + "' appears in non-consecutive rows");
        }
      }
      wards.push_back({fields[0], {}});
    }
    wards.back().ring.push_back({*lon, *lat});
  }
  for (auto& w : wards) {
    auto& ring = w.ring;
    if (ring.front().lon != ring.back().lon || ring.front().lat != ring.back().lat) {
      ring.push_back(ring.front());
    }
    std::vector<std::pair<double, double>> distinct;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) distinct.emplace_back(ring[i].lon, ring[i].lat);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) throw DataError("ward '" + w.name + "' has fewer than 3 distinct vertices");
  }
  return wards;
}

std::vector<WardPolygon> read_wards(const std::filesystem::path& path) {
  std::istringstream in(util::read_file(path));
  return read_wards(in);
}

void write_wards(std::span<const WardPolygon> wards, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "ward,lon,lat\n";
  for (const auto& w : wards) {
    for (const auto& p : w.ring) {
      out << util::csv_escape(w.name) << ',' << util::format_exact(p.lon) << ','
          << util::format_exact(p.lat) << '\n';
    }
  }
  util::write_file(path, out.str());
}

namespace {

bool on_segment(const LonLat& p, const LonLat& a, const LonLat& b) {
  const double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
  if (cross != 0.0) return false;
  return std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon) &&
         std::min(a.lat, b.lat) <= p.lat && p.lat <= std::max(a.lat, b.lat);
}

bool inside(const LonLat& p, const std::vector<LonLat>& ring) {
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (on_segment(p, ring[i], ring[i + 1])) return true;
  }
  bool in = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const LonLat& a = ring[i];
    const LonLat& b = ring[i + 1];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x) in = !in;
    }
  }
  return in;
}

}  // namespace

std::optional<std::string> point_in_ward(double lon, double lat,
                                         std::span<const WardPolygon> wards) {
  const LonLat p{lon, lat};
  for (const auto& w : wards) {
    if (inside(p, w.ring)) return w.name;
  }
  return std::nullopt;
}

const char* source_name(Source s) { return s == Source::Full ? "full" : "deployment"; }

const char* heat_category_name(HeatCategory c) {
  switch (c) {
    case HeatCategory::Cool: return "Cool";
    case HeatCategory::Mild: return "Mild";
    case HeatCategory::Warm: return "Warm";
    case HeatCategory::Hot: return "Hot";
    case HeatCategory::VeryHot: return "Very Hot";
  }
  return "?";
}

namespace {

std::string id_list(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < 20; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > 20) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

}  // namespace

std::vector<NodePrediction> patchwork_predict(std::span<const FeatureRow> nodes,
                                              std::span<const FeatureRow> full_rows,
                                              const gbt::GBTModel& full_model,
                                              const gbt::GBTModel& deploy_model,
                                              std::span<const WardPolygon> wards) {
  std::unordered_map<std::string, const FeatureRow*> full_by_id;
  std::vector<std::string> bad_full;
  for (const auto& r : full_rows) {
    if (r.values.size() != full_model.schema().size()) {
      bad_full.push_back(r.point_id);
      continue;
    }
    if (!full_by_id.emplace(r.point_id, &r).second) {
      throw DataError("duplicate full-schema row for node " + r.point_id);
    }
  }
  if (!bad_full.empty()) {
    throw SchemaError("full-schema rows with the wrong width: " + id_list(bad_full));
  }

  std::vector<NodePrediction> out(nodes.size());
  std::vector<const FeatureRow*> chosen(nodes.size(), nullptr);
  std::vector<std::string> unsatisfiable;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    out[i].node_id = n.point_id;
    out[i].lon = n.lon;
    out[i].lat = n.lat;
    const auto it = full_by_id.find(n.point_id);
    if (it != full_by_id.end() && point_in_ward(n.lon, n.lat, wards)) {
      out[i].source = Source::Full;
      chosen[i] = it->second;
    } else if (n.values.size() == deploy_model.schema().size()) {
      out[i].source = Source::Deployment;
      chosen[i] = &n;
    } else {
      unsatisfiable.push_back(n.point_id);
    }
  }
  if (!unsatisfiable.empty()) {
    throw SchemaError("nodes without a usable feature row: " + id_list(unsatisfiable));
  }
  util::parallel_for(out.size(), [&](std::size_t i) {
    const auto& model = out[i].source == Source::Full ? full_model : deploy_model;
    out[i].lst = model.predict(chosen[i]->values);
  });
  return out;
}

NodeStats summarize(std::span<const NodePrediction> preds) {
  if (preds.empty()) throw DataError("summarize: no predictions");
  NodeStats s;
  std::vector<double> v;
  v.reserve(preds.size());
  s.min = std::numeric_limits<double>::infinity();
  s.max = -s.min;
  for (const auto& p : preds) {
    v.push_back(p.lst);
    s.min = std::min(s.min, p.lst);
    s.max = std::max(s.max, p.lst);
    (p.source == Source::Full ? s.full : s.deployment) += 1;
  }
  const auto ms = util::mean_std(v);
  s.mean = ms.mean;
  s.std = ms.std;
  s.n = preds.size();
  return s;
}

HeatBins categorize_heat(std::span<const NodePrediction> preds) {
  const std::size_t n = preds.size();
  if (n < 5) throw DataError("heat categories need at least 5 predictions, got " + std::to_string(n));
  std::vector<double> sorted;
  sorted.reserve(n);
  for (const auto& p : preds) sorted.push_back(p.lst);
  std::sort(sorted.begin(), sorted.end());
  HeatBins bins;
  for (std::size_t k = 1; k <= 4; ++k) {
    const std::size_t rank = (k * n + 4) / 5;  // ceil(k n / 5)
    bins.edges[k - 1] = sorted[rank - 1];
  }
  for (std::size_t k = 0; k + 1 < bins.edges.size(); ++k) {
    if (!(bins.edges[k] < bins.edges[k + 1])) bins.degenerate = true;
  }
  bins.categories.reserve(n);
  for (const auto& p : preds) {
    int c = 0;
    for (double e : bins.edges) c += e < p.lst ? 1 : 0;
    bins.categories.push_back(static_cast<HeatCategory>(c));
  }
  return bins;
}

void apply_categories(std::vector<NodePrediction>& preds, const HeatBins& bins) {
  if (bins.categories.size() != preds.size()) throw DataError("category count mismatch");
  for (std::size_t i = 0; i < preds.size(); ++i) preds[i].category = bins.categories[i];
}

void SurfaceSpec::validate() const {
  if (!(cell_size > 0.0)) throw ConfigError("surface cell_size must be > 0");
  if (!(blur_sigma >= 0.0)) throw ConfigError("surface blur_sigma must be >= 0");
  if (!(idw_power > 0.0)) throw ConfigError("surface idw_power must be > 0");
  if (idw_k < 1) throw ConfigError("surface idw_k must be >= 1");
  if (pad_cells < 0) throw ConfigError("surface pad_cells must be >= 0");
  if (extent && !(extent->east > extent->west && extent->north > extent->south)) {
    throw ConfigError("surface extent is empty");
  }
}

GridGeometry surface_geometry(std::span<const NodePrediction> preds, const SurfaceSpec& spec) {
  spec.validate();
  if (preds.empty()) throw DataError("surface: no predictions");
  GridGeometry g;
  g.cell_size = spec.cell_size;
  if (spec.extent) {
    const auto& e = *spec.extent;
    g.origin_lon = e.west;
    g.origin_lat = e.south;
    g.width = static_cast<int>(std::ceil((e.east - e.west) / spec.cell_size - 1e-9));
    g.height = static_cast<int>(std::ceil((e.north - e.south) / spec.cell_size - 1e-9));
  } else {
    double w = std::numeric_limits<double>::infinity(), s = w, e = -w, n = -w;
    for (const auto& p : preds) {
      w = std::min(w, p.lon);
      e = std::max(e, p.lon);
      s = std::min(s, p.lat);
      n = std::max(n, p.lat);
    }
    g.origin_lon = w - spec.pad_cells * spec.cell_size;
    g.origin_lat = s - spec.pad_cells * spec.cell_size;
    g.width = static_cast<int>(std::floor((e - g.origin_lon) / spec.cell_size)) + 1 + spec.pad_cells;
    g.height = static_cast<int>(std::floor((n - g.origin_lat) / spec.cell_size)) + 1 + spec.pad_cells;
  }
  if (g.width < 1 || g.height < 1) throw ConfigError("surface extent has no cells");
  if (static_cast<double>(g.width) * g.height > 4.0e8) throw ConfigError("surface grid too large");
  for (const auto& p : preds) {
    if (!g.cell_at(p.lon, p.lat)) {
      throw DataError("surface extent does not cover node " + p.node_id);
    }
  }
  return g;
}

namespace {

struct SeedCell {
  int col;
  int row;
  std::size_t index;  // row-major cell index
  double value;
};

}  // namespace

Grid interpolate_surface(std::span<const NodePrediction> preds, const SurfaceSpec& spec) {
  const GridGeometry g = surface_geometry(preds, spec);

  // Node order is fixed by id so cell means do not depend on input order.
  std::vector<const NodePrediction*> ordered;
  for (const auto& p : preds) ordered.push_back(&p);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const NodePrediction* a, const NodePrediction* b) {
                     if (a->node_id != b->node_id) return a->node_id < b->node_id;
                     return a->lst < b->lst;
                   });
  std::map<std::size_t, std::pair<double, int>> cells;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* p : ordered) {
    const auto c = *g.cell_at(p->lon, p->lat);
    auto& acc = cells[static_cast<std::size_t>(c.row) * g.width + c.col];
    acc.first += p->lst;
    acc.second += 1;
    lo = std::min(lo, p->lst);
    hi = std::max(hi, p->lst);
  }

  Grid out(g);
  std::vector<SeedCell> sources;
  for (const auto& [idx, acc] : cells) {
    const double v = std::clamp(acc.first / acc.second, lo, hi);
    const int col = static_cast<int>(idx % g.width);
    const int row = static_cast<int>(idx / g.width);
    sources.push_back({col, row, idx, v});
    out.set(idx, v);
  }

  constexpr int kBucket = 8;
  const int bw = (g.width + kBucket - 1) / kBucket;
  const int bh = (g.height + kBucket - 1) / kBucket;
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(bw) * bh);
  for (std::size_t s = 0; s < sources.size(); ++s) {
    buckets[static_cast<std::size_t>(sources[s].row / kBucket) * bw + sources[s].col / kBucket]
        .push_back(s);
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(spec.idw_k), sources.size());
  const int max_ring = std::max(bw, bh);

  std::vector<double> filled(g.cell_count(), std::numeric_limits<double>::quiet_NaN());
  util::parallel_for(static_cast<std::size_t>(g.height), [&](std::size_t r) {
    const int row = static_cast<int>(r);
    std::vector<std::pair<double, std::size_t>> cand;  // (d2, source index)
    for (int col = 0; col < g.width; ++col) {
      const std::size_t idx = static_cast<std::size_t>(row) * g.width + col;
      if (out.valid(idx)) continue;
      cand.clear();
      const int qbx = col / kBucket, qby = row / kBucket;
      for (int ring = 0; ring <= max_ring; ++ring) {
        for (int by = qby - ring; by <= qby + ring; ++by) {
          if (by < 0 || by >= bh) continue;
          for (int bx = qbx - ring; bx <= qbx + ring; ++bx) {
            if (bx < 0 || bx >= bw) continue;
            if (std::max(std::abs(bx - qbx), std::abs(by - qby)) != ring) continue;
            for (auto s : buckets[static_cast<std::size_t>(by) * bw + bx]) {
              const double dx = sources[s].col - col;
              const double dy = sources[s].row - row;
              cand.emplace_back(dx * dx + dy * dy, s);
            }
          }
        }
        if (cand.size() >= k) {
          auto by_dist = [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return sources[a.second].index < sources[b.second].index;
          };
          std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end(), by_dist);
          const double bound = static_cast<double>(ring) * kBucket + 1.0;
          if (cand[k - 1].first < bound * bound) break;
        }
      }
      auto by_dist = [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return sources[a.second].index < sources[b.second].index;
      };
      std::partial_sort(cand.begin(), cand.begin() + k, cand.end(), by_dist);
      double num = 0.0, den = 0.0, vlo = std::numeric_limits<double>::infinity(), vhi = -vlo;
      for (std::size_t j = 0; j < k; ++j) {
        const double w = 1.0 / std::pow(cand[j].first, spec.idw_power / 2.0);
        const double v = sources[cand[j].second].value;
        num += w * v;
        den += w;
        vlo = std::min(vlo, v);
        vhi = std::max(vhi, v);
      }
      filled[idx] = std::clamp(num / den, vlo, vhi);
    }
  });
  for (std::size_t i = 0; i < filled.size(); ++i) {
    if (!std::isnan(filled[i])) out.set(i, filled[i]);
  }
  return out;
}

Grid build_surface(std::span<const NodePrediction> preds, const SurfaceSpec& spec) {
  return raster::gaussian_blur(interpolate_surface(preds, spec), spec.blur_sigma);
}

void write_predictions(std::span<const NodePrediction> preds, std::ostream& out) {
  out << "node_id,lon,lat,lst,source,category\n";
  for (const auto& p : preds) {
    out << util::csv_escape(p.node_id) << ',' << util::format_sig(p.lon, 10) << ','
        << util::format_sig(p.lat, 10) << ',' << util::format_sig(p.lst, 9) << ','
        << source_name(p.source) << ',' << (p.category ? heat_category_name(*p.category) : "")
        << '\n';
  }
}

void write_predictions(std::span<const NodePrediction> preds, const std::filesystem::path& path) {
  std::ostringstream out;
  write_predictions(preds, out);
  util::write_file(path, out.str());
}

std::vector<NodePrediction> read_predictions(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || util::trim(line) != "node_id,lon,lat,lst,source,category") {
    throw SchemaError("prediction file: unexpected header");
  }
  std::vector<NodePrediction> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    const auto f = util::parse_csv_line(util::trim(line));
    if (f.size() != 6) throw DataError("prediction file line " + std::to_string(line_no) + ": expected 6 fields");
    NodePrediction p;
    p.node_id = f[0];
    const auto lon = util::parse_double(f[1]);
    const auto lat = util::parse_double(f[2]);
    const auto lst = util::parse_double(f[3]);
    if (!lon || !lat || !lst) throw DataError("prediction file line " + std::to_string(line_no) + ": bad number");
    p.lon = *lon;
    p.lat = *lat;
    p.lst = *lst;
    if (f[4] == "full") {
      p.source = Source::Full;
    } else if (f[4] == "deployment") {
      p.source = Source::Deployment;
    } else {
      throw DataError("prediction file line " + std::to_string(line_no) + ": bad source");
    }
    if (!f[5].empty()) {
      bool found = false;
      for (int c = 0; c < 5; ++c) {
        if (f[5] == heat_category_name(static_cast<HeatCategory>(c))) {
          p.category = static_cast<HeatCategory>(c);
          found = true;
        }
      }
      if (!found) throw DataError("prediction file line " + std::to_string(line_no) + ": bad category");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<NodePrediction> read_predictions(const std::filesystem::path& path) {
  std::istringstream in(util::read_file(path));
  return read_predictions(in);
}

}  // namespace hothem::surface
