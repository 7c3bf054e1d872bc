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

#include "hothem/streetscape.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "hothem/error.hpp"
#include "hothem/util.hpp"

namespace hothem::streetscape {

std::string_view superclass_name(Superclass s) {
  switch (s) {
    case Superclass::Other: return "Other";
    case Superclass::Vegetation: return "Vegetation";
    case Superclass::Sky: return "Sky";
    case Superclass::Building: return "Building";
    case Superclass::PavementRoad: return "Pavement / Road";
    case Superclass::Water: return "Water";
    case Superclass::VehicleClutter: return "Vehicle / Street Clutter";
  }
  return "?";
}

namespace {

constexpr std::array<std::string_view, kRawClassCount> kMapillaryNames{
    "Bird", "Ground Animal", "Curb", "Fence", "Guard Rail", "Barrier", "Wall",
    "Bike Lane", "Crosswalk - Plain", "Curb Cut", "Parking", "Pedestrian Area",
    "Rail Track", "Road", "Service Lane", "Sidewalk", "Bridge", "Building", "Tunnel",
    "Person", "Bicyclist", "Motorcyclist", "Other Rider", "Lane Marking - Crosswalk",
    "Lane Marking - General", "Mountain", "Sand", "Sky", "Snow", "Terrain",
    "Vegetation", "Water", "Banner", "Bench", "Bike Rack", "Billboard", "Catch Basin",
    "CCTV Camera", "Fire Hydrant", "Junction Box", "Mailbox", "Manhole", "Phone Booth",
    "Pothole", "Street Light", "Pole", "Traffic Sign Frame", "Utility Pole",
    "Traffic Light", "Traffic Sign (Back)", "Traffic Sign (Front)", "Trash Can",
    "Bicycle", "Boat", "Bus", "Car", "Caravan", "Motorcycle", "On Rails",
    "Other Vehicle", "Trailer", "Truck", "Wheeled Slow", "Car Mount", "Ego Vehicle",
};

// 0 Other, 1 Vegetation, 2 Sky, 3 Building, 4 Pavement/Road, 5 Water,
// 6 Vehicle/Clutter. Wheeled Slow, Car Mount and Ego Vehicle (62-64) have no
// natural home and fall into Other.
constexpr std::array<std::uint8_t, kRawClassCount> kMapillaryTable{
    0, 0, 4, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 4,  // 0-15
    3, 3, 3, 0, 0, 0, 0, 4, 4, 0, 0, 2, 0, 0, 1, 5,  // 16-31
    0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 6, 6, 6, 6,  // 32-47
    6, 6, 6, 0, 6, 5, 6, 6, 6, 6, 6, 6, 6, 6, 0, 0,  // 48-63
    0,                                               // 64
};

}  // namespace

SuperclassMap::SuperclassMap(const std::array<std::uint8_t, kRawClassCount>& table)
    : table_(table) {
  std::array<bool, kSuperclassCount> reached{};
  for (int i = 0; i < kRawClassCount; ++i) {
    if (table_[i] >= kSuperclassCount) {
      throw ConfigError("superclass table entry for class " + std::to_string(i) +
                        " is out of range: " + std::to_string(table_[i]));
    }
    reached[table_[i]] = true;
  }
  for (int s = 0; s < kSuperclassCount; ++s) {
    if (!reached[s]) {
      throw ConfigError("superclass " + std::to_string(s) + " is not reachable");
    }
  }
}

std::array<int, kSuperclassCount> SuperclassMap::class_counts() const {
  std::array<int, kSuperclassCount> counts{};
  for (auto s : table_) ++counts[s];
  return counts;
}

const SuperclassMap& mapillary_superclass_map() {
  static const SuperclassMap map(kMapillaryTable);
  return map;
}

std::string_view mapillary_class_name(int raw_class) {
  if (raw_class < 0 || raw_class >= kRawClassCount) return {};
  return kMapillaryNames[raw_class];
}

SuperclassMap read_superclass_table(std::istream& in) {
  std::array<std::uint8_t, kRawClassCount> table{};
  std::array<bool, kRawClassCount> seen{};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = util::trim(std::string_view(line).substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto fields = util::split(t, ',');
    if (fields.size() < 2) {
      throw DataError("superclass table line " + std::to_string(line_no) +
                      ": expected class_id,superclass_id");
    }
    const auto cls = util::parse_int(fields[0]);
    const auto sup = util::parse_int(fields[1]);
    if (!cls || !sup || *cls < 0 || *cls >= kRawClassCount || *sup < 0 ||
        *sup >= kSuperclassCount) {
      throw DataError("superclass table line " + std::to_string(line_no) +
                      ": invalid ids");
    }
    if (seen[*cls]) {
      throw DataError("superclass table assigns class " + std::to_string(*cls) + " twice");
    }
    seen[*cls] = true;
    table[*cls] = static_cast<std::uint8_t>(*sup);
  }
  for (int i = 0; i < kRawClassCount; ++i) {
    if (!seen[i]) {
      throw DataError("superclass table is missing class " + std::to_string(i));
    }
  }
  return SuperclassMap(table);
}

SuperclassMap read_superclass_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open superclass table " + path.string());
  return read_superclass_table(in);
}

std::string format_superclass_table(const SuperclassMap& map) {
  std::ostringstream out;
  out << "# hothem superclass table v1\n"
      << "# class_id,superclass_id  (Mapillary Vistas class -> superclass)\n";
  for (int i = 0; i < kRawClassCount; ++i) {
    out << i << ',' << static_cast<int>(map[i]) << "  # " << mapillary_class_name(i)
        << " -> " << superclass_name(static_cast<Superclass>(map[i])) << '\n';
  }
  return out.str();
}

LabelMap remap(const LabelMap& labels, const SuperclassMap& map) {
  LabelMap out{labels.width, labels.height, {}};
  out.labels.resize(labels.labels.size());
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const int raw = labels.labels[i];
    if (raw >= kRawClassCount) {
      throw DataError("label " + std::to_string(raw) + " at pixel " + std::to_string(i) +
                      " has no superclass entry");
    }
    out.labels[i] = map[raw];
  }
  return out;
}

double StreetscapeFeatures::sum() const {
  return pct_other + pct_vegetation + pct_sky + pct_building + pct_pavement_road +
         pct_water + pct_vehicle_clutter;
}

StreetscapeFeatures class_percentages(const LabelMap& superlabels) {
  if (superlabels.labels.empty()) throw DataError("class_percentages: empty label map");
  std::array<std::size_t, kSuperclassCount> counts{};
  for (std::size_t i = 0; i < superlabels.labels.size(); ++i) {
    const auto s = superlabels.labels[i];
    if (s >= kSuperclassCount) {
      throw DataError("superclass label " + std::to_string(s) + " at pixel " +
                      std::to_string(i) + " is out of range");
    }
    ++counts[s];
  }
  const double total = static_cast<double>(superlabels.labels.size());
  auto frac = [&](Superclass s) {
    return static_cast<double>(counts[static_cast<int>(s)]) / total;
  };
  return {frac(Superclass::Other),        frac(Superclass::Vegetation),
          frac(Superclass::Sky),          frac(Superclass::Building),
          frac(Superclass::PavementRoad), frac(Superclass::Water),
          frac(Superclass::VehicleClutter)};
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace

LabelMap read_pgm(std::istream& in) {
  if (pgm_token(in) != "P5") throw DataError("not a binary PGM (P5) file");
  const auto w = util::parse_int(pgm_token(in));
  const auto h = util::parse_int(pgm_token(in));
  const auto maxval = util::parse_int(pgm_token(in));
  if (!w || !h || !maxval || *w < 1 || *h < 1) throw DataError("invalid PGM header");
  if (*maxval < 1 || *maxval > 255) throw DataError("only 8-bit PGM label maps are supported");
  LabelMap out{static_cast<int>(*w), static_cast<int>(*h), {}};
  out.labels.resize(static_cast<std::size_t>(*w) * static_cast<std::size_t>(*h));
  in.read(reinterpret_cast<char*>(out.labels.data()),
          static_cast<std::streamsize>(out.labels.size()));
  if (in.gcount() != static_cast<std::streamsize>(out.labels.size())) {
    throw DataError("PGM pixel data truncated");
  }
  return out;
}

LabelMap read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open label map " + path.string());
  try {
    return read_pgm(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_pgm(const LabelMap& labels, const std::filesystem::path& path) {
  std::string data = "P5\n" + std::to_string(labels.width) + " " +
                     std::to_string(labels.height) + "\n255\n";
  data.append(reinterpret_cast<const char*>(labels.labels.data()), labels.labels.size());
  util::write_file(path, data);
}

}  // namespace hothem::streetscape
