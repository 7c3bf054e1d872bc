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

#include <cstddef>
#include <string>
#include <vector>

#include "hothem/routing.hpp"

namespace hothem::geojson {

// A route as a FeatureCollection: the LineString of the whole route first,
// then one LineString per edge carrying that edge's avg_lst. A route with a
// single node repeats its coordinate so the line stays valid.
std::string route_collection(const routing::Graph& g, const routing::Route& route);

// Edges ranked by temp_norm, hottest first; ties keep edge order.
std::vector<std::size_t> hottest_edges(const routing::Graph& g, std::size_t top);
std::string corridors(const routing::Graph& g, std::size_t top);

}  // namespace hothem::geojson
