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

// JSON-valued forms of the geojson.hpp builders, for use inside the library.

#pragma once

#include <json.hpp>

#include "hothem/routing.hpp"

namespace hothem::geojson::detail {

nlohmann::json number_or_null(double v);
nlohmann::json route_feature(const routing::Graph& g, const routing::Route& route);
nlohmann::json route_collection(const routing::Graph& g, const routing::Route& route);
nlohmann::json corridors(const routing::Graph& g, std::size_t top);

}  // namespace hothem::geojson::detail
