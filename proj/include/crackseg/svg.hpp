/*
 * Copyright 2026 The crackseg authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "crackseg/metrics.hpp"

namespace crackseg {

// Hand-emitted SVG line chart of precision over recall; one polyline per
// named curve. Deterministic output (fixed precision, no timestamps).
std::string pr_curve_svg(
    const std::vector<std::pair<std::string, PrCurve>>& curves);

}  // namespace crackseg
