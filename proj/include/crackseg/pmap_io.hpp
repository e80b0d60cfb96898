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
#include <vector>

#include "crackseg/types.hpp"

namespace crackseg {

// PMAP binary format: magic "PMAP", then three 32-bit little-endian unsigned
// integers H, W, C, then H*W*C 64-bit little-endian IEEE doubles, row-major,
// channel-fastest. Round-trips are bit-exact.

void save_planes(const std::string& path, const Channels& channels);
Channels load_planes(const std::string& path);

void save_probmap(const std::string& path, const ProbMap& map);
ProbMap load_probmap(const std::string& path);

void save_priormap(const std::string& path, const PriorMap& map);
PriorMap load_priormap(const std::string& path);

}  // namespace crackseg
