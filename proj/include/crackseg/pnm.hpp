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

#include "crackseg/types.hpp"

namespace crackseg {

// Binary NetPBM readers/writers. Only 8-bit P6 (images) and P5 (masks) are
// supported; maxval must be 255. Headers may contain '#' comments.

/// Reads a binary P6 pixmap into 3 planes (R,G,B) with intensities in [0,1].
Channels load_image(const std::string& path);

/// Reads a binary P5 graymap as a binary mask: value >= 128 -> crack (1).
Mask load_mask(const std::string& path);

/// Reads a binary P5 graymap as raw intensities in [0,1].
Plane load_graymap(const std::string& path);

/// Writes a P6 pixmap; values are clamped to [0,1] then quantized to 0..255.
void save_image(const std::string& path, const Channels& rgb);

/// Writes a mask as a P5 graymap with values {0, 255}.
void save_mask(const std::string& path, const Mask& mask);

}  // namespace crackseg
