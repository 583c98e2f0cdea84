// Copyright 2026 The quadsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "image.hpp"

namespace quadsynth {

/// Decodes PNG or JPEG bytes (sniffed by signature) to 8-bit RGB. Grayscale
/// is replicated to three channels; alpha is composited over black.
/// Throws Error(kIo) for unsupported or corrupt data.
ImageBuffer decode_image(std::span<const std::uint8_t> bytes);
ImageBuffer load_image(const std::string& path);

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);
std::vector<std::uint8_t> encode_png(const ImageBuffer& img);

/// Format chosen by extension: .png, otherwise JPEG.
void save_image(const ImageBuffer& img, const std::string& path, int jpeg_quality = 95);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace quadsynth
