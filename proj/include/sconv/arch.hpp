/* Copyright 2026 The SConv Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SCONV_ARCH_HPP_
#define SCONV_ARCH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sconv/conv.hpp"

namespace sconv {

inline constexpr Index kElementBytes = sizeof(float);

// Cache hierarchy in bytes. l3_bytes == 0 means the machine has no L3.
struct ArchInfo {
  Index l1_bytes = 32 * 1024;
  Index l2_bytes = 1024 * 1024;
  Index l3_bytes = 0;
  Index cache_line_bytes = 64;

  friend bool operator==(const ArchInfo&, const ArchInfo&) = default;
};

// Microkernel shape: n_f filters by n_win windows per call.
struct MkInfo {
  Index n_win = 16;
  Index n_f = 8;
  Index vector_bytes = 64;

  friend bool operator==(const MkInfo&, const MkInfo&) = default;
};

void validate(const ArchInfo& arch);
void validate(const MkInfo& mk);

// Contents of an arch description file. Microkernel keys are optional so the
// same file can describe a bare machine.
struct ArchFile {
  ArchInfo arch;
  std::optional<Index> n_win;
  std::optional<Index> n_f;
  std::optional<Index> vector_bits;

  friend bool operator==(const ArchFile&, const ArchFile&) = default;
};

// Flat `key = value` text; `#` starts a comment. Recognised keys: l1_kib,
// l2_kib, l3_kib, cache_line, n_win, n_f, vector_bits. Throws Error on
// unknown keys, malformed values or invariant violations.
ArchFile parse_arch(std::string_view text);
ArchFile load_arch_file(const std::filesystem::path& path);
ArchInfo load_arch(const std::filesystem::path& path);

std::string serialize_arch(const ArchFile& file);

}  // namespace sconv

#endif  // SCONV_ARCH_HPP_
