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

#include "sconv/arch.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace sconv {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Index parse_int(std::string_view key, std::string_view value, int line) {
  Index out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || out < 0) {
    throw Error("arch line " + std::to_string(line) + ": bad value for " + std::string(key) +
                ": '" + std::string(value) + "'");
  }
  return out;
}

}  // namespace

void validate(const ArchInfo& arch) {
  if (arch.l1_bytes < 1 || arch.l2_bytes < 1) throw Error("L1 and L2 sizes must be positive");
  if (arch.l1_bytes > arch.l2_bytes) throw Error("L1 larger than L2");
  if (arch.l3_bytes < 0) throw Error("L3 size must be non-negative");
  if (arch.cache_line_bytes < kElementBytes || arch.cache_line_bytes % kElementBytes != 0) {
    throw Error("cache line must be a positive multiple of the element size");
  }
}

void validate(const MkInfo& mk) {
  if (mk.n_win < 1 || mk.n_f < 1) throw Error("microkernel n_win and n_f must be >= 1");
  if (mk.vector_bytes < 1) throw Error("vector width must be positive");
}

ArchFile parse_arch(std::string_view text) {
  ArchFile file;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("arch line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = parse_int(key, trim(line.substr(eq + 1)), line_no);

    if (key == "l1_kib") {
      file.arch.l1_bytes = value * 1024;
    } else if (key == "l2_kib") {
      file.arch.l2_bytes = value * 1024;
    } else if (key == "l3_kib") {
      file.arch.l3_bytes = value * 1024;
    } else if (key == "cache_line") {
      file.arch.cache_line_bytes = value;
    } else if (key == "n_win") {
      file.n_win = value;
    } else if (key == "n_f") {
      file.n_f = value;
    } else if (key == "vector_bits") {
      file.vector_bits = value;
    } else {
      throw Error("arch line " + std::to_string(line_no) + ": unknown key '" +
                  std::string(key) + "'");
    }
  }
  validate(file.arch);
  if ((file.n_win && *file.n_win < 1) || (file.n_f && *file.n_f < 1) ||
      (file.vector_bits && (*file.vector_bits < 8 || *file.vector_bits % 8 != 0))) {
    throw Error("invalid microkernel parameters in arch file");
  }
  return file;
}

ArchFile load_arch_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open arch file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_arch(buf.str());
}

ArchInfo load_arch(const std::filesystem::path& path) { return load_arch_file(path).arch; }

std::string serialize_arch(const ArchFile& file) {
  // Sizes round-trip only when they are whole KiB, which is all the format can express.
  std::ostringstream os;
  os << "l1_kib = " << file.arch.l1_bytes / 1024 << '\n'
     << "l2_kib = " << file.arch.l2_bytes / 1024 << '\n'
     << "l3_kib = " << file.arch.l3_bytes / 1024 << '\n'
     << "cache_line = " << file.arch.cache_line_bytes << '\n';
  if (file.n_win) os << "n_win = " << *file.n_win << '\n';
  if (file.n_f) os << "n_f = " << *file.n_f << '\n';
  if (file.vector_bits) os << "vector_bits = " << *file.vector_bits << '\n';
  return os.str();
}

}  // namespace sconv
