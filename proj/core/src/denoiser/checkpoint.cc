// Copyright 2026 The maskdiff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maskdiff/denoiser/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "maskdiff/core/errors.h"

namespace maskdiff {
namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 4);
}

void put_f64(std::ostream& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  out.write(bytes, 8);
}

void read_exact(std::istream& in, char* buf, std::size_t n, const char* what) {
  in.read(buf, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw FormatError(std::string("checkpoint truncated while reading ") +
                      what);
  }
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  unsigned char bytes[4];
  read_exact(in, reinterpret_cast<char*>(bytes), 4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char bytes[8];
  read_exact(in, reinterpret_cast<char*>(bytes), 8, "parameters");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_checkpoint(std::ostream& out, const DenoiserParams& params) {
  const DenoiserConfig& c = params.config;
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(c.clean_size));
  put_u32(out, static_cast<std::uint32_t>(c.clean_size + 2));
  put_u32(out, static_cast<std::uint32_t>(c.seq_len));
  put_u32(out, static_cast<std::uint32_t>(c.embed_dim));
  put_u32(out, static_cast<std::uint32_t>(c.hidden_widths.size()));
  for (int w : c.hidden_widths) put_u32(out, static_cast<std::uint32_t>(w));
  for (const Eigen::MatrixXd* block : params.blocks()) {
    for (Eigen::Index i = 0; i < block->size(); ++i) put_f64(out, block->data()[i]);
  }
}

DenoiserParams read_checkpoint(std::istream& in) {
  char magic[sizeof(kCheckpointMagic)];
  read_exact(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw FormatError("not a checkpoint: bad magic bytes");
  }
  const std::uint32_t version = get_u32(in, "version");
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " +
                      std::to_string(version));
  }
  DenoiserConfig config;
  config.clean_size = static_cast<int>(get_u32(in, "clean_size"));
  const std::uint32_t state_count = get_u32(in, "state_count");
  if (state_count != static_cast<std::uint32_t>(config.clean_size) + 2) {
    throw FormatError("checkpoint state_count inconsistent with clean_size");
  }
  config.seq_len = static_cast<int>(get_u32(in, "seq_len"));
  config.embed_dim = static_cast<int>(get_u32(in, "embed_dim"));
  const std::uint32_t layers = get_u32(in, "layer count");
  if (layers == 0 || layers > 64) {
    throw FormatError("implausible checkpoint layer count " +
                      std::to_string(layers));
  }
  config.hidden_widths.clear();
  for (std::uint32_t k = 0; k < layers; ++k) {
    config.hidden_widths.push_back(static_cast<int>(get_u32(in, "widths")));
  }
  try {
    config.validate();
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("invalid checkpoint header: ") + e.what());
  }
  DenoiserParams params = DenoiserParams::Zeros(config);
  for (Eigen::MatrixXd* block : params.blocks()) {
    for (Eigen::Index i = 0; i < block->size(); ++i) block->data()[i] = get_f64(in);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after checkpoint parameters");
  }
  return params;
}

void save_checkpoint(const std::string& path, const DenoiserParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_checkpoint(out, params);
  out.flush();
  if (!out) throw IoError("failed writing checkpoint " + path);
}

DenoiserParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  return read_checkpoint(in);
}

}  // namespace maskdiff
