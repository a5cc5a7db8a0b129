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

#ifndef MASKDIFF_DENOISER_CHECKPOINT_H_
#define MASKDIFF_DENOISER_CHECKPOINT_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "maskdiff/denoiser/params.h"

namespace maskdiff {

// Binary layout, all integers little-endian uint32:
//   "MDLMCKPT", version, clean_size, state_count, seq_len, embed_dim,
//   layer count, one width per layer,
// followed by every block of DenoiserParams::blocks() in order, column-major,
// as little-endian IEEE-754 doubles.
inline constexpr char kCheckpointMagic[8] = {'M', 'D', 'L', 'M',
                                             'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const DenoiserParams& params);
// Throws FormatError on a bad magic, version, or truncated stream.
DenoiserParams read_checkpoint(std::istream& in);

// File variants; IoError when the file cannot be opened or written.
void save_checkpoint(const std::string& path, const DenoiserParams& params);
DenoiserParams load_checkpoint(const std::string& path);

}  // namespace maskdiff

#endif  // MASKDIFF_DENOISER_CHECKPOINT_H_
