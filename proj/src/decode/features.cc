// src/decode/features.cc

// Copyright 2026  PMU Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pmu/decode/features.h"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pmu/core/error.h"

namespace pmu {

namespace {

constexpr std::uint32_t kVersion = 1;

void PutU32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t GetU32(const std::string &b, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + i])) << (8 * i);
  return v;
}

}  // namespace

std::string SerializeFeatures(const Tensor &f) {
  PMU_CHECK(f.rank() == 2, "save_features: expected T x D, got ", ShapeString(f.shape()));
  std::string out = "PMUF";
  PutU32(out, kVersion);
  PutU32(out, static_cast<std::uint32_t>(f.dim(0)));
  PutU32(out, static_cast<std::uint32_t>(f.dim(1)));
  for (Real v : f.vec()) {
    const float x = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &x, 4);
    PutU32(out, bits);
  }
  return out;
}

Tensor ParseFeatures(const std::string &b) {
  if (b.size() < 4 || b.compare(0, 4, "PMUF") != 0)
    throw FormatError("features: bad magic (expected PMUF)", 0);
  if (b.size() < 16) throw FormatError("features: truncated header", static_cast<long long>(b.size()));
  const std::uint32_t version = GetU32(b, 4);
  if (version != kVersion)
    throw FormatError("features: unsupported version " + std::to_string(version), 4);
  const std::uint32_t t = GetU32(b, 8), d = GetU32(b, 12);
  if (t == 0 || t > (1u << 24)) throw FormatError("features: bad frame count", 8);
  if (d == 0 || d > (1u << 16)) throw FormatError("features: bad dimension", 12);
  const std::uint64_t expected = 16 + 4ull * t * d;
  if (b.size() != expected)
    throw FormatError("features: expected " + std::to_string(expected) + " bytes for " +
                          std::to_string(t) + " x " + std::to_string(d) + ", got " +
                          std::to_string(b.size()),
                      static_cast<long long>(std::min<std::uint64_t>(b.size(), expected)));
  Tensor out({static_cast<int>(t), static_cast<int>(d)}, 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t bits = GetU32(b, 16 + 4 * i);
    float x;
    std::memcpy(&x, &bits, 4);
    out[i] = static_cast<Real>(x);
  }
  return out;
}

void SaveFeatures(const std::string &path, const Tensor &features) {
  const std::string bytes = SerializeFeatures(features);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write features '" + path + "'");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw InputError("write failed for '" + path + "'");
}

Tensor LoadFeatures(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open features '" + path + "'");
  return ParseFeatures(std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>()));
}

}  // namespace pmu
