// src/model/checkpoint.cc

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

#include "pmu/model/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "pmu/core/error.h"

namespace pmu {

namespace {

constexpr char kMagic[4] = {'P', 'M', 'U', '1'};

template <typename T>
void PutLe(std::string &out, T v) {
  std::uint64_t bits = 0;
  static_assert(sizeof(T) <= sizeof(bits));
  std::memcpy(&bits, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string &bytes) : bytes_(bytes) {}

  template <typename T>
  T Get(const char *what) {
    Need(sizeof(T), what);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, &bits, sizeof(T));
    return v;
  }

  std::string Bytes(std::uint64_t n, const char *what) {
    Need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::uint64_t n, const char *what) {
    if (n > bytes_.size() - pos_)
      throw FormatError(std::string("checkpoint: truncated ") + what, static_cast<long long>(pos_));
  }
  const std::string &bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SerializeCheckpoint(const Checkpoint &ckpt) {
  std::string out(kMagic, 4);
  PutLe<std::uint64_t>(out, ckpt.config_text.size());
  out += ckpt.config_text;
  PutLe<std::uint64_t>(out, ckpt.records.size());
  for (const auto &[path, t] : ckpt.records) {
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(path.size()));
    out += path;
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (int d : t.shape()) PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    for (Real v : t.vec()) PutLe<double>(out, static_cast<double>(v));
  }
  return out;
}

void WriteCheckpoint(const std::string &path, const Checkpoint &ckpt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write checkpoint '" + path + "'");
  const std::string bytes = SerializeCheckpoint(ckpt);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw InputError("write failed for checkpoint '" + path + "'");
}

Checkpoint ParseCheckpoint(const std::string &bytes) {
  Reader r(bytes);
  if (r.Bytes(4, "magic") != std::string(kMagic, 4))
    throw FormatError("checkpoint: bad magic (expected PMU1)", 0);
  Checkpoint ckpt;
  const auto text_len = r.Get<std::uint64_t>("config length");
  ckpt.config_text = r.Bytes(text_len, "config text");
  const auto count = r.Get<std::uint64_t>("record count");
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::size_t start = r.pos();
    const std::string path = r.Bytes(r.Get<std::uint32_t>("path length"), "path");
    const auto rank = r.Get<std::uint32_t>("rank");
    if (rank == 0 || rank > 8) throw FormatError("checkpoint: bad rank for '" + path + "'", start);
    Shape shape;
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      const auto d = r.Get<std::uint32_t>("dims");
      if (d == 0 || d > (1u << 30)) throw FormatError("checkpoint: bad dim for '" + path + "'", start);
      shape.push_back(static_cast<int>(d));
      n *= d;
    }
    std::vector<Real> data(n);
    for (Real &v : data) v = static_cast<Real>(r.Get<double>("data"));
    if (!ckpt.records.emplace(path, Tensor(shape, std::move(data))).second)
      throw FormatError("checkpoint: duplicate record '" + path + "'", start);
  }
  if (!r.done()) throw FormatError("checkpoint: trailing bytes", r.pos());
  return ckpt;
}

Checkpoint ReadCheckpoint(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open checkpoint '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return ParseCheckpoint(bytes);
}

void AddModelRecords(const PmuModel &model, Checkpoint *ckpt) {
  const ParamStore &ps = model.params();
  for (const std::string &p : ps.Paths())
    if (ps.Canonical(p) == p) ckpt->records["param/" + p] = ps.Get(p)->value;
}

void RestoreModel(const Checkpoint &ckpt, PmuModel *model) {
  ParamStore &ps = model->params();
  for (const std::string &p : ps.Paths()) {
    if (ps.Canonical(p) != p) continue;
    auto it = ckpt.records.find("param/" + p);
    PMU_INPUT_CHECK(it != ckpt.records.end(), "checkpoint: missing parameter '", p, "'");
    Tensor &dst = ps.Get(p)->value;
    PMU_INPUT_CHECK(it->second.shape() == dst.shape(), "checkpoint: parameter '", p, "' has shape ",
                    ShapeString(it->second.shape()), ", config implies ",
                    ShapeString(dst.shape()));
    dst = it->second;
  }
}

}  // namespace pmu
