// pmu/model/checkpoint.h

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

#ifndef PMU_MODEL_CHECKPOINT_H_
#define PMU_MODEL_CHECKPOINT_H_

#include <map>
#include <string>

#include "pmu/core/tensor.h"
#include "pmu/model/model.h"

namespace pmu {

// Binary checkpoint, little-endian:
//   "PMU1"
//   u64 length, config text
//   u64 record count, then per record:
//     u32 path length, path, u32 rank, u32 dims[rank], f64 data[]
struct Checkpoint {
  std::string config_text;
  std::map<std::string, Tensor> records;  // written in key order
};

void WriteCheckpoint(const std::string &path, const Checkpoint &ckpt);
std::string SerializeCheckpoint(const Checkpoint &ckpt);
// Throws FormatError carrying the byte offset of the first bad field.
Checkpoint ReadCheckpoint(const std::string &path);
Checkpoint ParseCheckpoint(const std::string &bytes);

// Adds every canonical parameter of `model` as "param/<path>".
void AddModelRecords(const PmuModel &model, Checkpoint *ckpt);
// Copies "param/<path>" records into `model`. Every canonical parameter must
// be present with the shape the model's config implies.
void RestoreModel(const Checkpoint &ckpt, PmuModel *model);

}  // namespace pmu

#endif  // PMU_MODEL_CHECKPOINT_H_
