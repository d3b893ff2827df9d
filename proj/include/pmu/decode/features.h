// pmu/decode/features.h

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

#ifndef PMU_DECODE_FEATURES_H_
#define PMU_DECODE_FEATURES_H_

#include <string>

#include "pmu/core/tensor.h"

namespace pmu {

// Feature file, little-endian: "PMUF", u32 version (1), u32 T, u32 D, then
// T * D float32 values row-major. Values are stored as float32, so data
// already representable in float32 round-trips exactly.
std::string SerializeFeatures(const Tensor &features);
// Throws FormatError whose offset is the byte where parsing failed; for a
// short payload that is the file size.
Tensor ParseFeatures(const std::string &bytes);

void SaveFeatures(const std::string &path, const Tensor &features);
Tensor LoadFeatures(const std::string &path);

}  // namespace pmu

#endif  // PMU_DECODE_FEATURES_H_
