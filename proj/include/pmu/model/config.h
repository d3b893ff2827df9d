// pmu/model/config.h

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

#ifndef PMU_MODEL_CONFIG_H_
#define PMU_MODEL_CONFIG_H_

#include <ostream>
#include <string>
#include <vector>

#include "pmu/core/config_file.h"

namespace pmu {

enum class Variant { kBaseline, kBasicPmu, kParaCtc, kPcaCtc };
enum class UnitSet { kPasm, kBpe, kBpeSmall };

std::string VariantName(Variant v);
Variant ParseVariant(const std::string &name);
std::string UnitSetName(UnitSet u);
UnitSet ParseUnitSet(const std::string &name);

struct EncoderConfig {
  int num_layers = 6;
  int attention_dim = 64;
  int ff_dim = 128;
  int heads = 2;
  int conv_kernel = 7;
  int subsample_factor = 4;    // 1, 2 or 4
  int subsample_channels = 0;  // 0: attention_dim
  double dropout = 0.1;
};

struct PmuConfig {
  Variant variant = Variant::kPcaCtc;
  double lambda_trans = 0.5;
  double lambda_ctc = 0.5;
  double alpha = 0.7;
  double beta = 0.5;
  int n1 = 2, n2 = 2, n3 = 2;
  bool sc_enabled = true;
  bool heads_shared = false;
  UnitSet ctc_units = UnitSet::kPasm;
  UnitSet trans_units = UnitSet::kBpe;
};

struct ModelConfig {
  int feature_dim = 16;
  EncoderConfig encoder;
  PmuConfig pmu;
  int label_dim = 64;
  int joint_dim = 64;
  double label_smoothing = 0.0;
  // Output sizes, blank and unk included; 0 when the unit set is unused.
  int pasm_vocab = 0;
  int bpe_vocab = 0;
  int bpe_small_vocab = 0;

  int VocabSize(UnitSet u) const;
  // Throws InputError listing every problem found.
  void Validate() const;
};

// Encoder position a CTC head is attached to.
enum class Tap { kN1, kN2, kN3 };

struct HeadSpec {
  std::string name;  // parameter scope ctc/<name>
  UnitSet units;
  Tap tap;
};

// CTC heads of a variant, in a fixed order.
std::vector<HeadSpec> ActiveHeads(const PmuConfig &pmu);
// Encoder layers per group; groups of size 0 are skipped.
std::vector<int> GroupSizes(const ModelConfig &cfg);

// [model] and [pmu] sections. Keys absent from the file keep their value.
void ReadModelConfig(const ConfigFile &file, ModelConfig *cfg);
void WriteModelConfig(std::ostream &os, const ModelConfig &cfg);

}  // namespace pmu

#endif  // PMU_MODEL_CONFIG_H_
