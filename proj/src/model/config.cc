// src/model/config.cc

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

#include "pmu/model/config.h"

#include <sstream>

#include "pmu/core/error.h"

namespace pmu {

std::string VariantName(Variant v) {
  switch (v) {
    case Variant::kBaseline: return "baseline";
    case Variant::kBasicPmu: return "basic_pmu";
    case Variant::kParaCtc: return "para_ctc";
    case Variant::kPcaCtc: return "pca_ctc";
  }
  return "?";
}

Variant ParseVariant(const std::string &name) {
  for (Variant v : {Variant::kBaseline, Variant::kBasicPmu, Variant::kParaCtc, Variant::kPcaCtc})
    if (VariantName(v) == name) return v;
  throw InputError("unknown variant '" + name +
                   "' (expected baseline, basic_pmu, para_ctc or pca_ctc)");
}

std::string UnitSetName(UnitSet u) {
  switch (u) {
    case UnitSet::kPasm: return "pasm";
    case UnitSet::kBpe: return "bpe";
    case UnitSet::kBpeSmall: return "bpe_small";
  }
  return "?";
}

UnitSet ParseUnitSet(const std::string &name) {
  for (UnitSet u : {UnitSet::kPasm, UnitSet::kBpe, UnitSet::kBpeSmall})
    if (UnitSetName(u) == name) return u;
  throw InputError("unknown unit set '" + name + "' (expected pasm, bpe or bpe_small)");
}

int ModelConfig::VocabSize(UnitSet u) const {
  switch (u) {
    case UnitSet::kPasm: return pasm_vocab;
    case UnitSet::kBpe: return bpe_vocab;
    case UnitSet::kBpeSmall: return bpe_small_vocab;
  }
  return 0;
}

std::vector<HeadSpec> ActiveHeads(const PmuConfig &pmu) {
  switch (pmu.variant) {
    case Variant::kBaseline: return {{"ctc", pmu.trans_units, Tap::kN3}};
    case Variant::kBasicPmu: return {{"ctc", pmu.ctc_units, Tap::kN3}};
    case Variant::kParaCtc:
      return {{"pasm", pmu.ctc_units, Tap::kN3}, {"bpe", pmu.trans_units, Tap::kN3}};
    case Variant::kPcaCtc: {
      std::vector<HeadSpec> heads{{"n1", pmu.ctc_units, Tap::kN1}};
      if (pmu.n2 > 0) heads.push_back({"n2", UnitSet::kBpeSmall, Tap::kN2});
      heads.push_back({"n3", pmu.trans_units, Tap::kN3});
      return heads;
    }
  }
  return {};
}

std::vector<int> GroupSizes(const ModelConfig &cfg) {
  if (cfg.pmu.variant != Variant::kPcaCtc) return {cfg.encoder.num_layers};
  return {cfg.pmu.n1, cfg.pmu.n2, cfg.pmu.n3};
}

void ModelConfig::Validate() const {
  std::ostringstream bad;
  auto require = [&](bool ok, const std::string &msg) {
    if (!ok) bad << "\n  " << msg;
  };
  const EncoderConfig &e = encoder;
  require(feature_dim > 0, "feature_dim must be positive");
  require(e.num_layers >= 1, "num_layers must be >= 1");
  require(e.attention_dim > 0 && e.heads > 0 && e.attention_dim % e.heads == 0,
          "attention_dim must be a positive multiple of heads");
  require(e.ff_dim > 0, "ff_dim must be positive");
  require(e.conv_kernel >= 1 && e.conv_kernel % 2 == 1, "conv_kernel must be odd");
  require(e.subsample_factor == 1 || e.subsample_factor == 2 || e.subsample_factor == 4,
          "subsample_factor must be 1, 2 or 4");
  require(e.subsample_channels >= 0, "subsample_channels must be >= 0");
  require(e.dropout >= 0 && e.dropout < 1, "dropout must be in [0, 1)");
  require(label_dim > 0 && joint_dim > 0, "label_dim and joint_dim must be positive");
  require(label_smoothing >= 0 && label_smoothing < 1, "label_smoothing must be in [0, 1)");
  const PmuConfig &p = pmu;
  require(p.lambda_trans >= 0 && p.lambda_trans <= 1, "lambda_trans must be in [0, 1]");
  require(p.lambda_ctc >= 0 && p.lambda_ctc <= 1, "lambda_ctc must be in [0, 1]");
  if (p.variant == Variant::kParaCtc) require(p.alpha > 0 && p.alpha < 1, "alpha must be in (0, 1)");
  if (p.variant == Variant::kPcaCtc) {
    require(p.beta > 0 && p.beta < 1, "beta must be in (0, 1)");
    require(p.n1 >= 1 && p.n3 >= 1 && p.n2 >= 0, "n1, n3 must be >= 1 and n2 >= 0");
    require(p.n1 + p.n2 + p.n3 == e.num_layers, "n1 + n2 + n3 must equal num_layers");
    if (p.heads_shared && p.n2 > 0)
      require(VocabSize(p.ctc_units) == bpe_small_vocab,
              "heads_shared needs equal sizes for the N1 and N2 vocabularies (" +
                  std::to_string(VocabSize(p.ctc_units)) + " vs " +
                  std::to_string(bpe_small_vocab) + ")");
  }
  require(VocabSize(p.trans_units) >= 2, "vocabulary of trans_units '" +
                                             UnitSetName(p.trans_units) + "' is not set");
  for (const HeadSpec &h : ActiveHeads(p))
    require(VocabSize(h.units) >= 2,
            "vocabulary '" + UnitSetName(h.units) + "' of CTC head " + h.name + " is not set");
  const std::string msg = bad.str();
  if (!msg.empty()) throw InputError("invalid model config:" + msg);
}

void ReadModelConfig(const ConfigFile &f, ModelConfig *cfg) {
  EncoderConfig &e = cfg->encoder;
  f.Read("model", "feature_dim", &cfg->feature_dim);
  f.Read("model", "num_layers", &e.num_layers);
  f.Read("model", "attention_dim", &e.attention_dim);
  f.Read("model", "ff_dim", &e.ff_dim);
  f.Read("model", "heads", &e.heads);
  f.Read("model", "conv_kernel", &e.conv_kernel);
  f.Read("model", "subsample_factor", &e.subsample_factor);
  f.Read("model", "subsample_channels", &e.subsample_channels);
  f.Read("model", "dropout", &e.dropout);
  f.Read("model", "label_dim", &cfg->label_dim);
  f.Read("model", "joint_dim", &cfg->joint_dim);
  f.Read("model", "label_smoothing", &cfg->label_smoothing);
  f.Read("model", "pasm_vocab", &cfg->pasm_vocab);
  f.Read("model", "bpe_vocab", &cfg->bpe_vocab);
  f.Read("model", "bpe_small_vocab", &cfg->bpe_small_vocab);

  PmuConfig &p = cfg->pmu;
  std::string s;
  if (f.Read("pmu", "variant", &s)) p.variant = ParseVariant(s);
  f.Read("pmu", "lambda_trans", &p.lambda_trans);
  f.Read("pmu", "lambda_ctc", &p.lambda_ctc);
  f.Read("pmu", "alpha", &p.alpha);
  f.Read("pmu", "beta", &p.beta);
  f.Read("pmu", "n1", &p.n1);
  f.Read("pmu", "n2", &p.n2);
  f.Read("pmu", "n3", &p.n3);
  f.Read("pmu", "sc_enabled", &p.sc_enabled);
  f.Read("pmu", "heads_shared", &p.heads_shared);
  if (f.Read("pmu", "ctc_units", &s)) p.ctc_units = ParseUnitSet(s);
  if (f.Read("pmu", "trans_units", &s)) p.trans_units = ParseUnitSet(s);
}

void WriteModelConfig(std::ostream &os, const ModelConfig &cfg) {
  const EncoderConfig &e = cfg.encoder;
  const PmuConfig &p = cfg.pmu;
  std::ostringstream o;
  o.precision(17);
  o << "[model]\n"
    << "feature_dim = " << cfg.feature_dim << "\n"
    << "num_layers = " << e.num_layers << "\n"
    << "attention_dim = " << e.attention_dim << "\n"
    << "ff_dim = " << e.ff_dim << "\n"
    << "heads = " << e.heads << "\n"
    << "conv_kernel = " << e.conv_kernel << "\n"
    << "subsample_factor = " << e.subsample_factor << "\n"
    << "subsample_channels = " << e.subsample_channels << "\n"
    << "dropout = " << e.dropout << "\n"
    << "label_dim = " << cfg.label_dim << "\n"
    << "joint_dim = " << cfg.joint_dim << "\n"
    << "label_smoothing = " << cfg.label_smoothing << "\n"
    << "pasm_vocab = " << cfg.pasm_vocab << "\n"
    << "bpe_vocab = " << cfg.bpe_vocab << "\n"
    << "bpe_small_vocab = " << cfg.bpe_small_vocab << "\n"
    << "\n[pmu]\n"
    << "variant = " << VariantName(p.variant) << "\n"
    << "lambda_trans = " << p.lambda_trans << "\n"
    << "lambda_ctc = " << p.lambda_ctc << "\n"
    << "alpha = " << p.alpha << "\n"
    << "beta = " << p.beta << "\n"
    << "n1 = " << p.n1 << "\n"
    << "n2 = " << p.n2 << "\n"
    << "n3 = " << p.n3 << "\n"
    << "sc_enabled = " << (p.sc_enabled ? "true" : "false") << "\n"
    << "heads_shared = " << (p.heads_shared ? "true" : "false") << "\n"
    << "ctc_units = " << UnitSetName(p.ctc_units) << "\n"
    << "trans_units = " << UnitSetName(p.trans_units) << "\n";
  os << o.str();
}

}  // namespace pmu
