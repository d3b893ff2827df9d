// src/decode/decode.cc

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

#include "pmu/decode/decode.h"

#include "pmu/core/error.h"
#include "pmu/core/ops.h"

namespace pmu {

namespace {

int Argmax(std::span<const Real> row) {
  int best = 0;
  for (int v = 1; v < static_cast<int>(row.size()); ++v)
    if (row[v] > row[best]) best = v;
  return best;
}

}  // namespace

LabelSequence GreedyDecodeCtc(const Tensor &emissions) {
  PMU_CHECK(emissions.rank() == 2, "greedy_decode_ctc: expected T x V, got ",
            ShapeString(emissions.shape()));
  LabelSequence out;
  int prev = kBlankId;
  for (int t = 0; t < emissions.dim(0); ++t) {
    const int best = Argmax(emissions.row(t));
    if (best != kBlankId && best != prev) out.ids.push_back(best);
    prev = best;
  }
  return out;
}

LabelSequence GreedyDecodeTransducer(TransducerScorer &scorer, int max_symbols_per_frame) {
  PMU_CHECK(max_symbols_per_frame >= 1, "greedy_decode_transducer: max_symbols_per_frame < 1");
  LabelSequence out;
  for (int t = 0; t < scorer.num_frames(); ++t) {
    for (int emitted = 0; emitted < max_symbols_per_frame; ++emitted) {
      const std::vector<double> lp = scorer.LogProbs(t);
      int best = 0;
      for (int v = 1; v < static_cast<int>(lp.size()); ++v)
        if (lp[v] > lp[best]) best = v;
      if (best == kBlankId) break;
      out.ids.push_back(best);
      scorer.Advance(best);
    }
  }
  return out;
}

ModelScorer::ModelScorer(const PmuModel &model, const Tensor &features) : model_(model) {
  NoGradGuard no_grad;
  enc_ = model.Encode(features, nullptr);
  enc_proj_ = model.JointEncoderProjection(enc_.h_n3);
  state_ = model.LabelStart();
  num_frames_ = enc_.h_n3->value.dim(0);
}

std::vector<double> ModelScorer::LogProbs(int t) {
  NoGradGuard no_grad;
  Var lp = model_.JointStep(SliceRows(enc_proj_, t, 1), state_.h);
  return {lp->value.vec().begin(), lp->value.vec().end()};
}

void ModelScorer::Advance(int label) {
  NoGradGuard no_grad;
  state_ = model_.LabelStep(state_, label);
}

LabelSequence GreedyDecode(const PmuModel &model, const Tensor &features,
                           int max_symbols_per_frame) {
  ModelScorer scorer(model, features);
  return GreedyDecodeTransducer(scorer, max_symbols_per_frame);
}

}  // namespace pmu
