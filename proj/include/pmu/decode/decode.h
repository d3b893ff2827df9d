// pmu/decode/decode.h

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

#ifndef PMU_DECODE_DECODE_H_
#define PMU_DECODE_DECODE_H_

#include <span>
#include <vector>

#include "pmu/core/label_sequence.h"
#include "pmu/core/tensor.h"
#include "pmu/model/model.h"

namespace pmu {

// Frame-wise argmax (lowest id on ties), repeats collapsed, blanks removed.
// emissions is T x V.
LabelSequence GreedyDecodeCtc(const Tensor &emissions);

// Source of transducer output distributions for greedy search.
class TransducerScorer {
 public:
  virtual ~TransducerScorer() = default;
  virtual int num_frames() const = 0;
  // Log-probabilities over the output vocabulary at frame t given the
  // labels emitted so far.
  virtual std::vector<double> LogProbs(int t) = 0;
  // Extends the emitted prefix by `label`.
  virtual void Advance(int label) = 0;
};

// Per frame: emit argmax labels until blank wins or max_symbols_per_frame
// labels were emitted, then move to the next frame.
LabelSequence GreedyDecodeTransducer(TransducerScorer &scorer, int max_symbols_per_frame = 5);

// Scorer backed by a model: the encoder runs once on construction, the
// label encoder advances one LSTM step per emitted label.
class ModelScorer : public TransducerScorer {
 public:
  ModelScorer(const PmuModel &model, const Tensor &features);

  int num_frames() const override { return num_frames_; }
  std::vector<double> LogProbs(int t) override;
  void Advance(int label) override;
  const EncoderOutputs &encoder() const { return enc_; }

 private:
  const PmuModel &model_;
  EncoderOutputs enc_;
  Var enc_proj_;
  LstmState state_;
  int num_frames_ = 0;
};

LabelSequence GreedyDecode(const PmuModel &model, const Tensor &features,
                           int max_symbols_per_frame = 5);

}  // namespace pmu

#endif  // PMU_DECODE_DECODE_H_
