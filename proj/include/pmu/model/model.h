// pmu/model/model.h

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

#ifndef PMU_MODEL_MODEL_H_
#define PMU_MODEL_MODEL_H_

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pmu/core/autograd.h"
#include "pmu/core/ops.h"
#include "pmu/core/param_store.h"
#include "pmu/model/config.h"

namespace pmu {

struct EncoderOutputs {
  Var h_n1;  // output of the lower group; null unless pca_ctc
  Var h_n2;  // output of the middle group; null unless pca_ctc with n2 > 0
  Var h_n3;  // top of the encoder, T' x d
  // Per-head CTC log-probabilities (T' x V), keyed by head name.
  std::map<std::string, Var> ctc_logprobs;
  int num_taps = 0;  // distinct encoder positions carrying a CTC head
};

struct ForwardOutputs {
  EncoderOutputs enc;
  Var h_u;      // (U+1) x label_dim
  Var lattice;  // T' x (U+1) x V_trans log-probabilities
};

// Frame count after subsampling.
int SubsampledLength(int frames, int subsample_factor);

// Conformer-Transducer with CTC heads placed according to the PMU variant.
// Parameter paths:
//   enc/sub/conv{0,1}/{w,b}, enc/sub/proj/{w,b}
//   enc/block{i}/{ff1,mhsa,conv,ff2,ln_out}/...
//   dec/embed, dec/lstm/{w_ih,w_hh,b}
//   joint/{w_enc,w_dec,b,w_out,b_out}
//   ctc/<head>/{w,b}, sc/<tap>/w
// In pca_ctc with heads_shared, ctc/n2 aliases ctc/n1 and sc/n2 aliases
// sc/n1.
class PmuModel {
 public:
  PmuModel(const ModelConfig &cfg, std::uint64_t seed);

  const ModelConfig &config() const { return cfg_; }
  ParamStore &params() { return params_; }
  const ParamStore &params() const { return params_; }

  // x is T x feature_dim. rng drives dropout; null disables it.
  EncoderOutputs Encode(const Tensor &x, std::mt19937_64 *rng) const;
  // Rows 0..U: start state, then the state after each label of y.
  Var LabelEncode(std::span<const int> y) const;
  // h_t: T' x d, h_u: (U+1) x label_dim -> T' x (U+1) x V_trans.
  Var Joint(const Var &h_t, const Var &h_u) const;
  ForwardOutputs Forward(const Tensor &x, std::span<const int> y_trans,
                         std::mt19937_64 *rng) const;

  // Incremental pieces for decoding.
  LstmState LabelStart() const;
  LstmState LabelStep(const LstmState &state, int label) const;
  // Projected encoder frames, T' x joint_dim, reused for every label step.
  Var JointEncoderProjection(const Var &h_t) const;
  // Log-probabilities over V_trans for one projected frame and one label
  // encoder output row.
  Var JointStep(const Var &enc_proj_row, const Var &h_u_row) const;

 private:
  void CreateParams();
  Var Subsample(const Tensor &x, std::mt19937_64 *rng) const;
  Var Block(const std::string &scope, const Var &x, std::mt19937_64 *rng) const;
  Var FeedForward(const std::string &scope, const Var &x, std::mt19937_64 *rng) const;
  Var SelfAttention(const std::string &scope, const Var &x, std::mt19937_64 *rng) const;
  Var ConvModule(const std::string &scope, const Var &x, std::mt19937_64 *rng) const;
  Var P(const std::string &path) const { return params_.Get(path); }

  ModelConfig cfg_;
  ParamStore params_;
};

// h + posterior * W^T, frame-wise. w is d x V.
Var SelfCondition(const Var &h, const Var &posterior, const Var &w);

// Sinusoidal absolute position table, frames x dim.
Tensor PositionalEncoding(int frames, int dim);

}  // namespace pmu

#endif  // PMU_MODEL_MODEL_H_
