// src/model/model.cc

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

#include "pmu/model/model.h"

#include <cmath>

#include "pmu/core/error.h"

namespace pmu {

namespace {

const char *TapName(Tap t) {
  switch (t) {
    case Tap::kN1: return "n1";
    case Tap::kN2: return "n2";
    case Tap::kN3: return "n3";
  }
  return "?";
}

int HalfUp(int n) { return (n + 1) / 2; }

}  // namespace

int SubsampledLength(int frames, int subsample_factor) {
  int t = frames;
  for (int f = subsample_factor; f > 1; f /= 2) t = HalfUp(t);
  return t;
}

Tensor PositionalEncoding(int frames, int dim) {
  Tensor pe({frames, dim}, 0);
  for (int t = 0; t < frames; ++t)
    for (int i = 0; i < dim; ++i) {
      const double rate = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / dim);
      pe.at(t, i) = static_cast<Real>(i % 2 == 0 ? std::sin(t * rate) : std::cos(t * rate));
    }
  return pe;
}

Var SelfCondition(const Var &h, const Var &posterior, const Var &w) {
  PMU_CHECK(h->value.rank() == 2 && posterior->value.rank() == 2,
            "self_condition: expected matrices");
  PMU_CHECK(posterior->value.dim(0) == h->value.dim(0), "self_condition: frame mismatch ",
            ShapeString(h->value.shape()), " vs ", ShapeString(posterior->value.shape()));
  PMU_CHECK(w->value.rank() == 2 && w->value.dim(0) == h->value.dim(1) &&
                w->value.dim(1) == posterior->value.dim(1),
            "self_condition: projection ", ShapeString(w->value.shape()), " does not map ",
            posterior->value.dim(1), " -> ", h->value.dim(1));
  return Add(h, Linear(posterior, w, nullptr));
}

PmuModel::PmuModel(const ModelConfig &cfg, std::uint64_t seed) : cfg_(cfg), params_(seed) {
  cfg_.Validate();
  CreateParams();
}

void PmuModel::CreateParams() {
  const EncoderConfig &e = cfg_.encoder;
  const int d = e.attention_dim;
  auto linear = [&](const std::string &scope, int out, int in, bool bias = true) {
    params_.Create(scope + "/w", {out, in}, Init::kUniformFanIn);
    if (bias) params_.Create(scope + "/b", {out}, Init::kZero);
  };
  auto norm = [&](const std::string &scope) {
    params_.Create(scope + "/g", {d}, Init::kOne);
    params_.Create(scope + "/b", {d}, Init::kZero);
  };

  const int channels = e.subsample_channels > 0 ? e.subsample_channels : d;
  int in_ch = 1, width = cfg_.feature_dim, conv = 0;
  for (int f = e.subsample_factor; f > 1; f /= 2, ++conv) {
    const std::string scope = "enc/sub/conv" + std::to_string(conv);
    params_.Create(scope + "/w", {channels, in_ch, 3, 3}, Init::kUniformFanIn);
    params_.Create(scope + "/b", {channels}, Init::kZero);
    in_ch = channels;
    width = HalfUp(width);
  }
  linear("enc/sub/proj", d, in_ch * width);

  for (int i = 0; i < e.num_layers; ++i) {
    const std::string b = "enc/block" + std::to_string(i);
    for (const char *ff : {"/ff1", "/ff2"}) {
      norm(b + ff + "/ln");
      linear(b + ff + "/l1", e.ff_dim, d);
      linear(b + ff + "/l2", d, e.ff_dim);
    }
    norm(b + "/mhsa/ln");
    for (const char *p : {"/q", "/k", "/v", "/o"}) linear(b + "/mhsa" + p, d, d);
    norm(b + "/conv/ln");
    linear(b + "/conv/pw1", 2 * d, d);
    params_.Create(b + "/conv/dw/w", {d, e.conv_kernel}, Init::kUniformFanIn);
    params_.Create(b + "/conv/dw/b", {d}, Init::kZero);
    norm(b + "/conv/ln2");
    linear(b + "/conv/pw2", d, d);
    norm(b + "/ln_out");
  }

  const int v_trans = cfg_.VocabSize(cfg_.pmu.trans_units);
  params_.Create("dec/embed", {v_trans, cfg_.label_dim}, Init::kUniformFanIn);
  params_.Create("dec/lstm/w_ih", {4 * cfg_.label_dim, cfg_.label_dim}, Init::kUniformFanIn);
  params_.Create("dec/lstm/w_hh", {4 * cfg_.label_dim, cfg_.label_dim}, Init::kUniformFanIn);
  params_.Create("dec/lstm/b", {4 * cfg_.label_dim}, Init::kZero);
  params_.Create("joint/w_enc", {cfg_.joint_dim, d}, Init::kUniformFanIn);
  params_.Create("joint/w_dec", {cfg_.joint_dim, cfg_.label_dim}, Init::kUniformFanIn);
  params_.Create("joint/b", {cfg_.joint_dim}, Init::kZero);
  params_.Create("joint/w_out", {v_trans, cfg_.joint_dim}, Init::kUniformFanIn);
  params_.Create("joint/b_out", {v_trans}, Init::kZero);

  const PmuConfig &p = cfg_.pmu;
  const bool pca = p.variant == Variant::kPcaCtc;
  const bool share = pca && p.heads_shared && p.n2 > 0;
  for (const HeadSpec &h : ActiveHeads(p)) {
    const std::string scope = "ctc/" + h.name;
    if (share && h.tap == Tap::kN2) {
      params_.Alias(scope + "/w", "ctc/n1/w");
      params_.Alias(scope + "/b", "ctc/n1/b");
    } else {
      linear(scope, cfg_.VocabSize(h.units), d);
    }
    if (pca && p.sc_enabled && h.tap != Tap::kN3) {
      const std::string sc = std::string("sc/") + TapName(h.tap) + "/w";
      if (share && h.tap == Tap::kN2)
        params_.Alias(sc, "sc/n1/w");
      else
        params_.Create(sc, {d, cfg_.VocabSize(h.units)}, Init::kUniformFanIn);
    }
  }
}

Var PmuModel::Subsample(const Tensor &x, std::mt19937_64 *rng) const {
  PMU_CHECK(x.rank() == 2 && x.dim(1) == cfg_.feature_dim, "encode: expected T x ",
            cfg_.feature_dim, " features, got ", ShapeString(x.shape()));
  const EncoderConfig &e = cfg_.encoder;
  Var h = Constant(x);
  if (e.subsample_factor > 1) {
    h = Reshape(h, {1, x.dim(0), x.dim(1)});
    int conv = 0;
    for (int f = e.subsample_factor; f > 1; f /= 2, ++conv) {
      const std::string scope = "enc/sub/conv" + std::to_string(conv);
      h = Swish(Conv2d(h, P(scope + "/w"), P(scope + "/b"), 2, 1));
    }
    h = SwapAxes01(h);  // C x T' x F' -> T' x C x F'
    const Shape &s = h->value.shape();
    h = Reshape(h, {s[0], s[1] * s[2]});
  }
  h = Linear(h, P("enc/sub/proj/w"), P("enc/sub/proj/b"));
  h = Add(h, Constant(PositionalEncoding(h->value.dim(0), e.attention_dim)));
  return Dropout(h, e.dropout, rng);
}

Var PmuModel::FeedForward(const std::string &s, const Var &x, std::mt19937_64 *rng) const {
  const Real p = cfg_.encoder.dropout;
  Var h = LayerNorm(x, P(s + "/ln/g"), P(s + "/ln/b"));
  h = Swish(Linear(h, P(s + "/l1/w"), P(s + "/l1/b")));
  h = Linear(Dropout(h, p, rng), P(s + "/l2/w"), P(s + "/l2/b"));
  return Dropout(h, p, rng);
}

Var PmuModel::SelfAttention(const std::string &s, const Var &x, std::mt19937_64 *rng) const {
  Var h = LayerNorm(x, P(s + "/ln/g"), P(s + "/ln/b"));
  Var q = Linear(h, P(s + "/q/w"), P(s + "/q/b"));
  Var k = Linear(h, P(s + "/k/w"), P(s + "/k/b"));
  Var v = Linear(h, P(s + "/v/w"), P(s + "/v/b"));
  h = MultiHeadAttention(q, k, v, cfg_.encoder.heads);
  h = Linear(h, P(s + "/o/w"), P(s + "/o/b"));
  return Dropout(h, cfg_.encoder.dropout, rng);
}

Var PmuModel::ConvModule(const std::string &s, const Var &x, std::mt19937_64 *rng) const {
  Var h = LayerNorm(x, P(s + "/ln/g"), P(s + "/ln/b"));
  h = Glu(Linear(h, P(s + "/pw1/w"), P(s + "/pw1/b")));
  h = DepthwiseConv1d(h, P(s + "/dw/w"), P(s + "/dw/b"));
  h = Swish(LayerNorm(h, P(s + "/ln2/g"), P(s + "/ln2/b")));
  h = Linear(h, P(s + "/pw2/w"), P(s + "/pw2/b"));
  return Dropout(h, cfg_.encoder.dropout, rng);
}

Var PmuModel::Block(const std::string &s, const Var &x, std::mt19937_64 *rng) const {
  Var h = Add(x, Scale(FeedForward(s + "/ff1", x, rng), 0.5));
  h = Add(h, SelfAttention(s + "/mhsa", h, rng));
  h = Add(h, ConvModule(s + "/conv", h, rng));
  h = Add(h, Scale(FeedForward(s + "/ff2", h, rng), 0.5));
  return LayerNorm(h, P(s + "/ln_out/g"), P(s + "/ln_out/b"));
}

EncoderOutputs PmuModel::Encode(const Tensor &x, std::mt19937_64 *rng) const {
  EncoderOutputs out;
  Var h = Subsample(x, rng);
  const std::vector<HeadSpec> heads = ActiveHeads(cfg_.pmu);
  const std::vector<int> groups = GroupSizes(cfg_);
  const bool pca = cfg_.pmu.variant == Variant::kPcaCtc;
  const Tap taps[] = {Tap::kN1, Tap::kN2, Tap::kN3};
  int layer = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g] == 0) continue;
    for (int i = 0; i < groups[g]; ++i, ++layer)
      h = Block("enc/block" + std::to_string(layer), h, rng);
    const Tap tap = pca ? taps[g] : Tap::kN3;
    if (tap == Tap::kN1) out.h_n1 = h;
    if (tap == Tap::kN2) out.h_n2 = h;
    if (tap == Tap::kN3) out.h_n3 = h;
    Var sc_input;
    bool any = false;
    for (const HeadSpec &head : heads) {
      if (head.tap != tap) continue;
      any = true;
      const std::string scope = "ctc/" + head.name;
      Var logits = Linear(h, P(scope + "/w"), P(scope + "/b"));
      out.ctc_logprobs[head.name] = LogSoftmax(logits);
      if (pca && cfg_.pmu.sc_enabled && tap != Tap::kN3) sc_input = Softmax(logits);
    }
    if (any) ++out.num_taps;
    if (sc_input) h = SelfCondition(h, sc_input, P(std::string("sc/") + TapName(tap) + "/w"));
  }
  return out;
}

LstmState PmuModel::LabelStart() const { return LabelStep(LstmZeroState(cfg_.label_dim), 0); }

LstmState PmuModel::LabelStep(const LstmState &state, int label) const {
  const int v = cfg_.VocabSize(cfg_.pmu.trans_units);
  PMU_CHECK(label >= 0 && label < v, "label_encoder: id ", label, " outside [0, ", v, ")");
  const int ids[] = {label};
  LstmParams lp{P("dec/lstm/w_ih"), P("dec/lstm/w_hh"), P("dec/lstm/b")};
  return LstmStep(GatherRows(P("dec/embed"), ids), state, lp);
}

Var PmuModel::LabelEncode(std::span<const int> y) const {
  const int v = cfg_.VocabSize(cfg_.pmu.trans_units);
  std::vector<int> ids{0};
  for (int id : y) {
    PMU_CHECK(id > 0 && id < v, "label_encoder: label ", id, " outside [1, ", v, ")");
    ids.push_back(id);
  }
  Var emb = GatherRows(P("dec/embed"), ids);
  LstmParams lp{P("dec/lstm/w_ih"), P("dec/lstm/w_hh"), P("dec/lstm/b")};
  LstmState s = LstmZeroState(cfg_.label_dim);
  std::vector<Var> rows;
  for (int u = 0; u < static_cast<int>(ids.size()); ++u) {
    s = LstmStep(SliceRows(emb, u, 1), s, lp);
    rows.push_back(s.h);
  }
  return rows.size() == 1 ? rows[0] : ConcatRows(rows);
}

Var PmuModel::JointEncoderProjection(const Var &h_t) const {
  return Linear(h_t, P("joint/w_enc"), nullptr);
}

Var PmuModel::Joint(const Var &h_t, const Var &h_u) const {
  Var enc = JointEncoderProjection(h_t);
  Var dec = Linear(h_u, P("joint/w_dec"), P("joint/b"));
  const int t_len = h_t->value.dim(0), u_len = h_u->value.dim(0);
  Var z = Tanh(OuterAdd(enc, dec));
  z = Reshape(z, {t_len * u_len, cfg_.joint_dim});
  z = LogSoftmax(Linear(z, P("joint/w_out"), P("joint/b_out")));
  return Reshape(z, {t_len, u_len, z->value.dim(1)});
}

Var PmuModel::JointStep(const Var &enc_proj_row, const Var &h_u_row) const {
  Var z = Tanh(Add(enc_proj_row, Linear(h_u_row, P("joint/w_dec"), P("joint/b"))));
  return LogSoftmax(Linear(z, P("joint/w_out"), P("joint/b_out")));
}

ForwardOutputs PmuModel::Forward(const Tensor &x, std::span<const int> y_trans,
                                 std::mt19937_64 *rng) const {
  ForwardOutputs out;
  out.enc = Encode(x, rng);
  out.h_u = LabelEncode(y_trans);
  out.lattice = Joint(out.enc.h_n3, out.h_u);
  return out;
}

}  // namespace pmu
