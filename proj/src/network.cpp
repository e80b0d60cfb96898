/*
 * Copyright 2026 The crackseg authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "crackseg/network.hpp"

#include <cmath>
#include <fstream>

#include "crackseg/binio.hpp"
#include "crackseg/rng.hpp"

namespace crackseg {

void validate(const ArchSpec& arch) {
  if (arch.depth < 1) throw std::invalid_argument("arch: depth must be >= 1");
  if (static_cast<int>(arch.channels.size()) != arch.depth) {
    throw std::invalid_argument("arch: channels list length must equal depth");
  }
  for (int c : arch.channels) {
    if (c < 1) throw std::invalid_argument("arch: non-positive channel count");
  }
  if (arch.kernel < 1 || arch.kernel % 2 == 0) {
    throw std::invalid_argument("arch: kernel size must be odd and positive");
  }
  const int stride = 1 << arch.depth;
  if (arch.input_rows <= 0 || arch.input_cols <= 0 ||
      arch.input_rows % stride != 0 || arch.input_cols % stride != 0) {
    throw std::invalid_argument(
        "arch: input dimensions must be positive and divisible by 2^depth");
  }
}

namespace {

// Channel plan. Encoder layer i maps (i == 0 ? 3 : ch[i-1]) -> ch[i].
// Decoder layer j mirrors encoder level i = depth-1-j and maps
// ch[i] -> (i >= 1 ? ch[i-1] : ch[0]). The classifier maps ch[0] -> 2.
int encoder_in(const ArchSpec& a, int i) { return i == 0 ? 3 : a.channels[i - 1]; }
int decoder_in(const ArchSpec& a, int j) { return a.channels[a.depth - 1 - j]; }
int decoder_out(const ArchSpec& a, int j) {
  const int level = a.depth - 1 - j;
  return level >= 1 ? a.channels[level - 1] : a.channels[0];
}

ConvLayer make_layer(int in_ch, int out_ch, int k) {
  ConvLayer l;
  l.in_channels = in_ch;
  l.out_channels = out_ch;
  l.kernel = k;
  l.weights.assign(static_cast<std::size_t>(out_ch) * in_ch, Plane::Zero(k, k));
  l.bias = Eigen::VectorXd::Zero(out_ch);
  return l;
}

void he_init(ConvLayer& l, Rng& rng) {
  const double stddev =
      std::sqrt(2.0 / (static_cast<double>(l.in_channels) * l.kernel * l.kernel));
  for (int o = 0; o < l.out_channels; ++o) {
    for (int c = 0; c < l.in_channels; ++c) {
      Plane& w = l.weight(o, c);
      for (int u = 0; u < l.kernel; ++u) {
        for (int v = 0; v < l.kernel; ++v) w(u, v) = rng.normal(0.0, stddev);
      }
    }
  }
}

Channels relu(const Channels& pre) {
  Channels act;
  act.reserve(pre.size());
  for (const Plane& z : pre) act.push_back(z.max(0.0));
  return act;
}

struct ConvGrads {
  std::vector<Plane> d_weights;
  Eigen::VectorXd d_bias;
  Channels d_input;
};

Channels pad_input(const Channels& in, int k) {
  const int p = (k - 1) / 2;
  const Eigen::Index rows = in[0].rows(), cols = in[0].cols();
  Channels padded(in.size(), Plane::Zero(rows + k - 1, cols + k - 1));
  for (std::size_t c = 0; c < in.size(); ++c) {
    padded[c].block(p, p, rows, cols) = in[c];
  }
  return padded;
}

ConvGrads conv_backward(const Channels& in, const ConvLayer& layer,
                        const Channels& d_out) {
  const int k = layer.kernel;
  const int p = (k - 1) / 2;
  const Eigen::Index rows = in[0].rows(), cols = in[0].cols();
  const Channels padded = pad_input(in, k);
  ConvGrads g;
  g.d_weights.assign(layer.weights.size(), Plane::Zero(k, k));
  g.d_bias = Eigen::VectorXd::Zero(layer.out_channels);
  Channels d_padded(layer.in_channels, Plane::Zero(rows + k - 1, cols + k - 1));
  for (int o = 0; o < layer.out_channels; ++o) {
    g.d_bias(o) = d_out[o].sum();
    for (int c = 0; c < layer.in_channels; ++c) {
      Plane& dw = g.d_weights[static_cast<std::size_t>(o) * layer.in_channels + c];
      const Plane& w = layer.weight(o, c);
      for (int u = 0; u < k; ++u) {
        for (int v = 0; v < k; ++v) {
          dw(u, v) = (d_out[o] * padded[c].block(u, v, rows, cols)).sum();
          d_padded[c].block(u, v, rows, cols) += w(u, v) * d_out[o];
        }
      }
    }
  }
  g.d_input.reserve(layer.in_channels);
  for (int c = 0; c < layer.in_channels; ++c) {
    g.d_input.push_back(d_padded[c].block(p, p, rows, cols));
  }
  return g;
}

/// Gradient of unpooling: gather the full-resolution grid at the stored index.
Plane pool_gather(const Plane& full, const PoolIndices& idx) {
  Plane out(idx.rows(), idx.cols());
  for (Eigen::Index i = 0; i < idx.rows(); ++i) {
    for (Eigen::Index j = 0; j < idx.cols(); ++j) {
      const int code = idx(i, j);
      out(i, j) = full(2 * i + code / 2, 2 * j + code % 2);
    }
  }
  return out;
}

}  // namespace

NetParams init_params(const ArchSpec& arch, std::uint64_t seed) {
  validate(arch);
  NetParams params;
  params.arch = arch;
  Rng rng(seed);
  for (int i = 0; i < arch.depth; ++i) {
    params.encoder.push_back(
        make_layer(encoder_in(arch, i), arch.channels[i], arch.kernel));
    he_init(params.encoder.back(), rng);
  }
  for (int j = 0; j < arch.depth; ++j) {
    params.decoder.push_back(
        make_layer(decoder_in(arch, j), decoder_out(arch, j), arch.kernel));
    he_init(params.decoder.back(), rng);
  }
  params.classifier = make_layer(arch.channels[0], 2, 1);
  he_init(params.classifier, rng);
  return params;
}

Channels conv_same(const Channels& in, const ConvLayer& layer) {
  if (static_cast<int>(in.size()) != layer.in_channels) {
    throw std::invalid_argument("conv_same: channel count mismatch");
  }
  const int k = layer.kernel;
  const Eigen::Index rows = in[0].rows(), cols = in[0].cols();
  const Channels padded = pad_input(in, k);
  Channels out;
  out.reserve(layer.out_channels);
  for (int o = 0; o < layer.out_channels; ++o) {
    Plane acc = Plane::Constant(rows, cols, layer.bias(o));
    for (int c = 0; c < layer.in_channels; ++c) {
      const Plane& w = layer.weight(o, c);
      for (int u = 0; u < k; ++u) {
        for (int v = 0; v < k; ++v) {
          acc += w(u, v) * padded[c].block(u, v, rows, cols);
        }
      }
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::pair<Plane, PoolIndices> max_pool2(const Plane& in) {
  if (in.rows() % 2 != 0 || in.cols() % 2 != 0) {
    throw std::invalid_argument("max_pool2: odd input dimensions");
  }
  const Eigen::Index rows = in.rows() / 2, cols = in.cols() / 2;
  Plane out(rows, cols);
  PoolIndices idx(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double best = in(2 * i, 2 * j);
      int code = 0;
      for (int c = 1; c < 4; ++c) {
        const double v = in(2 * i + c / 2, 2 * j + c % 2);
        if (v > best) {  // ties keep the first window cell
          best = v;
          code = c;
        }
      }
      out(i, j) = best;
      idx(i, j) = static_cast<std::int8_t>(code);
    }
  }
  return {std::move(out), std::move(idx)};
}

Plane unpool2(const Plane& pooled, const PoolIndices& idx) {
  if (pooled.rows() != idx.rows() || pooled.cols() != idx.cols()) {
    throw std::invalid_argument("unpool2: index grid shape mismatch");
  }
  Plane out = Plane::Zero(pooled.rows() * 2, pooled.cols() * 2);
  for (Eigen::Index i = 0; i < pooled.rows(); ++i) {
    for (Eigen::Index j = 0; j < pooled.cols(); ++j) {
      const int code = idx(i, j);
      out(2 * i + code / 2, 2 * j + code % 2) = pooled(i, j);
    }
  }
  return out;
}

std::pair<ProbMap, ForwardCache> forward(const NetParams& params,
                                         const Channels& image) {
  const ArchSpec& arch = params.arch;
  if (image.size() != 3 || image[0].rows() != arch.input_rows ||
      image[0].cols() != arch.input_cols) {
    throw std::invalid_argument("forward: image does not match ArchSpec");
  }
  ForwardCache cache;
  cache.input = image;
  Channels cur = image;
  for (int i = 0; i < arch.depth; ++i) {
    cache.enc_in.push_back(cur);
    Channels pre = conv_same(cur, params.encoder[i]);
    Channels act = relu(pre);
    cache.enc_pre.push_back(std::move(pre));
    Channels pooled;
    std::vector<PoolIndices> idx;
    pooled.reserve(act.size());
    idx.reserve(act.size());
    for (const Plane& a : act) {
      auto [p, ix] = max_pool2(a);
      pooled.push_back(std::move(p));
      idx.push_back(std::move(ix));
    }
    cache.pool.push_back(std::move(idx));
    cur = std::move(pooled);
  }
  for (int j = 0; j < arch.depth; ++j) {
    const int level = arch.depth - 1 - j;
    Channels unpooled;
    unpooled.reserve(cur.size());
    for (std::size_t c = 0; c < cur.size(); ++c) {
      unpooled.push_back(unpool2(cur[c], cache.pool[level][c]));
    }
    cache.dec_in.push_back(unpooled);
    Channels pre = conv_same(unpooled, params.decoder[j]);
    cur = relu(pre);
    cache.dec_pre.push_back(std::move(pre));
  }
  cache.head_in = cur;
  const Channels logits = conv_same(cur, params.classifier);
  const Plane m = logits[0].max(logits[1]);
  const Plane e0 = (logits[0] - m).exp();
  const Plane e1 = (logits[1] - m).exp();
  const Plane sum = e0 + e1;
  ProbMap probs;
  probs.background = e0 / sum;
  probs.crack = e1 / sum;
  cache.probs = probs;
  return {std::move(probs), std::move(cache)};
}

double weighted_cross_entropy(const ProbMap& p, const Mask& truth,
                              const ClassWeights& w) {
  if (p.rows() != truth.rows() || p.cols() != truth.cols()) {
    throw std::invalid_argument("weighted_cross_entropy: shape mismatch");
  }
  const Plane is_crack = truth.cast<double>();
  const Plane p_true =
      is_crack * p.crack + (1.0 - is_crack) * p.background;
  const Plane weight = is_crack * w.crack + (1.0 - is_crack) * w.background;
  return (-weight * p_true.max(1e-12).log()).mean();
}

Gradients backward(const NetParams& params, const ForwardCache& cache,
                   const Mask& truth, const ClassWeights& w) {
  const ArchSpec& arch = params.arch;
  if (cache.probs.rows() != truth.rows() ||
      cache.probs.cols() != truth.cols() ||
      static_cast<int>(cache.enc_pre.size()) != arch.depth ||
      static_cast<int>(cache.dec_pre.size()) != arch.depth) {
    throw std::invalid_argument("backward: stale cache (shape mismatch)");
  }
  Gradients grads = zeros_like(params);
  const double inv_n = 1.0 / static_cast<double>(truth.size());
  const Plane is_crack = truth.cast<double>();
  const Plane weight = is_crack * w.crack + (1.0 - is_crack) * w.background;
  // Fused softmax/cross-entropy gradient (exact while the 1e-12 log clip is
  // inactive): d logit_c = w_y (p_c - [y == c]) / HW.
  Channels d_logits(2);
  d_logits[0] = weight * (cache.probs.background - (1.0 - is_crack)) * inv_n;
  d_logits[1] = weight * (cache.probs.crack - is_crack) * inv_n;

  ConvGrads head = conv_backward(cache.head_in, params.classifier, d_logits);
  grads.classifier.weights = std::move(head.d_weights);
  grads.classifier.bias = std::move(head.d_bias);

  Channels d_cur = std::move(head.d_input);
  for (int j = arch.depth - 1; j >= 0; --j) {
    const int level = arch.depth - 1 - j;
    Channels d_pre(d_cur.size());
    for (std::size_t c = 0; c < d_cur.size(); ++c) {
      d_pre[c] = d_cur[c] * (cache.dec_pre[j][c] > 0.0).cast<double>();
    }
    ConvGrads g = conv_backward(cache.dec_in[j], params.decoder[j], d_pre);
    grads.decoder[j].weights = std::move(g.d_weights);
    grads.decoder[j].bias = std::move(g.d_bias);
    // back through unpooling: gather at the stored indices
    d_cur.clear();
    d_cur.reserve(g.d_input.size());
    for (std::size_t c = 0; c < g.d_input.size(); ++c) {
      d_cur.push_back(pool_gather(g.d_input[c], cache.pool[level][c]));
    }
  }
  for (int i = arch.depth - 1; i >= 0; --i) {
    // back through max-pool: scatter to the argmax cells, then ReLU mask
    Channels d_pre(d_cur.size());
    for (std::size_t c = 0; c < d_cur.size(); ++c) {
      const Plane d_act = unpool2(d_cur[c], cache.pool[i][c]);
      d_pre[c] = d_act * (cache.enc_pre[i][c] > 0.0).cast<double>();
    }
    ConvGrads g = conv_backward(cache.enc_in[i], params.encoder[i], d_pre);
    grads.encoder[i].weights = std::move(g.d_weights);
    grads.encoder[i].bias = std::move(g.d_bias);
    d_cur = std::move(g.d_input);
  }
  return grads;
}

Gradients zeros_like(const NetParams& params) {
  Gradients g;
  g.arch = params.arch;
  auto zero_layer = [](const ConvLayer& l) {
    return make_layer(l.in_channels, l.out_channels, l.kernel);
  };
  for (const ConvLayer& l : params.encoder) g.encoder.push_back(zero_layer(l));
  for (const ConvLayer& l : params.decoder) g.decoder.push_back(zero_layer(l));
  g.classifier = zero_layer(params.classifier);
  return g;
}

namespace {

template <typename Fn>
void visit_layers(NetParams& p, Fn&& fn) {
  for (ConvLayer& l : p.encoder) fn(l);
  for (ConvLayer& l : p.decoder) fn(l);
  fn(p.classifier);
}

template <typename Fn>
void visit_layers(const NetParams& p, Fn&& fn) {
  for (const ConvLayer& l : p.encoder) fn(l);
  for (const ConvLayer& l : p.decoder) fn(l);
  fn(p.classifier);
}

}  // namespace

void accumulate(Gradients& into, const Gradients& g) {
  auto add = [](ConvLayer& a, const ConvLayer& b) {
    for (std::size_t i = 0; i < a.weights.size(); ++i) a.weights[i] += b.weights[i];
    a.bias += b.bias;
  };
  for (std::size_t i = 0; i < into.encoder.size(); ++i) add(into.encoder[i], g.encoder[i]);
  for (std::size_t i = 0; i < into.decoder.size(); ++i) add(into.decoder[i], g.decoder[i]);
  add(into.classifier, g.classifier);
}

void scale(Gradients& g, double factor) {
  visit_layers(g, [factor](ConvLayer& l) {
    for (Plane& w : l.weights) w *= factor;
    l.bias *= factor;
  });
}

std::size_t param_count(const NetParams& params) {
  std::size_t n = 0;
  visit_layers(params, [&n](const ConvLayer& l) {
    n += l.weights.size() * static_cast<std::size_t>(l.kernel) * l.kernel;
    n += static_cast<std::size_t>(l.bias.size());
  });
  return n;
}

Eigen::ArrayXd flatten(const NetParams& params) {
  Eigen::ArrayXd flat(static_cast<Eigen::Index>(param_count(params)));
  Eigen::Index k = 0;
  visit_layers(params, [&](const ConvLayer& l) {
    for (const Plane& w : l.weights) {
      for (Eigen::Index u = 0; u < w.rows(); ++u) {
        for (Eigen::Index v = 0; v < w.cols(); ++v) flat(k++) = w(u, v);
      }
    }
    for (Eigen::Index b = 0; b < l.bias.size(); ++b) flat(k++) = l.bias(b);
  });
  return flat;
}

void unflatten(NetParams& params, const Eigen::ArrayXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(param_count(params))) {
    throw std::invalid_argument("unflatten: size mismatch");
  }
  Eigen::Index k = 0;
  visit_layers(params, [&](ConvLayer& l) {
    for (Plane& w : l.weights) {
      for (Eigen::Index u = 0; u < w.rows(); ++u) {
        for (Eigen::Index v = 0; v < w.cols(); ++v) w(u, v) = flat(k++);
      }
    }
    for (Eigen::Index b = 0; b < l.bias.size(); ++b) l.bias(b) = flat(k++);
  });
}

std::vector<std::pair<std::string, const ConvLayer*>> named_layers(
    const NetParams& params) {
  std::vector<std::pair<std::string, const ConvLayer*>> out;
  for (std::size_t i = 0; i < params.encoder.size(); ++i) {
    out.emplace_back("encoder" + std::to_string(i + 1), &params.encoder[i]);
  }
  for (std::size_t i = 0; i < params.decoder.size(); ++i) {
    out.emplace_back("decoder" + std::to_string(i + 1), &params.decoder[i]);
  }
  out.emplace_back("classifier", &params.classifier);
  return out;
}

void save_netp(const std::string& path, const NetParams& params) {
  std::string buf;
  buf.append("NETP");
  binio::put_u32le(buf, static_cast<std::uint32_t>(params.arch.depth));
  binio::put_u32le(buf, static_cast<std::uint32_t>(params.arch.kernel));
  binio::put_u32le(buf, static_cast<std::uint32_t>(params.arch.input_rows));
  binio::put_u32le(buf, static_cast<std::uint32_t>(params.arch.input_cols));
  for (int c : params.arch.channels) {
    binio::put_u32le(buf, static_cast<std::uint32_t>(c));
  }
  const Eigen::ArrayXd flat = flatten(params);
  for (Eigen::Index i = 0; i < flat.size(); ++i) binio::put_f64le(buf, flat(i));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path + ": cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError(path + ": write failed");
}

NetParams load_netp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open file");
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < 20 || data.compare(0, 4, "NETP") != 0) {
    throw FormatError(path + ": bad magic (expected NETP)");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  ArchSpec arch;
  arch.depth = static_cast<int>(binio::get_u32le(p + 4));
  arch.kernel = static_cast<int>(binio::get_u32le(p + 8));
  arch.input_rows = static_cast<int>(binio::get_u32le(p + 12));
  arch.input_cols = static_cast<int>(binio::get_u32le(p + 16));
  if (arch.depth < 1 || arch.depth > 16) {
    throw FormatError(path + ": implausible depth");
  }
  const std::size_t header = 20 + 4 * static_cast<std::size_t>(arch.depth);
  if (data.size() < header) throw FormatError(path + ": truncated header");
  arch.channels.resize(arch.depth);
  for (int i = 0; i < arch.depth; ++i) {
    arch.channels[i] = static_cast<int>(binio::get_u32le(p + 20 + 4 * i));
  }
  validate(arch);
  NetParams params = init_params(arch, 0);
  const std::size_t count = param_count(params);
  if (data.size() != header + 8 * count) {
    throw FormatError(path + ": payload length mismatch");
  }
  Eigen::ArrayXd flat(static_cast<Eigen::Index>(count));
  const unsigned char* q = p + header;
  for (std::size_t i = 0; i < count; ++i) {
    flat(static_cast<Eigen::Index>(i)) = binio::get_f64le(q);
    q += 8;
  }
  unflatten(params, flat);
  return params;
}

}  // namespace crackseg
