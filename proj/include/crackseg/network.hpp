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
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "crackseg/priors.hpp"
#include "crackseg/types.hpp"

namespace crackseg {

// Miniature SegNet-style fully convolutional encoder-decoder.
//
// Encoder block i:  same-padded conv -> bias -> ReLU -> 2x2 max-pool
//                   (stride 2, argmax indices stored)
// Decoder block j:  index unpooling -> same-padded conv -> bias -> ReLU
// Head:             1x1 conv to 2 channels -> per-pixel softmax
//
// Decoder block j reuses the pooling indices of encoder block depth-j+1, so
// the output spatial shape always equals the input shape.

struct ArchSpec {
  int depth = 4;
  std::vector<int> channels = {16, 32, 64, 128};  // one entry per level
  int kernel = 3;                                 // odd
  int input_rows = 0;
  int input_cols = 0;
};

void validate(const ArchSpec& arch);

struct ConvLayer {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 1;
  std::vector<Plane> weights;  // out*in entries of k×k, index out*in_channels+in
  Eigen::VectorXd bias;        // out

  Plane& weight(int out, int in) { return weights[out * in_channels + in]; }
  const Plane& weight(int out, int in) const {
    return weights[out * in_channels + in];
  }
};

struct NetParams {
  ArchSpec arch;
  std::vector<ConvLayer> encoder;  // depth layers
  std::vector<ConvLayer> decoder;  // depth layers
  ConvLayer classifier;            // 1x1, 2 outputs
};

/// Gradients are shape-congruent with NetParams; the same container is used.
using Gradients = NetParams;

/// 2x2 argmax codes: 0 = (0,0), 1 = (0,1), 2 = (1,0), 3 = (1,1).
using PoolIndices = Eigen::Array<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct ForwardCache {
  Channels input;
  // Encoder: per layer, the conv input, pre-activation, and pool indices.
  std::vector<Channels> enc_in;
  std::vector<Channels> enc_pre;               // pre-ReLU conv outputs
  std::vector<std::vector<PoolIndices>> pool;  // per layer, per channel
  // Decoder: per layer, the unpooled conv input and pre-activation.
  std::vector<Channels> dec_in;
  std::vector<Channels> dec_pre;
  Channels head_in;  // input to the 1x1 classifier
  ProbMap probs;
};

/// He-normal kernels (variance 2/fan-in), zero biases, deterministic in seed.
NetParams init_params(const ArchSpec& arch, std::uint64_t seed);

std::pair<ProbMap, ForwardCache> forward(const NetParams& params,
                                         const Channels& image);

// L = (1/HW) * sum over pixels of -w_y * log max(p_y, 1e-12).
double weighted_cross_entropy(const ProbMap& p, const Mask& truth,
                              const ClassWeights& w);

/// Exact analytic gradients of weighted_cross_entropy for the forward pass
/// that produced `cache`. Unpooling routes gradients only through the stored
/// indices.
Gradients backward(const NetParams& params, const ForwardCache& cache,
                   const Mask& truth, const ClassWeights& w);

Gradients zeros_like(const NetParams& params);
void accumulate(Gradients& into, const Gradients& g);
void scale(Gradients& g, double factor);

/// Total learnable parameter count.
std::size_t param_count(const NetParams& params);

// Canonical flat parameter order (encoder, decoder, classifier; per layer
// kernels out-major/in-major/row-major, then biases). Used by the optimizers
// and the NETP payload.
Eigen::ArrayXd flatten(const NetParams& params);
void unflatten(NetParams& params, const Eigen::ArrayXd& flat);

/// Layers in canonical order with stable names ("encoder1", ..., "classifier").
std::vector<std::pair<std::string, const ConvLayer*>> named_layers(
    const NetParams& params);

// Building blocks, exposed for tests.
Channels conv_same(const Channels& in, const ConvLayer& layer);
std::pair<Plane, PoolIndices> max_pool2(const Plane& in);
Plane unpool2(const Plane& pooled, const PoolIndices& idx);

// NETP serialization: magic "NETP", ArchSpec integers (u32le: depth, kernel,
// input rows, input cols, then the channel list), then the flat parameter
// payload as little-endian 64-bit floats. Layer order: encoder blocks, then
// decoder blocks, then classifier; per layer all kernels (out-major,
// in-major, row-major within a kernel) followed by the biases.
void save_netp(const std::string& path, const NetParams& params);
NetParams load_netp(const std::string& path);

}  // namespace crackseg
