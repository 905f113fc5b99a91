// Copyright 2026 The fqsvt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <arm_neon.h>

#include "fqsvt/simd/kernels.hpp"

namespace fqsvt::simd::neon {
namespace {

// One complex number per register: [re, im].
inline float64x2_t load1(const cplx* p) {
  return vld1q_f64(reinterpret_cast<const double*>(p));
}
inline void store1(cplx* p, float64x2_t v) {
  vst1q_f64(reinterpret_cast<double*>(p), v);
}

inline float64x2_t cmul(cplx a, float64x2_t v) {
  // [ar*vr - ai*vi, ar*vi + ai*vr]
  const float64x2_t swapped = vextq_f64(v, v, 1);
  const float64x2_t aim = {-a.imag(), a.imag()};
  return vfmaq_f64(vmulq_n_f64(v, a.real()), aim, swapped);
}

}  // namespace

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) {
    store1(y + i, vaddq_f64(load1(y + i), cmul(alpha, load1(x + i))));
  }
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  float64x2_t p = vdupq_n_f64(0.0);
  float64x2_t q = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = load1(x + i);
    const float64x2_t yv = load1(y + i);
    p = vfmaq_f64(p, xv, yv);
    q = vfmaq_f64(q, xv, vextq_f64(yv, yv, 1));
  }
  return {vgetq_lane_f64(p, 0) + vgetq_lane_f64(p, 1),
          vgetq_lane_f64(q, 0) - vgetq_lane_f64(q, 1)};
}

cplx dotu(std::size_t n, const cplx* x, const cplx* y) {
  float64x2_t p = vdupq_n_f64(0.0);
  float64x2_t q = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = load1(x + i);
    const float64x2_t yv = load1(y + i);
    p = vfmaq_f64(p, xv, yv);
    q = vfmaq_f64(q, xv, vextq_f64(yv, yv, 1));
  }
  return {vgetq_lane_f64(p, 0) - vgetq_lane_f64(p, 1),
          vgetq_lane_f64(q, 0) + vgetq_lane_f64(q, 1)};
}

void rot(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = load1(x + i);
    const float64x2_t yv = load1(y + i);
    store1(x + i, vaddq_f64(cmul(a, xv), cmul(b, yv)));
    store1(y + i, vaddq_f64(cmul(c, xv), cmul(d, yv)));
  }
}

double norm2(std::size_t n, const cplx* x) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = load1(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

}  // namespace fqsvt::simd::neon
