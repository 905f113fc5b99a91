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

// Compiled with -mavx2 -mfma; only reached through the dispatcher after a
// runtime CPUID check.

#include <immintrin.h>

#include "fqsvt/simd/kernels.hpp"

namespace fqsvt::simd::avx2 {
namespace {

// Two complex numbers per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}
inline void store2(cplx* p, __m256d v) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), v);
}

// alpha * v for a broadcast complex scalar.
inline __m256d cmul_scalar(__m256d are, __m256d aim, __m256d v) {
  const __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(are, v, _mm256_mul_pd(aim, swapped));
}

inline cplx hsum2(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

}  // namespace

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    store2(y + i, _mm256_add_pd(load2(y + i), cmul_scalar(are, aim, load2(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// For x = (a + ib), y = (c + id):
//   conj(x) y = (ac + bd) + i(ad - bc)
//   x y       = (ac - bd) + i(ad + bc)
// Accumulate p = x * y lane-wise ([ac, bd]) and q = x * swap(y) ([ad, bc]).
cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  __m256d p = _mm256_setzero_pd();
  __m256d q = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    p = _mm256_fmadd_pd(xv, yv, p);
    q = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), q);
  }
  alignas(32) double pp[4];
  alignas(32) double qq[4];
  _mm256_store_pd(pp, p);
  _mm256_store_pd(qq, q);
  double re = pp[0] + pp[1] + pp[2] + pp[3];
  double im = (qq[0] - qq[1]) + (qq[2] - qq[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

cplx dotu(std::size_t n, const cplx* x, const cplx* y) {
  __m256d p = _mm256_setzero_pd();
  __m256d q = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    p = _mm256_fmadd_pd(xv, yv, p);
    q = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), q);
  }
  alignas(32) double pp[4];
  alignas(32) double qq[4];
  _mm256_store_pd(pp, p);
  _mm256_store_pd(qq, q);
  double re = (pp[0] - pp[1]) + (pp[2] - pp[3]);
  double im = qq[0] + qq[1] + qq[2] + qq[3];
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

void rot(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y) {
  const __m256d are = _mm256_set1_pd(a.real()), aim = _mm256_set1_pd(a.imag());
  const __m256d bre = _mm256_set1_pd(b.real()), bim = _mm256_set1_pd(b.imag());
  const __m256d cre = _mm256_set1_pd(c.real()), cim = _mm256_set1_pd(c.imag());
  const __m256d dre = _mm256_set1_pd(d.real()), dim = _mm256_set1_pd(d.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    store2(x + i, _mm256_add_pd(cmul_scalar(are, aim, xv), cmul_scalar(bre, bim, yv)));
    store2(y + i, _mm256_add_pd(cmul_scalar(cre, cim, xv), cmul_scalar(dre, dim, yv)));
  }
  for (; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = a * xi + b * yi;
    y[i] = c * xi + d * yi;
  }
}

double norm2(std::size_t n, const cplx* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  const cplx h = hsum2(acc);
  double s = h.real() + h.imag();
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

}  // namespace fqsvt::simd::avx2
