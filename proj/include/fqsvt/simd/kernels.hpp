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

#pragma once

// Complex double-precision inner loops used by the dense linear algebra.
//
// Every kernel has a portable scalar reference in namespace `scalar` and,
// where the target supports it, vectorized variants (`avx2`, `neon`). The
// `active()` table is resolved once at first use from the running CPU's
// features and can be pinned with `force_isa()` (tests use this to compare
// variants against the reference).
//
// Data is interleaved (re, im) pairs, i.e. the memory layout of
// std::complex<double>.

#include <complex>
#include <cstddef>
#include <string_view>

namespace fqsvt::simd {

using cplx = std::complex<double>;

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // y[i] += alpha * x[i]
  void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
  // sum_i conj(x[i]) * y[i]
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
  // sum_i x[i] * y[i]
  cplx (*dotu)(std::size_t n, const cplx* x, const cplx* y);
  // Apply the 2x2 matrix [[a, b], [c, d]] to every pair (x[i], y[i]):
  //   x' = a x + b y,  y' = c x + d y
  void (*rot)(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y);
  // sum_i |x[i]|^2
  double (*norm2)(std::size_t n, const cplx* x);
};

namespace scalar {
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
cplx dotu(std::size_t n, const cplx* x, const cplx* y);
void rot(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y);
double norm2(std::size_t n, const cplx* x);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
cplx dotu(std::size_t n, const cplx* x, const cplx* y);
void rot(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y);
double norm2(std::size_t n, const cplx* x);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
cplx dotu(std::size_t n, const cplx* x, const cplx* y);
void rot(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y);
double norm2(std::size_t n, const cplx* x);
}  // namespace neon
#endif

/// True when `isa` was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

/// Kernel table for a specific ISA. Throws std::invalid_argument when the
/// ISA is not available on this machine.
const KernelTable& table_for(Isa isa);

/// Currently selected table (best available unless pinned).
const KernelTable& active();

/// Pin the active table. Not thread-safe; intended for tests and benchmarks.
void force_isa(Isa isa);

/// Undo force_isa().
void reset_isa();

}  // namespace fqsvt::simd
