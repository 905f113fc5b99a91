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

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fqsvt/simd/kernels.hpp"

namespace fqsvt::simd {
namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, scalar::axpy, scalar::dotc,
                                   scalar::dotu, scalar::rot, scalar::norm2};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2Table{Isa::kAvx2, avx2::axpy, avx2::dotc,
                                 avx2::dotu, avx2::rot, avx2::norm2};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeonTable{Isa::kNeon, neon::axpy, neon::dotc,
                                 neon::dotu, neon::rot, neon::norm2};
#endif

const KernelTable* best_table() {
  // FQSVT_ISA=scalar pins the reference path for whole-program comparisons.
  if (const char* env = std::getenv("FQSVT_ISA"); env != nullptr) {
    const std::string want(env);
    if (want == "scalar") return &kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
    if (want == "avx2" && isa_available(Isa::kAvx2)) return &kAvx2Table;
#endif
#if defined(__aarch64__)
    if (want == "neon") return &kNeonTable;
#endif
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (isa_available(Isa::kAvx2)) return &kAvx2Table;
#endif
#if defined(__aarch64__)
  return &kNeonTable;
#endif
  return &kScalarTable;
}

const KernelTable*& current() {
  static const KernelTable* table = best_table();
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("SIMD variant not available on this machine: " +
                                std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::kAvx2:
      return kAvx2Table;
#endif
#if defined(__aarch64__)
    case Isa::kNeon:
      return kNeonTable;
#endif
    default:
      return kScalarTable;
  }
}

const KernelTable& active() { return *current(); }

void force_isa(Isa isa) { current() = &table_for(isa); }

void reset_isa() { current() = best_table(); }

}  // namespace fqsvt::simd
