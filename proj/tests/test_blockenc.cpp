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

#include <gtest/gtest.h>

#include <cmath>

#include "fqsvt/blockenc.hpp"

namespace {

using namespace fqsvt;

ComplexMatrix random_psd(std::size_t n, std::uint64_t seed, double lo = 0.05, double hi = 0.95) {
  CounterRng rng(seed);
  std::vector<double> ev(n);
  for (auto& e : ev) e = lo + (hi - lo) * rng.uniform();
  const auto u = haar_unitary(n, seed ^ 0xabcdef);
  return u * ComplexMatrix::diagonal(ev) * u.adjoint();
}

TEST(Dilate, ScalarCase) {
  const auto enc = dilate_hermitian(ComplexMatrix{{0.6}});
  const ComplexMatrix want{{0.6, 0.8}, {0.8, -0.6}};
  EXPECT_LE(max_abs_diff(enc.unitary(), want), 1e-15);
  EXPECT_EQ(enc.m(), 1u);
  EXPECT_EQ(enc.alpha(), 1.0);
}

TEST(Dilate, IdentityEdge) {
  const auto enc = dilate_hermitian(ComplexMatrix::identity(2));
  ComplexMatrix want(4, 4);
  want.set_block(0, 0, ComplexMatrix::identity(2));
  want.set_block(2, 2, -1.0 * ComplexMatrix::identity(2));
  EXPECT_LE(max_abs_diff(enc.unitary(), want), 1e-15);
}

TEST(Dilate, DiagonalUnitarity) {
  const std::vector<double> d = {0.1, 0.9};
  const auto enc = dilate_hermitian(ComplexMatrix::diagonal(d));
  EXPECT_LE(unitarity_residual(enc.unitary()), 1e-12);
}

TEST(Dilate, RandomPsdEncodes) {
  for (std::size_t n : {1u, 2u, 4u, 8u}) {
    const auto h = random_psd(n, n);
    const auto enc = dilate_hermitian(h);
    EXPECT_LE(unitarity_residual(enc.unitary()), 1e-10);
    EXPECT_LE(encoding_residual(enc, h), 1e-12);
  }
}

TEST(Dilate, RejectsSpectrumOutsideUnitInterval) {
  const std::vector<double> neg = {-0.1, 0.5};
  EXPECT_THROW(dilate_hermitian(ComplexMatrix::diagonal(neg)), InvalidInput);
  const std::vector<double> big = {0.5, 1.01};
  try {
    dilate_hermitian(ComplexMatrix::diagonal(big));
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("1.01"), std::string::npos);
  }
}

TEST(EncodedBlock, IdentityUnitary) {
  const BlockEncoding enc(ComplexMatrix::identity(2), 1, 1.0, 1);
  EXPECT_LE(max_abs_diff(encoded_block(enc), ComplexMatrix{{1.0}}), 0.0);
}

TEST(EncodedBlock, RandomUnitaryBlockIsContraction) {
  const BlockEncoding enc(haar_unitary(4, 17), 1, 1.0, 2);
  const auto b = encoded_block(enc);
  const auto s = eigh(b.adjoint() * b);
  EXPECT_LE(std::sqrt(s.values.back()), 1.0 + 1e-12);
}

TEST(BlockEncoding, ValidatesShapeAndUnitarity) {
  EXPECT_THROW(BlockEncoding(ComplexMatrix::identity(3), 1, 1.0, 2), InvalidInput);
  ComplexMatrix bad = ComplexMatrix::identity(2);
  bad(0, 1) = 0.1;
  EXPECT_THROW(BlockEncoding(bad, 1, 1.0, 1), InvalidInput);
}

TEST(Csd, DiagonalCase) {
  const std::vector<double> d = {0.1, 0.9};
  const auto h = ComplexMatrix::diagonal(d);
  const auto f = csd_factors(dilate_hermitian(h), h);
  EXPECT_TRUE(f.canonical);
  // Eigenvector phases are solver-defined; compare up to them by checking
  // W2 = -V and V2 = V, which is phase-independent.
  EXPECT_LE(max_abs_diff(f.w2, -1.0 * f.v), 1e-12);
  EXPECT_LE(max_abs_diff(f.v2, f.v), 1e-12);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(std::abs(f.v(i, i)), 1.0, 1e-14);
  }
}

TEST(Csd, SolveBlockEquationsOracle) {
  // Independent oracle: with V known, the dilation blocks force V2 = V and
  // W2 = -V directly: V S V2^dagger = sqrt(I - H^2) = V S V^dagger.
  const auto h = random_psd(4, 31);
  const auto enc = dilate_hermitian(h);
  const auto f = csd_factors(enc, h);
  EXPECT_LE(max_abs_diff(f.v2, f.v), 1e-10);
  EXPECT_LE(max_abs_diff(f.w2, -1.0 * f.v), 1e-10);
  EXPECT_LE(unitarity_residual(f.v2), 1e-10);
  EXPECT_LE(unitarity_residual(f.w2), 1e-10);
}

TEST(Csd, ReassemblyReproducesUnitary) {
  for (int t = 0; t < 10; ++t) {
    const auto h = random_psd(4, 40 + t);
    const auto enc = dilate_hermitian(h);
    const auto f = csd_factors(enc, h);
    EXPECT_LE(max_abs_diff(csd_reassemble(f), enc.unitary()), 1e-10);
  }
}

TEST(Csd, SigmaMatchesEigenvaluesAndPythagoras) {
  const auto h = random_psd(5, 50);
  const auto f = csd_factors(dilate_hermitian(h), h);
  const auto spec = eigh(h);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(f.sigma[i], spec.values[i], 1e-14);
    EXPECT_NEAR(f.sigma[i] * f.sigma[i] + f.s[i] * f.s[i], 1.0, 1e-12);
  }
}

TEST(Csd, NearSingularSineIsFlagged) {
  const std::vector<double> d = {0.3, 1.0};
  const auto h = ComplexMatrix::diagonal(d);
  const auto enc = dilate_hermitian(h);
  const auto f = csd_factors(enc, h);
  EXPECT_FALSE(f.canonical);
  EXPECT_LE(max_abs_diff(csd_reassemble(f), enc.unitary()), 1e-9);
}

TEST(Csd, QubitizedMiddleIsBlockDiagonal) {
  // Interleaving (a, j) -> 2j + a by index arithmetic.
  const auto h = random_psd(4, 60);
  const auto f = csd_factors(dilate_hermitian(h), h);
  const auto mid = csd_middle(f);
  const std::size_t n = 4;
  for (std::size_t r = 0; r < 2 * n; ++r) {
    for (std::size_t c = 0; c < 2 * n; ++c) {
      const std::size_t jr = r / 2, ar = r % 2, jc = c / 2, ac = c % 2;
      const cplx v = mid(ar * n + jr, ac * n + jc);
      if (jr != jc) {
        EXPECT_EQ(v, cplx(0.0));
        continue;
      }
      const double sg = f.sigma[jr];
      const double sn = std::sqrt(1.0 - sg * sg);
      const double want = (ar == ac) ? sg : (ar == 0 ? sn : -sn);
      EXPECT_NEAR(v.real(), want, 1e-14);
    }
  }
}

TEST(Csd, RejectsWrongEncoding) {
  const auto h = random_psd(2, 70);
  const auto other = random_psd(2, 71);
  EXPECT_THROW(csd_factors(dilate_hermitian(other), h), InvalidInput);
}

}  // namespace
