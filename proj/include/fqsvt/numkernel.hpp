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

// Dense complex linear algebra and randomness used by every other module.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace fqsvt {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// A precondition on the caller's input was violated.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to meet its own postcondition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::span<const cplx> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<cplx> column(std::size_t c) const;

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix conj() const;
  ComplexMatrix transpose() const;

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                      std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  double max_abs() const;
  double frobenius_norm() const;
  cplx trace() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cplx s);

/// A * v
std::vector<cplx> apply(const ComplexMatrix& a, std::span<const cplx> v);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a_ij - b_ij|; sizes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |(A^dagger A - I)_ij|
double unitarity_residual(const ComplexMatrix& a);

cplx inner(std::span<const cplx> x, std::span<const cplx> y);  // <x|y>
double norm(std::span<const cplx> x);

/// Amplitudes on a register of `qubits` qubits. Not necessarily normalized:
/// branch states of measurement trees carry their probability as norm^2.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::vector<cplx> amplitudes);
  static StateVector basis(unsigned qubits, std::size_t index);

  unsigned qubits() const { return qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }

  double norm() const;
  double norm_squared() const;
  StateVector normalized() const;

 private:
  unsigned qubits_ = 0;
  std::vector<cplx> amps_;
};

StateVector operator*(const ComplexMatrix& a, const StateVector& v);

/// Eigen-decomposition of a Hermitian matrix, values ascending, column i of
/// `vectors` pairs with values[i].
struct HermitianSpectrum {
  std::vector<double> values;
  ComplexMatrix vectors;

  std::size_t dim() const { return values.size(); }
  ComplexMatrix reconstruct() const;
};

/// Throws InvalidInput naming the first entry that breaks Hermiticity.
void require_hermitian(const ComplexMatrix& h, double tol = 1e-10);

/// Cyclic complex Jacobi eigensolver.
HermitianSpectrum eigh(const ComplexMatrix& h);

/// V g(Sigma) V^dagger for a real- or complex-valued scalar function.
template <class F>
ComplexMatrix matfun(const HermitianSpectrum& spec, F&& g) {
  const std::size_t n = spec.dim();
  std::vector<cplx> gv(n);
  for (std::size_t i = 0; i < n; ++i) {
    gv[i] = cplx(g(spec.values[i]));
    if (!std::isfinite(gv[i].real()) || !std::isfinite(gv[i].imag())) {
      throw InvalidInput("matfun: function is not finite at eigenvalue " +
                         std::to_string(spec.values[i]));
    }
  }
  ComplexMatrix scaled = spec.vectors;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) scaled(r, k) *= gv[k];
  }
  return scaled * spec.vectors.adjoint();
}

template <class F>
ComplexMatrix matfun(const ComplexMatrix& h, F&& g) {
  return matfun(eigh(h), std::forward<F>(g));
}

/// tr sqrt(A^dagger A), the sum of singular values.
double trace_norm(const ComplexMatrix& a);

/// Counter-based generator: output i is SplitMix64's finalizer applied to
/// seed + (i + 1) * 0x9E3779B97F4A7C15, so a stream is a pure function of
/// (seed, counter) and identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, both outputs used).
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x);

/// Independent seed for trial `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

StateVector haar_state(unsigned qubits, std::uint64_t seed);

/// Haar-random unitary of size n (QR of a complex Ginibre matrix with the
/// phase correction), used by tests and by encoding verification.
ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed);

/// Random Hermitian matrix with i.i.d. complex Gaussian entries.
ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed);

}  // namespace fqsvt
