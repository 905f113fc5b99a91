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

#include "fqsvt/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fqsvt/simd/kernels.hpp"

namespace fqsvt {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InvalidInput("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                       " != " + std::to_string(rows) + " x " + std::to_string(cols));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

std::vector<cplx> ComplexMatrix::column(std::size_t c) const {
  std::vector<cplx> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidInput("block: out of range");
  ComplexMatrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0), nc,
                out.data_.begin() + static_cast<std::ptrdiff_t>(r * nc));
  }
  return out;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) {
    throw InvalidInput("set_block: out of range");
  }
  for (std::size_t r = 0; r < b.rows_; ++r) {
    std::copy_n(b.data_.begin() + static_cast<std::ptrdiff_t>(r * b.cols_), b.cols_,
                data_.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0));
  }
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(simd::active().norm2(data_.size(), data_.data()));
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("+=: shape mismatch");
  simd::active().axpy(data_.size(), 1.0, o.data_.data(), data_.data());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("-=: shape mismatch");
  simd::active().axpy(data_.size(), -1.0, o.data_.data(), data_.data());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidInput("matrix product: " + std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()) + " times " + std::to_string(b.rows()) +
                       "x" + std::to_string(b.cols()));
  }
  const auto& k = simd::active();
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx* crow = c.row(i).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const cplx aip = a(i, p);
      if (aip == cplx(0.0)) continue;
      k.axpy(b.cols(), aip, b.row(p).data(), crow);
    }
  }
  return c;
}

std::vector<cplx> apply(const ComplexMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) throw InvalidInput("apply: dimension mismatch");
  const auto& k = simd::active();
  std::vector<cplx> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = k.dotu(v.size(), a.row(r).data(), v.data());
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
        }
      }
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

double unitarity_residual(const ComplexMatrix& a) {
  return max_abs_diff(a.adjoint() * a, ComplexMatrix::identity(a.cols()));
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw InvalidInput("inner: dimension mismatch");
  return simd::active().dotc(x.size(), x.data(), y.data());
}

double norm(std::span<const cplx> x) {
  return std::sqrt(simd::active().norm2(x.size(), x.data()));
}

// ---------------------------------------------------------------------------
// StateVector

namespace {

unsigned log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw InvalidInput("StateVector: dimension " + std::to_string(n) +
                       " is not a power of two");
  }
  unsigned q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  return q;
}

}  // namespace

StateVector::StateVector(std::vector<cplx> amplitudes)
    : qubits_(log2_exact(amplitudes.size())), amps_(std::move(amplitudes)) {
  for (const auto& z : amps_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidInput("StateVector: non-finite amplitude");
    }
  }
}

StateVector StateVector::basis(unsigned qubits, std::size_t index) {
  std::vector<cplx> a(std::size_t{1} << qubits);
  if (index >= a.size()) throw InvalidInput("StateVector::basis: index out of range");
  a[index] = 1.0;
  return StateVector(std::move(a));
}

double StateVector::norm_squared() const {
  return simd::active().norm2(amps_.size(), amps_.data());
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InvalidInput("StateVector::normalized: zero vector");
  std::vector<cplx> a = amps_;
  for (auto& z : a) z /= n;
  return StateVector(std::move(a));
}

StateVector operator*(const ComplexMatrix& a, const StateVector& v) {
  return StateVector(apply(a, v.amplitudes()));
}

// ---------------------------------------------------------------------------
// Eigensolver

ComplexMatrix HermitianSpectrum::reconstruct() const {
  return matfun(*this, [](double x) { return x; });
}

void require_hermitian(const ComplexMatrix& h, double tol) {
  if (!h.is_square()) {
    throw InvalidInput("expected a square matrix, got " + std::to_string(h.rows()) + "x" +
                       std::to_string(h.cols()));
  }
  if (!h.all_finite()) throw InvalidInput("matrix has non-finite entries");
  const double scale = std::max(1.0, h.max_abs());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t c = r; c < h.cols(); ++c) {
      const double dev = std::abs(h(r, c) - std::conj(h(c, r)));
      if (dev > tol * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian: entry (" << r << "," << c << ") = " << h(r, c)
           << " but conj of (" << c << "," << r << ") = " << std::conj(h(c, r));
        throw InvalidInput(os.str());
      }
    }
  }
}

HermitianSpectrum eigh(const ComplexMatrix& h) {
  require_hermitian(h);
  const std::size_t n = h.rows();
  const auto& k = simd::active();

  // Work on the exactly Hermitian part.
  ComplexMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
    a(r, r) = a(r, r).real();
  }
  // Row i of vt is eigenvector i, so rotations act on contiguous rows.
  ComplexMatrix vt = ComplexMatrix::identity(n);

  const double fro = a.frobenius_norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (r != c) s += std::norm(a(r, c));
      }
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  bool converged = fro == 0.0 || off_norm() < 1e-14 * fro;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0 || mag < 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (mag < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        // G = diag(1, e^{-i alpha}) * [[c, s], [-s, c]] makes (G^dag A G)_pq = 0.
        const cplx phase = apq / mag;  // e^{i alpha}
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx gpp = c;
        const cplx gpq = s;
        const cplx gqp = -s * std::conj(phase);
        const cplx gqq = c * std::conj(phase);

        // Rows: A <- G^dag A.
        k.rot(n, std::conj(gpp), std::conj(gqp), std::conj(gpq), std::conj(gqq),
              a.row(p).data(), a.row(q).data());
        // Columns: A <- A G.
        for (std::size_t r = 0; r < n; ++r) {
          const cplx arp = a(r, p);
          const cplx arq = a(r, q);
          a(r, p) = arp * gpp + arq * gqp;
          a(r, q) = arp * gpq + arq * gqq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        // Eigenvector rows: V <- V G, i.e. vt_p' = gpp vt_p + gqp vt_q.
        k.rot(n, gpp, gqp, gpq, gqq, vt.row(p).data(), vt.row(q).data());
      }
    }
    converged = off_norm() < 1e-14 * fro;
  }
  if (!converged) {
    throw NumericalError("eigh: Jacobi iteration did not converge in " +
                         std::to_string(kMaxSweeps) + " sweeps (n=" + std::to_string(n) +
                         ")");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });
  HermitianSpectrum out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = a(src, src).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, col) = vt(src, r);
  }
  return out;
}

double trace_norm(const ComplexMatrix& a) {
  if (!a.all_finite()) throw InvalidInput("trace_norm: non-finite entries");
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  // Eigenvalues of a Hermitian matrix are accurate to eps * |A| in absolute
  // terms, so work with eigenvalues rather than with A^dag A (whose small
  // eigenvalues lose half the digits under the square root).
  bool hermitian = a.is_square();
  if (hermitian) {
    const double tol = 1e-14 * std::max(1.0, a.max_abs());
    for (std::size_t r = 0; r < a.rows() && hermitian; ++r) {
      for (std::size_t c = r; c < a.cols(); ++c) {
        if (std::abs(a(r, c) - std::conj(a(c, r))) > tol) {
          hermitian = false;
          break;
        }
      }
    }
  }
  double sum = 0.0;
  if (hermitian) {
    for (double v : eigh(a).values) sum += std::abs(v);
    return sum;
  }
  // Hermitian dilation [[0, A], [A^dag, 0]] has eigenvalues +-sigma_i.
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix dil(m + n, m + n);
  dil.set_block(0, m, a);
  dil.set_block(m, 0, a.adjoint());
  for (double v : eigh(dil).values) sum += std::abs(v);
  return 0.5 * sum;
}

// ---------------------------------------------------------------------------
// Randomness

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t n) {
  if (n == 0) throw InvalidInput("CounterRng::below: empty range");
  // Rejection keeps the result exactly uniform.
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

StateVector haar_state(unsigned qubits, std::uint64_t seed) {
  if (qubits < 1) throw InvalidInput("haar_state: need at least one qubit");
  CounterRng rng(seed);
  std::vector<cplx> a(std::size_t{1} << qubits);
  for (auto& z : a) {
    const double re = rng.normal();
    z = cplx(re, rng.normal());
  }
  return StateVector(std::move(a)).normalized();
}

ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  ComplexMatrix g(n, n);
  for (auto& z : g.data()) {
    const double re = rng.normal();
    z = cplx(re, rng.normal());
  }
  // Modified Gram-Schmidt on rows; equals QR with positive diagonal of R,
  // which yields the Haar measure.
  const auto& k = simd::active();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const cplx proj = k.dotc(n, g.row(j).data(), g.row(i).data());
      k.axpy(n, -proj, g.row(j).data(), g.row(i).data());
    }
    const double nrm = std::sqrt(k.norm2(n, g.row(i).data()));
    for (auto& z : g.row(i)) z /= nrm;
  }
  return g;
}

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  ComplexMatrix h(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    h(r, r) = rng.normal();
    for (std::size_t c = r + 1; c < n; ++c) {
      const double re = rng.normal();
      h(r, c) = cplx(re, rng.normal()) / std::sqrt(2.0);
      h(c, r) = std::conj(h(r, c));
    }
  }
  return h;
}

}  // namespace fqsvt
