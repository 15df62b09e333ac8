#pragma once

// Small dense complex linear algebra (dimensions 2..64).
//
// Tensor index convention: in a ⊗ b the row index (i_a, i_b) maps to
// i_a * rows(b) + i_b, i.e. the left factor is the most significant index.
// All gate layouts in this library assume this ordering.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "qnl/error.hpp"

namespace qnl {

using Complex = std::complex<double>;

inline constexpr double kDefaultTol = 1e-12;
inline constexpr double kHermitianTol = 1e-10;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  // Row-major nested initializer, e.g. Matrix{{1, 0}, {0, 1}}.
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> data() const { return data_; }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  Complex trace() const {
    if (!square()) throw DimensionError("trace of non-square matrix");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= Complex{s, 0.0}; }
  friend Matrix operator-(Matrix a) { return a *= Complex{-1.0, 0.0}; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  // Largest entry-wise modulus.
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
  }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol = kDefaultTol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  if (!m.square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

inline bool is_unitary(const Matrix& u, double tol = kHermitianTol) {
  return u.square() && approx_equal(u * u.adjoint(), Matrix::identity(u.rows()), tol);
}

/// Kronecker product, left factor most significant.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex s = a(ia, ja);
      if (s == Complex{}) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = s * b(ib, jb);
    }
  return out;
}

inline Matrix tensor(std::initializer_list<Matrix> factors) {
  if (factors.size() == 0) throw DimensionError("empty tensor product");
  Matrix out = *factors.begin();
  for (auto it = std::next(factors.begin()); it != factors.end(); ++it) out = tensor(out, *it);
  return out;
}

/// Column vector <-> outer product helpers.
inline Matrix outer(std::span<const Complex> a, std::span<const Complex> b) {
  Matrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

inline std::vector<Complex> apply(const Matrix& m, std::span<const Complex> v) {
  if (m.cols() != v.size()) throw DimensionError("matrix-vector shape mismatch");
  std::vector<Complex> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionError("inner product dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline std::vector<Complex> kron(std::span<const Complex> a, std::span<const Complex> b) {
  std::vector<Complex> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

/// Traces out every subsystem not listed in `keep`. Subsystem 0 is the most
/// significant index. `keep` may be given in any order; the result keeps the
/// original relative order of the retained subsystems.
inline Matrix partial_trace(const Matrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  if (!m.square()) throw DimensionError("partial trace of non-square matrix");
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
  if (total != m.rows()) throw DimensionError("subsystem dimensions do not match matrix dimension");

  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  for (auto k : keep) {
    if (k >= n) throw DimensionError("partial trace keep index out of range");
    kept[k] = true;
  }

  std::size_t keep_dim = 1;
  for (std::size_t s = 0; s < n; ++s)
    if (kept[s]) keep_dim *= dims[s];

  // Strides of each subsystem in the full index and in the reduced index.
  std::vector<std::size_t> stride(n), reduced_stride(n, 0);
  std::size_t acc = 1, racc = 1;
  for (std::size_t s = n; s-- > 0;) {
    stride[s] = acc;
    acc *= dims[s];
    if (kept[s]) {
      reduced_stride[s] = racc;
      racc *= dims[s];
    }
  }

  auto reduced_index = [&](std::size_t full) {
    std::size_t r = 0;
    for (std::size_t s = 0; s < n; ++s)
      if (kept[s]) r += ((full / stride[s]) % dims[s]) * reduced_stride[s];
    return r;
  };
  auto traced_part = [&](std::size_t full) {
    std::size_t t = 0;
    for (std::size_t s = 0; s < n; ++s)
      if (!kept[s]) t += ((full / stride[s]) % dims[s]) * stride[s];
    return t;
  };

  Matrix out(keep_dim, keep_dim);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j)
      if (traced_part(i) == traced_part(j)) out(reduced_index(i), reduced_index(j)) += m(i, j);
  return out;
}

inline Matrix partial_trace(const Matrix& m, std::initializer_list<std::size_t> dims,
                            std::initializer_list<std::size_t> keep) {
  return partial_trace(m, std::span<const std::size_t>(dims.begin(), dims.size()),
                       std::span<const std::size_t>(keep.begin(), keep.size()));
}

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k is the eigenvector of values[k]
};

namespace detail {

inline double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
/// Each (p, q) rotation first removes the phase of a_pq, then applies the
/// real symmetric Jacobi rotation.
inline HermitianEigen eigh(const Matrix& m, double herm_tol = kHermitianTol) {
  if (!m.square()) throw DimensionError("eigensolve of non-square matrix");
  if (!is_hermitian(m, herm_tol)) throw NotHermitianError("matrix is not Hermitian");

  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix v = Matrix::identity(n);
  const double scale = std::max(1.0, m.max_abs());
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps && detail::offdiag_norm(a) > 1e-12 * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const Complex phase = apq / mag;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const Complex g00 = c, g01 = s;
        const Complex g10 = -s * std::conj(phase), g11 = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {  // A <- A G
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * g00 + akq * g10;
          a(k, q) = akp * g01 + akq * g11;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- G^H A
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
          a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // V <- V G
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * g00 + vkq * g10;
          v(k, q) = vkp * g01 + vkq * g11;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

/// Ascending real spectrum of a Hermitian matrix.
inline std::vector<double> eigvals_hermitian(const Matrix& m, double herm_tol = kHermitianTol) {
  return eigh(m, herm_tol).values;
}

inline double min_eigenvalue(const Matrix& m) { return eigvals_hermitian(m).front(); }

/// exp(i h) for Hermitian h, via the spectral decomposition.
inline Matrix expi_hermitian(const Matrix& h) {
  const auto [values, vecs] = eigh(h);
  const std::size_t n = h.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex phase = std::polar(1.0, values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vecs(i, k) * phase * std::conj(vecs(j, k));
  }
  return out;
}

/// Embeds a two-qubit gate acting on (first, second) into an n-qubit register.
/// Qubit 0 is the most significant index. `first` is the gate's left factor.
inline Matrix embed_two_qubit(const Matrix& gate, std::size_t n_qubits, std::size_t first,
                              std::size_t second) {
  if (gate.rows() != 4 || gate.cols() != 4) throw DimensionError("two-qubit gate must be 4x4");
  if (first >= n_qubits || second >= n_qubits || first == second)
    throw DimensionError("invalid qubit indices for gate embedding");
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t bit_a = std::size_t{1} << (n_qubits - 1 - first);
  const std::size_t bit_b = std::size_t{1} << (n_qubits - 1 - second);

  Matrix out(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t in_sub = ((col & bit_a) ? 2 : 0) + ((col & bit_b) ? 1 : 0);
    const std::size_t rest = col & ~(bit_a | bit_b);
    for (std::size_t out_sub = 0; out_sub < 4; ++out_sub) {
      const Complex g = gate(out_sub, in_sub);
      if (g == Complex{}) continue;
      const std::size_t row = rest | ((out_sub & 2) ? bit_a : 0) | ((out_sub & 1) ? bit_b : 0);
      out(row, col) += g;
    }
  }
  return out;
}

}  // namespace qnl
