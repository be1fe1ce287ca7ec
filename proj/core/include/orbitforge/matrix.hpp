#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "orbitforge/errors.hpp"
#include "orbitforge/gaussian.hpp"
#include "orbitforge/quaternion.hpp"
#include "orbitforge/rational.hpp"

namespace orbitforge {

inline RationalQuaternion conj(const RationalQuaternion& x) { return x.anti_involution(); }

// Dense row-major matrix over an exact scalar type.  Multiplication keeps
// left/right factor order per entry, so quaternionic products are safe.
template <typename K>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, K(0)) {}
  Mat(std::initializer_list<std::initializer_list<K>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) fail(ErrorName::DimensionMismatch, "ragged matrix literal");
      for (const auto& x : r) data_.push_back(x);
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = K(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const K& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  K& operator()(std::size_t i, std::size_t j) { return at(i, j); }
  const K& operator()(std::size_t i, std::size_t j) const { return at(i, j); }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (at(i, j) != (i == j ? K(1) : K(0))) return false;
    return true;
  }

  Mat operator-() const {
    Mat m = *this;
    for (auto& x : m.data_) x = -x;
    return m;
  }

  Mat& operator+=(const Mat& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) fail(ErrorName::DimensionMismatch, "matrix product shape");
    Mat c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const K& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c.at(i, j) += aik * b.at(k, j);
      }
    return c;
  }

  friend Mat operator*(const K& s, Mat a) {
    for (auto& x : a.data_) x = s * x;
    return a;
  }
  friend Mat operator*(Mat a, const K& s) {
    for (auto& x : a.data_) x = x * s;
    return a;
  }

  Mat transpose() const {
    Mat m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
  }

  Mat conjugate() const {
    Mat m = *this;
    for (auto& x : m.data_) x = conj(x);
    return m;
  }

  Mat conjugate_transpose() const { return conjugate().transpose(); }

  K trace() const {
    K t(0);
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
    return t;
  }

  Mat submatrix(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
    Mat m(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
      for (std::size_t j = 0; j < ncols; ++j) m.at(i, j) = at(r0 + i, c0 + j);
    return m;
  }

  std::vector<K> col(std::size_t j) const {
    std::vector<K> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
  }
  std::vector<K> row(std::size_t i) const {
    std::vector<K> v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = at(i, j);
    return v;
  }
  void set_col(std::size_t j, const std::vector<K>& v) {
    if (v.size() != rows_) fail(ErrorName::DimensionMismatch, "set_col length");
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
  }

 private:
  void check_same_shape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorName::DimensionMismatch, "matrix shapes differ");
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<K> data_;
};

template <typename K>
using Vec = std::vector<K>;

template <typename K>
Vec<K> operator*(const Mat<K>& a, const Vec<K>& v) {
  if (a.cols() != v.size()) fail(ErrorName::DimensionMismatch, "matrix-vector shape");
  Vec<K> r(a.rows(), K(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) r[i] += a.at(i, j) * v[j];
  return r;
}

template <typename K>
Vec<K> vec_add(Vec<K> a, const Vec<K>& b) {
  if (a.size() != b.size()) fail(ErrorName::DimensionMismatch, "vector sum length");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <typename K>
Vec<K> vec_sub(Vec<K> a, const Vec<K>& b) {
  if (a.size() != b.size()) fail(ErrorName::DimensionMismatch, "vector difference length");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <typename K>
Vec<K> vec_scale(const K& s, Vec<K> a) {
  for (auto& x : a) x = s * x;
  return a;
}

template <typename K>
bool vec_is_zero(const Vec<K>& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

template <typename K>
Mat<K> col_matrix(const Vec<K>& v) {
  Mat<K> m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
  return m;
}

template <typename K>
Mat<K> columns_matrix(const std::vector<Vec<K>>& cols, std::size_t nrows) {
  Mat<K> m(nrows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

template <typename K>
Mat<K> hcat(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() != b.rows()) fail(ErrorName::DimensionMismatch, "hcat row counts");
  Mat<K> m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m.at(i, a.cols() + j) = b.at(i, j);
  }
  return m;
}

template <typename K>
Mat<K> mpow(const Mat<K>& a, std::size_t e) {
  if (a.rows() != a.cols()) fail(ErrorName::DimensionMismatch, "power of non-square matrix");
  Mat<K> r = Mat<K>::identity(a.rows());
  for (std::size_t k = 0; k < e; ++k) r = r * a;
  return r;
}

inline Mat<GaussianRational> to_gaussian(const Mat<Rational>& a) {
  Mat<GaussianRational> m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = GaussianRational(a.at(i, j));
  return m;
}

inline Vec<GaussianRational> to_gaussian(const Vec<Rational>& v) {
  Vec<GaussianRational> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = GaussianRational(v[i]);
  return r;
}

inline Mat<Rational> real_part(const Mat<GaussianRational>& a) {
  Mat<Rational> m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j).re();
  return m;
}

inline Mat<Rational> imag_part(const Mat<GaussianRational>& a) {
  Mat<Rational> m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j).im();
  return m;
}

template <typename K>
struct Rref {
  Mat<K> r;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

// Deterministic reduced row echelon form: pivot is the first unused row with a
// nonzero entry in the current column.
template <typename K>
Rref<K> rref(Mat<K> a) {
  Rref<K> out;
  std::size_t pr = 0;
  for (std::size_t c = 0; c < a.cols() && pr < a.rows(); ++c) {
    std::size_t piv = pr;
    while (piv < a.rows() && a.at(piv, c).is_zero()) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(pr, piv);
    K inv = a.at(pr, c).inverse();
    for (std::size_t j = c; j < a.cols(); ++j) a.at(pr, j) = inv * a.at(pr, j);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == pr || a.at(i, c).is_zero()) continue;
      K f = a.at(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a.at(i, j) -= f * a.at(pr, j);
    }
    out.pivot_cols.push_back(c);
    ++pr;
  }
  out.rank = pr;
  out.r = std::move(a);
  return out;
}

template <typename K>
std::size_t rank(const Mat<K>& a) {
  return rref(a).rank;
}

// Particular solution of A x = b with all free variables set to zero; empty if
// the system is inconsistent.
template <typename K>
std::optional<Vec<K>> solve(const Mat<K>& a, const Vec<K>& b) {
  if (a.rows() != b.size()) fail(ErrorName::DimensionMismatch, "solve shapes");
  Rref<K> red = rref(hcat(a, col_matrix(b)));
  for (std::size_t c : red.pivot_cols)
    if (c == a.cols()) return std::nullopt;
  Vec<K> x(a.cols(), K(0));
  for (std::size_t k = 0; k < red.pivot_cols.size(); ++k) x[red.pivot_cols[k]] = red.r.at(k, a.cols());
  return x;
}

template <typename K>
std::optional<Mat<K>> solve_matrix(const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() != b.rows()) fail(ErrorName::DimensionMismatch, "solve_matrix shapes");
  Rref<K> red = rref(hcat(a, b));
  for (std::size_t c : red.pivot_cols)
    if (c >= a.cols()) return std::nullopt;
  Mat<K> x(a.cols(), b.cols());
  for (std::size_t k = 0; k < red.pivot_cols.size(); ++k)
    for (std::size_t j = 0; j < b.cols(); ++j) x.at(red.pivot_cols[k], j) = red.r.at(k, a.cols() + j);
  return x;
}

// Columns form the standard rref kernel basis, one per free column.
template <typename K>
Mat<K> kernel(const Mat<K>& a) {
  Rref<K> red = rref(a);
  std::vector<std::size_t> free_cols;
  {
    std::size_t k = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (k < red.pivot_cols.size() && red.pivot_cols[k] == c)
        ++k;
      else
        free_cols.push_back(c);
    }
  }
  Mat<K> basis(a.cols(), free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    basis.at(free_cols[j], j) = K(1);
    for (std::size_t k = 0; k < red.pivot_cols.size(); ++k)
      basis.at(red.pivot_cols[k], j) = -red.r.at(k, free_cols[j]);
  }
  return basis;
}

template <typename K>
K det(Mat<K> a) {
  if (a.rows() != a.cols()) fail(ErrorName::DimensionMismatch, "determinant of non-square matrix");
  K d(1);
  for (std::size_t c = 0; c < a.cols(); ++c) {
    std::size_t piv = c;
    while (piv < a.rows() && a.at(piv, c).is_zero()) ++piv;
    if (piv == a.rows()) return K(0);
    if (piv != c) {
      a.swap_rows(c, piv);
      d = -d;
    }
    d *= a.at(c, c);
    K inv = a.at(c, c).inverse();
    for (std::size_t i = c + 1; i < a.rows(); ++i) {
      if (a.at(i, c).is_zero()) continue;
      K f = inv * a.at(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a.at(i, j) -= f * a.at(c, j);
    }
  }
  return d;
}

template <typename K>
std::optional<Mat<K>> inverse(const Mat<K>& a) {
  if (a.rows() != a.cols()) fail(ErrorName::DimensionMismatch, "inverse of non-square matrix");
  Rref<K> red = rref(hcat(a, Mat<K>::identity(a.rows())));
  if (red.rank != a.rows() || (a.rows() > 0 && red.pivot_cols.back() != a.rows() - 1)) return std::nullopt;
  return red.r.submatrix(0, a.cols(), a.rows(), a.cols());
}

// Monic characteristic polynomial by the Faddeev-LeVerrier recurrence;
// coefficient k of the result multiplies lambda^k.
template <typename K>
std::vector<K> char_poly(const Mat<K>& a) {
  if (a.rows() != a.cols()) fail(ErrorName::DimensionMismatch, "characteristic polynomial of non-square matrix");
  std::size_t n = a.rows();
  std::vector<K> c(n + 1, K(0));
  c[n] = K(1);
  Mat<K> m = Mat<K>(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    if (k == 1) {
      m = a;
    } else {
      Mat<K> shifted = m;
      for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) += c[n - k + 1];
      m = a * shifted;
    }
    K t = m.trace();
    c[n - k] = -(K(1) / K(static_cast<long>(k))) * t;
  }
  return c;
}

extern template class Mat<Rational>;
extern template class Mat<GaussianRational>;
extern template class Mat<RationalQuaternion>;

}  // namespace orbitforge
