#include "metallic/linalg.hpp"

#include <cmath>

namespace metallic {

namespace {

void require_same_shape(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix shapes differ");
}

}  // namespace

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat operator+(const Mat& a, const Mat& b) {
  require_same_shape(a, b);
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Mat operator-(const Mat& a, const Mat& b) {
  require_same_shape(a, b);
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  Mat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Mat operator*(double s, const Mat& a) {
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

Vec operator*(const Mat& a, const Vec& x) {
  if (a.cols() != static_cast<int>(x.size()))
    throw DimensionMismatch("matrix-vector shape mismatch");
  Vec r(static_cast<std::size_t>(a.rows()), 0.0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
  return r;
}

Mat transpose(const Mat& a) {
  Mat r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

double inf_norm(const Mat& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

double determinant(Mat a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of non-square matrix");
  const int n = a.rows();
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

Mat inverse(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of non-square matrix");
  const int n = a.rows();
  Mat work = a;
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
    if (work(pivot, col) == 0.0) throw SingularMatrix("matrix is singular");
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    const double d = work(col, col);
    for (int j = 0; j < n; ++j) {
      work(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = work(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Vec symmetric_eigenvalues(Mat a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("eigenvalues of non-square matrix");
  const int n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  Vec ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  return ev;
}

// ---------------------------------------------------------------------------

ExprMat ExprMat::identity(int n) {
  ExprMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Expr::constant(i == j ? 1.0 : 0.0);
  return m;
}

ExprMat ExprMat::zero(int rows, int cols) {
  ExprMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Expr::constant(0.0);
  return m;
}

ExprMat ExprMat::scalar(int n, double value) {
  ExprMat m = zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Expr::constant(value);
  return m;
}

Mat ExprMat::eval(std::span<const double> point) const {
  Mat r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).eval(point);
  return r;
}

ExprMat ExprMat::derivative(int coord) const {
  ExprMat r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).derivative(coord);
  return r;
}

ExprMat ExprMat::simplified() const {
  ExprMat r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).simplified();
  return r;
}

ExprMat operator+(const ExprMat& a, const ExprMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix shapes differ");
  ExprMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

ExprMat operator-(const ExprMat& a, const ExprMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix shapes differ");
  ExprMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

ExprMat operator*(const ExprMat& a, const ExprMat& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  ExprMat r = ExprMat::zero(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Expr s = Expr::constant(0.0);
      for (int k = 0; k < a.cols(); ++k) s = s + a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

ExprMat operator*(const Expr& s, const ExprMat& a) {
  ExprMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

ExprMat operator*(double s, const ExprMat& a) { return Expr::constant(s) * a; }

ExprMat transpose(const ExprMat& a) {
  ExprMat r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

namespace {

ExprMat minor_of(const ExprMat& a, int row, int col) {
  ExprMat m(a.rows() - 1, a.cols() - 1);
  for (int i = 0, mi = 0; i < a.rows(); ++i) {
    if (i == row) continue;
    for (int j = 0, mj = 0; j < a.cols(); ++j) {
      if (j == col) continue;
      m(mi, mj) = a(i, j);
      ++mj;
    }
    ++mi;
  }
  return m;
}

}  // namespace

Expr sym_determinant(const ExprMat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of non-square matrix");
  const int n = a.rows();
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Expr det = Expr::constant(0.0);
  for (int j = 0; j < n; ++j) {
    Expr term = a(0, j) * sym_determinant(minor_of(a, 0, j));
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

ExprMat sym_inverse(const ExprMat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of non-square matrix");
  const int n = a.rows();
  const Expr det = sym_determinant(a);
  ExprMat inv(n, n);
  if (n == 1) {
    inv(0, 0) = Expr::constant(1.0) / det;
    return inv;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr cof = sym_determinant(minor_of(a, j, i));  // adjugate: transposed cofactors
      if ((i + j) % 2 == 1) cof = -cof;
      inv(i, j) = (cof / det).simplified();
    }
  return inv;
}

}  // namespace metallic
