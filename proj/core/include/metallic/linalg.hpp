#pragma once

#include <span>
#include <vector>

#include "metallic/errors.hpp"
#include "metallic/expr.hpp"

namespace metallic {

using Vec = std::vector<double>;

// Small dense row-major matrix. Dimensions in this library are tiny
// (n <= 8), so everything is direct-method and allocation-friendly.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols), 0.0) {}

  static Mat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Vec operator*(const Mat& a, const Vec& x);

Mat transpose(const Mat& a);
double inf_norm(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);

double determinant(Mat a);             // LU with partial pivoting
Mat inverse(const Mat& a);             // throws SingularMatrix

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
Vec symmetric_eigenvalues(Mat a);

// Matrix of symbolic expressions, row-major.
class ExprMat {
 public:
  ExprMat() = default;
  ExprMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {}

  static ExprMat identity(int n);
  static ExprMat zero(int rows, int cols);
  static ExprMat scalar(int n, double value);  // value * I

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Expr& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Expr& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

  Mat eval(std::span<const double> point) const;
  ExprMat derivative(int coord) const;
  ExprMat simplified() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Expr> a_;
};

ExprMat operator+(const ExprMat& a, const ExprMat& b);
ExprMat operator-(const ExprMat& a, const ExprMat& b);
ExprMat operator*(const ExprMat& a, const ExprMat& b);
ExprMat operator*(const Expr& s, const ExprMat& a);
ExprMat operator*(double s, const ExprMat& a);

ExprMat transpose(const ExprMat& a);

// Exact adjugate / determinant inverse (Laplace expansion; fine for the
// small dimensions used here).
Expr sym_determinant(const ExprMat& a);
ExprMat sym_inverse(const ExprMat& a);

}  // namespace metallic
