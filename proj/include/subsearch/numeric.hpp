#pragma once

// Arbitrary-precision rationals (GMP) and small dense matrices over them.
// Everything here is exact; doubles appear only in diagnostics.

#include <gmpxx.h>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace subsearch {

using Int = mpz_class;
using Rat = mpq_class;

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline std::string rat_str(const Rat& r) { return r.get_str(); }

/// Dense matrix over Rat. Sizes here are tiny (degree of the number
/// field, at most a handful), so plain Gauss-Jordan is all we need.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static RatMatrix identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const Rat& at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  bool operator==(const RatMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  RatMatrix operator*(const RatMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: size mismatch in product");
    RatMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rat& a = at(i, k);
        if (a == 0) continue;
        for (int j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
      }
    return r;
  }

  std::vector<Rat> apply(const std::vector<Rat>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("RatMatrix: vector size mismatch");
    std::vector<Rat> r(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
    return r;
  }

  /// Gauss-Jordan inverse. Throws std::domain_error on a singular input;
  /// with exact arithmetic any nonzero pivot works, no magnitude pivoting.
  RatMatrix inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("RatMatrix: inverse of non-square");
    int n = rows_;
    RatMatrix a(*this), inv = identity(n);
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      for (int r = col; r < n; ++r)
        if (a.at(r, col) != 0) { piv = r; break; }
      if (piv < 0) throw std::domain_error("RatMatrix: singular matrix");
      if (piv != col) {
        for (int j = 0; j < n; ++j) {
          std::swap(a.at(piv, j), a.at(col, j));
          std::swap(inv.at(piv, j), inv.at(col, j));
        }
      }
      Rat d = a.at(col, col);
      for (int j = 0; j < n; ++j) { a.at(col, j) /= d; inv.at(col, j) /= d; }
      for (int r = 0; r < n; ++r) {
        if (r == col || a.at(r, col) == 0) continue;
        Rat f = a.at(r, col);
        for (int j = 0; j < n; ++j) {
          a.at(r, j) -= f * a.at(col, j);
          inv.at(r, j) -= f * inv.at(col, j);
        }
      }
    }
    return inv;
  }

  Rat det() const {
    if (rows_ != cols_) throw std::invalid_argument("RatMatrix: det of non-square");
    int n = rows_;
    RatMatrix a(*this);
    Rat d = 1;
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      for (int r = col; r < n; ++r)
        if (a.at(r, col) != 0) { piv = r; break; }
      if (piv < 0) return Rat(0);
      if (piv != col) {
        for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
        d = -d;
      }
      d *= a.at(col, col);
      Rat inv_piv = 1 / a.at(col, col);
      for (int r = col + 1; r < n; ++r) {
        if (a.at(r, col) == 0) continue;
        Rat f = a.at(r, col) * inv_piv;
        for (int j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
      }
    }
    return d;
  }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
      os << (i ? " [" : "[");
      for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).get_str();
      os << "]";
      if (i + 1 < rows_) os << "\n";
    }
    os << "]";
    return os.str();
  }

 private:
  int rows_, cols_;
  std::vector<Rat> data_;
};

}  // namespace subsearch
