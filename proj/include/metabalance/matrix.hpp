#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "metabalance/errors.hpp"

namespace metabalance {

/// Dense n-by-n matrix of doubles with row-major storage. Small helper for
/// evaluation matrices and response graphs; not a linear-algebra library.
class SquareMatrix {
 public:
  SquareMatrix() = default;

  explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    n_ = rows.size();
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) {
        throw StructureError("matrix initializer rows must have length n");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }

  double& at(std::size_t i, std::size_t j) {
    check(i, j);
    return data_[i * n_ + j];
  }
  double at(std::size_t i, std::size_t j) const {
    check(i, j);
    return data_[i * n_ + j];
  }

  bool operator==(const SquareMatrix& o) const {
    return n_ == o.n_ && data_ == o.data_;
  }
  bool operator!=(const SquareMatrix& o) const { return !(*this == o); }

  std::string to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < n_; ++i) {
      out << (i == 0 ? "[" : " ");
      for (std::size_t j = 0; j < n_; ++j) {
        out << (j == 0 ? "[" : ", ") << (*this)(i, j);
      }
      out << "]" << (i + 1 == n_ ? "]" : "\n");
    }
    return out.str();
  }

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) {
      throw BoundsError("matrix index out of range");
    }
  }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace metabalance
