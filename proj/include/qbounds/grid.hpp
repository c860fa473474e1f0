#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <utility>

#include "qbounds/error.hpp"

namespace qbounds {

using Vector = Eigen::VectorXd;

/// Uniform grid on [a1, a2] with an odd number of nodes (Simpson-compatible).
class ParameterGrid {
 public:
  ParameterGrid(double a1, double a2, Eigen::Index m);

  double a1() const noexcept { return a1_; }
  double a2() const noexcept { return a2_; }
  Eigen::Index size() const noexcept { return m_; }
  double spacing() const noexcept { return h_; }
  double width() const noexcept { return a2_ - a1_; }

  double node(Eigen::Index i) const noexcept { return a1_ + static_cast<double>(i) * h_; }
  Vector nodes() const;

  friend bool operator==(const ParameterGrid& lhs, const ParameterGrid& rhs) noexcept {
    return lhs.a1_ == rhs.a1_ && lhs.a2_ == rhs.a2_ && lhs.m_ == rhs.m_;
  }

 private:
  double a1_;
  double a2_;
  Eigen::Index m_;
  double h_;
};

/// Real samples of a function at every node of a grid.
class GridFunction {
 public:
  GridFunction(ParameterGrid grid, Vector values);

  /// Zero function on `grid`.
  explicit GridFunction(ParameterGrid grid);

  const ParameterGrid& grid() const noexcept { return grid_; }
  const Vector& values() const noexcept { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }
  Eigen::Index size() const noexcept { return values_.size(); }

 private:
  ParameterGrid grid_;
  Vector values_;
};

/// Evaluates `fn(x)` at every node.
template <typename Fn>
GridFunction sample(const ParameterGrid& grid, Fn&& fn) {
  Vector values(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) values[i] = fn(grid.node(i));
  return GridFunction(grid, std::move(values));
}

/// Throws GridMismatch unless both grids are identical.
void require_same_grid(const ParameterGrid& lhs, const ParameterGrid& rhs, const char* context);

}  // namespace qbounds
