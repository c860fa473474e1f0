#include "qbounds/grid.hpp"

#include <cmath>
#include <string>

namespace qbounds {

ParameterGrid::ParameterGrid(double a1, double a2, Eigen::Index m) : a1_(a1), a2_(a2), m_(m), h_(0.0) {
  if (!std::isfinite(a1) || !std::isfinite(a2) || !(a2 > a1)) {
    throw Error(ErrorCode::InvalidSupport,
                "support (" + std::to_string(a1) + ", " + std::to_string(a2) + ") requires a2 > a1");
  }
  if (m < 3 || m % 2 == 0) {
    throw Error(ErrorCode::InvalidGrid, "grid needs an odd node count >= 3, got " + std::to_string(m));
  }
  h_ = (a2 - a1) / static_cast<double>(m - 1);
}

Vector ParameterGrid::nodes() const {
  Vector x(m_);
  for (Eigen::Index i = 0; i < m_; ++i) x[i] = node(i);
  return x;
}

GridFunction::GridFunction(ParameterGrid grid, Vector values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::GridMismatch, "expected " + std::to_string(grid_.size()) + " samples, got " +
                                             std::to_string(values_.size()));
  }
}

GridFunction::GridFunction(ParameterGrid grid) : grid_(grid), values_(Vector::Zero(grid.size())) {}

void require_same_grid(const ParameterGrid& lhs, const ParameterGrid& rhs, const char* context) {
  if (!(lhs == rhs)) throw Error(ErrorCode::GridMismatch, std::string(context) + ": functions live on different grids");
}

}  // namespace qbounds
