#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace stb {

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

/// Dense row-major cost matrix; +infinity marks a forbidden pair.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = kForbidden)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::initializer_list<std::initializer_list<double>> rows);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  [[nodiscard]] bool allowed(std::size_t r, std::size_t c) const {
    return (*this)(r, c) != kForbidden;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  /// row -> column, or nullopt when the row is left unassigned.
  std::vector<std::optional<std::size_t>> row_to_col;

  [[nodiscard]] std::size_t num_assigned() const;
};

/// Total cost of an assignment: the sum of chosen entries in row order plus
/// `miss_cost` for every unassigned row.
[[nodiscard]] double assignment_cost(const CostMatrix& costs, const Assignment& assignment,
                                     double miss_cost);

/// Optimal rectangular assignment (Hungarian method with row/column potentials).
///
/// Minimises sum of chosen entries + miss_cost * (unassigned rows), never using
/// forbidden pairs. Finite entries must be non-negative. An infinite miss_cost
/// means "assign as many rows as possible, then minimise cost".
[[nodiscard]] Assignment hungarian(const CostMatrix& costs, double miss_cost = kForbidden);

}  // namespace stb
