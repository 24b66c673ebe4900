#pragma once

#include <cstddef>
#include <vector>

namespace lcbp {

/// Ordered conditioning set. A column index is the |X|-ary number whose most
/// significant digit is the value of the first node in the ordering.
struct ColumnOrdering {
  std::vector<int> nodes;
  int radix = 2;

  std::size_t columns() const;
  /// Digit of `column` at `position` within the ordering.
  int digit(std::size_t column, std::size_t position) const;
  /// Digit of `column` for a node of the ordering; throws if absent.
  int digit_of(std::size_t column, int node) const;
  /// Position of a node, or nodes.size() when absent.
  std::size_t position_of(int node) const;
  bool contains(int node) const;
  std::size_t index_of(const std::vector<int>& digits) const;

  bool operator==(const ColumnOrdering& other) const = default;
};

/// |X| rows by |X|^|C| columns of conditioned message columns, stored
/// column-major. log_scale is one scalar for the whole matrix, never
/// per-column.
struct MessageMatrix {
  int from = 0;
  int to = 0;
  ColumnOrdering conditioning;
  int rows = 0;
  std::vector<double> values;  // values[column * rows + r]
  double log_scale = 0.0;

  std::size_t cols() const { return conditioning.columns(); }
  double& at(int r, std::size_t c) { return values[c * rows + r]; }
  double at(int r, std::size_t c) const { return values[c * rows + r]; }
};

/// Same shape as MessageMatrix; summing all columns and normalizing yields
/// the node marginal.
struct BeliefMatrix {
  int node = 0;
  ColumnOrdering conditioning;
  int rows = 0;
  std::vector<double> values;
  double log_scale = 0.0;

  std::size_t cols() const { return conditioning.columns(); }
  double& at(int r, std::size_t c) { return values[c * rows + r]; }
  double at(int r, std::size_t c) const { return values[c * rows + r]; }
};

}  // namespace lcbp
