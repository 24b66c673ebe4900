#include "lcbp/message_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lcbp {

std::size_t ColumnOrdering::columns() const {
  std::size_t n = 1;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    n *= static_cast<std::size_t>(radix);
  }
  return n;
}

int ColumnOrdering::digit(std::size_t column, std::size_t position) const {
  std::size_t stride = 1;
  for (std::size_t k = position + 1; k < nodes.size(); ++k) {
    stride *= static_cast<std::size_t>(radix);
  }
  return static_cast<int>((column / stride) % static_cast<std::size_t>(radix));
}

int ColumnOrdering::digit_of(std::size_t column, int node) const {
  const std::size_t p = position_of(node);
  if (p == nodes.size()) {
    throw std::invalid_argument("ordering: node " + std::to_string(node) +
                                " is not in the conditioning set");
  }
  return digit(column, p);
}

std::size_t ColumnOrdering::position_of(int node) const {
  return static_cast<std::size_t>(
      std::find(nodes.begin(), nodes.end(), node) - nodes.begin());
}

bool ColumnOrdering::contains(int node) const {
  return position_of(node) != nodes.size();
}

std::size_t ColumnOrdering::index_of(const std::vector<int>& digits) const {
  if (digits.size() != nodes.size()) {
    throw std::invalid_argument("ordering: digit count mismatch");
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    idx = idx * static_cast<std::size_t>(radix) + static_cast<std::size_t>(digits[k]);
  }
  return idx;
}

}  // namespace lcbp
