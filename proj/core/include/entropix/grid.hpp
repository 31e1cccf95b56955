#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace entropix {

using TokenId = std::int32_t;

struct GridShape {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return height * width; }
  bool operator==(const GridShape&) const = default;
};

struct Position {
  std::size_t row = 0;
  std::size_t col = 0;

  bool operator==(const Position&) const = default;
};

inline std::size_t linear_index(GridShape shape, Position pos) {
  return pos.row * shape.width + pos.col;
}

inline Position position_of(GridShape shape, std::size_t index) {
  return {index / shape.width, index % shape.width};
}

// Dense row-major grid.
template <typename T>
struct Grid {
  GridShape shape;
  std::vector<T> cells;

  Grid() = default;
  Grid(GridShape s, T fill) : shape(s), cells(s.size(), fill) {}

  T& operator[](Position p) { return cells[linear_index(shape, p)]; }
  const T& operator[](Position p) const { return cells[linear_index(shape, p)]; }

  T& at(Position p) {
    check(p);
    return (*this)[p];
  }
  const T& at(Position p) const {
    check(p);
    return (*this)[p];
  }

  bool operator==(const Grid&) const = default;

 private:
  void check(Position p) const {
    if (p.row >= shape.height || p.col >= shape.width) {
      throw std::out_of_range("grid position out of range");
    }
  }
};

using TokenGrid = Grid<TokenId>;

// Per-position entropy in nats.
using EntropyMap = Grid<double>;

}  // namespace entropix
