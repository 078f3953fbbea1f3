/*
 * Copyright 2026 The Jigsaw-RL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jigsaw/core/rng.hpp"

namespace jigsaw {

/// Puzzle geometry: `rows` x `cols` cells, written "MxN" with M rows.
/// Cells are labelled 1..rows*cols in row-major order.
class GridSpec {
 public:
  /// Throws ConfigError unless rows >= 1, cols >= 1 and rows*cols >= 2.
  GridSpec(int rows, int cols);

  /// Parses "MxN" (also accepts 'X'). Throws ConfigError.
  static GridSpec parse(std::string_view text);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int piece_count() const noexcept { return rows_ * cols_; }
  bool is_line() const noexcept { return rows_ == 1 || cols_ == 1; }
  bool is_square() const noexcept { return rows_ == cols_; }

  /// 1-based row and column of a position index.
  int row_of(int position) const noexcept { return (position - 1) / cols_ + 1; }
  int col_of(int position) const noexcept { return (position - 1) % cols_ + 1; }
  int position_at(int row, int col) const noexcept { return (row - 1) * cols_ + col; }
  bool contains(int position) const noexcept { return position >= 1 && position <= piece_count(); }

  GridSpec transposed() const { return GridSpec(cols_, rows_); }
  std::string to_string() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int rows_;
  int cols_;
};

/// mapping[x] (1-based x) is the original position of the patch currently at
/// shuffled position x. This is literally the full-question answer grid.
class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidInput unless `mapping` is a bijection on {1..size}.
  explicit Permutation(std::vector<int> mapping);

  static Permutation identity(int size);

  int size() const noexcept { return static_cast<int>(mapping_.size()); }
  /// Original position of the patch at shuffled position x (1-based).
  int operator[](int x) const { return mapping_[static_cast<std::size_t>(x - 1)]; }
  std::span<const int> values() const noexcept { return mapping_; }

  Permutation inverse() const;
  bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> mapping_;
};

enum class Direction {
  kUpperLeft,
  kAbove,
  kUpperRight,
  kLeft,
  kRight,
  kLowerLeft,
  kBelow,
  kLowerRight,
};

inline constexpr std::array<Direction, 8> kAllDirections = {
    Direction::kUpperLeft, Direction::kAbove,     Direction::kUpperRight, Direction::kLeft,
    Direction::kRight,     Direction::kLowerLeft, Direction::kBelow,      Direction::kLowerRight,
};

std::string_view to_string(Direction d) noexcept;
/// Throws InvalidInput on an unknown name.
Direction direction_from_string(std::string_view name);
Direction opposite(Direction d) noexcept;

/// Directions producible on `grid`: {left, right} for a single row, {above,
/// below} for a single column, all eight otherwise (canonical order).
std::vector<Direction> legal_directions(const GridSpec& grid);

/// Direction of cell `a` relative to cell `b`, from the signs of the row and
/// column offsets. Distance is ignored, so on a 4x1 grid cell 4 is directly
/// below cell 1. Throws InvalidArgument when a == b or either is off-grid.
Direction relative_direction(int a, int b, const GridSpec& grid);

/// Uniform shuffle over all (mn)! permutations, identity included.
Permutation random_permutation(const GridSpec& grid, Rng& rng);
Permutation random_permutation(const GridSpec& grid, std::uint64_t seed);

/// Row-major index of cell `position` after swapping rows and columns.
int transposed_position(int position, const GridSpec& grid) noexcept;

struct TransposeResult {
  GridSpec grid;
  Permutation perm;
  bool transposed = false;
};

/// Unconditional transpose: both the shuffled slot and the original label of
/// every patch move from (r, c) to (c, r).
TransposeResult transpose(const GridSpec& grid, const Permutation& perm);

/// With probability 1/2 returns transpose(grid, perm). Square grids are
/// returned unchanged and consume no randomness.
TransposeResult transpose_augment(const GridSpec& grid, const Permutation& perm, Rng& rng);

}  // namespace jigsaw
