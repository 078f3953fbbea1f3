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

#include "jigsaw/core/puzzle.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include <fmt/format.h>

#include "jigsaw/core/errors.hpp"

namespace jigsaw {

GridSpec::GridSpec(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw ConfigError(fmt::format("grid {}x{}: rows and cols must be positive", rows, cols));
  }
  if (static_cast<long long>(rows) * cols < 2) {
    throw ConfigError(fmt::format("grid {}x{}: needs at least two pieces", rows, cols));
  }
  if (static_cast<long long>(rows) * cols > 4096) {
    throw ConfigError(fmt::format("grid {}x{}: too many pieces", rows, cols));
  }
}

GridSpec GridSpec::parse(std::string_view text) {
  const auto x = text.find_first_of("xX");
  auto parse_int = [&](std::string_view part) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw ConfigError(fmt::format("invalid grid '{}': expected MxN", text));
    }
    return value;
  };
  if (x == std::string_view::npos) throw ConfigError(fmt::format("invalid grid '{}': expected MxN", text));
  return GridSpec(parse_int(text.substr(0, x)), parse_int(text.substr(x + 1)));
}

std::string GridSpec::to_string() const { return fmt::format("{}x{}", rows_, cols_); }

Permutation::Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size() + 1, false);
  for (int v : mapping_) {
    if (v < 1 || v > static_cast<int>(mapping_.size()) || seen[static_cast<std::size_t>(v)]) {
      throw InvalidInput("permutation is not a bijection on 1..n");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int size) {
  std::vector<int> m(static_cast<std::size_t>(size));
  std::iota(m.begin(), m.end(), 1);
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(mapping_.size());
  for (std::size_t x = 0; x < mapping_.size(); ++x) {
    inv[static_cast<std::size_t>(mapping_[x] - 1)] = static_cast<int>(x) + 1;
  }
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t x = 0; x < mapping_.size(); ++x) {
    if (mapping_[x] != static_cast<int>(x) + 1) return false;
  }
  return true;
}

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::kUpperLeft: return "upper-left";
    case Direction::kAbove: return "directly-above";
    case Direction::kUpperRight: return "upper-right";
    case Direction::kLeft: return "directly-left";
    case Direction::kRight: return "directly-right";
    case Direction::kLowerLeft: return "lower-left";
    case Direction::kBelow: return "directly-below";
    case Direction::kLowerRight: return "lower-right";
  }
  return "?";
}

Direction direction_from_string(std::string_view name) {
  for (Direction d : kAllDirections) {
    if (to_string(d) == name) return d;
  }
  throw InvalidInput(fmt::format("unknown direction '{}'", name));
}

Direction opposite(Direction d) noexcept {
  switch (d) {
    case Direction::kUpperLeft: return Direction::kLowerRight;
    case Direction::kAbove: return Direction::kBelow;
    case Direction::kUpperRight: return Direction::kLowerLeft;
    case Direction::kLeft: return Direction::kRight;
    case Direction::kRight: return Direction::kLeft;
    case Direction::kLowerLeft: return Direction::kUpperRight;
    case Direction::kBelow: return Direction::kAbove;
    case Direction::kLowerRight: return Direction::kUpperLeft;
  }
  return d;
}

std::vector<Direction> legal_directions(const GridSpec& grid) {
  if (grid.rows() == 1) return {Direction::kLeft, Direction::kRight};
  if (grid.cols() == 1) return {Direction::kAbove, Direction::kBelow};
  return {kAllDirections.begin(), kAllDirections.end()};
}

Direction relative_direction(int a, int b, const GridSpec& grid) {
  if (!grid.contains(a) || !grid.contains(b)) {
    throw InvalidArgument(fmt::format("positions {} and {} must lie in 1..{}", a, b, grid.piece_count()));
  }
  if (a == b) throw InvalidArgument("relative direction of a position to itself is undefined");

  const int dr = grid.row_of(a) - grid.row_of(b);
  const int dc = grid.col_of(a) - grid.col_of(b);
  if (dr < 0) return dc < 0 ? Direction::kUpperLeft : dc == 0 ? Direction::kAbove : Direction::kUpperRight;
  if (dr > 0) return dc < 0 ? Direction::kLowerLeft : dc == 0 ? Direction::kBelow : Direction::kLowerRight;
  return dc < 0 ? Direction::kLeft : Direction::kRight;
}

Permutation random_permutation(const GridSpec& grid, Rng& rng) {
  std::vector<int> m(static_cast<std::size_t>(grid.piece_count()));
  std::iota(m.begin(), m.end(), 1);
  rng.shuffle(std::span<int>(m));
  return Permutation(std::move(m));
}

Permutation random_permutation(const GridSpec& grid, std::uint64_t seed) {
  Rng rng(seed, Stream::kPermutation);
  return random_permutation(grid, rng);
}

int transposed_position(int position, const GridSpec& grid) noexcept {
  const int r = grid.row_of(position);
  const int c = grid.col_of(position);
  // New grid has grid.cols() rows and grid.rows() columns.
  return (c - 1) * grid.rows() + r;
}

TransposeResult transpose(const GridSpec& grid, const Permutation& perm) {
  std::vector<int> mapping(static_cast<std::size_t>(grid.piece_count()));
  for (int x = 1; x <= grid.piece_count(); ++x) {
    mapping[static_cast<std::size_t>(transposed_position(x, grid) - 1)] = transposed_position(perm[x], grid);
  }
  return {grid.transposed(), Permutation(std::move(mapping)), true};
}

TransposeResult transpose_augment(const GridSpec& grid, const Permutation& perm, Rng& rng) {
  if (grid.is_square()) return {grid, perm, false};
  if (rng.coin()) return transpose(grid, perm);
  return {grid, perm, false};
}

}  // namespace jigsaw
