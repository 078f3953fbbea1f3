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

#include "jigsaw/core/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace jigsaw {

namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_alpha(char c) noexcept { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
// Bytes >= 0x80 belong to multi-byte UTF-8 letters; treat them as word bytes.
bool is_word(char c) noexcept {
  return is_digit(c) || is_alpha(c) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

int count_occurrences(std::string_view text, std::string_view needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos; pos = text.find(needle, pos + needle.size())) ++n;
  return n;
}

std::optional<std::int64_t> to_int64(std::string_view digits, bool negative) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return negative ? -value : value;
}

// One line of a grid answer: integers separated by blanks, commas or
// brackets and nothing else.
std::optional<std::vector<std::int64_t>> parse_row(std::string_view line) {
  std::vector<std::int64_t> values;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == ',' || c == '[' || c == ']' || c == '\r' || c == '\v' || c == '\f') {
      ++i;
      continue;
    }
    bool negative = false;
    if (c == '-' || c == '+') {
      negative = c == '-';
      ++i;
      if (i >= line.size() || !is_digit(line[i])) return std::nullopt;
    } else if (!is_digit(c)) {
      return std::nullopt;
    }
    const std::size_t start = i;
    while (i < line.size() && is_digit(line[i])) ++i;
    if (i < line.size()) {
      const char next = line[i];
      if (!(next == ' ' || next == '\t' || next == ',' || next == ']' || next == '\r' || next == '\v' ||
            next == '\f')) {
        return std::nullopt;
      }
    }
    const auto v = to_int64(line.substr(start, i - start), negative);
    if (!v) return std::nullopt;
    values.push_back(*v);
  }
  if (values.empty()) return std::nullopt;
  return values;
}

struct IntToken {
  std::size_t begin;  // first byte (sign or digit)
  std::size_t end;    // one past the last digit
  std::int64_t value;
};

// Standalone integers: not glued to words or decimals on either side.
std::vector<IntToken> scan_integers(std::string_view text) {
  std::vector<IntToken> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    const std::size_t digits_begin = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    const std::size_t end = i;

    bool negative = false;
    if (begin > 0 && text[begin - 1] == '-' && (begin < 2 || !is_word(text[begin - 2]))) {
      negative = true;
      --begin;
    }
    const bool left_ok = begin == 0 || (!is_word(text[begin - 1]) && text[begin - 1] != '.');
    const bool right_ok =
        end == text.size() ||
        (!is_word(text[end]) && !(text[end] == '.' && end + 1 < text.size() && is_digit(text[end + 1])));
    if (!left_ok || !right_ok) continue;
    const auto v = to_int64(text.substr(digits_begin, end - digits_begin), negative);
    if (!v) continue;
    tokens.push_back({begin, end, *v});
  }
  return tokens;
}

bool comma_gap(std::string_view gap) {
  int commas = 0;
  for (char c : gap) {
    if (c == ',') {
      ++commas;
    } else if (c != ' ' && c != '\t') {
      return false;
    }
  }
  return commas == 1;
}

}  // namespace

std::string describe(const Payload& p) {
  if (std::holds_alternative<Unparseable>(p)) return "unparseable";
  if (const auto* l = std::get_if<LetterAnswer>(&p)) return std::string(1, l->letter);
  if (const auto* b = std::get_if<BoxAnswer>(&p)) {
    return fmt::format("{},{},{},{}", b->rect.x1, b->rect.y1, b->rect.x2, b->rect.y2);
  }
  const auto& g = std::get<GridAnswer>(p);
  return fmt::format("{}", fmt::join(g.values, " "));
}

ParsedResponse extract_regions(std::string_view raw, PromptMode mode) {
  ParsedResponse out;
  out.payload = Unparseable{};
  auto& tags = out.tags;
  tags.think_open = count_occurrences(raw, kThinkOpen);
  tags.think_close = count_occurrences(raw, kThinkClose);
  tags.answer_open = count_occurrences(raw, kAnswerOpen);
  tags.answer_close = count_occurrences(raw, kAnswerClose);
  if (tags.think_open == 1 && tags.think_close == 1 && tags.answer_open == 1 && tags.answer_close == 1) {
    const auto to = raw.find(kThinkOpen);
    const auto tc = raw.find(kThinkClose);
    const auto ao = raw.find(kAnswerOpen);
    const auto ac = raw.find(kAnswerClose);
    tags.correct_order = to < tc && tc < ao && ao < ac;
  }

  const auto to = raw.find(kThinkOpen);
  if (to != std::string_view::npos) {
    const auto body = to + kThinkOpen.size();
    const auto tc = raw.find(kThinkClose, body);
    if (tc != std::string_view::npos) out.think_text = std::string(raw.substr(body, tc - body));
  }

  if (mode == PromptMode::kNonThinking) {
    out.answer_text = std::string(raw);
    return out;
  }
  // Last complete <answer>...</answer> block.
  for (auto ao = raw.rfind(kAnswerOpen); ao != std::string_view::npos;
       ao = ao == 0 ? std::string_view::npos : raw.rfind(kAnswerOpen, ao - 1)) {
    const auto body = ao + kAnswerOpen.size();
    const auto ac = raw.find(kAnswerClose, body);
    if (ac != std::string_view::npos) {
      out.answer_text = std::string(raw.substr(body, ac - body));
      break;
    }
  }
  return out;
}

std::optional<GridAnswer> parse_grid(std::string_view region, const GridSpec& grid) {
  std::vector<std::optional<std::vector<std::int64_t>>> rows;
  std::size_t start = 0;
  while (start <= region.size()) {
    auto nl = region.find('\n', start);
    if (nl == std::string_view::npos) nl = region.size();
    rows.push_back(parse_row(region.substr(start, nl - start)));
    start = nl + 1;
  }
  const auto m = static_cast<std::size_t>(grid.rows());
  const auto n = static_cast<std::size_t>(grid.cols());
  for (std::size_t last = rows.size(); last >= m; --last) {
    bool ok = true;
    for (std::size_t r = last - m; r < last && ok; ++r) ok = rows[r] && rows[r]->size() == n;
    if (!ok) continue;
    GridAnswer answer;
    for (std::size_t r = last - m; r < last; ++r) answer.values.insert(answer.values.end(), rows[r]->begin(), rows[r]->end());
    return answer;
  }
  return std::nullopt;
}

std::optional<LetterAnswer> parse_letter(std::string_view region, int num_choices) {
  const int range = std::clamp(num_choices, 1, 26);
  for (std::size_t i = region.size(); i-- > 0;) {
    const char c = region[i];
    if (!is_alpha(c)) continue;
    const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper - 'A' >= range) continue;
    if (i > 0) {
      const char prev = region[i - 1];
      if (is_word(prev)) continue;
      if (prev == '\'' && i > 1 && is_alpha(region[i - 2])) continue;  // "I'd"
    }
    if (i + 1 < region.size()) {
      const char next = region[i + 1];
      if (is_word(next)) continue;
      if (next == '\'' && i + 2 < region.size() && is_alpha(region[i + 2])) continue;  // "I'm"
    }
    return LetterAnswer{upper};
  }
  return std::nullopt;
}

std::optional<BoxAnswer> parse_bbox(std::string_view region) {
  const auto tokens = scan_integers(region);
  std::optional<BoxAnswer> best;
  std::size_t run = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k > 0 && comma_gap(region.substr(tokens[k - 1].end, tokens[k].begin - tokens[k - 1].end))) {
      ++run;
    } else {
      run = 1;
    }
    if (run >= 4) {
      best = BoxAnswer{{tokens[k - 3].value, tokens[k - 2].value, tokens[k - 1].value, tokens[k].value}};
    }
  }
  return best;
}

ParsedResponse parse_response(std::string_view raw, PromptMode mode, AnswerSchema schema, const GridSpec& grid,
                              int num_choices) {
  ParsedResponse out = extract_regions(raw, mode);
  if (!out.answer_text) return out;
  const std::string_view region = *out.answer_text;
  switch (schema) {
    case AnswerSchema::kGrid:
      if (auto g = parse_grid(region, grid)) out.payload = std::move(*g);
      break;
    case AnswerSchema::kLetter:
      if (auto l = parse_letter(region, num_choices)) out.payload = *l;
      break;
    case AnswerSchema::kBbox:
      if (auto b = parse_bbox(region)) out.payload = *b;
      break;
  }
  return out;
}

}  // namespace jigsaw
