#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace def {

// The five task blocks. The enum value is the vector component index; the
// order [red, blue, green, purple, yellow] is fixed and load-bearing.
enum class Block : int {
  Red = 0,
  Blue = 1,
  Green = 2,
  Purple = 3,
  Yellow = 4,
};

inline constexpr int kNumBlocks = 5;

inline constexpr std::array<std::string_view, kNumBlocks> kBlockNames{
    "red", "blue", "green", "purple", "yellow"};

inline constexpr int block_index(Block b) { return static_cast<int>(b); }

inline std::string_view block_name(Block b) {
  return kBlockNames[static_cast<std::size_t>(b)];
}

// Case-insensitive lookup; nullopt for anything that is not a block name.
inline std::optional<Block> block_from_name(std::string_view name) {
  std::string lower;
  lower.reserve(name.size());
  for (char c : name)
    lower += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  for (int i = 0; i < kNumBlocks; ++i)
    if (lower == kBlockNames[static_cast<std::size_t>(i)])
      return static_cast<Block>(i);
  return std::nullopt;
}

}  // namespace def
