#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace narrclass::text {

std::string_view trim(std::string_view s);

// Unicode case-fold, then strip surrounding whitespace and trailing ".,;:".
std::string normalize_label(std::string_view raw);

// Unicode case-fold only.
std::string fold_case(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

std::size_t word_count(std::string_view s);

// 64-bit FNV-1a; stable across platforms, used for prompt hashes and seeds.
std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace narrclass::text
