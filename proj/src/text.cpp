#include "etmatch/text.hpp"

#include <cctype>

namespace etmatch {

namespace {

bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size() + 4);
  bool pending_space = false;
  auto emit = [&](char c) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  };

  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (c >= 0x80) {
      emit(static_cast<char>(c));
      continue;
    }
    if (!std::isalnum(c)) {
      pending_space = true;
      continue;
    }
    if (is_upper(c) && i > 0) {
      const auto prev = static_cast<unsigned char>(raw[i - 1]);
      const bool next_lower =
          i + 1 < raw.size() && is_lower(static_cast<unsigned char>(raw[i + 1]));
      // "camelCase" -> "camel case"; "XMLParser" -> "xml parser"
      if (is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower)) {
        pending_space = true;
      }
    }
    emit(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::vector<std::string> tokens(std::string_view normalized) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < normalized.size()) {
    std::size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) out.emplace_back(normalized.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace etmatch
