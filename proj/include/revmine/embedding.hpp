#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace revmine {

// Pretrained word-vector table in the plain-text distribution format:
// one word per line followed by `dimension` decimal floats.
// Immutable after load; lookup is case-normalized (ASCII lowercase).
struct VectorStore {
  std::size_t dimension = 50;
  std::unordered_map<std::string, std::vector<double>> table;

  const std::vector<double>* lookup(std::string_view word) const;
};

VectorStore parse_store(std::istream& in, std::size_t dimension);
VectorStore load_store(const std::filesystem::path& path,
                       std::size_t dimension);

// Lowercases, strips punctuation inside tokens (letters/digits kept, so
// "stir-fry" becomes "stirfry"), splits on whitespace, drops empty tokens.
// Bytes >= 0x80 are preserved as-is; case folding is ASCII-only.
std::vector<std::string> preprocess(std::string_view text);

// Component-wise sum of the in-vocabulary token vectors.
struct TextVector {
  std::vector<double> components;
  std::size_t matched_tokens = 0;  // tokens found in the store
  std::size_t total_tokens = 0;

  bool is_zero() const;
};

TextVector embed_text(std::span<const std::string> tokens,
                      const VectorStore& store);

// <a,b> / (|a||b|); nullopt when either norm is zero. Throws
// std::invalid_argument on dimension mismatch (contract violation).
std::optional<double> cosine_similarity(const TextVector& a,
                                        const TextVector& b);

}  // namespace revmine
