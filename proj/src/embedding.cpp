#include "revmine/embedding.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "revmine/types.hpp"

namespace revmine {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

const std::vector<double>* VectorStore::lookup(std::string_view word) const {
  auto it = table.find(ascii_lower(word));
  return it == table.end() ? nullptr : &it->second;
}

VectorStore parse_store(std::istream& in, std::size_t dimension) {
  if (dimension == 0) throw ConfigError("vector dimension must be positive");
  VectorStore store;
  store.dimension = dimension;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> components;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t word_end = line.find(' ');
    if (word_end == std::string::npos || word_end == 0) {
      throw FormatError("vector file line " + std::to_string(line_no) +
                            ": expected `word c1 ... c" +
                            std::to_string(dimension) + "`",
                        line_no);
    }
    components.clear();
    components.reserve(dimension);
    const char* p = line.data() + word_end;
    const char* end = line.data() + line.size();
    while (p != end) {
      while (p != end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) {
        throw FormatError("vector file line " + std::to_string(line_no) +
                              ": malformed float",
                          line_no);
      }
      components.push_back(v);
      p = next;
    }
    if (components.size() != dimension) {
      throw FormatError("vector file line " + std::to_string(line_no) + ": " +
                            std::to_string(components.size()) +
                            " components, expected " +
                            std::to_string(dimension),
                        line_no);
    }
    // duplicate words keep the first occurrence
    store.table.emplace(ascii_lower(line.substr(0, word_end)), components);
  }
  return store;
}

VectorStore load_store(const std::filesystem::path& path,
                       std::size_t dimension) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vector file: " + path.string());
  return parse_store(in, dimension);
}

std::vector<std::string> preprocess(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      flush();
    } else if (c >= 0x80) {
      current.push_back(static_cast<char>(c));  // non-ASCII kept verbatim
    } else if (std::isalnum(c)) {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<int>(c))));
    }
    // ASCII punctuation is stripped without splitting the token
  }
  flush();
  return tokens;
}

TextVector embed_text(std::span<const std::string> tokens,
                      const VectorStore& store) {
  TextVector out;
  out.components.assign(store.dimension, 0.0);
  out.total_tokens = tokens.size();
  for (const auto& token : tokens) {
    const std::vector<double>* vec = store.lookup(token);
    if (vec == nullptr) continue;  // out-of-vocabulary tokens are skipped
    for (std::size_t i = 0; i < store.dimension; ++i) {
      out.components[i] += (*vec)[i];
    }
    ++out.matched_tokens;
  }
  return out;
}

bool TextVector::is_zero() const {
  for (double c : components) {
    if (c != 0.0) return false;
  }
  return true;
}

std::optional<double> cosine_similarity(const TextVector& a,
                                        const TextVector& b) {
  if (a.components.size() != b.components.size()) {
    throw std::invalid_argument(
        "cosine_similarity: dimension mismatch (" +
        std::to_string(a.components.size()) + " vs " +
        std::to_string(b.components.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    dot += a.components[i] * b.components[i];
    na += a.components[i] * a.components[i];
    nb += b.components[i] * b.components[i];
  }
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace revmine
