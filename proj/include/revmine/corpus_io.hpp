#pragma once

#include <filesystem>
#include <iosfwd>

#include "revmine/types.hpp"

namespace revmine {

// Internal versioned binary cache for a parsed Corpus (magic "RVMC" + format
// version + CBOR payload). Identical corpora serialize to identical bytes.
void save_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

Corpus load_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);

}  // namespace revmine
