#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "revmine/embedding.hpp"
#include "revmine/types.hpp"

namespace revmine {

// Entry indices that start a new recipe for one user. Index 0 is always an
// implicit session start and never appears here.
struct BoundarySet {
  std::vector<std::size_t> boundaries;         // strictly increasing, >= 1
  std::vector<std::size_t> undefined_entries;  // flagged for manual review

  friend bool operator==(const BoundarySet&, const BoundarySet&) = default;
};

// Scans from the current anchor (the first text of the session): the first
// later entry whose cosine similarity to the anchor drops below `threshold`
// opens a new session and becomes the anchor. Entries with undefined
// similarity (zero embedding) never open a session; they are flagged instead.
BoundarySet find_boundaries(std::span<const SubmissionEntry> entries,
                            const VectorStore& store,
                            double threshold = 0.995);

enum class OverrideOp { Add, Remove };

struct BoundaryOverride {
  std::string user_id;
  OverrideOp op = OverrideOp::Add;
  std::size_t index = 0;
};

// CSV rows `user_id,op,index` with op in {add, remove}; no header.
std::vector<BoundaryOverride> parse_overrides(std::istream& in);

// Applies the add/remove operations that match `user_id`. Out-of-range or
// inapplicable overrides are fatal config errors naming user and index.
BoundarySet apply_overrides(BoundarySet set,
                            std::span<const BoundaryOverride> overrides,
                            std::string_view user_id,
                            std::size_t entry_count);

// One recipe: the first entry of the span is the draft, the rest are its
// revision steps.
struct Session {
  std::string user_id;
  int recipe_ordinal = 1;  // 1-based
  std::size_t draft_index = 0;  // index into the user's entry list
  SubmissionEntry draft;
  std::vector<SubmissionEntry> revisions;
  std::vector<std::size_t> flagged_entries;  // undefined-similarity indices

  std::size_t span_length() const { return revisions.size() + 1; }
};

std::vector<Session> build_sessions(std::span<const SubmissionEntry> entries,
                                    const BoundarySet& set);

struct SessionizeResult {
  std::vector<Session> sessions;  // all users, user order then recipe order
  std::vector<Diagnostic> notes;  // review flags and ordinal warnings
};

// Per-user segmentation over the whole corpus; `warn_above_ordinal` emits a
// note when a user ends up with more recipes than the experiment expects.
SessionizeResult sessionize_corpus(
    const Corpus& corpus, const VectorStore& store, double threshold = 0.995,
    std::span<const BoundaryOverride> overrides = {},
    int warn_above_ordinal = 3);

// JSON-lines manifest: user, recipe ordinal, draft index, revision indices,
// review flags. Sessions are contiguous spans, so indices fully describe
// them against the corpus they were built from.
void write_session_manifest(std::ostream& out,
                            std::span<const Session> sessions);
std::vector<Session> read_session_manifest(std::istream& in,
                                           const Corpus& corpus);

}  // namespace revmine
