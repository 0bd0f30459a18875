#ifndef NEWSGRAPH_SEGMENT_HPP_
#define NEWSGRAPH_SEGMENT_HPP_

#include <string>
#include <unordered_map>
#include <vector>

namespace newsgraph {

struct Sentence {
    std::string text;
    std::size_t index = 0;     // 0-based position within the article
    std::string article_id;

    bool operator==(const Sentence&) const = default;
};

/// Normalized tokens: lowercase, whitespace-split, edge punctuation stripped.
using TokenSequence = std::vector<std::string>;

/// Abbreviations that suppress a sentence break after their trailing dot.
const std::vector<std::string>& default_abbreviations();

/// Loads one abbreviation per line; blank lines are skipped.
std::vector<std::string> load_abbreviations(const std::string& path);

/// Rule-based splitter: breaks after '.', '!' or '?' when followed by
/// whitespace and an uppercase letter (or end of text), unless the dot
/// terminates a known abbreviation. Whitespace-only input yields no
/// sentences; every sentence text is trimmed and non-empty.
std::vector<Sentence> split_sentences(const std::string& text,
                                      const std::string& article_id = "");
std::vector<Sentence> split_sentences(const std::string& text,
                                      const std::string& article_id,
                                      const std::vector<std::string>& abbreviations);

/// Lowercases, splits on whitespace, strips leading/trailing punctuation
/// from each token. Tokens that strip to nothing are dropped.
TokenSequence tokenize(const std::string& text);

/// Contiguous n-gram multiset with multiplicities. Grams are the n tokens
/// joined with '\x1f'. Sequences shorter than n yield an empty map.
std::unordered_map<std::string, int> ngram_counts(const TokenSequence& tokens, int n);

/// Total n-gram count: max(0, len - n + 1).
std::size_t ngram_total(const TokenSequence& tokens, int n);

}  // namespace newsgraph

#endif  // NEWSGRAPH_SEGMENT_HPP_
