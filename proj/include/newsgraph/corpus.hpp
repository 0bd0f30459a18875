#ifndef NEWSGRAPH_CORPUS_HPP_
#define NEWSGRAPH_CORPUS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "newsgraph/clock.hpp"

namespace newsgraph {

/// One ingested news item.
struct Article {
    std::string id;
    std::string source;
    std::string title;
    std::string body;
    Instant published_at;
    std::optional<std::string> url;
    std::optional<std::string> reference_summary;

    bool operator==(const Article&) const = default;
};

/// Articles ordered by published_at ascending, unique ids.
struct ArticleSet {
    std::vector<Article> articles;
    std::string provenance;

    std::size_t size() const { return articles.size(); }
    bool empty() const { return articles.empty(); }
};

/// Half-open interval [start, end).
struct TimeWindow {
    Instant start;
    Instant end;
    std::string label;
};

/// Loads a line-delimited corpus: one JSON object per line with fields
/// id, source, title, body, published_at (ISO-8601 UTC) and optional
/// url, reference_summary. Lines are validated and the result is sorted
/// by published_at. Malformed lines and duplicate ids throw Error with
/// the offending line number(s).
ArticleSet load_corpus(const std::string& path);

/// Writes the set back in the load_corpus line format.
void save_corpus(const ArticleSet& set, const std::string& path);

/// Keeps articles whose title or body contains any keyword,
/// case-insensitively. Order is preserved.
ArticleSet filter_by_keywords(const ArticleSet& set,
                              const std::vector<std::string>& keywords);

/// Splits the corpus into contiguous windows of window_days starting at
/// origin. Every article lands in exactly one window; empty windows are
/// dropped. Window labels are "<first day>_<last day>" in YYYY-MM-DD.
std::vector<std::pair<TimeWindow, ArticleSet>> window_partition(const ArticleSet& set,
                                                                int window_days,
                                                                Instant origin);

/// Midnight UTC of the earliest article's day; the default window origin.
Instant default_window_origin(const ArticleSet& set);

}  // namespace newsgraph

#endif  // NEWSGRAPH_CORPUS_HPP_
