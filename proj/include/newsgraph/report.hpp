#ifndef NEWSGRAPH_REPORT_HPP_
#define NEWSGRAPH_REPORT_HPP_

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "newsgraph/corpus.hpp"
#include "newsgraph/topics.hpp"

namespace newsgraph {

/// One clustered window: the window bounds, its clusters with category
/// labels already applied, and the total article count of the window.
struct WindowClusters {
    TimeWindow window;
    std::vector<TopicCluster> clusters;
    std::size_t num_articles = 0;
};

/// Source counts for one cluster. total is the sum over counts.
struct TopicFrequencyRow {
    int community_id = 0;
    std::string category;
    std::string topic_text;
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
};

/// One row per cluster, counting member articles by source. Rows are
/// sorted by total descending, ties by community id ascending.
std::vector<TopicFrequencyRow> topic_frequency_table(
    const std::vector<TopicCluster>& clusters, const ArticleSet& articles);

/// Article counts per category for one window. total covers every article
/// in the window; articles outside all clusters count as "uncategorized".
struct EvolutionPoint {
    TimeWindow window;
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
};

std::vector<EvolutionPoint> evolution_series(
    const std::vector<WindowClusters>& windows);

/// Per-source share of clustered articles in each category. Shares sum to
/// 1 per source; sources without clustered articles are omitted. Rows are
/// sorted by source ascending.
struct CoverageBreakdown {
    std::string source;
    std::map<std::string, double> shares;
};

std::vector<CoverageBreakdown> coverage_breakdown(
    const std::vector<TopicCluster>& clusters, const ArticleSet& articles);

/// Distinct source names in ascending order.
std::vector<std::string> distinct_sources(const ArticleSet& articles);

/// RFC 4180 quoting: fields containing commas, quotes or line breaks are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_field(const std::string& value);

/// Columns window_start,window_end,category,count with inclusive day
/// bounds. Every window emits a row for every category seen anywhere in
/// the series, so drift reads directly off the file.
void write_evolution_csv(const std::vector<EvolutionPoint>& series,
                         std::ostream& out);

/// Columns source,category,share.
void write_coverage_csv(const std::vector<CoverageBreakdown>& rows,
                        std::ostream& out);

/// Columns window,community_id,category,total,<one per source>,topic_text.
/// Windows keep their given order; sources name the count columns.
void write_topics_csv(
    const std::vector<std::pair<std::string, std::vector<TopicFrequencyRow>>>&
        windows,
    const std::vector<std::string>& sources, std::ostream& out);

}  // namespace newsgraph

#endif  // NEWSGRAPH_REPORT_HPP_
