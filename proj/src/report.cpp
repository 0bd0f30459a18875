#include "newsgraph/report.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_map>

#include "newsgraph/clock.hpp"
#include "newsgraph/error.hpp"

namespace newsgraph {
namespace {

// Shortest representation that round-trips, so CSV output is stable
// across runs.
std::string format_double(double value) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw Error("failed to format double");
    return std::string(buf, end);
}

std::unordered_map<std::string, const Article*> article_index(const ArticleSet& articles) {
    std::unordered_map<std::string, const Article*> index;
    for (const Article& a : articles.articles) index.emplace(a.id, &a);
    return index;
}

const Article& member_article(
    const std::unordered_map<std::string, const Article*>& index, const std::string& id) {
    const auto it = index.find(id);
    if (it == index.end()) throw Error("cluster member '" + id + "' is not in the corpus");
    return *it->second;
}

}  // namespace

std::vector<TopicFrequencyRow> topic_frequency_table(
    const std::vector<TopicCluster>& clusters, const ArticleSet& articles) {
    const auto index = article_index(articles);
    std::vector<TopicFrequencyRow> rows;
    rows.reserve(clusters.size());
    for (const TopicCluster& cluster : clusters) {
        TopicFrequencyRow row;
        row.community_id = cluster.id;
        row.category = cluster.label;
        row.topic_text = cluster.distilled;
        for (const std::string& id : cluster.member_ids) {
            ++row.counts[member_article(index, id).source];
            ++row.total;
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const TopicFrequencyRow& a, const TopicFrequencyRow& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.community_id < b.community_id;
    });
    return rows;
}

std::vector<EvolutionPoint> evolution_series(const std::vector<WindowClusters>& windows) {
    std::vector<EvolutionPoint> series;
    series.reserve(windows.size());
    for (const WindowClusters& w : windows) {
        EvolutionPoint point;
        point.window = w.window;
        point.total = w.num_articles;
        std::size_t clustered = 0;
        for (const TopicCluster& cluster : w.clusters) {
            point.counts[cluster.label] += cluster.member_ids.size();
            clustered += cluster.member_ids.size();
        }
        if (clustered > w.num_articles)
            throw Error("window '" + w.window.label + "' holds " +
                        std::to_string(w.num_articles) + " articles but clusters cover " +
                        std::to_string(clustered));
        if (clustered < w.num_articles)
            point.counts["uncategorized"] += w.num_articles - clustered;
        series.push_back(std::move(point));
    }
    return series;
}

std::vector<CoverageBreakdown> coverage_breakdown(
    const std::vector<TopicCluster>& clusters, const ArticleSet& articles) {
    const auto index = article_index(articles);
    std::map<std::string, std::map<std::string, std::size_t>> counts;
    std::map<std::string, std::size_t> totals;
    for (const TopicCluster& cluster : clusters) {
        for (const std::string& id : cluster.member_ids) {
            const std::string& source = member_article(index, id).source;
            ++counts[source][cluster.label];
            ++totals[source];
        }
    }
    std::vector<CoverageBreakdown> rows;
    rows.reserve(counts.size());
    for (const auto& [source, by_category] : counts) {
        CoverageBreakdown row;
        row.source = source;
        const double total = static_cast<double>(totals[source]);
        for (const auto& [category, count] : by_category)
            row.shares[category] = static_cast<double>(count) / total;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> distinct_sources(const ArticleSet& articles) {
    std::set<std::string> sources;
    for (const Article& a : articles.articles) sources.insert(a.source);
    return std::vector<std::string>(sources.begin(), sources.end());
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
    std::string quoted = "\"";
    for (const char c : value) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_evolution_csv(const std::vector<EvolutionPoint>& series, std::ostream& out) {
    std::set<std::string> categories;
    for (const EvolutionPoint& p : series)
        for (const auto& [category, count] : p.counts) categories.insert(category);
    out << "window_start,window_end,category,count\n";
    for (const EvolutionPoint& p : series) {
        const std::string start = format_date(p.window.start);
        const std::string end =
            format_date(Instant{p.window.end.seconds_since_epoch - kSecondsPerDay});
        for (const std::string& category : categories) {
            const auto it = p.counts.find(category);
            const std::size_t count = it == p.counts.end() ? 0 : it->second;
            out << start << ',' << end << ',' << csv_field(category) << ',' << count << '\n';
        }
    }
}

void write_coverage_csv(const std::vector<CoverageBreakdown>& rows, std::ostream& out) {
    out << "source,category,share\n";
    for (const CoverageBreakdown& row : rows)
        for (const auto& [category, share] : row.shares)
            out << csv_field(row.source) << ',' << csv_field(category) << ','
                << format_double(share) << '\n';
}

void write_topics_csv(
    const std::vector<std::pair<std::string, std::vector<TopicFrequencyRow>>>& windows,
    const std::vector<std::string>& sources, std::ostream& out) {
    out << "window,community_id,category,total";
    for (const std::string& source : sources) out << ',' << csv_field(source);
    out << ",topic_text\n";
    for (const auto& [label, rows] : windows) {
        for (const TopicFrequencyRow& row : rows) {
            out << csv_field(label) << ',' << row.community_id << ',' << csv_field(row.category)
                << ',' << row.total;
            for (const std::string& source : sources) {
                const auto it = row.counts.find(source);
                out << ',' << (it == row.counts.end() ? 0 : it->second);
            }
            out << ',' << csv_field(row.topic_text) << '\n';
        }
    }
}

}  // namespace newsgraph
