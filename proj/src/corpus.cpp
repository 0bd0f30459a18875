#include "newsgraph/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "newsgraph/error.hpp"

namespace newsgraph {
namespace {

using nlohmann::json;

std::string require_string(const json& record, const char* field, std::size_t line_no) {
    auto it = record.find(field);
    if (it == record.end()) {
        throw Error("line " + std::to_string(line_no) + ": missing field \"" + field + "\"");
    }
    if (!it->is_string()) {
        throw Error("line " + std::to_string(line_no) + ": field \"" + field +
                    "\" must be a string");
    }
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& record, const char* field,
                                           std::size_t line_no) {
    auto it = record.find(field);
    if (it == record.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        throw Error("line " + std::to_string(line_no) + ": field \"" + field +
                    "\" must be a string");
    }
    return it->get<std::string>();
}

std::string to_lower(const std::string& s) {
    std::string out(s.size(), '\0');
    std::transform(s.begin(), s.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

ArticleSet load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path);

    ArticleSet set;
    set.provenance = path;
    std::unordered_map<std::string, std::size_t> seen_ids;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;

        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error("line " + std::to_string(line_no) + ": malformed record: " + e.what());
        }
        if (!record.is_object()) {
            throw Error("line " + std::to_string(line_no) + ": record is not a JSON object");
        }

        Article a;
        a.id = require_string(record, "id", line_no);
        a.source = require_string(record, "source", line_no);
        a.title = require_string(record, "title", line_no);
        a.body = require_string(record, "body", line_no);
        const std::string ts = require_string(record, "published_at", line_no);
        try {
            a.published_at = parse_instant(ts);
        } catch (const Error& e) {
            throw Error("line " + std::to_string(line_no) + ": " + e.what());
        }
        a.url = optional_string(record, "url", line_no);
        a.reference_summary = optional_string(record, "reference_summary", line_no);

        if (a.id.empty()) {
            throw Error("line " + std::to_string(line_no) + ": field \"id\" must be non-empty");
        }
        if (a.body.empty()) {
            throw Error("line " + std::to_string(line_no) + ": field \"body\" must be non-empty");
        }
        auto [it, inserted] = seen_ids.emplace(a.id, line_no);
        if (!inserted) {
            throw Error("duplicate article id \"" + a.id + "\" on lines " +
                        std::to_string(it->second) + " and " + std::to_string(line_no));
        }
        set.articles.push_back(std::move(a));
    }

    std::stable_sort(set.articles.begin(), set.articles.end(),
                     [](const Article& x, const Article& y) {
                         return x.published_at < y.published_at;
                     });
    return set;
}

void save_corpus(const ArticleSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    for (const Article& a : set.articles) {
        json record;
        record["id"] = a.id;
        record["source"] = a.source;
        record["title"] = a.title;
        record["body"] = a.body;
        record["published_at"] = format_instant(a.published_at);
        if (a.url) record["url"] = *a.url;
        if (a.reference_summary) record["reference_summary"] = *a.reference_summary;
        out << record.dump() << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

ArticleSet filter_by_keywords(const ArticleSet& set,
                              const std::vector<std::string>& keywords) {
    if (keywords.empty()) throw Error("filter_by_keywords: keyword list is empty");
    std::vector<std::string> lowered;
    lowered.reserve(keywords.size());
    for (const auto& k : keywords) lowered.push_back(to_lower(k));

    ArticleSet out;
    out.provenance = set.provenance;
    for (const Article& a : set.articles) {
        const std::string haystack = to_lower(a.title) + " " + to_lower(a.body);
        const bool hit = std::any_of(lowered.begin(), lowered.end(), [&](const std::string& k) {
            return haystack.find(k) != std::string::npos;
        });
        if (hit) out.articles.push_back(a);
    }
    return out;
}

std::vector<std::pair<TimeWindow, ArticleSet>> window_partition(const ArticleSet& set,
                                                                int window_days,
                                                                Instant origin) {
    if (window_days < 1) throw Error("window_partition: window_days must be >= 1");
    std::vector<std::pair<TimeWindow, ArticleSet>> windows;
    if (set.empty()) return windows;

    const std::int64_t span = static_cast<std::int64_t>(window_days) * kSecondsPerDay;
    std::int64_t current_index = 0;
    bool have_current = false;

    // Articles are sorted, so windows come out in chronological order.
    for (const Article& a : set.articles) {
        std::int64_t offset = a.published_at - origin;
        if (offset < 0) {
            throw Error("window_partition: article \"" + a.id +
                        "\" published before the window origin");
        }
        const std::int64_t index = offset / span;
        if (!have_current || index != current_index) {
            TimeWindow w;
            w.start = origin + index * span;
            w.end = origin + (index + 1) * span;
            w.label = format_date(w.start) + "_" + format_date(w.end + (-kSecondsPerDay));
            ArticleSet ws;
            ws.provenance = set.provenance;
            windows.emplace_back(std::move(w), std::move(ws));
            current_index = index;
            have_current = true;
        }
        windows.back().second.articles.push_back(a);
    }
    return windows;
}

Instant default_window_origin(const ArticleSet& set) {
    if (set.empty()) throw Error("default_window_origin: corpus is empty");
    Instant earliest = set.articles.front().published_at;
    for (const Article& a : set.articles) {
        earliest = std::min(earliest, a.published_at);
    }
    return midnight_utc(earliest);
}

}  // namespace newsgraph
