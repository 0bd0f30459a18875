#include "newsgraph/embedder.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "newsgraph/error.hpp"
#include "newsgraph/segment.hpp"
#include "remote.hpp"

namespace newsgraph {
namespace {

// FNV-1a over the token bytes with the seed folded into the offset basis,
// then a splitmix64 finalizer so bucket and sign bits are well mixed even
// for short tokens.
std::uint64_t hash_token(const std::string& token, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ull ^ (seed + 0x9e3779b97f4a7c15ull);
    for (unsigned char c : token) {
        h ^= c;
        h *= 1099511628211ull;
    }
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return h;
}

void l2_normalize(std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    if (sq <= 0.0) return;
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v) x *= inv;
}

}  // namespace

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dim() != v.dim()) {
        throw Error("cosine_similarity: dimension mismatch (" + std::to_string(u.dim()) +
                    " vs " + std::to_string(v.dim()) + ")");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        dot += u.values[i] * v.values[i];
        nu += u.values[i] * u.values[i];
        nv += v.values[i] * v.values[i];
    }
    if (nu <= 0.0 || nv <= 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

HashedTfidfEmbedder::HashedTfidfEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
    if (dimension_ < 8) {
        throw Error("embedder dimension must be at least 8, got " + std::to_string(dimension_));
    }
}

std::size_t HashedTfidfEmbedder::bucket_of(const std::string& token) const {
    return hash_token(token, seed_) % dimension_;
}

void HashedTfidfEmbedder::fit(const std::vector<std::string>& corpus_texts) {
    if (corpus_texts.empty()) throw Error("embedder fit: empty corpus");
    document_frequency_.clear();
    num_documents_ = corpus_texts.size();
    std::vector<std::string> seen;
    for (const auto& text : corpus_texts) {
        seen.clear();
        for (auto& tok : tokenize(text)) seen.push_back(std::move(tok));
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (const auto& tok : seen) ++document_frequency_[tok];
    }
    fitted_ = true;
}

std::vector<EmbeddingVector> HashedTfidfEmbedder::embed(
    const std::vector<std::string>& texts) const {
    if (!fitted_) throw Error("embedder used before fit");
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::vector<double> v(dimension_, 0.0);
        std::unordered_map<std::string, int> tf;
        for (const auto& tok : tokenize(text)) ++tf[tok];
        for (const auto& [tok, count] : tf) {
            const auto df = document_frequency_.find(tok);
            if (df == document_frequency_.end()) continue;  // OOV tokens are skipped
            const double weight =
                static_cast<double>(count) *
                std::log(1.0 + static_cast<double>(num_documents_) / static_cast<double>(df->second));
            const std::uint64_t h = hash_token(tok, seed_);
            const double sign = (h >> 63) ? -1.0 : 1.0;
            v[h % dimension_] += sign * weight;
        }
        l2_normalize(v);
        out.push_back(EmbeddingVector{std::move(v)});
    }
    return out;
}

RemoteEmbedder::RemoteEmbedder(std::string endpoint, int timeout_ms, int max_retries)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms), max_retries_(max_retries) {
    if (endpoint_.empty()) throw Error("remote embedder: empty endpoint");
    if (max_retries_ < 0) throw Error("remote embedder: negative max_retries");
}

void RemoteEmbedder::fit(const std::vector<std::string>&) {}

std::vector<EmbeddingVector> RemoteEmbedder::embed(const std::vector<std::string>& texts) const {
    const std::string body = nlohmann::json{{"texts", texts}}.dump();
    std::vector<EmbeddingVector> out;
    detail::post_json_with_retry(
        endpoint_, "/v1/embed", body, timeout_ms_, max_retries_,
        [&](const std::string& response) {
            const auto parsed = nlohmann::json::parse(response);
            const std::size_t dim = parsed.at("dim").get<std::size_t>();
            const auto& vectors = parsed.at("vectors");
            if (!vectors.is_array() || vectors.size() != texts.size()) {
                throw Error("vector count mismatch");
            }
            std::vector<EmbeddingVector> batch;
            batch.reserve(texts.size());
            for (const auto& row : vectors) {
                EmbeddingVector v{row.get<std::vector<double>>()};
                if (v.dim() != dim) throw Error("row dimension mismatch");
                batch.push_back(std::move(v));
            }
            out = std::move(batch);
        });
    return out;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config) {
    if (config.kind == EmbedderKind::remote) {
        return std::make_unique<RemoteEmbedder>(config.endpoint, config.timeout_ms,
                                                config.max_retries);
    }
    return std::make_unique<HashedTfidfEmbedder>(config.dimension, config.seed);
}

}  // namespace newsgraph
