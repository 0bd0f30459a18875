#ifndef NEWSGRAPH_EMBEDDER_HPP_
#define NEWSGRAPH_EMBEDDER_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace newsgraph {

/// Fixed-dimension real vector for a sentence or summary.
struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

/// Standard cosine; 0 if either vector is all-zero. Throws on dimension
/// mismatch. Result clamped to [-1, 1].
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

enum class EmbedderKind { hashed_tfidf, remote };

struct EmbedderConfig {
    EmbedderKind kind = EmbedderKind::hashed_tfidf;
    std::size_t dimension = 768;   // local backend
    std::uint64_t seed = 0;        // hash seed, local backend
    std::string endpoint;          // remote backend, e.g. "http://host:port"
    int timeout_ms = 5000;
    int max_retries = 2;
};

/// Text-to-vector interface. fit() is called once with the working corpus
/// before embed(); a fitted embedder is immutable and safe to share.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual void fit(const std::vector<std::string>& corpus_texts) = 0;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const = 0;
};

/// Deterministic local backend: signed feature hashing of unigram TF-IDF
/// into a fixed number of buckets, L2-normalized. Empty or fully
/// out-of-vocabulary text embeds to the all-zero vector.
class HashedTfidfEmbedder final : public Embedder {
public:
    explicit HashedTfidfEmbedder(std::size_t dimension = 768, std::uint64_t seed = 0);

    void fit(const std::vector<std::string>& corpus_texts) override;
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override;

    std::size_t dimension() const { return dimension_; }
    /// Bucket index a token hashes to; exposed so collision-freedom of a
    /// vocabulary can be checked.
    std::size_t bucket_of(const std::string& token) const;

private:
    std::size_t dimension_;
    std::uint64_t seed_;
    std::unordered_map<std::string, std::size_t> document_frequency_;
    std::size_t num_documents_ = 0;
    bool fitted_ = false;
};

/// Client for a remote embedding service speaking
/// POST {endpoint}/v1/embed {"texts": [...]} ->
/// {"dim": D, "vectors": [[...], ...]}.
/// Non-200 or malformed responses are retried with exponential backoff
/// starting at 100 ms; RemoteError after max_retries.
class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(std::string endpoint, int timeout_ms = 5000, int max_retries = 2);

    void fit(const std::vector<std::string>& corpus_texts) override;  // no-op
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override;

private:
    std::string endpoint_;
    int timeout_ms_;
    int max_retries_;
};

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config);

}  // namespace newsgraph

#endif  // NEWSGRAPH_EMBEDDER_HPP_
