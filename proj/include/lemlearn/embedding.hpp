#pragma once

#include <memory>
#include <string>
#include <vector>

namespace lemlearn {

struct EmbeddingVector {
    std::vector<double> values;

    int dim() const { return static_cast<int>(values.size()); }
};

/// Pluggable text-embedding backend. Implementations must be deterministic
/// for identical inputs or the pipeline loses reproducibility.
class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    /// One vector per text, all of equal dimension.
    virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) = 0;
};

/// Deterministic token-hash bag-of-words embedder used for offline runs and
/// tests. Identical texts always produce identical unit-norm vectors.
class HashEmbeddingProvider : public EmbeddingProvider {
  public:
    explicit HashEmbeddingProvider(int dim = 64) : dim_(dim) {}
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override;

  private:
    int dim_;
};

struct HttpEmbeddingConfig {
    std::string endpoint;            // e.g. http://host:port/embed
    std::string api_key_env = "EMBED_API_KEY";
    int max_retries = 3;
    int backoff_ms = 250;
};

/// Wire contract: POST {"texts": [...]} -> {"embeddings": [[...], ...]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
  public:
    explicit HttpEmbeddingProvider(HttpEmbeddingConfig config) : config_(std::move(config)) {}
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) override;

  private:
    HttpEmbeddingConfig config_;
};

/// Embeds texts through the provider, validating the response. Throws
/// ProviderError on empty input or transport failure, DimensionMismatch on
/// ragged vectors.
std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts,
                                   EmbeddingProvider& provider);

/// dot(u,v) / (|u||v|), clamped to [-1, 1]. Throws DimensionMismatch or
/// ZeroVector.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

}  // namespace lemlearn
