#include "lemlearn/embedding.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "lemlearn/errors.hpp"

#ifndef LEMLEARN_NO_HTTP
#ifdef LEMLEARN_HTTPS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#endif

namespace lemlearn {

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

std::vector<EmbeddingVector> HashEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::vector<double> v(static_cast<size_t>(dim_), 0.0);
        std::string token;
        auto flush = [&] {
            if (token.empty()) return;
            for (auto& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            v[fnv1a(token) % static_cast<uint64_t>(dim_)] += 1.0;
            token.clear();
        };
        for (char c : text) {
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                static_cast<unsigned char>(c) >= 0x80) {
                token += c;
            } else {
                flush();
            }
        }
        flush();
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& x : v) x /= norm;
        } else {
            v[0] = 1.0;  // empty text still embeds to a valid unit vector
        }
        out.push_back({std::move(v)});
    }
    return out;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
#ifdef LEMLEARN_NO_HTTP
    throw ProviderError("http embedding provider not built in");
#else
    nlohmann::json request;
    request["texts"] = texts;
    const std::string body = request.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(config_.backoff_ms * (1 << (attempt - 1))));
        try {
            httplib::Client client(config_.endpoint.c_str());
            httplib::Headers headers;
            if (const char* key = std::getenv(config_.api_key_env.c_str()))
                headers.emplace("Authorization", std::string("Bearer ") + key);
            auto res = client.Post("/", headers, body, "application/json");
            if (!res) {
                last_error = "transport failure";
                continue;
            }
            if (res->status != 200) {
                last_error = "http status " + std::to_string(res->status);
                continue;
            }
            auto reply = nlohmann::json::parse(res->body);
            std::vector<EmbeddingVector> out;
            for (const auto& row : reply.at("embeddings"))
                out.push_back({row.get<std::vector<double>>()});
            return out;
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    throw ProviderError("embedding request failed after retries: " + last_error);
#endif
}

std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts,
                                   EmbeddingProvider& provider) {
    if (texts.empty()) throw ProviderError("embed: empty input");
    auto vectors = provider.embed_batch(texts);
    if (vectors.size() != texts.size())
        throw ProviderError("embed: provider returned " + std::to_string(vectors.size()) +
                            " vectors for " + std::to_string(texts.size()) + " texts");
    const int dim = vectors.front().dim();
    if (dim <= 0) throw DimensionMismatch("embed: zero-dimensional vector");
    for (const auto& v : vectors) {
        if (v.dim() != dim)
            throw DimensionMismatch("embed: ragged vectors (" + std::to_string(v.dim()) +
                                    " vs " + std::to_string(dim) + ")");
        for (double x : v.values)
            if (!std::isfinite(x)) throw ProviderError("embed: non-finite entry");
    }
    return vectors;
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dim() != v.dim())
        throw DimensionMismatch("cosine_similarity: dim " + std::to_string(u.dim()) + " vs " +
                                std::to_string(v.dim()));
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (size_t i = 0; i < u.values.size(); ++i) {
        dot += u.values[i] * v.values[i];
        nu += u.values[i] * u.values[i];
        nv += v.values[i] * v.values[i];
    }
    if (nu == 0.0 || nv == 0.0) throw ZeroVector("cosine_similarity: zero vector");
    double value = dot / (std::sqrt(nu) * std::sqrt(nv));
    if (value > 1.0) value = 1.0;
    if (value < -1.0) value = -1.0;
    return value;
}

}  // namespace lemlearn
