#include <atomic>
#include <cmath>

#include "doctest.h"
#include "json.hpp"

#include "newsgraph/embedder.hpp"
#include "newsgraph/error.hpp"
#include "support/localserver.hpp"

using namespace newsgraph;
using testutil::LocalServer;

namespace {

double norm(const EmbeddingVector& v) {
    double sum = 0.0;
    for (const double x : v.values) sum += x * x;
    return std::sqrt(sum);
}

const std::vector<std::string> kCorpus = {
    "the virus outbreak spread", "hospital doctors treated patients",
    "stocks rallied on earnings", "the senate passed legislation"};

}  // namespace

TEST_CASE("cosine_similarity basics") {
    const EmbeddingVector a{{1.0, 0.0}};
    const EmbeddingVector b{{0.0, 1.0}};
    const EmbeddingVector z{{0.0, 0.0}};
    CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
    CHECK(cosine_similarity(a, b) == doctest::Approx(0.0));
    CHECK(cosine_similarity(a, EmbeddingVector{{-2.0, 0.0}}) == doctest::Approx(-1.0));
    CHECK(cosine_similarity(a, z) == 0.0);
    CHECK(cosine_similarity(z, z) == 0.0);
    CHECK_THROWS_AS(cosine_similarity(a, EmbeddingVector{{1.0, 2.0, 3.0}}), Error);
}

TEST_CASE("hashed embedder is deterministic and unit-length") {
    HashedTfidfEmbedder e1(64, 7);
    HashedTfidfEmbedder e2(64, 7);
    e1.fit(kCorpus);
    e2.fit(kCorpus);
    const auto v1 = e1.embed(kCorpus);
    const auto v2 = e2.embed(kCorpus);
    REQUIRE(v1.size() == kCorpus.size());
    for (std::size_t i = 0; i < v1.size(); ++i) {
        CHECK(v1[i].dim() == 64);
        CHECK(v1[i].values == v2[i].values);
        CHECK(norm(v1[i]) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("hash seed changes the embedding") {
    HashedTfidfEmbedder a(64, 1);
    HashedTfidfEmbedder b(64, 2);
    a.fit(kCorpus);
    b.fit(kCorpus);
    CHECK(a.embed({kCorpus[0]})[0].values != b.embed({kCorpus[0]})[0].values);
    CHECK(a.bucket_of("virus") < 64);
}

TEST_CASE("out-of-vocabulary text embeds to zero") {
    HashedTfidfEmbedder e(64, 0);
    e.fit(kCorpus);
    const auto v = e.embed({"zzz qqq", ""});
    CHECK(norm(v[0]) == 0.0);
    CHECK(norm(v[1]) == 0.0);
}

TEST_CASE("similar texts score higher than unrelated ones") {
    HashedTfidfEmbedder e(256, 0);
    e.fit(kCorpus);
    const auto v = e.embed({"the virus outbreak spread", "virus outbreak in hospitals",
                            "stocks rallied on earnings"});
    const double same_topic = cosine_similarity(v[0], v[1]);
    const double cross_topic = cosine_similarity(v[0], v[2]);
    CHECK(same_topic > cross_topic);
}

TEST_CASE("embedder validation") {
    CHECK_THROWS_AS(HashedTfidfEmbedder(4, 0), Error);
    HashedTfidfEmbedder e(64, 0);
    CHECK_THROWS_AS(e.embed({"text"}), Error);  // before fit
    CHECK_THROWS_AS(e.fit({}), Error);
}

TEST_CASE("make_embedder dispatches on kind") {
    EmbedderConfig local;
    local.dimension = 64;
    auto e = make_embedder(local);
    e->fit(kCorpus);
    CHECK(e->embed({kCorpus[0]})[0].dim() == 64);

    EmbedderConfig remote;
    remote.kind = EmbedderKind::remote;
    remote.endpoint = "http://127.0.0.1:9";
    CHECK(make_embedder(remote) != nullptr);
}

TEST_CASE("remote embedder round-trips vectors") {
    LocalServer server;
    server.server().Post("/v1/embed", [](const httplib::Request& req, httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        nlohmann::json vectors = nlohmann::json::array();
        for (std::size_t i = 0; i < body["texts"].size(); ++i) {
            vectors.push_back({1.0 * static_cast<double>(i), 2.0, 3.0});
        }
        res.set_content(nlohmann::json{{"dim", 3}, {"vectors", vectors}}.dump(),
                        "application/json");
    });
    const std::string endpoint = server.start();

    RemoteEmbedder remote(endpoint, 2000, 0);
    remote.fit({});  // no-op
    const auto v = remote.embed({"a", "b"});
    REQUIRE(v.size() == 2);
    CHECK(v[0].values == std::vector<double>{0.0, 2.0, 3.0});
    CHECK(v[1].values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("remote embedder retries failures then succeeds") {
    std::atomic<int> calls{0};
    LocalServer server;
    server.server().Post("/v1/embed", [&](const httplib::Request&, httplib::Response& res) {
        if (calls.fetch_add(1) == 0) {
            res.status = 500;
            res.set_content("boom", "text/plain");
            return;
        }
        res.set_content(nlohmann::json{{"dim", 1}, {"vectors", {{0.5}}}}.dump(),
                        "application/json");
    });
    const std::string endpoint = server.start();

    RemoteEmbedder remote(endpoint, 2000, 2);
    const auto v = remote.embed({"a"});
    CHECK(v[0].values == std::vector<double>{0.5});
    CHECK(calls.load() == 2);
}

TEST_CASE("remote embedder retries malformed responses") {
    std::atomic<int> calls{0};
    LocalServer server;
    server.server().Post("/v1/embed", [&](const httplib::Request&, httplib::Response& res) {
        if (calls.fetch_add(1) == 0) {
            res.set_content("not json", "application/json");
            return;
        }
        res.set_content(nlohmann::json{{"dim", 1}, {"vectors", {{1.5}}}}.dump(),
                        "application/json");
    });
    const std::string endpoint = server.start();

    RemoteEmbedder remote(endpoint, 2000, 1);
    CHECK(remote.embed({"a"})[0].values == std::vector<double>{1.5});
    CHECK(calls.load() == 2);
}

TEST_CASE("remote embedder throws RemoteError after exhausting retries") {
    std::atomic<int> calls{0};
    LocalServer server;
    server.server().Post("/v1/embed", [&](const httplib::Request&, httplib::Response& res) {
        calls.fetch_add(1);
        res.status = 503;
    });
    const std::string endpoint = server.start();

    RemoteEmbedder remote(endpoint, 2000, 2);
    CHECK_THROWS_AS(remote.embed({"a"}), RemoteError);
    CHECK(calls.load() == 3);  // initial attempt + 2 retries
}

TEST_CASE("remote embedder reports unreachable endpoints") {
    RemoteEmbedder remote("http://127.0.0.1:9", 200, 0);
    CHECK_THROWS_AS(remote.embed({"a"}), RemoteError);
}
