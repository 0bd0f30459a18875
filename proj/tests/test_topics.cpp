#include <atomic>

#include "doctest.h"
#include "json.hpp"

#include "newsgraph/community.hpp"
#include "newsgraph/error.hpp"
#include "newsgraph/topics.hpp"
#include "support/localserver.hpp"
#include "support/tempdir.hpp"

using namespace newsgraph;
using testutil::LocalServer;

namespace {

Summary make_summary(const std::string& article_id,
                     const std::vector<std::string>& sentence_texts) {
    Summary s;
    s.article_id = article_id;
    for (std::size_t i = 0; i < sentence_texts.size(); ++i) {
        s.sentences.push_back(Sentence{sentence_texts[i], i, article_id});
    }
    return s;
}

HashedTfidfEmbedder fitted_on(const std::vector<Summary>& summaries) {
    std::vector<std::string> texts;
    for (const Summary& s : summaries) {
        for (const Sentence& sent : s.sentences) texts.push_back(sent.text);
    }
    HashedTfidfEmbedder embedder(256, 0);
    embedder.fit(texts.empty() ? std::vector<std::string>{""} : texts);
    return embedder;
}

}  // namespace

TEST_CASE("distill_topic joins top sentences in rank order") {
    const std::vector<Summary> summaries = {
        make_summary("a", {"Alpha beta gamma."}),
        make_summary("b", {"Alpha beta gamma delta epsilon."}),
        make_summary("c", {"Epsilon zeta eta."}),
    };
    auto embedder = fitted_on(summaries);
    // The middle sentence bridges the other two, so it ranks first; the
    // stronger neighbor comes second.
    const std::string one = distill_topic(summaries, embedder, 1, 0.1);
    CHECK(one == "Alpha beta gamma delta epsilon.");
    const std::string two = distill_topic(summaries, embedder, 2, 0.1);
    CHECK(two == "Alpha beta gamma delta epsilon. Alpha beta gamma.");
}

TEST_CASE("distill_topic drops exact duplicate sentences") {
    const std::vector<Summary> summaries = {
        make_summary("a", {"Alpha beta.", "Gamma delta."}),
        make_summary("b", {"Alpha beta.", "Epsilon zeta."}),
    };
    auto embedder = fitted_on(summaries);
    // Threshold 0.99 leaves the pooled graph without edges, so the
    // distilled text is the deduplicated pool prefix.
    const std::string text = distill_topic(summaries, embedder, 3, 0.99);
    CHECK(text == "Alpha beta. Gamma delta. Epsilon zeta.");
}

TEST_CASE("distill_topic survives short and empty pools") {
    auto embedder = fitted_on({});
    CHECK(distill_topic({}, embedder, 3, 0.6).empty());
    const std::vector<Summary> one = {make_summary("a", {"Only sentence."})};
    auto e1 = fitted_on(one);
    CHECK(distill_topic(one, e1, 5, 0.6) == "Only sentence.");
    CHECK_THROWS_AS(distill_topic(one, e1, 0, 0.6), Error);
}

TEST_CASE("build_topic_clusters groups members by community in node order") {
    const std::vector<Summary> summaries = {
        make_summary("a", {"Virus outbreak hospital."}),
        make_summary("b", {"Virus outbreak clinic."}),
        make_summary("c", {"Stocks earnings rally."}),
        make_summary("d", {"Stocks earnings shares."}),
    };
    auto embedder = fitted_on(summaries);
    std::vector<std::pair<std::string, EmbeddingVector>> units;
    std::vector<std::string> texts;
    for (const Summary& s : summaries) texts.push_back(s.text());
    const auto vectors = embedder.embed(texts);
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        units.emplace_back(summaries[i].article_id, vectors[i]);
    }
    const SimilarityGraph graph = build_similarity_graph(units, 0.2);
    Partition partition;
    partition.assignment = {0, 0, 1, 1};
    partition.num_communities = 2;

    const auto clusters = build_topic_clusters(graph, partition, summaries, embedder, 2, 0.2);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].id == 0);
    CHECK(clusters[0].member_ids == std::vector<std::string>{"a", "b"});
    CHECK(clusters[0].label == "uncategorized");
    CHECK(!clusters[0].distilled.empty());
    CHECK(clusters[1].member_ids == std::vector<std::string>{"c", "d"});

    const auto filtered =
        build_topic_clusters(graph, partition, summaries, embedder, 2, 0.2, {}, 3);
    CHECK(filtered.empty());
}

TEST_CASE("topic_similarity_matrix is symmetric with unit diagonal") {
    std::vector<TopicCluster> clusters(3);
    clusters[0].id = 0;
    clusters[0].distilled = "Virus outbreak hospital clinic.";
    clusters[1].id = 1;
    clusters[1].distilled = "Stocks earnings rally shares.";
    clusters[2].id = 2;
    clusters[2].distilled = "Virus outbreak testing.";
    HashedTfidfEmbedder embedder(256, 0);
    embedder.fit({clusters[0].distilled, clusters[1].distilled, clusters[2].distilled});

    const auto matrix = topic_similarity_matrix(clusters, embedder);
    REQUIRE(matrix.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(matrix[i].size() == 3);
        CHECK(matrix[i][i] == doctest::Approx(1.0));
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(matrix[i][j] == doctest::Approx(matrix[j][i]));
        }
    }
    CHECK(matrix[0][2] > matrix[0][1]);
}

TEST_CASE("apply_category_labels matches ids and warns on strays") {
    std::vector<TopicCluster> clusters(2);
    clusters[0].id = 0;
    clusters[1].id = 1;
    const auto warnings =
        apply_category_labels(clusters, {{"0", "health domestic"}, {"7", "economics"}});
    CHECK(clusters[0].label == "health domestic");
    CHECK(clusters[1].label == "uncategorized");
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("7") != std::string::npos);

    CHECK(apply_category_labels(clusters, {}).empty());
}

TEST_CASE("load_labels reads a JSON string map") {
    testutil::TempDir dir;
    const std::string path =
        dir.file("labels.json", R"({"w1/0": "health", "w1/1": "economics"})");
    const auto labels = load_labels(path);
    REQUIRE(labels.size() == 2);
    CHECK(labels.at("w1/0") == "health");

    CHECK_THROWS_AS(load_labels(dir.file("bad.json", "not json")), Error);
    CHECK_THROWS_AS(load_labels(dir.file("arr.json", "[1,2]")), Error);
    CHECK_THROWS_AS(load_labels(dir.file("num.json", R"({"0": 5})")), Error);
    CHECK_THROWS_AS(load_labels((dir.path() / "missing.json").string()), Error);
}

TEST_CASE("topics JSON shapes") {
    std::vector<TopicCluster> clusters(1);
    clusters[0].id = 0;
    clusters[0].member_ids = {"a", "b"};
    clusters[0].distilled = "Topic text.";
    clusters[0].label = "health";

    const auto topics = nlohmann::json::parse(topics_to_json_string(clusters));
    REQUIRE(topics.at("topics").size() == 1);
    const auto& t = topics.at("topics")[0];
    CHECK(t.at("id").get<int>() == 0);
    CHECK(t.at("label") == "health");
    CHECK(t.at("members") == nlohmann::json::array({"a", "b"}));
    CHECK(t.at("summary") == "Topic text.");

    const auto matrix =
        nlohmann::json::parse(topic_matrix_json_string(clusters, {{1.0}}));
    CHECK(matrix.at("topics") == nlohmann::json::array({0}));
    CHECK(matrix.at("matrix")[0][0].get<double>() == 1.0);
}

TEST_CASE("remote summarizer round-trips and honors max_sentences") {
    LocalServer server;
    // The handler echoes the request fields back so the client-side check
    // covers the wire format in both directions.
    server.server().Post("/v1/summarize", [](const httplib::Request& req,
                                             httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        const std::string echoed = body.at("text").get<std::string>() + "|" +
                                   std::to_string(body.at("max_sentences").get<int>());
        res.set_content(nlohmann::json{{"summary", echoed}}.dump(), "application/json");
    });
    const std::string endpoint = server.start();

    const RemoteSummarizer summarizer(endpoint, 2000, 0);
    CHECK(summarizer.summarize("Long text here.", 2) == "Long text here.|2");
}

TEST_CASE("remote summarizer retries then fails with RemoteError") {
    std::atomic<int> calls{0};
    LocalServer server;
    server.server().Post("/v1/summarize", [&](const httplib::Request&, httplib::Response& res) {
        if (calls.fetch_add(1) == 0) {
            res.status = 502;
            return;
        }
        res.set_content(nlohmann::json{{"summary", "Second try."}}.dump(), "application/json");
    });
    const std::string endpoint = server.start();

    const RemoteSummarizer summarizer(endpoint, 2000, 1);
    CHECK(summarizer.summarize("text", 1) == "Second try.");
    CHECK(calls.load() == 2);

    const RemoteSummarizer dead("http://127.0.0.1:9", 200, 0);
    CHECK_THROWS_AS(dead.summarize("text", 1), RemoteError);
}
