#include <atomic>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

#include "newsgraph/corpus.hpp"
#include "newsgraph/error.hpp"
#include "newsgraph/pipeline.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace newsgraph;
namespace fs = std::filesystem;

namespace {

constexpr std::int64_t kMar02 = 1583107200;  // 2020-03-02T00:00:00Z

Article demo_article(int i, const std::string& source, const std::string& theme) {
    Article a;
    a.id = "d" + std::to_string(i);
    a.source = source;
    a.title = "Title " + std::to_string(i);
    a.body = "The " + theme + " report arrived today. Officials discussed the " + theme +
             " at length. Nobody expected the " + theme + " to change. A final " + theme +
             " note closed the day.";
    a.published_at = Instant{kMar02 + i * kSecondsPerDay};
    a.reference_summary = "The " + theme + " report arrived today.";
    return a;
}

std::string write_demo_corpus(testutil::TempDir& dir, bool with_refs = true) {
    ArticleSet set;
    set.articles = {demo_article(0, "NYT", "vote"), demo_article(1, "CNN", "vote"),
                    demo_article(8, "NYT", "storm"), demo_article(9, "CNN", "storm")};
    if (!with_refs) {
        for (Article& a : set.articles) a.reference_summary.reset();
    }
    const std::string path = (dir.path() / "corpus.jsonl").string();
    save_corpus(set, path);
    return path;
}

PipelineConfig demo_config(const std::string& corpus_path, const std::string& out_dir) {
    PipelineConfig cfg;
    cfg.corpus_path = corpus_path;
    cfg.out_dir = out_dir;
    cfg.threshold = 0.3;
    cfg.summary_k = 2;
    cfg.distill_k = 2;
    cfg.embedder.dimension = 64;
    return cfg;
}

}  // namespace

TEST_CASE("apply_config_file merges every key") {
    testutil::TempDir dir;
    const std::string path = dir.file("config.json", R"({
        "threshold": 0.5, "damping": 0.9, "tolerance": 1e-8, "max_iterations": 50,
        "summary_k": 2, "distill_k": 4, "window_days": 14, "summary_method": "lead",
        "cluster_method": "leiden", "resolution": 1.5, "seed": 7, "alpha": 0.1,
        "min_cluster_size": 2, "keywords": ["covid", "virus"], "labels": "labels.json",
        "jobs": 2,
        "embedder": {"kind": "remote", "dimension": 128, "seed": 3,
                     "endpoint": "http://localhost:1", "timeout_ms": 100, "max_retries": 1}
    })");

    PipelineConfig cfg;
    apply_config_file(cfg, path);
    CHECK(cfg.threshold == 0.5);
    CHECK(cfg.damping == 0.9);
    CHECK(cfg.tolerance == 1e-8);
    CHECK(cfg.max_iterations == 50);
    CHECK(cfg.summary_k == 2);
    CHECK(cfg.distill_k == 4);
    CHECK(cfg.window_days == 14);
    CHECK(cfg.summary_method == "lead");
    CHECK(cfg.cluster_method == "leiden");
    CHECK(cfg.resolution == 1.5);
    CHECK(cfg.seed == 7);
    CHECK(cfg.alpha == 0.1);
    CHECK(cfg.min_cluster_size == 2);
    CHECK(cfg.keywords == std::vector<std::string>{"covid", "virus"});
    CHECK(cfg.labels_path == "labels.json");
    CHECK(cfg.jobs == 2);
    CHECK(cfg.embedder.kind == EmbedderKind::remote);
    CHECK(cfg.embedder.dimension == 128);
    CHECK(cfg.embedder.seed == 3);
    CHECK(cfg.embedder.endpoint == "http://localhost:1");
    CHECK(cfg.embedder.timeout_ms == 100);
    CHECK(cfg.embedder.max_retries == 1);
}

TEST_CASE("apply_config_file leaves untouched fields at their defaults") {
    testutil::TempDir dir;
    PipelineConfig cfg;
    apply_config_file(cfg, dir.file("config.json", R"({"summary_k": 5})"));
    CHECK(cfg.summary_k == 5);
    CHECK(cfg.threshold == 0.6);
    CHECK(cfg.cluster_method == "louvain");
    CHECK(cfg.embedder.dimension == 768);
}

TEST_CASE("apply_config_file rejects malformed input") {
    testutil::TempDir dir;
    PipelineConfig cfg;
    CHECK_THROWS_WITH_AS(
        apply_config_file(cfg, dir.file("a.json", R"({"treshold": 0.5})")),
        doctest::Contains("unknown config key 'treshold'"), Error);
    CHECK_THROWS_WITH_AS(
        apply_config_file(cfg, dir.file("b.json", R"({"embedder": {"dim": 32}})")),
        doctest::Contains("unknown config key 'embedder.dim'"), Error);
    CHECK_THROWS_AS(apply_config_file(cfg, dir.file("c.json", R"({"embedder": 5})")), Error);
    CHECK_THROWS_AS(
        apply_config_file(cfg, dir.file("d.json", R"({"embedder": {"kind": "magic"}})")),
        Error);
    CHECK_THROWS_AS(apply_config_file(cfg, dir.file("e.json", "[1]")), Error);
    CHECK_THROWS_AS(apply_config_file(cfg, dir.file("f.json", "not json")), Error);
    CHECK_THROWS_AS(apply_config_file(cfg, dir.file("g.json", R"({"threshold": "high"})")),
                    Error);
    CHECK_THROWS_AS(apply_config_file(cfg, (dir.path() / "missing.json").string()), Error);
}

TEST_CASE("validate_config rejects out-of-range fields") {
    const PipelineConfig good;
    CHECK_NOTHROW(validate_config(good));

    const auto fails = [](auto mutate) {
        PipelineConfig cfg;
        mutate(cfg);
        CHECK_THROWS_AS(validate_config(cfg), Error);
    };
    fails([](PipelineConfig& c) { c.threshold = 1.5; });
    fails([](PipelineConfig& c) { c.threshold = -1.5; });
    fails([](PipelineConfig& c) { c.damping = 0.0; });
    fails([](PipelineConfig& c) { c.damping = 1.0; });
    fails([](PipelineConfig& c) { c.tolerance = 0.0; });
    fails([](PipelineConfig& c) { c.max_iterations = 0; });
    fails([](PipelineConfig& c) { c.summary_k = 0; });
    fails([](PipelineConfig& c) { c.distill_k = 0; });
    fails([](PipelineConfig& c) { c.window_days = 0; });
    fails([](PipelineConfig& c) { c.summary_method = "abstractive"; });
    fails([](PipelineConfig& c) { c.cluster_method = "kmeans"; });
    fails([](PipelineConfig& c) { c.resolution = 0.0; });
    fails([](PipelineConfig& c) { c.alpha = 0.0; });
    fails([](PipelineConfig& c) { c.alpha = 1.0; });
    fails([](PipelineConfig& c) { c.min_cluster_size = 0; });
    fails([](PipelineConfig& c) { c.jobs = 0; });
    fails([](PipelineConfig& c) { c.embedder.dimension = 4; });
    fails([](PipelineConfig& c) { c.embedder.timeout_ms = 0; });
    fails([](PipelineConfig& c) { c.embedder.max_retries = -1; });
    fails([](PipelineConfig& c) { c.embedder.kind = EmbedderKind::remote; });
    fails([](PipelineConfig& c) { c.keywords = {"ok", ""}; });
}

TEST_CASE("parallel_for covers every index once") {
    for (const int jobs : {1, 4, 100}) {
        std::vector<std::atomic<int>> hits(37);
        parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
        for (const auto& h : hits) CHECK(h.load() == 1);
    }
    CHECK_NOTHROW(parallel_for(0, 4, [](std::size_t) {}));
    CHECK_THROWS_AS(parallel_for(3, 0, [](std::size_t) {}), Error);
}

TEST_CASE("parallel_for rethrows a worker exception") {
    const auto boom = [](std::size_t i) {
        if (i == 11) throw std::runtime_error("boom");
    };
    CHECK_THROWS_WITH_AS(parallel_for(20, 4, boom), "boom", std::runtime_error);
    CHECK_THROWS_WITH_AS(parallel_for(20, 1, boom), "boom", std::runtime_error);
}

TEST_CASE("run_pipeline summarize writes only the summary artifacts") {
    testutil::TempDir dir;
    const auto cfg = demo_config(write_demo_corpus(dir), (dir.path() / "out").string());
    std::ostringstream log;
    run_pipeline(cfg, "summarize", log);

    const fs::path out(cfg.out_dir);
    CHECK(fs::exists(out / "run_config.json"));
    CHECK(fs::exists(out / "summaries.jsonl"));
    CHECK(!fs::exists(out / "ci.json"));
    CHECK(!fs::exists(out / "reports"));
    CHECK(!fs::exists(out / "full_period"));

    std::istringstream lines(testutil::read_file((out / "summaries.jsonl").string()));
    std::size_t count = 0;
    for (std::string line; std::getline(lines, line);) count += !line.empty();
    CHECK(count == 4);
    CHECK(log.str().find("corpus: 4 article(s)") != std::string::npos);
}

TEST_CASE("run_pipeline evaluate writes scores and the interval") {
    testutil::TempDir dir;
    const auto cfg = demo_config(write_demo_corpus(dir), (dir.path() / "out").string());
    std::ostringstream log;
    run_pipeline(cfg, "evaluate", log);

    const fs::path out(cfg.out_dir);
    CHECK(fs::exists(out / "summaries.jsonl"));
    CHECK(fs::exists(out / "rouge_textrank.json"));
    CHECK(fs::exists(out / "rouge_lead.json"));
    CHECK(fs::exists(out / "ci.json"));
    CHECK(!fs::exists(out / "full_period"));
}

TEST_CASE("run_pipeline cluster writes partitions without reports") {
    testutil::TempDir dir;
    const auto cfg = demo_config(write_demo_corpus(dir), (dir.path() / "out").string());
    std::ostringstream log;
    run_pipeline(cfg, "cluster", log);

    const fs::path out(cfg.out_dir);
    CHECK(fs::exists(out / "full_period" / "partition.json"));
    CHECK(fs::exists(out / "full_period" / "topics.json"));
    CHECK(fs::exists(out / "full_period" / "topic_matrix.json"));
    CHECK(fs::exists(out / "windows" / "2020-03-02_2020-03-08" / "partition.json"));
    CHECK(fs::exists(out / "windows" / "2020-03-09_2020-03-15" / "topics.json"));
    CHECK(!fs::exists(out / "reports"));
    CHECK(!fs::exists(out / "summaries.jsonl"));
}

TEST_CASE("run_pipeline report writes the CSV trio only") {
    testutil::TempDir dir;
    const auto cfg = demo_config(write_demo_corpus(dir), (dir.path() / "out").string());
    std::ostringstream log;
    run_pipeline(cfg, "report", log);

    const fs::path out(cfg.out_dir);
    CHECK(fs::exists(out / "reports" / "evolution.csv"));
    CHECK(fs::exists(out / "reports" / "coverage.csv"));
    CHECK(fs::exists(out / "reports" / "topics.csv"));
    CHECK(!fs::exists(out / "full_period"));
    CHECK(!fs::exists(out / "summaries.jsonl"));

    const std::string evolution =
        testutil::read_file((out / "reports" / "evolution.csv").string());
    CHECK(evolution.rfind("window_start,window_end,category,count\n", 0) == 0);
}

TEST_CASE("run_pipeline all writes the full artifact tree") {
    testutil::TempDir dir;
    const auto cfg = demo_config(write_demo_corpus(dir), (dir.path() / "out").string());
    std::ostringstream log;
    run_pipeline(cfg, "all", log);

    const fs::path out(cfg.out_dir);
    for (const char* name : {"run_config.json", "summaries.jsonl", "rouge_textrank.json",
                             "rouge_lead.json", "ci.json"}) {
        CHECK(fs::exists(out / name));
    }
    CHECK(fs::exists(out / "full_period" / "topic_matrix.json"));
    CHECK(fs::exists(out / "reports" / "evolution.csv"));
}

TEST_CASE("run_pipeline all skips evaluation when references are scarce") {
    testutil::TempDir dir;
    const auto cfg =
        demo_config(write_demo_corpus(dir, false), (dir.path() / "out").string());
    std::ostringstream log;
    run_pipeline(cfg, "all", log);
    CHECK(!fs::exists(fs::path(cfg.out_dir) / "ci.json"));
    CHECK(log.str().find("skipping evaluation") != std::string::npos);
}

TEST_CASE("run_pipeline raises DataError on unusable corpora") {
    testutil::TempDir dir;
    std::ostringstream log;

    const auto empty = demo_config(dir.file("empty.jsonl", "\n"), (dir.path() / "o1").string());
    CHECK_THROWS_AS(run_pipeline(empty, "summarize", log), DataError);

    auto filtered = demo_config(write_demo_corpus(dir), (dir.path() / "o2").string());
    filtered.keywords = {"nosuchword"};
    CHECK_THROWS_WITH_AS(run_pipeline(filtered, "summarize", log),
                         "no articles match the keyword filter", DataError);

    const auto no_refs =
        demo_config(write_demo_corpus(dir, false), (dir.path() / "o3").string());
    CHECK_THROWS_AS(run_pipeline(no_refs, "evaluate", log), DataError);
}

TEST_CASE("run_pipeline rejects unknown commands and missing paths") {
    testutil::TempDir dir;
    std::ostringstream log;
    const auto cfg = demo_config(write_demo_corpus(dir), (dir.path() / "out").string());
    CHECK_THROWS_WITH_AS(run_pipeline(cfg, "frobnicate", log), "unknown command 'frobnicate'",
                         Error);

    auto no_corpus = cfg;
    no_corpus.corpus_path.clear();
    CHECK_THROWS_AS(run_pipeline(no_corpus, "summarize", log), Error);
    auto no_out = cfg;
    no_out.out_dir.clear();
    CHECK_THROWS_AS(run_pipeline(no_out, "summarize", log), Error);
}

TEST_CASE("bundled planted corpus matches a fresh generation") {
    const auto planted = synthetic::planted_corpus();
    testutil::TempDir dir;
    const std::string corpus_path = (dir.path() / "corpus.jsonl").string();
    save_corpus(planted.articles, corpus_path);

    const std::string data_dir = NEWSGRAPH_DATA_DIR;
    CHECK(testutil::read_file(corpus_path) ==
          testutil::read_file(data_dir + "/planted/corpus.jsonl"));
    CHECK(planted.labels_json == testutil::read_file(data_dir + "/planted/labels.json"));
}
