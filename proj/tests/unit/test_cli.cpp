#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr discarded and returns exit code and stdout.
Run pcm_run(const std::string &args) {
    const std::string cmd = std::string(PCM_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const std::string &name) { return std::string(PCM_FIXTURES) + "/" + name; }

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "pcm_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string &name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("help exits cleanly for every subcommand") {
    CHECK(pcm_run("--help").code == 0);
    for (const char *sub : {"ingest", "stats", "train", "evaluate", "score", "serve", "synth"}) {
        CAPTURE(sub);
        const auto r = pcm_run(std::string(sub) + " --help");
        CHECK(r.code == 0);
        CHECK(r.out.find("--") != std::string::npos);
    }
}

TEST_CASE("usage errors exit 1, file errors exit 2") {
    CHECK(pcm_run("").code == 1);
    CHECK(pcm_run("frobnicate").code == 1);
    CHECK(pcm_run("stats --corpus " + fixture("mini.jsonl") + " --bogus").code == 1);
    CHECK(pcm_run("stats").code == 1);
    CHECK(pcm_run("stats --corpus /nonexistent/corpus.jsonl").code == 2);
    CHECK(pcm_run("train --corpus " + fixture("synthetic.jsonl") + " --out /tmp/x.ckpt --embeddings /nonexistent.txt")
              .code == 2);
    CHECK(pcm_run("train --corpus " + fixture("synthetic.jsonl") + " --model gbm --out /tmp/x.ckpt").code == 1);

    TempDir dir;
    const auto bad = dir / "bad.jsonl";
    std::ofstream(bad) << R"({"kind":"comment","id":"c","article_id":"missing","text":"x"})" << "\n";
    CHECK(pcm_run("ingest --corpus " + bad).code == 1);
}

TEST_CASE("invalid flags leave outputs untouched") {
    TempDir dir;
    const auto out = dir / "stats.json";
    CHECK(pcm_run("stats --corpus " + fixture("mini.jsonl") + " --out " + out + " --nope").code == 1);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("stats and ingest") {
    const auto r = pcm_run("stats --corpus " + fixture("mini.jsonl"));
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("effective_config"));
    CHECK(j.dump().find("kappa") != std::string::npos);

    TempDir dir;
    const auto normalized = dir / "norm.jsonl";
    REQUIRE(pcm_run("ingest --corpus " + fixture("mini.jsonl") + " --out " + normalized).code == 0);
    const auto again = dir / "again.jsonl";
    REQUIRE(pcm_run("ingest --corpus " + normalized + " --out " + again).code == 0);
    CHECK(slurp(normalized) == slurp(again));
}

TEST_CASE("training is byte-for-byte reproducible") {
    TempDir dir;
    const std::string common = "train --corpus " + fixture("synthetic.jsonl") + " --embeddings " +
                               fixture("embeddings_50x8.txt") + " --epochs 2 --hidden 6 --seed 7 --out ";
    REQUIRE(pcm_run(common + (dir / "a.ckpt")).code == 0);
    REQUIRE(pcm_run(common + (dir / "b.ckpt")).code == 0);
    CHECK(slurp(dir / "a.ckpt") == slurp(dir / "b.ckpt"));

    const std::string base = "train --corpus " + fixture("synthetic.jsonl") +
                             " --model rf --rf-trees 5 --features f1,f4 --lsa-k 10 --seed 3 --out ";
    REQUIRE(pcm_run(base + (dir / "rf1.ckpt")).code == 0);
    REQUIRE(pcm_run(base + (dir / "rf2.ckpt")).code == 0);
    CHECK(slurp(dir / "rf1.ckpt") == slurp(dir / "rf2.ckpt"));

    // the scorer reads the neural checkpoint back
    const auto scored = pcm_run("score --corpus " + fixture("synthetic.jsonl") + " --model " + (dir / "a.ckpt") +
                                " --embeddings " + fixture("embeddings_50x8.txt") +
                                " --article syn-001 --text 'rain storm cloud'");
    REQUIRE(scored.code == 0);
    CHECK(nlohmann::json::parse(scored.out)["paragraphs"].size() == 5);
    CHECK(pcm_run("score --corpus " + fixture("synthetic.jsonl") + " --model " + (dir / "a.ckpt") +
                  " --embeddings " + fixture("embeddings_50x8.txt") + " --article nope --text x")
              .code == 1);
    // baseline checkpoints are not servable
    CHECK(pcm_run("score --corpus " + fixture("synthetic.jsonl") + " --model " + (dir / "rf1.ckpt") +
                  " --embeddings " + fixture("embeddings_50x8.txt") + " --article syn-001 --text x")
              .code != 0);
}

TEST_CASE("evaluate writes a table and a JSON report") {
    TempDir dir;
    const auto r = pcm_run("evaluate --corpus " + fixture("synthetic.jsonl") + " --corpus " + fixture("mini.jsonl") +
                           " --dataset Synthetic --dataset Mini --models nb,constant --features f4 --lsa-k 5"
                           " --folds 2 --json " +
                           (dir / "r.json"));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Synthetic") != std::string::npos);
    CHECK(r.out.find("Constant") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "r.json"));
    CHECK(j["table"]["rows"].size() == 2);
    CHECK(j["table"]["columns"].size() == 12);
    CHECK(j.contains("effective_config"));
}
