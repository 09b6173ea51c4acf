#include "doctest.h"

#include "cli.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "romanov");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = romanov::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("romanov-cli-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return (path / name).string();
    }
};

} // namespace

TEST_CASE("summary output") {
    auto r = run({"repr", "f", "--n", "127"});
    CHECK(r.code == 0);
    CHECK(r.out == "0\n");
    r = run({"repr", "f", "--n", "7"});
    CHECK(r.out == "2\n");
    r = run({"covering", "class"});
    CHECK(r.code == 0);
    CHECK(r.out.find("7629217") != std::string::npos);
}

TEST_CASE("json report") {
    auto r = run({"--format", "json", "repr", "exceptional", "--limit", "1000"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["max"] == 105);
    CHECK(doc["integers"].front() == 4);

    r = run({"--format", "json", "sieve", "build", "--lo", "1152921504606846976", "--hi", "1152921504606847976"});
    REQUIRE(r.code == 0);
    const auto big = nlohmann::json::parse(r.out);
    CHECK(big["lo"] == "1152921504606846976");
    CHECK(big["count"].is_number());
}

TEST_CASE("csv report") {
    const auto r = run({"--format", "csv", "repr", "champions", "--limit", "100"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("n,f\n", 0) == 0);
    CHECK(r.out.find("7,2\n") != std::string::npos);
}

TEST_CASE("atomic file output") {
    TempDir dir;
    const auto target = (dir.path / "report.json").string();
    const auto r = run({"--out", target, "repr", "champions", "--limit", "1000"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(std::ifstream(target))["champions"].size() >= 3);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path)) ++files;
    CHECK(files == 1);
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run({"repr", "f"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"repr", "f", "--n", "0"}).code == 2);

    const auto four = dir.write("four.txt", "1 0\n1 2\n1 6\n1 8\n");
    const auto r = run({"admissible", "extract", "--file", four});
    CHECK(r.code == 2);
    CHECK(r.err.find("s >= 5") != std::string::npos);

    CHECK(run({"admissible", "check", "--file", (dir.path / "missing.txt").string()}).code == 2);
    const auto bad = dir.write("bad.txt", "1 0\nnot a line\n");
    CHECK(run({"admissible", "check", "--file", bad}).code == 3);
    const auto cache = dir.write("junk.ptb", "PTB0garbage");
    CHECK(run({"sieve", "verify", "--cache", cache}).code == 3);

    CHECK(run({"dist", "hyp1", "--x", "1000000000000"}).code == 4);
    CHECK(run({"beatty", "cf", "--beta", "sqrt:2", "--terms", "200"}).code == 4);
    CHECK(run({"beatty", "lambda-sum", "--N", "100", "--q1", "2", "--a1", "1", "--q2", "2", "--a2", "2"}).code == 2);
}

TEST_CASE("identity subcommand") {
    auto r = run({"--format", "json", "dist", "identity", "--q", "3", "--a", "1", "--x", "1000", "--y", "50"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["holds"] == true);
}
