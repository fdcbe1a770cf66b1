#include <doctest.h>

#include <sstream>

#include "dihlab/cli.hpp"

using namespace dihlab;

namespace {

struct RunResult {
    int status;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status = run_cli(args, out, err);
    return {status, out.str(), err.str()};
}

const std::string kDataset = DIHLAB_SOURCE_DIR "/data/paper_tables.csv";

}  // namespace

TEST_CASE("classgroup subcommand") {
    auto r = run({"classgroup", "--disc", "-103"});
    CHECK(r.status == 0);
    CHECK(r.out == "5\n");
    auto r2 = run({"classgroup", "--disc", "-38047"});
    CHECK(r2.out == "15,5\n");
    auto r3 = run({"classgroup", "--disc", "-38047", "--p", "5"});
    CHECK(r3.out == "5,5\n");
    auto r4 = run({"classgroup", "--disc", "316", "--narrow"});
    CHECK(r4.out == "6\n");
    auto r5 = run({"classgroup", "--disc", "316"});
    CHECK(r5.out == "3\n");
    // not fundamental: computation error
    auto bad = run({"classgroup", "--disc", "-100"});
    CHECK(bad.status == 1);
}

TEST_CASE("verify subcommand") {
    auto ok = run({"verify", "--dataset", kDataset});
    CHECK(ok.status == 0);
    CHECK(ok.out.find("cubic_a29") != std::string::npos);
    auto missing = run({"verify", "--dataset", "missing.csv"});
    CHECK(missing.status == 2);
    auto json = run({"--format", "json", "verify", "--dataset", kDataset});
    CHECK(json.status == 0);
    CHECK(json.out.find("\"hard_fails\": 0") != std::string::npos);
}

TEST_CASE("family subcommand") {
    auto r = run({"family", "cubic", "--range", "29..29"});
    CHECK(r.status == 0);
    CHECK(r.out.find("-97583") != std::string::npos);
    auto q = run({"family", "quintic", "--range", "1..1"});
    CHECK(q.out.find("-103") != std::string::npos);
}

TEST_CASE("scholz subcommand") {
    auto r = run({"scholz", "--m", "79"});
    CHECK(r.status == 0);
    CHECK(r.out.find("pass") != std::string::npos);
    auto none = run({"scholz"});
    CHECK(none.status == 2);
}

TEST_CASE("cubicfields subcommand") {
    auto r = run({"cubicfields", "--bound", "30", "--sign", "neg"});
    CHECK(r.status == 0);
    CHECK(r.out.find("-23\t1") != std::string::npos);
    auto one = run({"cubicfields", "--disc", "-23"});
    CHECK(one.out == "-23\t1\n");
}

TEST_CASE("gras selftest subcommand") {
    auto r = run({"gras-selftest", "--p", "3", "--trials", "20", "--seed", "7"});
    CHECK(r.status == 0);
    CHECK(r.out.find("failures=0") != std::string::npos);
}

TEST_CASE("usage errors exit with status 2") {
    CHECK(run({"bogus"}).status == 2);
    CHECK(run({"classgroup"}).status == 2);            // missing --disc
    CHECK(run({"classgroup", "--nope", "1"}).status == 2);
    CHECK(run({}).status == 2);
}

TEST_CASE("identical invocation gives byte-identical output") {
    for (auto args : {std::vector<std::string>{"gras-selftest", "--p", "3", "--trials", "30",
                                               "--seed", "5"},
                      std::vector<std::string>{"scholz", "--max", "60"},
                      std::vector<std::string>{"family", "cubic", "--range", "1..40"}}) {
        auto a = run(args);
        auto b = run(args);
        CHECK(a.status == b.status);
        CHECK(a.out == b.out);
    }
    // thread count must not change the output ordering
    auto serial = run({"family", "cubic", "--range", "1..60"});
    auto parallel = run({"--threads", "2", "family", "cubic", "--range", "1..60"});
    CHECK(serial.out == parallel.out);
}
