// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr folded into the captured output.
Run rdpgcpd(const std::string& args) {
    const std::string cmd = std::string(RDPGCPD_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    Run r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string workdir(const std::string& name) {
    const fs::path dir = fs::path(RDPG_TEST_TMPDIR) / ("cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

// Simulated er-shift training file and stream with the change at k = 20.
std::string prepare(const std::string& name) {
    const std::string dir = workdir(name);
    const Run sim = rdpgcpd("simulate er-shift --n 30 --m 20 --k-c 20 --horizon 60 --seed 2 --save-train " + dir +
                            "/train.tsv --save-stream " + dir + "/stream.tsv --out " + dir + "/sim.csv");
    REQUIRE(sim.code == 2);
    return dir;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
    const Run help = rdpgcpd("--help");
    CHECK(help.code == 0);
    for (const char* sub : {"train", "monitor", "simulate", "predict-delay", "embed"}) {
        CHECK(help.out.find(sub) != std::string::npos);
    }
    CHECK(rdpgcpd("").code == 1);
    CHECK(rdpgcpd("train").code == 1);
    CHECK(rdpgcpd("monitor --stat nope x").code == 1);
    CHECK(rdpgcpd("simulate not-a-scenario").code == 1);
}

TEST_CASE("train then monitor") {
    const std::string dir = prepare("pipeline");
    const Run train = rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/model.bin --seed 1");
    REQUIRE(train.code == 0);
    CHECK(train.out.find("nodes=30") != std::string::npos);
    CHECK(train.out.find("d=1") != std::string::npos);
    CHECK(train.out.find("r=435") != std::string::npos);

    const Run mon = rdpgcpd("monitor " + dir + "/stream.tsv --model " + dir + "/model.bin --out " + dir + "/trace.csv");
    CHECK(mon.code == 2);
    const auto pos = mon.out.find("first_alarm=");
    REQUIRE(pos != std::string::npos);
    const int first = std::stoi(mon.out.substr(pos + 12));
    CHECK(first > 20);

    const auto lines = read_lines(dir + "/trace.csv");
    REQUIRE(lines.size() == 61);
    CHECK(lines[0] == "k,gamma_weighted,threshold,alarm");
    CHECK(lines[1].rfind("1,", 0) == 0);
    CHECK(lines[60].rfind("60,", 0) == 0);

    const Run stop = rdpgcpd("monitor " + dir + "/stream.tsv --model " + dir + "/model.bin --stop-at-alarm --out " +
                             dir + "/stop.csv");
    CHECK(stop.code == 2);
    CHECK(read_lines(dir + "/stop.csv").size() == static_cast<std::size_t>(first) + 1);

    // Skipping the first m snapshots shortens the trace.
    const Run skip = rdpgcpd("monitor " + dir + "/stream.tsv --model " + dir + "/model.bin --m 10 --out " + dir +
                             "/skip.csv");
    CHECK(skip.code == 2);
    CHECK(read_lines(dir + "/skip.csv").size() == 51);

    for (const char* stat : {"mosum --L 10", "mmosum --h 0.4", "ewsum --beta 0.9"}) {
        const Run r = rdpgcpd("monitor " + dir + "/stream.tsv --model " + dir + "/model.bin --stat " + stat +
                              " --out " + dir + "/s.csv");
        CHECK(r.code == 2);
    }
    const Run q = rdpgcpd("monitor " + dir + "/stream.tsv --model " + dir +
                          "/model.bin --threshold quantile --mc-samples 5000 --out " + dir + "/q.csv");
    CHECK(q.code == 2);
}

TEST_CASE("null stream exits cleanly") {
    const std::string dir = workdir("null");
    const Run sim = rdpgcpd("simulate er-shift --n 30 --m 30 --k-c 200 --horizon 60 --seed 4 --out " + dir +
                            "/sim.csv");
    CHECK(sim.code == 0);
    CHECK(sim.out.find("first_alarm=none") != std::string::npos);
    const auto lines = read_lines(dir + "/sim.csv");
    CHECK(lines.size() == 61);
    CHECK(lines[0] == "k,gamma_weighted,threshold,alarm,k_c");
}

TEST_CASE("projection trace has no threshold") {
    const std::string dir = prepare("projection");
    REQUIRE(rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/model.bin").code == 0);
    const Run r = rdpgcpd("monitor " + dir + "/stream.tsv --model " + dir + "/model.bin --projection --out " + dir +
                          "/p.csv");
    CHECK(r.code == 0);
    const auto lines = read_lines(dir + "/p.csv");
    REQUIRE(lines.size() == 61);
    CHECK(lines[1].find("nan") != std::string::npos);
}

TEST_CASE("config file") {
    const std::string dir = prepare("config");
    write_file(dir + "/c.json", R"({"loo-reps": 3, "seed": 7})");
    const Run a = rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/a.bin --config " + dir + "/c.json");
    const Run b = rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/b.bin --loo-reps 3 --seed 7");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    // Flags override the file.
    const Run c = rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/c.bin --config " + dir +
                          "/c.json --loo-reps 20 --seed 1");
    const Run d = rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/d.bin --loo-reps 20 --seed 1");
    CHECK(c.out == d.out);

    write_file(dir + "/bad.json", R"({"bogus": 1})");
    const Run bad = rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/e.bin --config " + dir + "/bad.json");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("bogus") != std::string::npos);
    write_file(dir + "/broken.json", "{");
    CHECK(rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/e.bin --config " + dir + "/broken.json").code == 1);
}

TEST_CASE("malformed input reports file and line") {
    const std::string dir = workdir("malformed");
    write_file(dir + "/bad.tsv", "0\ta\tb\t1\n0\ta\tc\t-2\n");
    const Run r = rdpgcpd("train " + dir + "/bad.tsv --out " + dir + "/m.bin");
    CHECK(r.code == 1);
    CHECK(r.out.find("bad.tsv") != std::string::npos);
    CHECK(r.out.find("line 2") != std::string::npos);
    CHECK(rdpgcpd("train " + dir + "/missing.tsv --out " + dir + "/m.bin").code == 1);
    write_file(dir + "/garbage.bin", "not a model");
    write_file(dir + "/s.tsv", "0\ta\tb\t1\n");
    CHECK(rdpgcpd("monitor " + dir + "/s.tsv --model " + dir + "/garbage.bin").code == 1);
}

TEST_CASE("model and stream size mismatch") {
    const std::string dir = prepare("mismatch");
    REQUIRE(rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/model.bin").code == 0);
    write_file(dir + "/small.tsv", "0\ta\tb\t1\n0\tb\tc\t1\n");
    const Run r = rdpgcpd("monitor " + dir + "/small.tsv --model " + dir + "/model.bin");
    CHECK(r.code == 1);
    CHECK(r.out.find("nodes") != std::string::npos);
}

TEST_CASE("predict-delay emits JSON") {
    const std::string dir = prepare("predict");
    REQUIRE(rdpgcpd("train " + dir + "/train.tsv --out " + dir + "/model.bin").code == 0);
    const Run r = rdpgcpd("predict-delay --model " + dir + "/model.bin --scenario er-shift --k-c 10");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("k_c") == 10);
    CHECK(j.at("detectable").get<bool>());
    CHECK(j.at("predicted_k").get<int>() > 10);
    CHECK(j.at("predicted_delay").get<int>() == j.at("predicted_k").get<int>() - 10);

    std::ostringstream csv;
    for (int i = 0; i < 30; ++i) {
        for (int k = 0; k < 30; ++k) {
            csv << (k ? "," : "") << (i == k ? "0" : "0.5");
        }
        csv << '\n';
    }
    write_file(dir + "/same.csv", csv.str());
    const Run none = rdpgcpd("predict-delay --model " + dir + "/model.bin --after " + dir + "/same.csv --before " +
                             dir + "/same.csv --horizon 50");
    REQUIRE(none.code == 0);
    CHECK(nlohmann::json::parse(none.out).at("predicted_k").is_null());
}

TEST_CASE("embed writes one row per node") {
    const std::string dir = workdir("embed");
    write_file(dir + "/a.csv", "0,1,1\n1,0,1\n1,1,0\n");
    write_file(dir + "/b.csv", "0,1,0\n1,0,1\n0,1,0\n");
    const Run one = rdpgcpd("embed " + dir + "/a.csv --d 1");
    REQUIRE(one.code == 0);
    CHECK(one.out.rfind("block,node,x1\n", 0) == 0);
    CHECK(one.out.find("0.816496580927726") != std::string::npos);
    const Run two = rdpgcpd("embed " + dir + "/a.csv " + dir + "/b.csv --omnibus --d 1 --out " + dir + "/o.csv");
    REQUIRE(two.code == 0);
    CHECK(read_lines(dir + "/o.csv").size() == 7);
    CHECK(rdpgcpd("embed " + dir + "/a.csv --omnibus").code == 1);
    CHECK(rdpgcpd("embed " + dir + "/a.csv --d 5").code == 1);
}

TEST_CASE("delay sweep table") {
    const std::string dir = workdir("sweep");
    const Run r = rdpgcpd("simulate delay-sweep --n 30 --m 20 --p-after 0.65 --k-c-list 0,20 --out " + dir +
                          "/sweep.csv");
    CHECK((r.code == 0 || r.code == 2));
    const auto lines = read_lines(dir + "/sweep.csv");
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "k_c,first_alarm,delay,predicted_delay");
    CHECK(lines[1].rfind("0,", 0) == 0);
    CHECK(lines[2].rfind("20,", 0) == 0);
}

} // TEST_SUITE
