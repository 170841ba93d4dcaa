// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rdpg/error.hpp"
#include "rdpg/generators.hpp"
#include "rdpg/ingest.hpp"
#include "rdpg/scenarios.hpp"

using namespace rdpg;

namespace {

LabeledSequence parse(const std::string& text, bool directed = false) {
    std::istringstream in(text);
    return read_edge_list(in, directed);
}

std::size_t parse_error_line(const std::string& text, bool directed = false) {
    try {
        parse(text, directed);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

// Checks `back` against `orig` through the interned labels, which name the
// original node indices.
void check_same_stream(const GraphSequence& orig, const LabeledSequence& back) {
    REQUIRE(back.graphs.size() == orig.size());
    REQUIRE(back.labels.size() == orig.n_nodes());
    std::vector<Eigen::Index> idx;
    for (const auto& label : back.labels) {
        idx.push_back(std::stol(label));
    }
    for (std::size_t t = 0; t < orig.size(); ++t) {
        const Matrix& a = orig[t].weights();
        const Matrix& b = back.graphs[t].weights();
        bool same = true;
        for (Eigen::Index i = 0; i < b.rows(); ++i) {
            for (Eigen::Index j = 0; j < b.cols(); ++j) {
                same = same && b(i, j) == a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
            }
        }
        CHECK(same);
    }
}

} // namespace

TEST_SUITE("ingest") {

TEST_CASE("edge list with tabs, comments and string labels") {
    const auto seq = parse("# header\n"
                           "0\ta\tb\t1\n"
                           "0\tb\tc\t2.5\n"
                           "\n"
                           "1\tc\ta\t1\n");
    REQUIRE(seq.graphs.size() == 2);
    CHECK(seq.labels == std::vector<std::string>{"a", "b", "c"});
    CHECK(seq.graphs[0](0, 1) == 1.0);
    CHECK(seq.graphs[0](1, 0) == 1.0);
    CHECK(seq.graphs[0](2, 1) == 2.5);
    CHECK(seq.graphs[1](0, 2) == 1.0);
    CHECK(seq.graphs[1](0, 1) == 0.0);
    CHECK(seq.graphs[1].time() == 1);
}

TEST_CASE("whitespace separated and out-of-order times") {
    const auto seq = parse("5 x y 1\n2 y z 1\n5  z x 3\n");
    REQUIRE(seq.graphs.size() == 2);
    CHECK(seq.graphs[0].time() == 2);
    CHECK(seq.graphs[1].time() == 5);
    CHECK(seq.graphs[1](0, 2) == 3.0);
}

TEST_CASE("directed edge lists keep orientation") {
    const auto seq = parse("0 a b 1\n0 b a 2\n", true);
    CHECK(seq.graphs[0](0, 1) == 1.0);
    CHECK(seq.graphs[0](1, 0) == 2.0);
    CHECK(seq.graphs.directed());
}

TEST_CASE("undirected duplicates must agree") {
    CHECK_NOTHROW(parse("0 a b 1\n0 b a 1\n"));
    CHECK(parse_error_line("0 a b 1\n0 b a 2\n") == 2);
}

TEST_CASE("malformed records report the line") {
    CHECK(parse_error_line("0 a b 1\n0 a b\n") == 2);
    CHECK(parse_error_line("0 a b -1\n") == 1);
    CHECK(parse_error_line("0 a a 1\n") == 1);
    CHECK(parse_error_line("x a b 1\n") == 1);
    CHECK(parse_error_line("0 a b nan\n") == 1);
    CHECK(parse_error_line("0 a b 1x\n") == 1);
    CHECK_THROWS_AS(parse("# nothing\n"), ParseError);
    CHECK_THROWS_AS(parse("0 a a 0\n"), ParseError);
    CHECK_NOTHROW(parse("0 a a 0\n0 a b 1\n"));
}

TEST_CASE("edge list round trip") {
    GraphSequence graphs;
    for (int t = 0; t < 4; ++t) {
        Rng rng = Rng::stream(2, static_cast<std::uint64_t>(t));
        const std::vector<std::size_t> blocks = {7};
        const std::vector<std::vector<WeightSpec>> specs = {{WeightSpec::gaussian(1.0, 0.3)}};
        graphs.push_back(sample_weighted_sbm(blocks, t == 2 ? 0.0 : 0.5, specs, rng, t * 10));
    }
    std::ostringstream out;
    write_edge_list(graphs, out);
    const auto back = parse(out.str());
    REQUIRE(back.graphs.size() == graphs.size());
    for (std::size_t t = 0; t < graphs.size(); ++t) {
        CHECK(back.graphs[t].time() == graphs[t].time());
    }
    // Labels are interned by first appearance, so map back through them.
    for (std::size_t t = 0; t < graphs.size(); ++t) {
        for (std::size_t i = 0; i < 7; ++i) {
            for (std::size_t j = 0; j < 7; ++j) {
                const auto bi = static_cast<std::size_t>(std::stoul(back.labels[i]));
                const auto bj = static_cast<std::size_t>(std::stoul(back.labels[j]));
                CHECK(back.graphs[t](i, j) == graphs[t](bi, bj));
            }
        }
    }
    std::ostringstream again;
    write_edge_list(back, again);
    CHECK(again.str().size() == out.str().size());
}

TEST_CASE("dense matrix reader") {
    std::istringstream ok("0,1,0\n1,0,2\n0,2,0\n");
    const Matrix m = read_dense_matrix(ok);
    CHECK(m.rows() == 3);
    CHECK(m(1, 2) == 2.0);
    std::istringstream ragged("0,1\n1\n");
    CHECK_THROWS_AS(read_dense_matrix(ragged), ParseError);
    std::istringstream rect("0,1,2\n1,0,2\n");
    CHECK_THROWS_AS(read_dense_matrix(rect), ParseError);

    std::ostringstream out;
    write_dense_matrix(m, out);
    std::istringstream back(out.str());
    CHECK(read_dense_matrix(back) == m);
}

TEST_CASE("dense csv directory stream") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rdpg_ingest_dense";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream(dir / "b.csv") << "0,2\n2,0\n";
        std::ofstream(dir / "a.csv") << "0,1\n1,0\n";
        std::ofstream(dir / "notes.txt") << "ignored\n";
    }
    const auto seq = read_dense_csv_stream(dir.string(), false);
    REQUIRE(seq.size() == 2);
    CHECK(seq[0](0, 1) == 1.0);
    CHECK(seq[1](0, 1) == 2.0);
    CHECK(seq[1].time() == 1);
    const auto single = read_dense_csv_stream((dir / "b.csv").string(), false);
    CHECK(single.size() == 1);
    const auto dispatched = ingest(dir.string(), StreamFormat::DenseCsv, false);
    CHECK(dispatched.labels == std::vector<std::string>{"0", "1"});
    CHECK_THROWS_AS(read_dense_csv_stream((dir / "missing").string(), false), IoError);
    {
        std::ofstream(dir / "c.csv") << "0,1\n2,0\n";
    }
    CHECK_THROWS_AS(read_dense_csv_stream(dir.string(), false), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("shortest round-trip doubles") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("signal-strength fixture round trips as a directed edge list and dense csv") {
    namespace fs = std::filesystem;
    const GraphSequence seq = rssi_synthetic_stream(4);
    std::stringstream text;
    write_edge_list(seq, text);
    check_same_stream(seq, read_edge_list(text, true));

    const fs::path dir = fs::temp_directory_path() / "rdpg_ingest_rssi";
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (std::size_t t = 0; t < seq.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof name, "t%04zu.csv", t);
        std::ofstream out(dir / name);
        write_dense_matrix(seq[t].weights(), out);
    }
    const GraphSequence dense = read_dense_csv_stream(dir.string(), true);
    REQUIRE(dense.size() == seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        CHECK(dense[t].weights() == seq[t].weights());
    }
    fs::remove_all(dir);
}

TEST_CASE("match-count fixture keeps string labels and empty years") {
    // Undirected match counts between teams, one snapshot per year.
    const std::vector<std::string> teams = {"ARG", "BOL", "BRA", "CHI", "COL", "ECU", "PAR", "PER", "URU", "VEN"};
    Rng rng(12);
    std::string text;
    for (int year = 0; year < 30; ++year) {
        if (year % 7 == 3) {
            continue;
        }
        // An empty year is written as one zero-weight record.
        if (year % 7 == 5) {
            text += std::to_string(year) + "\tARG\tBRA\t0\n";
            continue;
        }
        for (std::size_t i = 0; i < teams.size(); ++i) {
            for (std::size_t j = i + 1; j < teams.size(); ++j) {
                const auto games = rng.below(4);
                if (games > 0) {
                    text += std::to_string(year) + "\t" + teams[i] + "\t" + teams[j] + "\t" +
                            std::to_string(games) + "\n";
                }
            }
        }
    }
    const LabeledSequence seq = parse(text);
    CHECK(seq.labels.front() == "ARG");
    CHECK(seq.graphs.size() == 26);
    CHECK(seq.graphs[4].time() == 5);
    CHECK(seq.graphs[4].weights().isZero(0.0));
    std::stringstream out;
    write_edge_list(seq, out);
    const LabeledSequence back = read_edge_list(out, false);
    CHECK(back.labels == seq.labels);
    REQUIRE(back.graphs.size() == seq.graphs.size());
    for (std::size_t t = 0; t < seq.graphs.size(); ++t) {
        CHECK(back.graphs[t].time() == seq.graphs[t].time());
        CHECK(back.graphs[t].weights() == seq.graphs[t].weights());
    }
}

TEST_CASE("co-location fixture round trips with fractional minutes") {
    // Undirected minutes shared per day among 84 people, mostly sparse.
    const std::size_t n = 84;
    Rng rng(13);
    GraphSequence seq;
    for (int day = 0; day < 20; ++day) {
        Matrix w = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
                if (rng.uniform() < 0.05) {
                    w(i, j) = w(j, i) = std::floor(rng.uniform() * 6000.0) / 10.0;
                }
            }
        }
        w(0, 1) = w(1, 0) = 1.0 / 3.0;
        seq.push_back(GraphSnapshot(w, false, day));
    }
    std::stringstream text;
    write_edge_list(seq, text);
    check_same_stream(seq, read_edge_list(text, false));
}

} // TEST_SUITE
