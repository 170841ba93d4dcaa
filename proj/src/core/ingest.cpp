// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdpg/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "rdpg/error.hpp"

namespace rdpg {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    if (line.find('\t') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            const auto tab = line.find('\t', start);
            out.push_back(trim(line.substr(start, tab - start)));
            if (tab == std::string_view::npos) {
                break;
            }
            start = tab + 1;
        }
        return out;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

double parse_double(std::string_view s, std::size_t line, const char* what) {
    double v = 0.0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    if (!s.empty() && *begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || s.empty()) {
        throw ParseError(std::string("invalid ") + what + " '" + std::string(s) + "'", line);
    }
    if (!std::isfinite(v)) {
        throw ParseError(std::string("non-finite ") + what, line);
    }
    return v;
}

std::int64_t parse_time(std::string_view s, std::size_t line) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError("invalid integer time '" + std::string(s) + "'", line);
    }
    return v;
}

struct Record {
    std::size_t i;
    std::size_t j;
    double w;
    std::size_t line;
};

} // namespace

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

LabeledSequence read_edge_list(std::istream& in, bool directed) {
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::string> labels;
    std::map<std::int64_t, std::vector<Record>> by_time;
    auto intern = [&](std::string_view name) {
        auto [it, inserted] = index.try_emplace(std::string(name), labels.size());
        if (inserted) {
            labels.emplace_back(name);
        }
        return it->second;
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 4) {
            throw ParseError("expected 4 fields (t, i, j, w), found " + std::to_string(fields.size()), line_no);
        }
        if (fields[1].empty() || fields[2].empty()) {
            throw ParseError("empty node id", line_no);
        }
        const auto t = parse_time(fields[0], line_no);
        const double w = parse_double(fields[3], line_no, "weight");
        if (w < 0.0) {
            throw ParseError("negative weight " + std::string(fields[3]), line_no);
        }
        const auto i = intern(fields[1]);
        const auto j = intern(fields[2]);
        if (i == j && w != 0.0) {
            throw ParseError("self-loop with nonzero weight", line_no);
        }
        by_time[t].push_back({i, j, w, line_no});
    }
    if (in.bad()) {
        throw IoError("read error");
    }
    if (by_time.empty()) {
        throw ParseError("no records", line_no);
    }

    const std::size_t n = labels.size();
    if (n < 2) {
        throw ParseError("stream needs at least two nodes", line_no);
    }
    LabeledSequence out;
    out.labels = std::move(labels);
    for (const auto& [t, records] : by_time) {
        Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        Eigen::Matrix<std::size_t, Eigen::Dynamic, Eigen::Dynamic> seen =
            Eigen::Matrix<std::size_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(static_cast<Eigen::Index>(n),
                                                                             static_cast<Eigen::Index>(n));
        for (const auto& rec : records) {
            if (rec.i == rec.j) {
                continue;
            }
            auto i = static_cast<Eigen::Index>(rec.i);
            auto j = static_cast<Eigen::Index>(rec.j);
            if (!directed && i > j) {
                std::swap(i, j);
            }
            if (seen(i, j) != 0 && a(i, j) != rec.w) {
                throw ParseError("conflicting weight for (" + out.labels[rec.i] + ", " + out.labels[rec.j] +
                                     ") at t = " + std::to_string(t) + " (first given on line " +
                                     std::to_string(seen(i, j)) + ")",
                                 rec.line);
            }
            a(i, j) = rec.w;
            seen(i, j) = rec.line;
            if (!directed) {
                a(j, i) = rec.w;
            }
        }
        out.graphs.push_back(GraphSnapshot(std::move(a), directed, t));
    }
    return out;
}

LabeledSequence read_edge_list_file(const std::string& path, bool directed) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    try {
        return read_edge_list(in, directed);
    } catch (const ParseError& e) {
        throw ParseError::in(path, e);
    }
}

void write_edge_list(const LabeledSequence& seq, std::ostream& out) {
    const auto& g = seq.graphs;
    if (g.empty()) {
        return;
    }
    if (seq.labels.size() != g.n_nodes()) {
        throw DimensionError("label count does not match the node count");
    }
    const ResidualLayout layout(g.n_nodes(), g.directed());
    for (const auto& snap : g) {
        const std::string t = std::to_string(snap.time());
        bool any = false;
        for (std::size_t pos = 0; pos < layout.size(); ++pos) {
            const auto [i, j] = layout.pair(pos);
            const double w = snap(i, j);
            if (w != 0.0) {
                out << t << '\t' << seq.labels[i] << '\t' << seq.labels[j] << '\t' << format_double(w) << '\n';
                any = true;
            }
        }
        if (!any) {
            out << t << '\t' << seq.labels[0] << '\t' << seq.labels[1] << "\t0\n";
        }
    }
}

void write_edge_list(const GraphSequence& seq, std::ostream& out) {
    LabeledSequence labeled{seq, {}};
    for (std::size_t i = 0; i < seq.n_nodes(); ++i) {
        labeled.labels.push_back(std::to_string(i));
    }
    write_edge_list(labeled, out);
}

Matrix read_dense_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto cell = trim(line.substr(start, comma - start));
            const double v = parse_double(cell, line_no, "entry");
            if (v < 0.0) {
                throw ParseError("negative weight " + std::string(cell), line_no);
            }
            row.push_back(v);
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("ragged row: " + std::to_string(row.size()) + " columns, expected " +
                                 std::to_string(rows.front().size()),
                             line_no);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("empty matrix", line_no);
    }
    if (rows.size() != rows.front().size()) {
        throw ParseError("matrix is " + std::to_string(rows.size()) + " x " + std::to_string(rows.front().size()) +
                             ", expected square",
                         line_no);
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

Matrix read_dense_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    try {
        return read_dense_matrix(in);
    } catch (const ParseError& e) {
        throw ParseError::in(path, e);
    }
}

void write_dense_matrix(const Matrix& m, std::ostream& out) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

GraphSequence read_dense_csv_stream(const std::string& path, bool directed) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                files.push_back(entry.path().string());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            throw IoError("no .csv files in " + path);
        }
    } else if (fs::exists(path, ec)) {
        files.push_back(path);
    } else {
        throw IoError("no such file or directory: " + path);
    }
    GraphSequence seq;
    for (std::size_t t = 0; t < files.size(); ++t) {
        Matrix m = read_dense_matrix_file(files[t]);
        try {
            seq.push_back(GraphSnapshot(std::move(m), directed, static_cast<std::int64_t>(t)));
        } catch (const Error& e) {
            throw ParseError(files[t] + ": " + e.what(), 0);
        }
    }
    return seq;
}

LabeledSequence ingest(const std::string& path, StreamFormat format, bool directed) {
    if (format == StreamFormat::EdgeList) {
        return read_edge_list_file(path, directed);
    }
    LabeledSequence out{read_dense_csv_stream(path, directed), {}};
    for (std::size_t i = 0; i < out.graphs.n_nodes(); ++i) {
        out.labels.push_back(std::to_string(i));
    }
    return out;
}

} // namespace rdpg
