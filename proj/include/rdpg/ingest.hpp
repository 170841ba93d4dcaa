// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rdpg/graph.hpp"

namespace rdpg {

enum class StreamFormat { EdgeList, DenseCsv };

/// Graph stream with the original node labels (index i ↔ labels[i]).
struct LabeledSequence {
    GraphSequence graphs;
    std::vector<std::string> labels;
};

/// Parses `t<TAB>i<TAB>j<TAB>w` records (whitespace separated if the line has
/// no tab). Blank lines and lines starting with '#' are skipped. Records with
/// the same integer t form one snapshot; node labels are interned in order of
/// first appearance. Undirected input may list a pair as (i, j), (j, i) or both.
LabeledSequence read_edge_list(std::istream& in, bool directed);
LabeledSequence read_edge_list_file(const std::string& path, bool directed);

/// Canonical edge list: snapshots in time order, nonzero pairs in residual
/// layout order (i < j when undirected), weights in shortest round-trip form.
/// An all-zero snapshot is written as one zero-weight record so it survives a
/// round trip.
void write_edge_list(const LabeledSequence& seq, std::ostream& out);
void write_edge_list(const GraphSequence& seq, std::ostream& out);

/// One N x N comma-separated matrix.
Matrix read_dense_matrix(std::istream& in);
Matrix read_dense_matrix_file(const std::string& path);
void write_dense_matrix(const Matrix& m, std::ostream& out);

/// Every `*.csv` file of `dir` in lexicographic filename order, t = 0, 1, ...
/// A single file path is read as a one-snapshot stream.
GraphSequence read_dense_csv_stream(const std::string& path, bool directed);

/// Dispatches on `format`.
LabeledSequence ingest(const std::string& path, StreamFormat format, bool directed);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

} // namespace rdpg
