// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rdpg/error.hpp"
#include "rdpg/nullmodel.hpp"

namespace rdpg {
namespace {

constexpr std::array<char, 9> kMagic = {'R', 'D', 'P', 'G', 'N', 'U', 'L', 'L', '1'};
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 34;

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    } else {
        return v;
    }
}

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    template <typename T>
    void put(T v) {
        const T le = to_little(v);
        out_.write(reinterpret_cast<const char*>(&le), sizeof(T));
    }
    void u8(bool b) { put<std::uint8_t>(b ? 1 : 0); }
    void str(const std::string& s) {
        put<std::uint64_t>(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    void matrix(const Matrix& m) {
        put<std::uint64_t>(static_cast<std::uint64_t>(m.rows()));
        put<std::uint64_t>(static_cast<std::uint64_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                put<double>(m(i, j));
            }
        }
    }
    void vector(const Vector& v) {
        put<std::uint64_t>(static_cast<std::uint64_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            put<double>(v[i]);
        }
    }
    void embedding(const Embedding& e) {
        put<std::uint8_t>(static_cast<std::uint8_t>(e.kind));
        put<std::int32_t>(e.order);
        matrix(e.left);
        matrix(e.right);
        vector(e.spectrum);
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    template <typename T>
    T get() {
        T v{};
        in_.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!in_) {
            throw IoError("model file truncated");
        }
        return to_little(v);
    }
    bool u8() {
        const auto b = get<std::uint8_t>();
        if (b > 1) {
            throw IoError("model file has an invalid flag byte");
        }
        return b == 1;
    }
    std::uint64_t count() {
        const auto n = get<std::uint64_t>();
        if (n > kMaxElements) {
            throw IoError("model file declares an implausible field size");
        }
        return n;
    }
    std::string str() {
        std::string s(count(), '\0');
        in_.read(s.data(), static_cast<std::streamsize>(s.size()));
        if (!in_) {
            throw IoError("model file truncated");
        }
        return s;
    }
    Matrix matrix() {
        const auto rows = count();
        const auto cols = count();
        if (rows != 0 && cols > kMaxElements / rows) {
            throw IoError("model file declares an implausible matrix size");
        }
        Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                m(i, j) = get<double>();
            }
        }
        return m;
    }
    Vector vector() {
        Vector v(static_cast<Eigen::Index>(count()));
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = get<double>();
        }
        return v;
    }
    Embedding embedding() {
        Embedding e;
        const auto kind = get<std::uint8_t>();
        if (kind > static_cast<std::uint8_t>(EmbeddingKind::WeightedMoment)) {
            throw IoError("model file has an unknown embedding kind");
        }
        e.kind = static_cast<EmbeddingKind>(kind);
        e.order = get<std::int32_t>();
        e.left = matrix();
        e.right = matrix();
        e.spectrum = vector();
        return e;
    }

private:
    std::istream& in_;
};

} // namespace

void save_model(const NullModel& model, std::ostream& out) {
    out.write(kMagic.data(), kMagic.size());
    Writer w(out);
    w.u8(model.directed);
    w.u8(model.weighted);
    w.put<std::uint64_t>(model.n_nodes());
    w.put<std::uint64_t>(model.m);

    const auto& o = model.options;
    w.put<std::int32_t>(o.d);
    w.put<std::int32_t>(o.d_extra);
    w.put<std::int32_t>(o.loo_reps);
    w.put<double>(o.loo_quantile);
    w.u8(o.weighted);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(o.negative_eigenvalues));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(o.aggregation));
    w.put<std::uint64_t>(o.seed);

    w.embedding(model.embedding);
    w.u8(model.second_moment.has_value());
    if (model.second_moment) {
        w.embedding(*model.second_moment);
    }
    w.matrix(model.p_hat);
    w.vector(model.p_vec);
    w.vector(model.sigma);
    w.vector(model.e_hat);
    w.put<std::uint64_t>(model.warnings.size());
    for (const auto& s : model.warnings) {
        w.str(s);
    }
    if (!out) {
        throw IoError("failed to write model");
    }
}

NullModel load_model(std::istream& in) {
    std::array<char, 9> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) {
        throw IoError("not a model file (bad header)");
    }
    Reader rd(in);
    NullModel model;
    model.directed = rd.u8();
    model.weighted = rd.u8();
    const auto n = rd.count();
    if (n == 0) {
        throw IoError("model file has zero nodes");
    }
    model.layout = ResidualLayout(n, model.directed);
    model.m = rd.get<std::uint64_t>();

    auto& o = model.options;
    o.d = rd.get<std::int32_t>();
    o.d_extra = rd.get<std::int32_t>();
    o.loo_reps = rd.get<std::int32_t>();
    o.loo_quantile = rd.get<double>();
    o.weighted = rd.u8();
    const auto neg = rd.get<std::uint8_t>();
    const auto agg = rd.get<std::uint8_t>();
    if (neg > 1 || agg > 1) {
        throw IoError("model file has an unknown option value");
    }
    o.negative_eigenvalues = static_cast<NegativeEigenvalues>(neg);
    o.aggregation = static_cast<ErrorAggregation>(agg);
    o.seed = rd.get<std::uint64_t>();

    model.embedding = rd.embedding();
    if (rd.u8()) {
        model.second_moment = rd.embedding();
    }
    model.p_hat = rd.matrix();
    model.p_vec = rd.vector();
    model.sigma = rd.vector();
    model.e_hat = rd.vector();
    const auto n_warn = rd.count();
    for (std::uint64_t i = 0; i < n_warn; ++i) {
        model.warnings.push_back(rd.str());
    }

    const auto r = static_cast<Eigen::Index>(model.r());
    if (model.p_hat.rows() != static_cast<Eigen::Index>(n) || model.p_hat.cols() != static_cast<Eigen::Index>(n) ||
        model.p_vec.size() != r || model.sigma.size() != r || model.e_hat.size() != r) {
        throw IoError("model file fields are inconsistent with N = " + std::to_string(n));
    }
    return model;
}

void save_model(const NullModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    save_model(model, out);
}

NullModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    return load_model(in);
}

} // namespace rdpg
