// Copyright 2026 The rdpgcpd Authors
// SPDX-License-Identifier: Apache-2.0

// rdpgcpd: command-line front end of librdpg.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdpg/rdpg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAlarm = 2;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(rdpg_status status) {
    if (status != RDPG_OK) {
        throw Failure(std::string(rdpg_status_string(status)) + ": " + rdpg_last_error());
    }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using SequencePtr = std::unique_ptr<rdpg_sequence, Deleter<rdpg_sequence, rdpg_sequence_free>>;
using ModelPtr = std::unique_ptr<rdpg_model, Deleter<rdpg_model, rdpg_model_free>>;
using DetectorPtr = std::unique_ptr<rdpg_detector, Deleter<rdpg_detector, rdpg_detector_free>>;
using EmbeddingPtr = std::unique_ptr<rdpg_embedding, Deleter<rdpg_embedding, rdpg_embedding_free>>;

std::string num(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

/// Output file or stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) {
                throw Failure("cannot open " + path + " for writing");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    bool is_stdout() const { return !file_.is_open(); }

private:
    std::ofstream file_;
};

rdpg_format parse_format(const std::string& s) {
    return s == "dense-csv" ? RDPG_FORMAT_DENSE_CSV : RDPG_FORMAT_EDGE_LIST;
}

SequencePtr load_stream(const std::string& path, const std::string& format, bool directed) {
    rdpg_sequence* seq = nullptr;
    check(rdpg_sequence_load(path.c_str(), parse_format(format), directed ? 1 : 0, &seq));
    return SequencePtr(seq);
}

SequencePtr slice(const rdpg_sequence* seq, std::size_t first, std::size_t last) {
    rdpg_sequence* out = nullptr;
    check(rdpg_sequence_slice(seq, first, last, &out));
    return SequencePtr(out);
}

int parse_dimension(const std::string& s) {
    if (s == "auto") {
        return 0;
    }
    int d = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || ptr != s.data() + s.size() || d < 1) {
        throw CLI::ValidationError("--d", "expected a positive integer or 'auto', got '" + s + "'");
    }
    return d;
}

// ---- shared option groups -------------------------------------------------

struct TrainArgs {
    std::string d = "auto";
    int d_extra = 0;
    int loo_reps = 20;
    double loo_quantile = 0.99;
    std::string aggregation = "norm";
    bool weighted = false;
    bool clamp = false;

    void add(CLI::App* app) {
        app->add_option("--d", d, "Embedding dimension or 'auto' (scree elbow)")->capture_default_str();
        app->add_option("--d-extra", d_extra, "Added to the automatic dimension")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        app->add_option("--loo-reps", loo_reps, "Leave-one-out repetitions")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--loo-quantile", loo_quantile, "Quantile level of the error estimate")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app->add_option("--aggregation", aggregation, "Error estimate aggregation")
            ->check(CLI::IsMember({"norm", "entrywise"}))
            ->capture_default_str();
        app->add_flag("--weighted", weighted, "Weighted model (second-moment variances)");
        app->add_flag("--clamp-negative", clamp, "Clamp negative retained eigenvalues");
    }

    rdpg_train_options options(std::uint64_t seed) const {
        rdpg_train_options o;
        rdpg_train_options_init(&o);
        o.d = parse_dimension(d);
        o.d_extra = d_extra;
        o.loo_reps = loo_reps;
        o.loo_quantile = loo_quantile;
        o.weighted = weighted ? 1 : 0;
        o.clamp_negative = clamp ? 1 : 0;
        o.aggregation = aggregation == "entrywise" ? RDPG_AGGREGATE_ENTRYWISE : RDPG_AGGREGATE_NORM;
        o.seed = seed;
        return o;
    }
};

struct DetectorArgs {
    std::string stat = "cusum";
    std::size_t window = 10;
    double h = 0.4;
    double beta = 0.9;
    std::string threshold = "3sigma";
    double alpha = 0.01;
    std::size_t mc_samples = 100000;
    bool projection = false;
    bool continue_after_alarm = true;

    void add(CLI::App* app) {
        app->add_option("--stat", stat, "Partial-sum statistic")
            ->check(CLI::IsMember({"cusum", "mosum", "mmosum", "ewsum"}))
            ->capture_default_str();
        app->add_option("--L", window, "MOSUM window length")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--h", h, "mMOSUM window fraction")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        app->add_option("--beta", beta, "EWSUM forgetting factor")->check(CLI::Range(0.0, 1.0))->capture_default_str();
        app->add_option("--threshold", threshold, "Threshold rule")
            ->check(CLI::IsMember({"3sigma", "2sigma", "quantile"}))
            ->capture_default_str();
        app->add_option("--alpha", alpha, "Level of the quantile threshold")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app->add_option("--mc-samples", mc_samples, "Monte-Carlo draws of the quantile threshold")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_flag("--projection", projection, "Monitor the projection (P - A)X instead of the residual");
        app->add_flag("--continue-after-alarm,!--stop-at-alarm", continue_after_alarm,
                      "Keep monitoring after the first alarm (default) or stop there")
            ->capture_default_str();
    }

    rdpg_detector_options options(std::uint64_t seed) const {
        rdpg_detector_options o;
        rdpg_detector_options_init(&o);
        if (stat == "mosum") {
            o.statistic = RDPG_STAT_MOSUM;
        } else if (stat == "mmosum") {
            o.statistic = RDPG_STAT_MMOSUM;
        } else if (stat == "ewsum") {
            o.statistic = RDPG_STAT_EWSUM;
        }
        o.window = window;
        o.h = h;
        o.beta = beta;
        if (threshold == "2sigma") {
            o.threshold = RDPG_THRESHOLD_TWO_SIGMA;
        } else if (threshold == "quantile") {
            o.threshold = RDPG_THRESHOLD_QUANTILE;
        }
        o.alpha = alpha;
        o.mc_samples = mc_samples;
        o.seed = seed;
        o.projection = projection ? 1 : 0;
        return o;
    }
};

struct Alarms {
    std::int64_t first = -1;
    std::int64_t after_change = -1; ///< first alarm with k > k_c
};

/// Runs the detector over snapshots [first, size) of `stream` and writes the
/// CSV trace.
Alarms monitor_stream(const rdpg_model* model, const rdpg_detector_options& opts, const rdpg_sequence* stream,
                            std::size_t first, bool continue_after_alarm, std::ostream& out,
                            std::optional<std::int64_t> k_c) {
    rdpg_detector* raw = nullptr;
    check(rdpg_detector_create(model, &opts, &raw));
    DetectorPtr det(raw);
    out << "k,gamma_weighted,threshold,alarm";
    if (k_c) {
        out << ",k_c";
    }
    out << '\n';
    Alarms alarms;
    const std::size_t size = rdpg_sequence_size(stream);
    for (std::size_t i = first; i < size; ++i) {
        rdpg_decision d;
        check(rdpg_detector_step(det.get(), stream, i, &d));
        if (d.alarm && k_c && d.k > *k_c && alarms.after_change < 0) {
            alarms.after_change = d.k;
        }
        out << d.k << ',' << num(d.gamma_weighted) << ',' << num(d.threshold) << ',' << (d.alarm ? 1 : 0);
        if (k_c) {
            out << ',' << *k_c;
        }
        out << '\n';
        if (d.alarm && !continue_after_alarm) {
            break;
        }
    }
    alarms.first = rdpg_detector_first_alarm(det.get());
    return alarms;
}

void report_alarm(std::int64_t first_alarm, bool trace_on_stdout) {
    std::ostream& os = trace_on_stdout ? std::cerr : std::cout;
    if (first_alarm < 0) {
        os << "first_alarm=none\n";
    } else {
        os << "first_alarm=" << first_alarm << '\n';
    }
}

// ---- config file ------------------------------------------------------------

/// Appends `--key value` for every entry of the JSON config whose option is
/// not already on the command line.
std::vector<std::string> inject_config(const CLI::App& sub, std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::ifstream in(path);
    if (!in) {
        throw Failure("cannot open config file " + path);
    }
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::parse_error& e) {
        throw Failure("config file " + path + ": " + e.what());
    }
    if (!cfg.is_object()) {
        throw Failure("config file " + path + ": expected a JSON object");
    }
    auto on_command_line = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub.get_option_no_throw(flag);
        if (opt == nullptr || key == "config") {
            throw Failure("config file " + path + ": unknown key '" + key + "' for command " + sub.get_name());
        }
        if (on_command_line(flag)) {
            continue;
        }
        if (value.is_boolean()) {
            args.push_back(flag + "=" + (value.get<bool>() ? "true" : "false"));
        } else if (value.is_string()) {
            args.push_back(flag + "=" + value.get<std::string>());
        } else if (value.is_number_integer()) {
            args.push_back(flag + "=" + std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            args.push_back(flag + "=" + num(value.get<double>()));
        } else {
            throw Failure("config file " + path + ": value of '" + key + "' must be a scalar");
        }
    }
    return args;
}

// ---- commands -----------------------------------------------------------------

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    std::string config;
    bool directed = false;
    std::string format = "edge-list";
};

void add_format(CLI::App* app, Common& c) {
    app->add_option("--format", c.format, "Stream format")
        ->check(CLI::IsMember({"edge-list", "dense-csv"}))
        ->capture_default_str();
}

int cmd_train(const std::string& stream_path, const Common& c, const TrainArgs& t, std::size_t m) {
    auto stream = load_stream(stream_path, c.format, c.directed);
    const std::size_t size = rdpg_sequence_size(stream.get());
    if (m > 0) {
        if (m > size) {
            throw Failure("--m " + std::to_string(m) + " exceeds the stream length " + std::to_string(size));
        }
        stream = slice(stream.get(), 0, m);
    }
    const auto opts = t.options(c.seed);
    rdpg_model* raw = nullptr;
    check(rdpg_model_train(stream.get(), &opts, &raw));
    ModelPtr model(raw);
    check(rdpg_model_save(model.get(), c.out.c_str()));
    rdpg_model_info info;
    check(rdpg_model_get_info(model.get(), &info));
    for (std::size_t i = 0; i < info.n_warnings; ++i) {
        std::cerr << "warning: " << rdpg_model_warning(model.get(), i) << '\n';
    }
    std::cout << "nodes=" << info.n_nodes << " d=" << info.d << " m=" << info.m << " r=" << info.r
              << " e_hat_sq_norm=" << num(info.e_hat_sq_norm) << '\n';
    return kExitOk;
}

int cmd_monitor(const std::string& model_path, const std::string& stream_path, const Common& c,
                const DetectorArgs& da, std::size_t skip) {
    rdpg_model* raw = nullptr;
    check(rdpg_model_load(model_path.c_str(), &raw));
    ModelPtr model(raw);
    rdpg_model_info info;
    check(rdpg_model_get_info(model.get(), &info));
    auto stream = load_stream(stream_path, c.format, info.directed != 0);
    if (skip > rdpg_sequence_size(stream.get())) {
        throw Failure("--m exceeds the stream length");
    }
    Sink sink(c.out);
    const auto alarms = monitor_stream(model.get(), da.options(c.seed), stream.get(), skip,
                                       da.continue_after_alarm, sink.stream(), std::nullopt);
    report_alarm(alarms.first, sink.is_stdout());
    return alarms.first >= 0 ? kExitAlarm : kExitOk;
}

struct ScenarioArgs {
    std::optional<std::size_t> n;
    std::optional<std::size_t> m;
    std::optional<std::int64_t> k_c;
    std::optional<std::int64_t> horizon;
    std::optional<double> p;
    std::optional<double> q1;
    std::optional<double> q2;
    std::optional<double> p_after;
    std::string k_c_list = "0,200,400,600,800,1000";
    std::string save_train;
    std::string save_stream;

    void add(CLI::App* app) {
        app->add_option("--n", n, "Number of nodes");
        app->add_option("--m", m, "Training snapshots");
        app->add_option("--k-c", k_c, "Change point (monitoring steps before the change)");
        app->add_option("--horizon", horizon, "Monitoring steps");
        app->add_option("--p", p, "Pre-change edge probability");
        app->add_option("--q1", q1, "Post-change within-block probability");
        app->add_option("--q2", q2, "Post-change cross-block probability");
        app->add_option("--p-after", p_after, "Post-change probability (er-shift, delay-sweep)");
        app->add_option("--k-c-list", k_c_list, "Change points of delay-sweep")->capture_default_str();
        app->add_option("--save-train", save_train, "Write the training snapshots as an edge list");
        app->add_option("--save-stream", save_stream, "Write the monitoring stream as an edge list");
    }

    rdpg_scenario_params params(const std::string& name, std::uint64_t seed) const {
        rdpg_scenario_params p_;
        check(rdpg_scenario_defaults(name.c_str(), &p_));
        if (n) p_.n = *n;
        if (m) p_.m = *m;
        if (k_c) p_.k_c = *k_c;
        if (horizon) p_.horizon = *horizon;
        if (p) p_.p = *p;
        if (q1) p_.q1 = *q1;
        if (q2) p_.q2 = *q2;
        if (p_after) p_.p_after = *p_after;
        p_.seed = seed;
        return p_;
    }
};

std::vector<std::int64_t> parse_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || v < 0) {
            throw CLI::ValidationError("--k-c-list", "expected nonnegative integers, got '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw CLI::ValidationError("--k-c-list", "empty list");
    }
    return out;
}

ModelPtr train_scenario(const rdpg_sequence* train, const TrainArgs& ta, std::uint64_t seed, bool weighted) {
    auto opts = ta.options(seed);
    if (weighted) {
        opts.weighted = 1;
    }
    rdpg_model* raw = nullptr;
    check(rdpg_model_train(train, &opts, &raw));
    return ModelPtr(raw);
}

int cmd_simulate(const std::string& name, const Common& c, const ScenarioArgs& sa, const TrainArgs& ta,
                 const DetectorArgs& da) {
    const bool weighted = rdpg_scenario_weighted(name.c_str()) != 0;
    Sink sink(c.out);
    if (name == "delay-sweep") {
        const auto k_cs = parse_list(sa.k_c_list);
        sink.stream() << "k_c,first_alarm,delay,predicted_delay\n";
        for (const auto k_c : k_cs) {
            auto params = sa.params(name, c.seed);
            params.k_c = k_c;
            if (!sa.horizon) {
                params.horizon = k_c + 400;
            }
            rdpg_sequence* tr = nullptr;
            rdpg_sequence* mo = nullptr;
            check(rdpg_simulate(name.c_str(), &params, &tr, &mo));
            SequencePtr train(tr);
            SequencePtr stream(mo);
            auto model = train_scenario(train.get(), ta, c.seed, weighted);
            std::ostringstream discard;
            const auto alarms =
                monitor_stream(model.get(), da.options(c.seed), stream.get(), 0, true, discard, k_c);

            const std::size_t n = params.n;
            std::vector<double> before(n * n);
            std::vector<double> after(n * n);
            check(rdpg_scenario_expectation(name.c_str(), &params, before.data(), after.data()));
            rdpg_delay_report rep;
            check(rdpg_predict_delay(model.get(), after.data(), before.data(), k_c, params.horizon, 3.0, &rep));

            const auto post = alarms.after_change;
            sink.stream() << k_c << ',' << alarms.first << ','
                          << (post >= 0 ? std::to_string(post - k_c) : "none") << ','
                          << (rep.predicted_k >= 0 ? std::to_string(rep.predicted_k - k_c) : "none") << '\n';
        }
        return kExitOk;
    }

    const auto params = sa.params(name, c.seed);
    rdpg_sequence* tr = nullptr;
    rdpg_sequence* mo = nullptr;
    check(rdpg_simulate(name.c_str(), &params, &tr, &mo));
    SequencePtr train(tr);
    SequencePtr stream(mo);
    if (!sa.save_train.empty()) {
        check(rdpg_sequence_save(train.get(), sa.save_train.c_str()));
    }
    if (!sa.save_stream.empty()) {
        check(rdpg_sequence_save(stream.get(), sa.save_stream.c_str()));
    }
    auto model = train_scenario(train.get(), ta, c.seed, weighted);
    const auto alarms = monitor_stream(model.get(), da.options(c.seed), stream.get(), 0, da.continue_after_alarm,
                                       sink.stream(), params.k_c);
    report_alarm(alarms.first, sink.is_stdout());
    return alarms.first >= 0 ? kExitAlarm : kExitOk;
}

std::vector<double> load_dense(const std::string& path, std::size_t n) {
    auto seq = load_stream(path, "dense-csv", true);
    if (rdpg_sequence_n_nodes(seq.get()) != n || rdpg_sequence_size(seq.get()) != 1) {
        throw Failure(path + ": expected one " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
    }
    std::vector<double> out(n * n);
    check(rdpg_sequence_get(seq.get(), 0, out.data(), nullptr));
    return out;
}

int cmd_predict_delay(const std::string& model_path, const std::string& after_path, const std::string& before_path,
                      const std::string& scenario, std::int64_t k_c, std::int64_t horizon, double n_sigma,
                      const Common& c) {
    rdpg_model* raw = nullptr;
    check(rdpg_model_load(model_path.c_str(), &raw));
    ModelPtr model(raw);
    rdpg_model_info info;
    check(rdpg_model_get_info(model.get(), &info));
    const std::size_t n = info.n_nodes;

    std::vector<double> after;
    std::vector<double> before;
    if (!scenario.empty()) {
        rdpg_scenario_params params;
        check(rdpg_scenario_defaults(scenario.c_str(), &params));
        if (params.n != n) {
            params.n = n;
        }
        after.resize(n * n);
        before.resize(n * n);
        check(rdpg_scenario_expectation(scenario.c_str(), &params, before.data(), after.data()));
    } else {
        after = load_dense(after_path, n);
        if (!before_path.empty()) {
            before = load_dense(before_path, n);
        }
    }
    rdpg_delay_report rep;
    check(rdpg_predict_delay(model.get(), after.data(), before.empty() ? nullptr : before.data(), k_c, horizon,
                             n_sigma, &rep));
    nlohmann::ordered_json j;
    j["k_c"] = k_c;
    j["predicted_k"] = rep.predicted_k >= 0 ? nlohmann::ordered_json(rep.predicted_k) : nlohmann::ordered_json();
    j["predicted_delay"] =
        rep.predicted_k >= 0 ? nlohmann::ordered_json(rep.predicted_k - k_c) : nlohmann::ordered_json();
    j["margin"] = rep.margin;
    j["detectable"] = rep.detectable != 0;
    j["e_norm"] = rep.e_norm;
    j["delta_norm"] = rep.delta_norm;
    j["cos_theta"] = rep.cos_theta;
    Sink sink(c.out);
    sink.stream() << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_embed(const std::vector<std::string>& files, bool omnibus, const std::string& d_str, const Common& c) {
    const int d = parse_dimension(d_str);
    EmbeddingPtr emb;
    std::vector<std::string> block_names;
    rdpg_embedding* raw = nullptr;
    if (files.size() == 2 || omnibus) {
        if (files.size() != 2) {
            throw Failure("--omnibus needs two snapshot files");
        }
        auto a = load_stream(files[0], "dense-csv", false);
        auto b = load_stream(files[1], "dense-csv", false);
        check(rdpg_embed_omnibus(a.get(), 0, b.get(), 0, d, &raw));
        block_names = {"a", "b"};
    } else {
        auto a = load_stream(files[0], "dense-csv", c.directed);
        check(rdpg_embed(a.get(), 0, d, &raw));
        block_names = c.directed ? std::vector<std::string>{"out", "in"} : std::vector<std::string>{"x"};
    }
    emb.reset(raw);
    const std::size_t rows = rdpg_embedding_rows(emb.get());
    const int dim = rdpg_embedding_dim(emb.get());
    Sink sink(c.out);
    auto& os = sink.stream();
    os << "block,node";
    for (int l = 1; l <= dim; ++l) {
        os << ",x" << l;
    }
    os << '\n';
    std::vector<double> buf(rows * static_cast<std::size_t>(dim));
    for (std::size_t b = 0; b < rdpg_embedding_blocks(emb.get()); ++b) {
        check(rdpg_embedding_block(emb.get(), b, buf.data()));
        for (std::size_t i = 0; i < rows; ++i) {
            os << block_names[b] << ',' << i;
            for (int l = 0; l < dim; ++l) {
                os << ',' << num(buf[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(l)]);
            }
            os << '\n';
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online change-point detection for graph streams under a random dot product graph null model"};
    app.require_subcommand(1);
    // `--h` is the mMOSUM fraction, so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(rdpg_version()));

    Common common;
    TrainArgs train_args;
    DetectorArgs det_args;
    ScenarioArgs scen_args;

    auto add_common = [&](CLI::App* sub, bool with_out_required) {
        sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
        auto* out = sub->add_option("--out", common.out, with_out_required ? "Output file" : "Output file (default stdout)");
        if (with_out_required) {
            out->required();
        }
        sub->add_option("--config", common.config, "JSON config file; command-line flags take precedence");
    };

    std::string stream_path;
    std::size_t train_m = 0;
    auto* train = app.add_subcommand("train", "Fit the null model on training snapshots");
    train->add_option("stream", stream_path, "Training stream")->required();
    train->add_option("--m", train_m, "Use only the first m snapshots (default all)");
    train->add_flag("--directed", common.directed, "Directed graphs");
    add_format(train, common);
    train_args.add(train);
    add_common(train, true);

    std::string model_path;
    std::size_t skip = 0;
    auto* monitor = app.add_subcommand("monitor", "Run the online detector over a stream");
    monitor->add_option("--model", model_path, "Model file from `train`")->required();
    monitor->add_option("stream", stream_path, "Monitoring stream")->required();
    monitor->add_option("--m", skip, "Skip the first m snapshots (training part of the stream)");
    add_format(monitor, common);
    det_args.add(monitor);
    add_common(monitor, false);

    std::string scenario;
    auto* simulate = app.add_subcommand("simulate", "Run a seeded simulation preset");
    simulate->add_option("scenario", scenario, "Preset")
        ->required()
        ->check(CLI::IsMember({"er-to-sbm", "er-shift", "frobenius-blind", "weighted-sbm", "delay-sweep"}));
    scen_args.add(simulate);
    train_args.add(simulate);
    det_args.add(simulate);
    add_common(simulate, false);

    std::string after_path;
    std::string before_path;
    std::string change_scenario;
    std::int64_t k_c = 0;
    std::int64_t horizon = 10000;
    double n_sigma = 3.0;
    auto* predict = app.add_subcommand("predict-delay", "Predict the detection delay of a hypothesized change");
    predict->add_option("--model", model_path, "Model file from `train`")->required();
    auto* after_opt = predict->add_option("--after", after_path, "Post-change expected adjacency (dense CSV)");
    auto* scen_opt = predict->add_option("--scenario", change_scenario, "Take the change from a preset")
                         ->check(CLI::IsMember({"er-to-sbm", "er-shift", "frobenius-blind", "weighted-sbm",
                                                "delay-sweep"}));
    after_opt->excludes(scen_opt);
    predict->add_option("--before", before_path, "Pre-change expected adjacency (default: model estimate)")
        ->excludes(scen_opt);
    predict->add_option("--k-c", k_c, "Change point")->check(CLI::NonNegativeNumber)->capture_default_str();
    predict->add_option("--horizon", horizon, "Last step searched")->capture_default_str();
    predict->add_option("--n-sigma", n_sigma, "Threshold width in standard deviations")->capture_default_str();
    add_common(predict, false);

    std::vector<std::string> embed_files;
    bool omnibus = false;
    std::string embed_d = "auto";
    auto* embed = app.add_subcommand("embed", "Embed one snapshot, or two jointly (omnibus)");
    embed->add_option("files", embed_files, "Dense CSV snapshot(s)")->required()->expected(1, 2);
    embed->add_flag("--omnibus", omnibus, "Omnibus embedding of two snapshots");
    embed->add_option("--d", embed_d, "Embedding dimension or 'auto'")->capture_default_str();
    embed->add_flag("--directed", common.directed, "Directed snapshot (out/in embeddings)");
    add_common(embed, false);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (!args.empty()) {
            for (auto* sub : app.get_subcommands({})) {
                if (sub->get_name() == args.front()) {
                    args = inject_config(*sub, args);
                    break;
                }
            }
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }

    try {
        if (*train) {
            return cmd_train(stream_path, common, train_args, train_m);
        }
        if (*monitor) {
            return cmd_monitor(model_path, stream_path, common, det_args, skip);
        }
        if (*simulate) {
            return cmd_simulate(scenario, common, scen_args, train_args, det_args);
        }
        if (*predict) {
            if (after_path.empty() && change_scenario.empty()) {
                throw Failure("predict-delay needs --after or --scenario");
            }
            return cmd_predict_delay(model_path, after_path, before_path, change_scenario, k_c, horizon, n_sigma,
                                     common);
        }
        if (*embed) {
            return cmd_embed(embed_files, omnibus, embed_d, common);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
