// Command-line driver: dataset generation, training, evaluation, output
// variance analysis, and baseline comparison. Every command is a pure
// function of its arguments; given the same --seed, reruns are byte-identical.

#include "sigaug/baselines.hpp"
#include "sigaug/config.hpp"
#include "sigaug/datasets.hpp"
#include "sigaug/model.hpp"
#include "sigaug/model_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace sigaug;

namespace {

std::string g_invocation;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "# " << g_invocation << "\n";
    return out;
}

void write_history_csv(const fs::path& path, const std::vector<EpochStats>& history) {
    std::ofstream out = open_csv(path);
    out << "epoch,loss,train_wacc,val_wacc\n";
    for (const EpochStats& e : history) {
        out << e.epoch << ',' << fmt(e.loss) << ',' << fmt(e.train_wacc) << ',';
        if (std::isfinite(e.val_wacc)) out << fmt(e.val_wacc);
        out << '\n';
    }
}

Dataset load_dataset(const std::string& path) {
    Dataset ds = load_tsv(path);
    ds.validate();
    return ds;
}

void check_uniform_shape(const Dataset& ds) {
    const int n = ds.series.front().length();
    const int d = ds.series.front().dim();
    for (const TimeSeries& s : ds.series)
        if (s.length() != n || s.dim() != d)
            throw std::runtime_error("dataset series must share one length and dimension");
}

struct GenArgs {
    std::string task;
    std::uint64_t seed = 0;
    std::string out;
    int train_per_class = 200;
    int test_per_class = 200;
    int length = 50;
    double horizon = 1.0;
};

void cmd_gen(const GenArgs& args) {
    TaskConfig cfg;
    cfg.n_points = args.length;
    cfg.horizon = args.horizon;
    cfg.train_per_class = args.train_per_class;
    cfg.test_per_class = args.test_per_class;

    TaskSplit split;
    if (args.task == "fbm")
        split = make_fbm_task(cfg, args.seed);
    else if (args.task == "ou")
        split = make_ou_task(cfg, args.seed);
    else if (args.task == "bidim")
        split = make_bidim_task(cfg, args.seed);
    else
        throw CLI::ValidationError("--task", "unknown task '" + args.task +
                                                "' (fbm|ou|bidim)");

    fs::create_directories(args.out);
    const fs::path dir(args.out);
    save_tsv(split.train, (dir / (args.task + "_train.tsv")).string());
    save_tsv(split.test, (dir / (args.task + "_test.tsv")).string());

    std::ofstream meta(dir / (args.task + "_meta.txt"));
    meta << "task " << args.task << "\n";
    meta << "seed " << args.seed << "\n";
    meta << "n_points " << cfg.n_points << "\n";
    meta << "horizon " << fmt(cfg.horizon) << "\n";
    meta << "train_per_class " << cfg.train_per_class << "\n";
    meta << "test_per_class " << cfg.test_per_class << "\n";
    std::cout << "wrote " << args.task << " train/test to " << args.out << "\n";
}

struct TrainArgs {
    std::string data;
    std::string config;
    std::string out;
    std::int64_t seed = -1;
};

void cmd_train(const TrainArgs& args) {
    Settings settings = args.config.empty() ? Settings{} : load_settings(args.config);
    if (args.seed >= 0) {
        settings.hyper.seed = static_cast<std::uint64_t>(args.seed);
        settings.train.seed = settings.hyper.seed;
    }
    Dataset data = load_dataset(args.data);
    check_uniform_shape(data);

    const std::vector<double>& ref_times = data.series.front().times;
    const int d = data.series.front().dim();
    ModelParams init;
    {
        Rng rng(mix_seed(settings.hyper.seed, 0x494e4954u));
        init = init_model(d, ref_times, data.class_count, settings.hyper, rng);
    }
    if (settings.M >= 0 && init.new_count() != settings.M)
        throw std::runtime_error("config/schema mismatch: config declares M = " +
                                 std::to_string(settings.M) + " but the grid yields M = " +
                                 std::to_string(init.new_count()));

    TrainResult result = train_sgd(init, data, settings.train);

    fs::create_directories(args.out);
    const fs::path dir(args.out);
    save_model(result.params, (dir / "model.txt").string());
    write_history_csv(dir / "history.csv", result.history);
    std::cout << "trained " << settings.train.epochs << " epochs on " << data.size()
              << " series; model written to " << (dir / "model.txt").string() << "\n";
}

struct EvalArgs {
    std::string model;
    std::string data;
    std::string out;
    int runs = 50;
    std::uint64_t seed = 0;
};

void cmd_eval(const EvalArgs& args) {
    if (args.runs < 1) throw CLI::ValidationError("--runs", "must be >= 1");
    ModelParams model = load_model(args.model);
    Dataset data = load_dataset(args.data);
    check_uniform_shape(data);
    if (data.series.front().dim() != model.dim ||
        data.series.front().length() != model.n_points)
        throw std::runtime_error("model/dataset dim mismatch");
    if (data.class_count != model.classes)
        throw std::runtime_error("model/dataset class count mismatch");

    fs::create_directories(args.out);
    std::ofstream metrics = open_csv(fs::path(args.out) / "metrics.csv");
    metrics << "run,seed,accuracy,weighted_accuracy\n";
    double acc_sum = 0.0, wacc_sum = 0.0;
    for (int r = 0; r < args.runs; ++r) {
        const std::uint64_t run_seed = mix_seed(args.seed, 0x52554eu, r);
        const std::vector<int> preds = predict(model, data, run_seed);
        long long hits = 0;
        for (std::size_t i = 0; i < preds.size(); ++i) hits += preds[i] == data.labels[i];
        const double acc = static_cast<double>(hits) / preds.size();
        const double wacc = weighted_accuracy(preds, data.labels, data.class_count);
        metrics << r << ',' << run_seed << ',' << fmt(acc) << ',' << fmt(wacc) << '\n';
        acc_sum += acc;
        wacc_sum += wacc;
    }
    metrics << "mean,," << fmt(acc_sum / args.runs) << ',' << fmt(wacc_sum / args.runs) << '\n';

    std::ofstream probs = open_csv(fs::path(args.out) / "probabilities.csv");
    probs << "series,label";
    for (int c = 0; c < model.classes; ++c) probs << ",p" << c;
    probs << '\n';
    const std::uint64_t dump_seed = mix_seed(args.seed, 0x52554eu, 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Eigen::VectorXd p = forward(model, data.series[i], Rng(mix_seed(dump_seed, i)));
        probs << i << ',' << data.labels[i];
        for (int c = 0; c < model.classes; ++c) probs << ',' << fmt(p[c]);
        probs << '\n';
    }
    std::cout << "mean weighted accuracy over " << args.runs << " runs: "
              << fmt(wacc_sum / args.runs) << "\n";
}

struct VarianceArgs {
    std::string model;
    std::string data;
    std::string out;
    int runs = 50;
    std::uint64_t seed = 0;
    std::string k_sweep;
};

void write_variance_files(const fs::path& dir, const std::string& suffix,
                          const VarianceReport& report) {
    std::ofstream norms = open_csv(dir / ("variance_norms" + suffix + ".csv"));
    norms << "series,cov_norm\n";
    for (std::size_t i = 0; i < report.norms.size(); ++i)
        norms << i << ',' << fmt(report.norms[i]) << '\n';
    std::ofstream hist = open_csv(dir / ("variance_hist" + suffix + ".csv"));
    hist << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b + 1 < report.bin_edges.size(); ++b)
        hist << fmt(report.bin_edges[b]) << ',' << fmt(report.bin_edges[b + 1]) << ','
             << report.bin_counts[b] << '\n';
}

void cmd_variance(const VarianceArgs& args) {
    if (args.runs < 1) throw CLI::ValidationError("--runs", "must be >= 1");
    ModelParams model = load_model(args.model);
    Dataset data = load_dataset(args.data);
    check_uniform_shape(data);
    if (data.series.front().dim() != model.dim ||
        data.series.front().length() != model.n_points)
        throw std::runtime_error("model/dataset dim mismatch");

    fs::create_directories(args.out);
    const fs::path dir(args.out);
    if (args.k_sweep.empty()) {
        write_variance_files(dir, "", output_variance_analysis(model, data, args.runs, args.seed));
    } else {
        std::istringstream in(args.k_sweep);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            const int k = std::stoi(tok);
            if (k < 1) throw CLI::ValidationError("--k-sweep", "K values must be >= 1");
            ModelParams variant = model;
            variant.hyper.K = k;
            write_variance_files(dir, "_K" + std::to_string(k),
                                 output_variance_analysis(variant, data, args.runs, args.seed));
        }
    }
    std::cout << "variance analysis written to " << args.out << "\n";
}

struct BenchmarkArgs {
    std::string train;
    std::string test;
    std::string config;
    std::string out;
    std::int64_t seed = -1;
    int model_runs = 5;
};

double eval_linear_on(const Dataset& test, const NoAugModel& model,
                      const std::function<TimeSeries(const TimeSeries&)>& preprocess) {
    std::vector<int> preds(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        const Eigen::VectorXd p = noaug_classify(preprocess(test.series[i]), model);
        Eigen::Index best;
        p.maxCoeff(&best);
        preds[i] = static_cast<int>(best);
    }
    return weighted_accuracy(preds, test.labels, test.class_count);
}

void cmd_benchmark(const BenchmarkArgs& args) {
    Settings settings = args.config.empty() ? Settings{} : load_settings(args.config);
    if (args.seed >= 0) {
        settings.hyper.seed = static_cast<std::uint64_t>(args.seed);
        settings.train.seed = settings.hyper.seed;
    }
    Dataset train = load_dataset(args.train);
    Dataset test = load_dataset(args.test);
    check_uniform_shape(train);
    check_uniform_shape(test);
    if (train.class_count != test.class_count)
        throw std::runtime_error("train/test class count mismatch");

    const NormConfig norm = settings.hyper.norm();
    const bool rescale = settings.hyper.rescale_time;
    const int level = settings.hyper.L;

    auto train_preprocessed =
        [&](const std::function<TimeSeries(const TimeSeries&)>& preprocess) {
            Dataset pre = train;
            for (TimeSeries& s : pre.series) s = preprocess(s);
            NoAugResult fit = train_noaug(pre, level, norm, rescale, settings.train);
            return eval_linear_on(test, fit.model, preprocess);
        };

    auto identity = [](const TimeSeries& s) { return s; };
    auto fft = [](const TimeSeries& s) { return fft_augment(s, 2); };
    auto spline = [](const TimeSeries& s) {
        return cubic_spline_augment(s, new_times_midpoints(s.times));
    };
    auto gp = [](const TimeSeries& s) { return gp_mean_augment(s, new_times_midpoints(s.times)); };

    const double wa_noaug = train_preprocessed(identity);
    const double wa_fft = train_preprocessed(fft);
    const double wa_cs = train_preprocessed(spline);
    const double wa_gp = train_preprocessed(gp);

    double wa_model;
    {
        Rng rng(mix_seed(settings.hyper.seed, 0x494e4954u));
        ModelParams init = init_model(train.series.front().dim(), train.series.front().times,
                                      train.class_count, settings.hyper, rng);
        TrainResult fit = train_sgd(init, train, settings.train);
        double sum = 0.0;
        for (int r = 0; r < args.model_runs; ++r) {
            const std::vector<int> preds =
                predict(fit.params, test, mix_seed(settings.hyper.seed, 0x52554eu, r));
            sum += weighted_accuracy(preds, test.labels, test.class_count);
        }
        wa_model = sum / args.model_runs;
    }

    fs::create_directories(args.out);
    std::ofstream out = open_csv(fs::path(args.out) / "benchmark.csv");
    out << "dataset,noaug,fft,cs,gp,model\n";
    out << train.name << ',' << fmt(wa_noaug) << ',' << fmt(wa_fft) << ',' << fmt(wa_cs) << ','
        << fmt(wa_gp) << ',' << fmt(wa_model) << '\n';
    std::cout << "benchmark row written: noaug=" << fmt(wa_noaug) << " fft=" << fmt(wa_fft)
              << " cs=" << fmt(wa_cs) << " gp=" << fmt(wa_gp) << " model=" << fmt(wa_model)
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::ostringstream inv;
    for (int i = 0; i < argc; ++i) inv << (i ? " " : "") << argv[i];
    g_invocation = inv.str();

    CLI::App app{"time-series classification via augmented expected signatures"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset");
    gen_cmd->add_option("--task", gen.task, "fbm | ou | bidim")->required();
    gen_cmd->add_option("--seed", gen.seed, "generation seed");
    gen_cmd->add_option("--out", gen.out, "output directory")->required();
    gen_cmd->add_option("--train-per-class", gen.train_per_class);
    gen_cmd->add_option("--test-per-class", gen.test_per_class);
    gen_cmd->add_option("--length", gen.length, "samples per series");
    gen_cmd->add_option("--horizon", gen.horizon, "time horizon");

    TrainArgs train;
    CLI::App* train_cmd = app.add_subcommand("train", "train the classifier");
    train_cmd->add_option("--data", train.data, "training TSV")->required();
    train_cmd->add_option("--config", train.config, "key = value settings file");
    train_cmd->add_option("--seed", train.seed, "overrides the config seed");
    train_cmd->add_option("--out", train.out, "output directory")->required();

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a trained model");
    eval_cmd->add_option("--model", eval.model)->required();
    eval_cmd->add_option("--data", eval.data, "test TSV")->required();
    eval_cmd->add_option("--out", eval.out)->required();
    eval_cmd->add_option("--runs", eval.runs, "stochastic evaluation runs");
    eval_cmd->add_option("--seed", eval.seed);

    VarianceArgs variance;
    CLI::App* var_cmd = app.add_subcommand("variance", "output-covariance analysis");
    var_cmd->add_option("--model", variance.model)->required();
    var_cmd->add_option("--data", variance.data)->required();
    var_cmd->add_option("--out", variance.out)->required();
    var_cmd->add_option("--runs", variance.runs, "repeated forwards per series");
    var_cmd->add_option("--seed", variance.seed);
    var_cmd->add_option("--k-sweep", variance.k_sweep, "comma-separated K values");

    BenchmarkArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("benchmark", "compare against the baselines");
    bench_cmd->add_option("--train", bench.train)->required();
    bench_cmd->add_option("--test", bench.test)->required();
    bench_cmd->add_option("--config", bench.config);
    bench_cmd->add_option("--seed", bench.seed, "overrides the config seed");
    bench_cmd->add_option("--out", bench.out)->required();
    bench_cmd->add_option("--model-runs", bench.model_runs, "evaluation runs for the model column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) cmd_gen(gen);
        if (train_cmd->parsed()) cmd_train(train);
        if (eval_cmd->parsed()) cmd_eval(eval);
        if (var_cmd->parsed()) cmd_variance(variance);
        if (bench_cmd->parsed()) cmd_benchmark(bench);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
