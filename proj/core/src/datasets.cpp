#include "sigaug/datasets.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sigaug {

void Dataset::validate() const {
    if (series.size() != labels.size())
        throw std::invalid_argument("dataset: series and label counts differ");
    if (series.empty()) throw std::invalid_argument("dataset: empty");
    if (class_count < 1) throw std::invalid_argument("dataset: class_count must be >= 1");
    std::vector<int> per_class(class_count, 0);
    const int d = series.front().dim();
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].dim() != d)
            throw std::invalid_argument("dataset: series dimensions differ");
        if (labels[i] < 0 || labels[i] >= class_count)
            throw std::invalid_argument("dataset: label out of range");
        ++per_class[labels[i]];
    }
    for (int c = 0; c < class_count; ++c)
        if (per_class[c] == 0) throw std::invalid_argument("dataset: empty class");
}

namespace {

TimeSeries from_column(const std::vector<double>& times, const Eigen::VectorXd& v) {
    TimeSeries s;
    s.times = times;
    s.values = v;
    return s;
}

}  // namespace

std::vector<TimeSeries> gen_bm(int count, int n_points, double horizon, std::uint64_t seed) {
    if (n_points < 2) throw std::invalid_argument("gen_bm needs n_points >= 2");
    const auto times = uniform_times(n_points, horizon);
    const double dt = horizon / (n_points - 1);
    const double sd = std::sqrt(dt);
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (int p = 0; p < count; ++p) {
        Rng rng(mix_seed(seed, p));
        Eigen::VectorXd v(n_points);
        v[0] = 0.0;
        for (int i = 1; i < n_points; ++i) v[i] = v[i - 1] + sd * rng.normal();
        out.push_back(from_column(times, v));
    }
    return out;
}

std::vector<TimeSeries> gen_fbm(double hurst, int count, int n_points, double horizon,
                                std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::invalid_argument("gen_fbm needs 0 < hurst < 1");
    if (n_points < 2) throw std::invalid_argument("gen_fbm needs n_points >= 2");
    const auto times = uniform_times(n_points, horizon);
    const int m = n_points - 1;  // X_0 = 0 exactly, factorize over positive times
    Eigen::MatrixXd cov(m, m);
    const double h2 = 2.0 * hurst;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double s = times[i + 1], t = times[j + 1];
            cov(i, j) = 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("gen_fbm: covariance is not positive definite on this grid");
    const Eigen::MatrixXd root = llt.matrixL();
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (int p = 0; p < count; ++p) {
        Rng rng(mix_seed(seed, p));
        Eigen::VectorXd xi(m);
        for (int i = 0; i < m; ++i) xi[i] = rng.normal();
        Eigen::VectorXd v(n_points);
        v[0] = 0.0;
        v.tail(m) = root * xi;
        out.push_back(from_column(times, v));
    }
    return out;
}

std::vector<TimeSeries> gen_gbm(double mu, double sigma, double x0, int count, int n_points,
                                double horizon, std::uint64_t seed) {
    if (n_points < 2) throw std::invalid_argument("gen_gbm needs n_points >= 2");
    const auto times = uniform_times(n_points, horizon);
    const double dt = horizon / (n_points - 1);
    const double drift = (mu - 0.5 * sigma * sigma) * dt;
    const double vol = sigma * std::sqrt(dt);
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (int p = 0; p < count; ++p) {
        Rng rng(mix_seed(seed, p));
        Eigen::VectorXd v(n_points);
        v[0] = x0;
        for (int i = 1; i < n_points; ++i)
            v[i] = v[i - 1] * std::exp(drift + vol * rng.normal());
        out.push_back(from_column(times, v));
    }
    return out;
}

std::vector<TimeSeries> gen_ou(double alpha, double gamma, double beta, double x0, int count,
                               int n_points, double horizon, std::uint64_t seed) {
    if (!(alpha > 0.0)) throw std::invalid_argument("gen_ou needs alpha > 0");
    if (n_points < 2) throw std::invalid_argument("gen_ou needs n_points >= 2");
    const auto times = uniform_times(n_points, horizon);
    const double dt = horizon / (n_points - 1);
    const double decay = std::exp(-alpha * dt);
    const double sd = beta * std::sqrt((1.0 - decay * decay) / (2.0 * alpha));
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (int p = 0; p < count; ++p) {
        Rng rng(mix_seed(seed, p));
        Eigen::VectorXd v(n_points);
        v[0] = x0;
        for (int i = 1; i < n_points; ++i)
            v[i] = gamma + (v[i - 1] - gamma) * decay + sd * rng.normal();
        out.push_back(from_column(times, v));
    }
    return out;
}

std::vector<TimeSeries> gen_nonlinear_sde(double x0, double diffusion_scale, int count,
                                          int n_points, double horizon, int refine,
                                          std::uint64_t seed) {
    if (n_points < 2) throw std::invalid_argument("gen_nonlinear_sde needs n_points >= 2");
    if (refine < 1) throw std::invalid_argument("gen_nonlinear_sde needs refine >= 1");
    const auto times = uniform_times(n_points, horizon);
    const double h = horizon / (n_points - 1) / refine;
    const double sqh = std::sqrt(h);
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (int p = 0; p < count; ++p) {
        Rng rng(mix_seed(seed, p));
        Eigen::VectorXd v(n_points);
        double x = x0;
        v[0] = x;
        for (int i = 1; i < n_points; ++i) {
            for (int r = 0; r < refine; ++r) {
                const double g = std::sqrt(1.0 + x * x);
                x += (g + 0.5 * x) * h + diffusion_scale * g * sqh * rng.normal();
            }
            v[i] = x;
        }
        out.push_back(from_column(times, v));
    }
    return out;
}

std::vector<TimeSeries> gen_noisy_smooth(double noise_std, int count, int n_points,
                                         std::uint64_t seed) {
    if (n_points < 2) throw std::invalid_argument("gen_noisy_smooth needs n_points >= 2");
    const auto times = uniform_times(n_points, 1.0);
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (int p = 0; p < count; ++p) {
        Rng rng(mix_seed(seed, p));
        Eigen::VectorXd v(n_points);
        for (int i = 0; i < n_points; ++i) {
            const double t = times[i];
            const double s = std::sin(4.0 * std::numbers::pi * t);
            const double c = std::cos(4.0 * std::numbers::pi * t);
            v[i] = 6.0 * s * s * s * c * c + noise_std * rng.normal();
        }
        out.push_back(from_column(times, v));
    }
    return out;
}

MomentMatchedPair gen_moment_matched_pair(int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("gen_moment_matched_pair needs count >= 1");
    MomentMatchedPair out;
    out.lognormal.reserve(count);
    out.perturbed.reserve(count);
    const std::vector<double> times = {0.0, 1.0};
    constexpr long long kRetryCap = 1000000;

    auto linear_path = [&](double m1, double m2) {
        TimeSeries s;
        s.times = times;
        s.values.resize(2, 2);
        s.values << 0.0, 0.0, m1, m2;
        return s;
    };

    for (int p = 0; p < count; ++p) {
        Rng rng(mix_seed(seed, 2 * p));
        out.lognormal.push_back(linear_path(std::exp(rng.normal()), std::exp(rng.normal())));
    }
    for (int p = 0; p < count; ++p) {
        Rng rng(mix_seed(seed, 2 * p + 1));
        double m[2];
        for (int c = 0; c < 2; ++c) {
            long long tries = 0;
            for (;;) {
                if (++tries > kRetryCap)
                    throw std::runtime_error("gen_moment_matched_pair: rejection sampler stalled");
                ++out.proposals;
                const double xi = rng.normal();
                const double accept_prob = 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * xi));
                if (rng.uniform() < accept_prob) {
                    ++out.accepted;
                    m[c] = std::exp(xi);
                    break;
                }
            }
        }
        out.perturbed.push_back(linear_path(m[0], m[1]));
    }
    return out;
}

namespace {

Dataset make_two_class(const std::string& name, std::vector<TimeSeries> a,
                       std::vector<TimeSeries> b) {
    Dataset ds;
    ds.name = name;
    ds.class_count = 2;
    for (auto& s : a) {
        ds.series.push_back(std::move(s));
        ds.labels.push_back(0);
    }
    for (auto& s : b) {
        ds.series.push_back(std::move(s));
        ds.labels.push_back(1);
    }
    return ds;
}

TimeSeries pair_channels(const TimeSeries& a, const TimeSeries& b) {
    TimeSeries s;
    s.times = a.times;
    s.values.resize(a.length(), 2);
    s.values.col(0) = a.values.col(0);
    s.values.col(1) = b.values.col(0);
    return s;
}

std::vector<TimeSeries> to_bidim(std::vector<TimeSeries> comps) {
    std::vector<TimeSeries> out;
    out.reserve(comps.size() / 2);
    for (std::size_t i = 0; i + 1 < comps.size(); i += 2)
        out.push_back(pair_channels(comps[i], comps[i + 1]));
    return out;
}

}  // namespace

TaskSplit make_fbm_task(const TaskConfig& cfg, std::uint64_t seed) {
    TaskSplit split;
    split.train = make_two_class(
        "fbm",
        gen_fbm(cfg.fbm_hurst_a, cfg.train_per_class, cfg.n_points, cfg.horizon,
                mix_seed(seed, 0)),
        gen_fbm(cfg.fbm_hurst_b, cfg.train_per_class, cfg.n_points, cfg.horizon,
                mix_seed(seed, 1)));
    split.test = make_two_class(
        "fbm",
        gen_fbm(cfg.fbm_hurst_a, cfg.test_per_class, cfg.n_points, cfg.horizon,
                mix_seed(seed, 2)),
        gen_fbm(cfg.fbm_hurst_b, cfg.test_per_class, cfg.n_points, cfg.horizon,
                mix_seed(seed, 3)));
    return split;
}

TaskSplit make_ou_task(const TaskConfig& cfg, std::uint64_t seed) {
    auto gen = [&](double alpha, double gamma, double beta, int count, std::uint64_t s) {
        return gen_ou(alpha, gamma, beta, cfg.ou_x0, count, cfg.n_points, cfg.horizon, s);
    };
    TaskSplit split;
    split.train = make_two_class(
        "ou",
        gen(cfg.ou_alpha_a, cfg.ou_gamma_a, cfg.ou_beta_a, cfg.train_per_class, mix_seed(seed, 0)),
        gen(cfg.ou_alpha_b, cfg.ou_gamma_b, cfg.ou_beta_b, cfg.train_per_class, mix_seed(seed, 1)));
    split.test = make_two_class(
        "ou",
        gen(cfg.ou_alpha_a, cfg.ou_gamma_a, cfg.ou_beta_a, cfg.test_per_class, mix_seed(seed, 2)),
        gen(cfg.ou_alpha_b, cfg.ou_gamma_b, cfg.ou_beta_b, cfg.test_per_class, mix_seed(seed, 3)));
    return split;
}

TaskSplit make_bidim_task(const TaskConfig& cfg, std::uint64_t seed) {
    auto components = [&](int cls, int count, std::uint64_t s) -> std::vector<TimeSeries> {
        const int n = 2 * count;  // two independent trajectories per series
        switch (cls) {
            case 0: return gen_bm(n, cfg.n_points, cfg.horizon, s);
            case 1: return gen_fbm(cfg.bidim_fbm_hurst, n, cfg.n_points, cfg.horizon, s);
            case 2:
                return gen_gbm(cfg.bidim_gbm_mu, cfg.bidim_gbm_sigma, cfg.bidim_gbm_x0, n,
                               cfg.n_points, cfg.horizon, s);
            case 3:
                return gen_ou(cfg.bidim_ou_alpha, cfg.bidim_ou_gamma, cfg.bidim_ou_beta, 0.0, n,
                              cfg.n_points, cfg.horizon, s);
            case 4:
                return gen_nonlinear_sde(0.0, 1.0, n, cfg.n_points, cfg.horizon, cfg.sde_refine,
                                         s);
            default: return gen_noisy_smooth(cfg.bidim_smooth_noise, n, cfg.n_points, s);
        }
    };
    TaskSplit split;
    split.train.name = split.test.name = "bidim";
    split.train.class_count = split.test.class_count = 6;
    for (int cls = 0; cls < 6; ++cls) {
        for (auto& s : to_bidim(components(cls, cfg.train_per_class, mix_seed(seed, 2 * cls)))) {
            split.train.series.push_back(std::move(s));
            split.train.labels.push_back(cls);
        }
        for (auto& s :
             to_bidim(components(cls, cfg.test_per_class, mix_seed(seed, 2 * cls + 1)))) {
            split.test.series.push_back(std::move(s));
            split.test.labels.push_back(cls);
        }
    }
    return split;
}

TaskBundle assemble_tasks(std::uint64_t seed, const TaskConfig& cfg) {
    TaskBundle bundle;
    bundle.fbm = make_fbm_task(cfg, mix_seed(seed, 101));
    bundle.ou = make_ou_task(cfg, mix_seed(seed, 102));
    bundle.bidim = make_bidim_task(cfg, mix_seed(seed, 103));
    return bundle;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    const char sep = line.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& tok, int line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("load_tsv: unparseable value '" + tok + "' at line " +
                                 std::to_string(line_no));
    }
}

}  // namespace

Dataset load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_tsv: cannot open " + path);
    Dataset ds;
    int dim = 1;
    int declared_classes = -1;
    std::vector<long long> raw_labels;
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string key;
            meta >> key;
            if (key == "name")
                meta >> ds.name;
            else if (key == "dim")
                meta >> dim;
            else if (key == "classes")
                meta >> declared_classes;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() < 2)
            throw std::runtime_error("load_tsv: row with no values at line " +
                                     std::to_string(line_no));
        const double label_val = parse_double(fields[0], line_no);
        if (label_val != std::floor(label_val))
            throw std::runtime_error("load_tsv: non-integer label at line " +
                                     std::to_string(line_no));
        raw_labels.push_back(static_cast<long long>(label_val));
        std::vector<double> vals;
        vals.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i)
            vals.push_back(parse_double(fields[i], line_no));
        if (!rows.empty() && vals.size() != rows.front().size())
            throw std::runtime_error("load_tsv: ragged row at line " + std::to_string(line_no));
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::runtime_error("load_tsv: no data rows in " + path);
    if (dim < 1 || rows.front().size() % dim != 0)
        throw std::runtime_error("load_tsv: value count is not a multiple of dim");
    const int n = static_cast<int>(rows.front().size()) / dim;
    if (n < 2) throw std::runtime_error("load_tsv: series need at least two samples");

    // map distinct raw labels to 0..D-1 in sorted order
    std::map<long long, int> label_map;
    for (long long l : raw_labels) label_map.emplace(l, 0);
    int next = 0;
    for (auto& kv : label_map) kv.second = next++;
    ds.class_count = declared_classes > 0 ? declared_classes : next;
    if (next > ds.class_count)
        throw std::runtime_error("load_tsv: more distinct labels than declared classes");

    const auto times = uniform_times(n, 1.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        TimeSeries s;
        s.times = times;
        s.values.resize(n, dim);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < dim; ++c) s.values(i, c) = rows[r][i * dim + c];
        ds.series.push_back(std::move(s));
        ds.labels.push_back(label_map.at(raw_labels[r]));
    }
    if (ds.name.empty()) {
        const auto slash = path.find_last_of("/\\");
        ds.name = slash == std::string::npos ? path : path.substr(slash + 1);
    }
    ds.validate();
    return ds;
}

void save_tsv(const Dataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_tsv: cannot open " + path + " for writing");
    const int d = ds.series.front().dim();
    out << "# sigaug-dataset v1\n";
    out << "# name " << ds.name << "\n";
    out << "# dim " << d << "\n";
    out << "# classes " << ds.class_count << "\n";
    char buf[64];
    for (std::size_t r = 0; r < ds.series.size(); ++r) {
        out << ds.labels[r];
        const TimeSeries& s = ds.series[r];
        for (int i = 0; i < s.length(); ++i) {
            for (int c = 0; c < d; ++c) {
                std::snprintf(buf, sizeof(buf), "%.17g", s.values(i, c));
                out << '\t' << buf;
            }
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_tsv: write failed for " + path);
}

}  // namespace sigaug
