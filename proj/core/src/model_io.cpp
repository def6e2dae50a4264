#include "sigaug/model_io.hpp"

#include "sigaug/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sigaug {

namespace {

constexpr int kFormatVersion = 1;

void write_scalar(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

void write_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            write_scalar(out, m(i, j));
        }
        out << '\n';
    }
}

void write_vector(std::ostream& out, const std::string& name, const Eigen::VectorXd& v) {
    out << name << ' ' << v.size() << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        write_scalar(out, v[i]);
    }
    out << '\n';
}

void expect_token(std::istream& in, const std::string& expected) {
    std::string tok;
    in >> tok;
    if (tok != expected)
        throw std::runtime_error("model file: expected '" + expected + "', got '" + tok + "'");
}

Eigen::MatrixXd read_matrix(std::istream& in, const std::string& name) {
    expect_token(in, name);
    Eigen::Index rows, cols;
    in >> rows >> cols;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) in >> m(i, j);
    if (!in) throw std::runtime_error("model file: truncated matrix " + name);
    return m;
}

Eigen::VectorXd read_vector(std::istream& in, const std::string& name) {
    expect_token(in, name);
    Eigen::Index len;
    in >> len;
    Eigen::VectorXd v(len);
    for (Eigen::Index i = 0; i < len; ++i) in >> v[i];
    if (!in) throw std::runtime_error("model file: truncated vector " + name);
    return v;
}

}  // namespace

void save_model(const ModelParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open " + path + " for writing");
    out << "sigaug-model " << kFormatVersion << '\n';
    out << "dim " << p.dim << '\n';
    out << "n_points " << p.n_points << '\n';
    out << "classes " << p.classes << '\n';
    out << "L " << p.hyper.L << '\n';
    out << "K " << p.hyper.K << '\n';
    out << "strategy " << strategy_name(p.hyper.strategy) << '\n';
    out << "n_before " << p.hyper.n_before << '\n';
    out << "n_after " << p.hyper.n_after << '\n';
    out << "margin ";
    write_scalar(out, p.hyper.margin);
    out << '\n';
    out << "C ";
    write_scalar(out, p.hyper.C);
    out << '\n';
    out << "a ";
    write_scalar(out, p.hyper.a);
    out << '\n';
    out << "alpha " << p.hyper.alpha << '\n';
    out << "rescale_time " << (p.hyper.rescale_time ? 1 : 0) << '\n';
    out << "seed " << p.hyper.seed << '\n';
    write_matrix(out, "W_m", p.augmenter.W_m);
    write_vector(out, "b_m", p.augmenter.b_m);
    write_matrix(out, "W_V", p.augmenter.W_V);
    write_vector(out, "b_V", p.augmenter.b_V);
    write_matrix(out, "readout_W", p.readout_W);
    write_vector(out, "readout_b", p.readout_b);
    out << "end\n";
    if (!out) throw std::runtime_error("save_model: write failed for " + path);
}

ModelParams load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open " + path);
    expect_token(in, "sigaug-model");
    int version;
    in >> version;
    if (version != kFormatVersion)
        throw std::runtime_error("load_model: unsupported format version " +
                                 std::to_string(version));
    ModelParams p;
    expect_token(in, "dim");
    in >> p.dim;
    expect_token(in, "n_points");
    in >> p.n_points;
    expect_token(in, "classes");
    in >> p.classes;
    expect_token(in, "L");
    in >> p.hyper.L;
    expect_token(in, "K");
    in >> p.hyper.K;
    expect_token(in, "strategy");
    {
        std::string name;
        in >> name;
        p.hyper.strategy = parse_strategy(name);
    }
    expect_token(in, "n_before");
    in >> p.hyper.n_before;
    expect_token(in, "n_after");
    in >> p.hyper.n_after;
    expect_token(in, "margin");
    in >> p.hyper.margin;
    expect_token(in, "C");
    in >> p.hyper.C;
    expect_token(in, "a");
    in >> p.hyper.a;
    expect_token(in, "alpha");
    in >> p.hyper.alpha;
    expect_token(in, "rescale_time");
    {
        int flag;
        in >> flag;
        p.hyper.rescale_time = flag != 0;
    }
    expect_token(in, "seed");
    in >> p.hyper.seed;
    if (!in) throw std::runtime_error("load_model: truncated header in " + path);
    p.augmenter.W_m = read_matrix(in, "W_m");
    p.augmenter.b_m = read_vector(in, "b_m");
    p.augmenter.W_V = read_matrix(in, "W_V");
    p.augmenter.b_V = read_vector(in, "b_V");
    p.readout_W = read_matrix(in, "readout_W");
    p.readout_b = read_vector(in, "readout_b");
    expect_token(in, "end");
    return p;
}

}  // namespace sigaug
