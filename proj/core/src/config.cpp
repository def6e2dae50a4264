#include "sigaug/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sigaug {

GridStrategy parse_strategy(const std::string& name) {
    if (name == "midpoints") return GridStrategy::midpoints;
    if (name == "extended") return GridStrategy::extended;
    throw std::runtime_error("unknown strategy '" + name + "' (midpoints|extended)");
}

std::string strategy_name(GridStrategy s) {
    return s == GridStrategy::midpoints ? "midpoints" : "extended";
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v, int line_no) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error("config line " + std::to_string(line_no) +
                             ": expected true/false, got '" + v + "'");
}

template <typename T>
T parse_num(const std::string& v, int line_no) {
    std::istringstream in(v);
    T out;
    in >> out;
    if (in.fail() || !in.eof())
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": bad numeric value '" + v + "'");
    return out;
}

}  // namespace

Settings parse_settings_text(const std::string& text) {
    Settings s;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "L") s.hyper.L = parse_num<int>(value, line_no);
        else if (key == "K") s.hyper.K = parse_num<int>(value, line_no);
        else if (key == "M") s.M = parse_num<int>(value, line_no);
        else if (key == "C") s.hyper.C = parse_num<double>(value, line_no);
        else if (key == "a") s.hyper.a = parse_num<double>(value, line_no);
        else if (key == "alpha") s.hyper.alpha = parse_num<int>(value, line_no);
        else if (key == "strategy") s.hyper.strategy = parse_strategy(value);
        else if (key == "n_before") s.hyper.n_before = parse_num<int>(value, line_no);
        else if (key == "n_after") s.hyper.n_after = parse_num<int>(value, line_no);
        else if (key == "margin") s.hyper.margin = parse_num<double>(value, line_no);
        else if (key == "rescale_time") s.hyper.rescale_time = parse_bool(value, line_no);
        else if (key == "lr") s.train.lr = parse_num<double>(value, line_no);
        else if (key == "batch") s.train.batch = parse_num<int>(value, line_no);
        else if (key == "epochs") s.train.epochs = parse_num<int>(value, line_no);
        else if (key == "val_fraction") s.train.val_fraction = parse_num<double>(value, line_no);
        else if (key == "freeze_samples") s.train.freeze_samples = parse_bool(value, line_no);
        else if (key == "folds") s.folds = parse_num<int>(value, line_no);
        else if (key == "seed") {
            s.hyper.seed = parse_num<std::uint64_t>(value, line_no);
            s.train.seed = s.hyper.seed;
        } else {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
        }
    }
    return s;
}

Settings load_settings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_settings_text(buf.str());
}

std::string settings_to_text(const Settings& s) {
    std::ostringstream out;
    out << "L = " << s.hyper.L << "\n";
    out << "K = " << s.hyper.K << "\n";
    out << "M = " << s.M << "\n";
    out << "C = " << s.hyper.C << "\n";
    out << "a = " << s.hyper.a << "\n";
    out << "alpha = " << s.hyper.alpha << "\n";
    out << "strategy = " << strategy_name(s.hyper.strategy) << "\n";
    out << "n_before = " << s.hyper.n_before << "\n";
    out << "n_after = " << s.hyper.n_after << "\n";
    out << "margin = " << s.hyper.margin << "\n";
    out << "rescale_time = " << (s.hyper.rescale_time ? "true" : "false") << "\n";
    out << "lr = " << s.train.lr << "\n";
    out << "batch = " << s.train.batch << "\n";
    out << "epochs = " << s.train.epochs << "\n";
    out << "val_fraction = " << s.train.val_fraction << "\n";
    out << "freeze_samples = " << (s.train.freeze_samples ? "true" : "false") << "\n";
    out << "folds = " << s.folds << "\n";
    out << "seed = " << s.hyper.seed << "\n";
    return out.str();
}

}  // namespace sigaug
