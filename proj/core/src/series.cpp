#include "sigaug/series.hpp"

#include <stdexcept>

namespace sigaug {

void TimeSeries::validate() const {
    if (static_cast<Eigen::Index>(times.size()) != values.rows())
        throw std::invalid_argument("time stamp count does not match value rows");
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        if (!(times[i + 1] > times[i]))
            throw std::invalid_argument("time stamps must be strictly increasing");
    }
}

std::vector<double> uniform_times(int n, double horizon) {
    if (n < 1) throw std::invalid_argument("uniform_times needs n >= 1");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = horizon * i / (n > 1 ? n - 1 : 1);
    return t;
}

}  // namespace sigaug
