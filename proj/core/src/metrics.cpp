// SPDX-License-Identifier: Apache-2.0
#include "rnnf/metrics.hpp"

#include <cmath>
#include <string>

#include "rnnf/error.hpp"

namespace rnnf {

namespace {

void check(std::span<const double> p, std::span<const double> a) {
    if (p.size() != a.size())
        throw DataError("metric: " + std::to_string(p.size()) + " predictions vs " +
                        std::to_string(a.size()) + " actuals");
    if (p.empty()) throw DataError("metric: empty input");
}

} // namespace

double mse(std::span<const double> predicted, std::span<const double> actual) {
    check(predicted, actual);
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - actual[i];
        sum += d * d;
    }
    return sum / static_cast<double>(predicted.size());
}

double mae(std::span<const double> predicted, std::span<const double> actual) {
    check(predicted, actual);
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        sum += std::abs(predicted[i] - actual[i]);
    return sum / static_cast<double>(predicted.size());
}

} // namespace rnnf
