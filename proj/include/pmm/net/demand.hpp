#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pmm::net {

/* Steady-state demand: rate[i][j] of requests per unit time. */
struct DemandMatrix {
    uint32_t n = 0;
    std::vector<double> rate;

    explicit DemandMatrix(uint32_t n_ = 0) : n(n_), rate(size_t(n_) * n_, 0.0) {}
    double& at(uint32_t i, uint32_t j) { return rate[size_t(i) * n + j]; }
    double at(uint32_t i, uint32_t j) const { return rate[size_t(i) * n + j]; }

    void check() const {
        for (uint32_t i = 0; i < n; i++)
            for (uint32_t j = 0; j < n; j++) {
                if (at(i, j) < 0) throw std::invalid_argument("demand: negative rate");
                if (i == j && at(i, j) != 0) throw std::invalid_argument("demand: diagonal rate");
            }
    }
    double total() const {
        double s = 0;
        for (double v : rate) s += v;
        return s;
    }
};

/* Time-varying demand: volume[i][j][t] requested at step t in {0..T}. */
struct DemandTensor {
    uint32_t n = 0;
    int64_t T = 0;
    std::vector<double> volume;

    DemandTensor(uint32_t n_ = 0, int64_t T_ = 0)
        : n(n_), T(T_), volume(size_t(n_) * n_ * size_t(T_ + 1), 0.0) {}
    double& at(uint32_t i, uint32_t j, int64_t t) {
        return volume[(size_t(i) * n + j) * size_t(T + 1) + size_t(t)];
    }
    double at(uint32_t i, uint32_t j, int64_t t) const {
        return volume[(size_t(i) * n + j) * size_t(T + 1) + size_t(t)];
    }

    void check() const {
        for (uint32_t i = 0; i < n; i++)
            for (uint32_t j = 0; j < n; j++)
                for (int64_t t = 0; t <= T; t++) {
                    if (at(i, j, t) < 0) throw std::invalid_argument("demand: negative volume");
                    if (i == j && at(i, j, t) != 0)
                        throw std::invalid_argument("demand: diagonal volume");
                }
    }
};

}  // namespace pmm::net
