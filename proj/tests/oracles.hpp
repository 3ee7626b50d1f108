#pragma once

// Independent reference implementations used to check the library.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Two labels, each conditioned on the other: p(y_i = 1 | y_j) = logistic(bias[i] + weight[i] * y_j).
/// A sweep updates the labels in a uniformly random order, so its kernel is the
/// average of the two fixed-order kernels. Returns the stationary marginals.
inline std::array<double, 2> two_label_gibbs_marginals(std::array<double, 2> bias,
                                                       std::array<double, 2> weight) {
    using Kernel = std::array<std::array<double, 4>, 4>;
    // state index = y0 + 2 y1
    auto update = [&](int label) {
        Kernel k{};
        for (int s = 0; s < 4; ++s) {
            const int y0 = s & 1, y1 = s >> 1;
            const int other = label == 0 ? y1 : y0;
            const double p1 = logistic(bias[label] + weight[label] * other);
            const int with1 = label == 0 ? 1 + 2 * y1 : y0 + 2;
            const int with0 = label == 0 ? 2 * y1 : y0;
            k[s][with1] += p1;
            k[s][with0] += 1 - p1;
        }
        return k;
    };
    auto multiply = [](const Kernel& a, const Kernel& b) {
        Kernel c{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int m = 0; m < 4; ++m) c[i][j] += a[i][m] * b[m][j];
        return c;
    };
    const Kernel k0 = update(0), k1 = update(1);
    const Kernel a = multiply(k0, k1), b = multiply(k1, k0);
    Kernel sweep{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) sweep[i][j] = 0.5 * (a[i][j] + b[i][j]);

    std::array<double, 4> pi{0.25, 0.25, 0.25, 0.25};
    for (int it = 0; it < 10000; ++it) {
        std::array<double, 4> next{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) next[j] += pi[i] * sweep[i][j];
        pi = next;
    }
    return {pi[1] + pi[3], pi[2] + pi[3]};
}

/// Row-major 0/1 matrices of shape n x l.
struct Scores {
    double hamming, exact, jaccard;
};

inline Scores label_scores(const std::vector<std::vector<int>>& truth,
                           const std::vector<std::vector<int>>& pred) {
    double agree = 0, cells = 0, exact = 0, jac = 0;
    for (std::size_t r = 0; r < truth.size(); ++r) {
        bool all = true;
        int both = 0, either = 0;
        for (std::size_t c = 0; c < truth[r].size(); ++c) {
            const bool t = truth[r][c] != 0, p = pred[r][c] != 0;
            agree += t == p;
            cells += 1;
            all = all && t == p;
            both += t && p;
            either += t || p;
        }
        exact += all;
        jac += either == 0 ? 1.0 : static_cast<double>(both) / either;
    }
    const double n = static_cast<double>(truth.size());
    return {agree / cells, exact / n, jac / n};
}

/// Point-in-closed-triangle by the signs of the three edge cross products.
inline bool in_triangle(double px, double py, double ax, double ay, double bx, double by,
                        double cx, double cy) {
    auto cross = [](double ox, double oy, double ux, double uy, double vx, double vy) {
        return (ux - ox) * (vy - oy) - (uy - oy) * (vx - ox);
    };
    const double d1 = cross(ax, ay, bx, by, px, py);
    const double d2 = cross(bx, by, cx, cy, px, py);
    const double d3 = cross(cx, cy, ax, ay, px, py);
    const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
    const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(has_neg && has_pos);
}

}  // namespace oracle
