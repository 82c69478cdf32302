// Independent reference implementations used as test oracles. These must stay
// decoupled from the library internals they check: ranks are computed by
// O(n^2) pairwise counting and the correlation by the textbook product-moment
// formula in extended precision.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline std::vector<double> pairwise_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t smaller = 0, equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (v[j] < v[i]) ++smaller;
            if (j != i && v[j] == v[i]) ++equal;
        }
        ranks[i] = 1.0 + static_cast<double>(smaller) + 0.5 * static_cast<double>(equal);
    }
    return ranks;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const std::vector<double> ra = pairwise_ranks(a);
    const std::vector<double> rb = pairwise_ranks(b);
    const std::size_t n = ra.size();
    long double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += ra[i];
        sy += rb[i];
        sxy += static_cast<long double>(ra[i]) * rb[i];
        sxx += static_cast<long double>(ra[i]) * ra[i];
        syy += static_cast<long double>(rb[i]) * rb[i];
    }
    const long double num = n * sxy - sx * sy;
    const long double den =
        std::sqrt(static_cast<long double>(n * sxx - sx * sx) * (n * syy - sy * sy));
    return static_cast<double>(num / den);
}

// All permutations of 0..n-1, lexicographic.
inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace oracle
