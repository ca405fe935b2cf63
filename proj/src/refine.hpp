#pragma once

// Moore-style partition refinement shared by the span and learner
// minimizers.

#include <algorithm>
#include <map>
#include <vector>

#include "bilearn/finite.hpp"

namespace bilearn::detail {

/// Coarsest partition of {0..n-1} that refines the partition by
/// `observation[x]` and is closed under every map in `transitions`
/// (x ~ y implies t(x) ~ t(y)). Returns block ids numbered by least member.
inline std::vector<Index> coarsest_congruence(const std::vector<std::vector<Index>>& observation,
                                              const std::vector<std::vector<Index>>& transitions)
{
    const std::size_t n = observation.size();
    std::vector<Index> block(n);
    std::size_t count = 0;
    {
        std::map<std::vector<Index>, Index> ids;
        for (Index x = 0; x < n; ++x) {
            block[x] = ids.try_emplace(observation[x], ids.size()).first->second;
        }
        count = ids.size();
    }
    std::vector<Index> signature(transitions.size() + 1);
    while (true) {
        std::map<std::vector<Index>, Index> ids;
        std::vector<Index> next(n);
        for (Index x = 0; x < n; ++x) {
            signature[0] = block[x];
            for (std::size_t t = 0; t < transitions.size(); ++t) {
                signature[t + 1] = block[transitions[t][x]];
            }
            next[x] = ids.try_emplace(signature, ids.size()).first->second;
        }
        block = std::move(next);
        if (ids.size() == count) {
            return block;
        }
        count = ids.size();
    }
}

// Surjections from {0..n-1} onto {0..k-1} with blocks numbered in order of
// first occurrence (restricted growth strings), for every k.
template <typename F>
inline void for_each_partition(std::size_t n, F&& visit)
{
    if (n == 0) {
        visit(std::vector<Index>{}, std::size_t{0});
        return;
    }
    std::vector<Index> rgs(n, 0);
    std::vector<Index> maxima(n, 0);
    while (true) {
        visit(rgs, static_cast<std::size_t>(maxima[n - 1] + 1));
        std::size_t i = n - 1;
        while (i > 0 && rgs[i] == maxima[i - 1] + 1) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++rgs[i];
        maxima[i] = std::max(maxima[i - 1], rgs[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            maxima[j] = maxima[i];
        }
    }
}

inline std::size_t block_count(const std::vector<Index>& block)
{
    std::size_t count = 0;
    for (Index b : block) {
        count = std::max(count, b + 1);
    }
    return count;
}

} // namespace bilearn::detail
