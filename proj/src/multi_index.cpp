#include "jetphase/multi_index.hpp"

#include <algorithm>

namespace jetphase {

namespace {

void fill_total(std::size_t pos, int remaining, MultiIndex& current, std::vector<MultiIndex>& out) {
    if (pos + 1 == current.size()) {
        current[pos] = remaining;
        out.push_back(current);
        current[pos] = 0;
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        current[pos] = v;
        fill_total(pos + 1, remaining - v, current, out);
    }
    current[pos] = 0;
}

} // namespace

std::vector<MultiIndex> indices_of_total(std::size_t size, int total) {
    std::vector<MultiIndex> out;
    if (total < 0) return out;
    if (size == 0) {
        if (total == 0) out.emplace_back();
        return out;
    }
    MultiIndex current(size);
    fill_total(0, total, current, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MultiIndex> indices_up_to(std::size_t size, int max_total) {
    std::vector<MultiIndex> out;
    for (int t = 0; t <= max_total; ++t) {
        auto layer = indices_of_total(size, t);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

std::vector<MultiIndex> indices_below(const MultiIndex& bound) {
    std::vector<MultiIndex> out{MultiIndex(bound.size())};
    for (std::size_t i = 0; i < bound.size(); ++i) {
        std::vector<MultiIndex> next;
        for (const auto& m : out) {
            for (int v = 0; v <= bound[i]; ++v) {
                MultiIndex c = m;
                c[i] = v;
                next.push_back(std::move(c));
            }
        }
        out = std::move(next);
    }
    return out;
}

Scalar factorial(const MultiIndex& alpha) {
    Scalar out(1);
    for (int e : alpha.entries()) out *= factorial(e);
    return out;
}

} // namespace jetphase
