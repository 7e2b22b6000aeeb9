#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fastgm {

// Sparse nonnegative vector. Entries are index-sorted, indices distinct,
// weights strictly positive (zeros are never stored).
class SparseVector {
public:
    struct Entry {
        std::uint32_t index;
        double weight;
    };

    SparseVector() = default;

    // Validates, sorts by index, rejects duplicates and nonpositive weights.
    static SparseVector from_entries(std::vector<Entry> entries) {
        for (const auto& e : entries) {
            if (!(e.weight > 0.0))
                throw std::invalid_argument("SparseVector: weights must be strictly positive");
        }
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.index < b.index; });
        for (std::size_t i = 1; i < entries.size(); ++i) {
            if (entries[i].index == entries[i - 1].index)
                throw std::invalid_argument("SparseVector: duplicate index");
        }
        SparseVector v;
        v.entries_ = std::move(entries);
        return v;
    }

    // Dense constructor helper; zero elements are dropped.
    static SparseVector from_dense(const std::vector<double>& dense) {
        std::vector<Entry> entries;
        for (std::size_t i = 0; i < dense.size(); ++i) {
            if (dense[i] != 0.0)
                entries.push_back({static_cast<std::uint32_t>(i), dense[i]});
        }
        return from_entries(std::move(entries));
    }

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    double sum() const noexcept {
        double s = 0.0;
        for (const auto& e : entries_) s += e.weight;
        return s;
    }

    SparseVector scaled(double c) const {
        if (!(c > 0.0)) throw std::invalid_argument("SparseVector::scaled: factor must be positive");
        SparseVector v = *this;
        for (auto& e : v.entries_) e.weight *= c;
        return v;
    }

    SparseVector normalized() const { return scaled(1.0 / sum()); }

private:
    std::vector<Entry> entries_;
};

} // namespace fastgm
