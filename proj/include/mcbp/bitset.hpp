#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

namespace mcbp {

// Client-set bitmask sized at construction. Used for column incidence
// vectors and label visited-sets outside the 64-client fast path.
class ClientSet {
  public:
    ClientSet() = default;
    explicit ClientSet(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int size() const { return n_; }
    void set(int i) { w_[i >> 6] |= (1ULL << (i & 63)); }
    void reset(int i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }

    bool any() const {
        for (auto x : w_) if (x) return true;
        return false;
    }
    int count() const {
        int c = 0;
        for (auto x : w_) c += __builtin_popcountll(x);
        return c;
    }
    bool subset_of(const ClientSet& o) const {
        for (size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & ~o.w_[k]) return false;
        return true;
    }
    bool intersects(const ClientSet& o) const {
        for (size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & o.w_[k]) return true;
        return false;
    }
    void unite(const ClientSet& o) {
        for (size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    }

    bool operator==(const ClientSet& o) const = default;

    size_t hash() const {
        size_t h = 1469598103934665603ULL;
        for (auto x : w_) { h ^= std::hash<std::uint64_t>{}(x); h *= 1099511628211ULL; }
        return h;
    }

    const std::vector<std::uint64_t>& words() const { return w_; }

  private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

}  // namespace mcbp
