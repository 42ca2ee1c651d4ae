#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pgroup {

/// Dense bitset over element ids 0..n-1 with a maintained popcount.
/// This is the working representation for subgroup member sets.
class MemberSet {
public:
    MemberSet() = default;
    explicit MemberSet(std::size_t universe)
        : n_(universe), bits_((universe + 63) / 64, 0) {}

    std::size_t universe() const { return n_; }
    std::size_t count() const { return count_; }
    bool empty_universe() const { return n_ == 0; }

    bool test(std::uint32_t e) const {
        return (bits_[e >> 6] >> (e & 63)) & 1u;
    }

    /// Returns true if e was newly inserted.
    bool insert(std::uint32_t e) {
        std::uint64_t& w = bits_[e >> 6];
        const std::uint64_t m = std::uint64_t(1) << (e & 63);
        if (w & m) return false;
        w |= m;
        ++count_;
        return true;
    }

    bool contains_all(const MemberSet& other) const {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (other.bits_[i] & ~bits_[i]) return false;
        return true;
    }

    bool operator==(const MemberSet& other) const {
        return n_ == other.n_ && bits_ == other.bits_;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t w : bits_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return h;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t wi = 0; wi < bits_.size(); ++wi) {
            std::uint64_t w = bits_[wi];
            while (w) {
                const int b = __builtin_ctzll(w);
                f(std::uint32_t(wi * 64 + b));
                w &= w - 1;
            }
        }
    }

    std::vector<std::uint32_t> to_list() const {
        std::vector<std::uint32_t> out;
        out.reserve(count_);
        for_each([&](std::uint32_t e) { out.push_back(e); });
        return out;
    }

    /// Lexicographic order on the ascending member lists of two sets with
    /// equal universe. Returns <0, 0, >0.
    static int cmp_lex(const MemberSet& a, const MemberSet& b) {
        for (std::size_t i = 0; i < a.bits_.size(); ++i) {
            const std::uint64_t d = a.bits_[i] ^ b.bits_[i];
            if (d) {
                const std::uint64_t low = d & (~d + 1);
                return (a.bits_[i] & low) ? -1 : 1;  // owner of lowest differing id sorts first
            }
        }
        return 0;
    }

private:
    std::size_t n_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> bits_;
};

}  // namespace pgroup
