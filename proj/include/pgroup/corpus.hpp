#pragma once

#include <string>
#include <vector>

#include "pgroup/maximal_class.hpp"

namespace pgroup {

struct CorpusEntry {
    std::string name;
    FiniteGroup group;
};

namespace detail {

inline std::string abelian_name(const std::vector<std::uint64_t>& invariants) {
    std::string s;
    for (std::size_t i = 0; i < invariants.size(); ++i) {
        if (i) s += "x";
        s += "C" + std::to_string(invariants[i]);
    }
    return s;
}

}  // namespace detail

/// The fixed named fleet of p-groups the theorem suites run over: cyclic
/// and mixed abelian groups, elementary abelian, the modular group of
/// order p^3, unitriangular groups, a direct product, the maximal-class
/// family members with p^r <= max_order, and their split (z = 0) variants.
/// Oversize members are skipped and reported through `skipped`.
inline std::vector<CorpusEntry> corpus(std::uint64_t p, std::uint64_t max_order,
                                       const Caps& caps = default_caps(),
                                       std::vector<std::string>* skipped = nullptr) {
    if (!is_prime(p) || p == 2) throw std::invalid_argument("corpus: p must be an odd prime");
    std::vector<CorpusEntry> out;
    auto admit = [&](const std::string& name, std::uint64_t order, auto&& make) {
        if (order > max_order || order > caps.max_order) {
            if (skipped) skipped->push_back(name);
            return;
        }
        out.push_back({name, make()});
    };

    const std::uint64_t p2 = p * p, p3 = p2 * p;
    auto ab = [&](std::vector<std::uint64_t> inv) {
        std::uint64_t n = 1;
        for (auto d : inv) n *= d;
        admit(detail::abelian_name(inv), n, [&] { return build_abelian(inv, caps); });
    };

    ab({p});
    ab({p2});
    ab({p3});
    ab({p, p});
    ab({p, p, p});
    ab({p2, p});
    ab({p3, p});
    ab({p2, p2});
    ab({p2, p, p});
    admit("Mod" + std::to_string(p3), p3, [&] { return build_modular(p, caps); });
    admit("UT3(F" + std::to_string(p) + ")", p3, [&] { return build_unitriangular(3, p, caps); });
    {
        std::uint64_t ut4 = 1;
        for (int t = 0; t < 6; ++t) ut4 *= p;
        admit("UT4(F" + std::to_string(p) + ")", ut4, [&] { return build_unitriangular(4, p, caps); });
    }
    admit("UT3(F" + std::to_string(p) + ")xC" + std::to_string(p), p3 * p, [&] {
        return build_direct_product({build_unitriangular(3, p, caps), build_cyclic(p, caps)}, caps);
    });

    std::uint64_t pr = p;
    for (int r = 2; r <= 8; ++r) {
        if (pr > caps.max_order / p) break;
        pr *= p;
        const std::string base = "G(" + std::to_string(p) + "," + std::to_string(r) + ")";
        admit(base, pr, [&] { return construct_example1(p, r, caps).group; });
        admit(base + "split", pr, [&] { return example1_split(p, r, caps); });
    }
    return out;
}

}  // namespace pgroup
