#pragma once

#include <string>
#include <vector>

#include "pgroup/subgroup.hpp"

namespace pgroup {

/// Companion matrix of 1 + t + ... + t^{p-1}: the order-p automorphism
/// alpha with alpha(e_i) = e_{i+1} for i <= p-2 and
/// alpha(e_{p-1}) = -(e_1 + ... + e_{p-1}). Satisfies alpha^p = I and
/// det(alpha - I) = +-p; alpha acts uniserially on the integer lattice.
inline IntMatrix companion_alpha(std::uint64_t p) {
    if (!is_prime(p) || p == 2) throw std::invalid_argument("companion_alpha: p must be an odd prime");
    const std::size_t n = std::size_t(p) - 1;
    IntMatrix a(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) a(i + 1, i) = 1;
    for (std::size_t i = 0; i < n; ++i) a(i, n - 1) = -1;
    return a;
}

/// A maximal-class group of order p^r built as the extension of
/// N = Z^{p-1} / (alpha - 1)^{r-1} Z^{p-1} by C_p, with the distinguished
/// generator acting through alpha and wrapping onto the cocycle element z,
/// a generator of the last nontrivial lattice step.
struct MaximalClassGroup {
    std::uint64_t p = 0;
    int r = 0;
    FiniteGroup group;
    Element z_id = 0;
    Subgroup kernel;
    ExtensionData data;  // reusable for the split (z = 0) variant
};

namespace detail {

struct KernelPresentation {
    std::vector<std::uint64_t> invariants;  // SNF diagonal entries > 1
    std::vector<std::size_t> kept;          // their row positions in the SNF
    IntMatrix snf_left;                     // full left transform
    std::vector<std::uint64_t> stride;      // mixed radix, last invariant fastest
    std::uint64_t size = 1;

    /// Kernel element id of an integer lattice vector: reduce left * v
    /// mod the invariants on the kept coordinates.
    Element encode(const std::vector<long long>& v) const {
        const std::vector<long long> lv = snf_left.apply(v);
        std::uint64_t id = 0;
        for (std::size_t t = 0; t < kept.size(); ++t) {
            long long c = lv[kept[t]] % (long long)invariants[t];
            if (c < 0) c += (long long)invariants[t];
            id += std::uint64_t(c) * stride[t];
        }
        return Element(id);
    }
};

inline KernelPresentation kernel_presentation(const SnfResult& snf) {
    KernelPresentation k;
    k.snf_left = snf.left;
    for (std::size_t i = 0; i < snf.diagonal.size(); ++i)
        if (snf.diagonal[i] > 1) {
            k.invariants.push_back(std::uint64_t(snf.diagonal[i]));
            k.kept.push_back(i);
        }
    k.stride.assign(k.invariants.size(), 1);
    for (std::size_t t = k.invariants.size(); t-- > 0;) {
        k.stride[t] = k.size;
        k.size *= k.invariants[t];
    }
    return k;
}

}  // namespace detail

/// Extension data for the order-p^r member of the family: kernel
/// invariants from the Smith normal form of (alpha - 1)^{r-1}, the induced
/// action left * alpha * left^{-1}, and the cocycle z = image of
/// (alpha - 1)^{r-2} e_c for the first basis column giving a nontrivial
/// image of order p.
inline ExtensionData example1_extension_data(std::uint64_t p, int r) {
    if (!is_prime(p) || p == 2) throw std::invalid_argument("example1: p must be an odd prime");
    if (r < 2) throw std::invalid_argument("example1: r must be >= 2");
    const std::size_t n = std::size_t(p) - 1;
    const IntMatrix a = companion_alpha(p);
    const IntMatrix x = a - IntMatrix::identity(n);
    const IntMatrix b = x.pow(unsigned(r - 1));
    const SnfResult snf = smith_normal_form(b);
    const auto k = detail::kernel_presentation(snf);

    long long det = 1;
    for (long long d : snf.diagonal) det = checked::mul(det, d);
    long long want = 1;
    for (int t = 0; t < r - 1; ++t) want = checked::mul(want, (long long)p);
    if (det != want) throw std::logic_error("example1: kernel order is not p^{r-1}");

    const IntMatrix t_full = (snf.left * a) * snf.left.unimodular_inverse();
    IntMatrix action(k.invariants.size(), k.invariants.size());
    for (std::size_t i = 0; i < k.kept.size(); ++i)
        for (std::size_t j = 0; j < k.kept.size(); ++j) action(i, j) = t_full(k.kept[i], k.kept[j]);

    // cocycle element: first basis vector whose image in the kernel is
    // nontrivial of order exactly p
    const IntMatrix zmat = x.pow(unsigned(r - 2));
    Element z_id = 0;
    bool found = false;
    for (std::size_t c = 0; c < n && !found; ++c) {
        std::vector<long long> v(n, 0);
        v[c] = 1;
        const Element z = k.encode(zmat.apply(v));
        if (z == 0) continue;
        std::vector<long long> pv(n, 0);
        pv[c] = (long long)p;
        if (k.encode(zmat.apply(pv)) != 0) continue;
        z_id = z;
        found = true;
    }
    if (!found) throw std::logic_error("example1: no basis image of order p for the cocycle");

    ExtensionData data;
    data.p = p;
    data.quotient_invariants = k.invariants;
    data.action = action;
    data.cocycle_element.assign(k.invariants.size(), 0);
    {
        std::uint64_t rest = z_id;
        for (std::size_t t = 0; t < k.invariants.size(); ++t) {
            data.cocycle_element[t] = (long long)(rest / k.stride[t]);
            rest %= k.stride[t];
        }
    }
    return data;
}

inline MaximalClassGroup construct_example1(std::uint64_t p, int r, const Caps& caps = default_caps()) {
    MaximalClassGroup out;
    out.p = p;
    out.r = r;
    out.data = example1_extension_data(p, r);
    out.group = build_extension(out.data, caps);

    const std::uint64_t nk = out.group.order() / p;
    {
        std::uint64_t stride = nk;
        std::vector<Element> kgens;
        MemberSet kset(out.group.order());
        for (Element e = 0; e < nk; ++e) kset.insert(e);
        for (std::uint64_t d : out.data.quotient_invariants) {
            stride /= d;
            kgens.push_back(Element(stride));
        }
        out.kernel = Subgroup(out.group, std::move(kset), std::move(kgens));
    }
    {
        std::uint64_t id = 0, s = nk;
        for (std::size_t t = 0; t < out.data.quotient_invariants.size(); ++t) {
            s /= out.data.quotient_invariants[t];
            id += std::uint64_t(out.data.cocycle_element[t]) * s;
        }
        out.z_id = Element(id);
    }

    // uniserial descent: the image of (alpha-1)^j descends by index p per step
    const std::size_t n = std::size_t(p) - 1;
    const IntMatrix a = companion_alpha(p);
    const IntMatrix x = a - IntMatrix::identity(n);
    const SnfResult snf = smith_normal_form(x.pow(unsigned(r - 1)));
    const auto kp = detail::kernel_presentation(snf);
    std::uint64_t expect = nk;
    for (int j = 1; j <= r - 1; ++j) {
        const IntMatrix xj = x.pow(unsigned(j));
        std::vector<Element> cols;
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<long long> v(n, 0);
            v[c] = 1;
            cols.push_back(kp.encode(xj.apply(v)));
        }
        expect /= p;
        if (generated_subgroup(out.group, cols).order() != expect)
            throw std::logic_error("example1: action is not uniserial at step " + std::to_string(j));
    }
    if (out.z_id == 0 || out.group.element_order(out.z_id) != p)
        throw std::logic_error("example1: cocycle element is not of order p");
    return out;
}

/// Split companion of the family: same kernel and action, zero cocycle.
inline FiniteGroup example1_split(std::uint64_t p, int r, const Caps& caps = default_caps()) {
    ExtensionData data = example1_extension_data(p, r);
    std::fill(data.cocycle_element.begin(), data.cocycle_element.end(), 0);
    return build_extension(data, caps);
}

}  // namespace pgroup
