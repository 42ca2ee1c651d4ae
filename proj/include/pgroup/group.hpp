#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pgroup/caps.hpp"
#include "pgroup/int_matrix.hpp"
#include "pgroup/member_set.hpp"

namespace pgroup {

/// Canonical element id. Every group encodes its elements as 0..order-1
/// with 0 the identity.
using Element = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

/// Exact integer log: returns e with base^e = n, or -1 if n is not a power.
inline int exact_log(std::uint64_t base, std::uint64_t n) {
    if (base < 2) throw std::invalid_argument("exact_log: base must be >= 2");
    int e = 0;
    while (n > 1) {
        if (n % base != 0) return -1;
        n /= base;
        ++e;
    }
    return n == 1 ? e : -1;
}

namespace detail {

struct Backend {
    virtual ~Backend() = default;
    virtual std::size_t order() const = 0;
    virtual Element mul(Element a, Element b) const = 0;
    virtual Element inv(Element a) const = 0;
    virtual const char* kind() const = 0;
    virtual std::vector<Element> builder_generators() const = 0;
};

/// Mixed-radix coordinates for a finite abelian tuple group
/// Z_{d_1} x ... x Z_{d_k}; the last coordinate varies fastest, so the
/// zero tuple encodes as id 0.
struct AbelianCoords {
    std::vector<std::uint64_t> inv;
    std::vector<std::uint64_t> stride;
    std::uint64_t size = 1;
    std::vector<std::uint32_t> coords;  // size * k decode table

    void init(const std::vector<std::uint64_t>& invariants) {
        inv = invariants;
        const std::size_t k = inv.size();
        stride.assign(k, 1);
        size = 1;
        for (std::size_t i = k; i-- > 0;) {
            stride[i] = size;
            size *= inv[i];
        }
        if (k > 0 && size * k > (std::uint64_t(1) << 24))
            throw cap_exceeded("abelian decode table cap (2^24 entries) exceeded");
        coords.assign(std::size_t(size) * k, 0);
        for (std::uint64_t e = 0; e < size; ++e) {
            std::uint64_t r = e;
            for (std::size_t i = 0; i < k; ++i) {
                coords[std::size_t(e) * k + i] = std::uint32_t(r / stride[i]);
                r %= stride[i];
            }
        }
    }

    std::size_t rank() const { return inv.size(); }
    const std::uint32_t* at(Element e) const { return coords.data() + std::size_t(e) * inv.size(); }

    Element encode(const std::uint32_t* c) const {
        std::uint64_t e = 0;
        for (std::size_t i = 0; i < inv.size(); ++i) e += std::uint64_t(c[i]) * stride[i];
        return Element(e);
    }

    Element add(Element a, Element b) const {
        const std::uint32_t* ca = at(a);
        const std::uint32_t* cb = at(b);
        std::uint64_t e = 0;
        for (std::size_t i = 0; i < inv.size(); ++i) {
            std::uint64_t s = std::uint64_t(ca[i]) + cb[i];
            if (s >= inv[i]) s -= inv[i];
            e += s * stride[i];
        }
        return Element(e);
    }

    Element neg(Element a) const {
        const std::uint32_t* ca = at(a);
        std::uint64_t e = 0;
        for (std::size_t i = 0; i < inv.size(); ++i) {
            const std::uint64_t v = ca[i] ? inv[i] - ca[i] : 0;
            e += v * stride[i];
        }
        return Element(e);
    }

    /// Encode an integer tuple, reducing each entry mod its invariant.
    Element encode_reduced(const std::vector<long long>& v) const {
        std::uint64_t e = 0;
        for (std::size_t i = 0; i < inv.size(); ++i) {
            long long r = v[i] % (long long)inv[i];
            if (r < 0) r += (long long)inv[i];
            e += std::uint64_t(r) * stride[i];
        }
        return Element(e);
    }
};

struct TableBackend final : Backend {
    std::size_t n;
    std::vector<Element> table;  // n*n row-major
    std::vector<Element> invs;

    TableBackend(std::size_t n_, std::vector<Element> t) : n(n_), table(std::move(t)) {
        invs.assign(n, Element(n));
        for (Element a = 0; a < n; ++a)
            for (Element b = 0; b < n; ++b)
                if (table[std::size_t(a) * n + b] == 0 && table[std::size_t(b) * n + a] == 0) {
                    invs[a] = b;
                    break;
                }
        for (Element a = 0; a < n; ++a)
            if (invs[a] == Element(n)) throw std::invalid_argument("table has no inverse for some element");
    }

    std::size_t order() const override { return n; }
    Element mul(Element a, Element b) const override { return table[std::size_t(a) * n + b]; }
    Element inv(Element a) const override { return invs[a]; }
    const char* kind() const override { return "table"; }
    std::vector<Element> builder_generators() const override {
        std::vector<Element> g;
        for (Element e = 1; e < n; ++e) g.push_back(e);
        return g;
    }
};

struct AbelianBackend final : Backend {
    AbelianCoords c;

    explicit AbelianBackend(const std::vector<std::uint64_t>& invariants) { c.init(invariants); }

    std::size_t order() const override { return c.size; }
    Element mul(Element a, Element b) const override { return c.add(a, b); }
    Element inv(Element a) const override { return c.neg(a); }
    const char* kind() const override { return "abelian"; }
    std::vector<Element> builder_generators() const override {
        std::vector<Element> g;
        for (std::size_t i = 0; i < c.inv.size(); ++i)
            if (c.inv[i] > 1) g.push_back(Element(c.stride[i]));
        return g;
    }
};

/// Upper unitriangular n x n matrices over Z/p. Above-diagonal entries are
/// stored at positions (i,j), i < j, in lexicographic order; ids are the
/// mixed-radix encoding base p with the last position fastest.
struct UnitriangularBackend final : Backend {
    std::size_t n, m;
    std::uint64_t p;
    std::uint64_t nelems;
    std::vector<std::pair<int, int>> pos;
    std::vector<int> posidx;               // n*n -> position index or -1
    std::vector<std::uint64_t> stride;
    std::vector<std::uint32_t> coords;     // nelems * m
    std::vector<std::uint32_t> modtab;

    UnitriangularBackend(std::size_t n_, std::uint64_t p_) : n(n_), p(p_) {
        m = n * (n - 1) / 2;
        posidx.assign(n * n, -1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                posidx[i * n + j] = int(pos.size());
                pos.emplace_back(int(i), int(j));
            }
        stride.assign(m, 1);
        nelems = 1;
        for (std::size_t t = m; t-- > 0;) {
            stride[t] = nelems;
            nelems *= p;
        }
        coords.assign(std::size_t(nelems) * m, 0);
        for (std::uint64_t e = 0; e < nelems; ++e) {
            std::uint64_t r = e;
            for (std::size_t t = 0; t < m; ++t) {
                coords[std::size_t(e) * m + t] = std::uint32_t(r / stride[t]);
                r %= stride[t];
            }
        }
        const std::uint64_t maxval = 2 * (p - 1) + (n > 2 ? (n - 2) * (p - 1) * (p - 1) : 0);
        modtab.resize(maxval + 1);
        for (std::uint64_t v = 0; v <= maxval; ++v) modtab[v] = std::uint32_t(v % p);
    }

    const std::uint32_t* at(Element e) const { return coords.data() + std::size_t(e) * m; }

    std::size_t order() const override { return nelems; }

    Element mul(Element a, Element b) const override {
        const std::uint32_t* ca = at(a);
        const std::uint32_t* cb = at(b);
        std::uint64_t e = 0;
        for (std::size_t t = 0; t < m; ++t) {
            const int i = pos[t].first, j = pos[t].second;
            std::uint64_t s = std::uint64_t(ca[t]) + cb[t];
            for (int k = i + 1; k < j; ++k)
                s += std::uint64_t(ca[posidx[i * n + k]]) * cb[posidx[k * n + j]];
            e += std::uint64_t(modtab[s]) * stride[t];
        }
        return Element(e);
    }

    Element inv(Element a) const override {
        const std::uint32_t* ca = at(a);
        // solve U * V = I for V, filling by increasing band j - i
        std::vector<std::uint32_t> v(m, 0);
        for (std::size_t band = 1; band < n; ++band)
            for (std::size_t i = 0; i + band < n; ++i) {
                const std::size_t j = i + band;
                std::uint64_t s = ca[posidx[i * n + j]];
                for (std::size_t k = i + 1; k < j; ++k)
                    s += std::uint64_t(ca[posidx[i * n + k]]) * v[posidx[k * n + j]];
                const std::uint64_t r = s % p;
                v[posidx[i * n + j]] = std::uint32_t(r ? p - r : 0);
            }
        std::uint64_t e = 0;
        for (std::size_t t = 0; t < m; ++t) e += std::uint64_t(v[t]) * stride[t];
        return Element(e);
    }

    const char* kind() const override { return "unitriangular"; }

    std::vector<Element> builder_generators() const override {
        // elementary transvections on the superdiagonal generate the group
        std::vector<Element> g;
        for (std::size_t i = 0; i + 1 < n; ++i)
            g.push_back(Element(stride[posidx[i * n + (i + 1)]]));
        return g;
    }
};

/// Cyclic-by-abelian extension on pairs (j, v), j in 0..p-1, v in the
/// abelian kernel N, with law
///   (j1,v1)(j2,v2) = ((j1+j2) mod p, alpha^{j2}(v1) + v2 + carry * z).
/// Ids are j * |N| + v, so the kernel occupies ids 0..|N|-1.
struct ExtensionBackend final : Backend {
    std::uint64_t p;
    AbelianCoords kernel;
    std::uint64_t nk;                      // |N|
    std::vector<std::uint32_t> alpha_tab;  // p * nk, alpha^j by kernel id
    Element z = 0, neg_z = 0;

    std::size_t order() const override { return std::size_t(p) * nk; }

    Element kernel_alpha(std::uint64_t j, Element v) const { return alpha_tab[std::size_t(j) * nk + v]; }

    Element mul(Element a, Element b) const override {
        const std::uint64_t ja = a / nk, jb = b / nk;
        const Element va = Element(a % nk), vb = Element(b % nk);
        Element v = kernel.add(kernel_alpha(jb, va), vb);
        std::uint64_t js = ja + jb;
        if (js >= p) {
            js -= p;
            v = kernel.add(v, z);
        }
        return Element(js * nk + v);
    }

    Element inv(Element a) const override {
        const std::uint64_t ja = a / nk;
        const Element va = Element(a % nk);
        const std::uint64_t jr = ja ? p - ja : 0;
        Element v = kernel.neg(kernel_alpha(jr, va));
        if (ja) v = kernel.add(v, neg_z);
        return Element(jr * nk + v);
    }

    const char* kind() const override { return "extension"; }

    std::vector<Element> builder_generators() const override {
        std::vector<Element> g;
        g.push_back(Element(nk));  // the distinguished generator y = (1, 0)
        for (std::size_t i = 0; i < kernel.inv.size(); ++i)
            if (kernel.inv[i] > 1) g.push_back(Element(kernel.stride[i]));
        return g;
    }
};

struct ProductBackend final : Backend {
    std::vector<std::shared_ptr<const Backend>> factors;
    std::vector<std::uint64_t> stride;
    std::uint64_t n = 1;

    std::size_t order() const override { return n; }

    Element mul(Element a, Element b) const override {
        std::uint64_t e = 0, ra = a, rb = b;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            const Element fa = Element(ra / stride[i]), fb = Element(rb / stride[i]);
            ra %= stride[i];
            rb %= stride[i];
            e += std::uint64_t(factors[i]->mul(fa, fb)) * stride[i];
        }
        return Element(e);
    }

    Element inv(Element a) const override {
        std::uint64_t e = 0, ra = a;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            const Element fa = Element(ra / stride[i]);
            ra %= stride[i];
            e += std::uint64_t(factors[i]->inv(fa)) * stride[i];
        }
        return Element(e);
    }

    const char* kind() const override { return "product"; }

    std::vector<Element> builder_generators() const override {
        std::vector<Element> g;
        for (std::size_t i = 0; i < factors.size(); ++i)
            for (Element fg : factors[i]->builder_generators())
                g.push_back(Element(std::uint64_t(fg) * stride[i]));
        return g;
    }
};

struct QuotientBackend final : Backend {
    std::shared_ptr<const Backend> parent;
    std::vector<Element> reps;  // coset id -> smallest parent id in the coset
    std::vector<Element> proj;  // parent id -> coset id

    std::size_t order() const override { return reps.size(); }
    Element mul(Element a, Element b) const override { return proj[parent->mul(reps[a], reps[b])]; }
    Element inv(Element a) const override { return proj[parent->inv(reps[a])]; }
    const char* kind() const override { return "quotient"; }
    std::vector<Element> builder_generators() const override {
        std::vector<Element> g;
        for (Element pg : parent->builder_generators()) {
            const Element q = proj[pg];
            if (q != 0) g.push_back(q);
        }
        return g;
    }
};

/// Raw storage for a cached subgroup enumeration plus lazily computed
/// per-subgroup structure (lower central terms, power subgroups).
struct SubgroupLattice {
    std::vector<MemberSet> members;
    std::vector<std::vector<Element>> gens;
    std::vector<char> gamma_done;
    std::vector<std::vector<MemberSet>> gamma;
    std::map<std::pair<std::size_t, std::uint64_t>, MemberSet> power_cache;
};

struct GroupCache {
    std::recursive_mutex m;
    std::optional<std::uint64_t> prime;
    int prime_exp = 0;
    bool prime_done = false;
    std::vector<Element> inverses;
    std::vector<Element> flat_table;
    bool table_tried = false;
    std::vector<Element> small_gens;
    bool small_gens_done = false;
    std::vector<Element> builder_gens;
    bool builder_gens_done = false;
    std::uint64_t exponent = 0;
    MemberSet derived;  // empty universe = not yet computed
    MemberSet center;
    std::vector<MemberSet> lcs;
    std::map<std::uint64_t, MemberSet> power_sets;
    std::map<int, MemberSet> omega_sets;
    std::map<int, MemberSet> omega_subs;
    std::shared_ptr<SubgroupLattice> all_subs;
    std::shared_ptr<SubgroupLattice> normal_subs;
};

}  // namespace detail

/// Unchecked multiplication handle for hot loops; grabs the dense table
/// when one has been materialized.
class FastMul {
public:
    FastMul(const Element* table, const Element* invs, const detail::Backend* be, std::size_t n)
        : table_(table), invs_(invs), be_(be), n_(n) {}

    std::size_t order() const { return n_; }
    Element mul(Element a, Element b) const {
        return table_ ? table_[std::size_t(a) * n_ + b] : be_->mul(a, b);
    }
    Element inv(Element a) const { return invs_[a]; }

    Element pow(Element a, long long e) const {
        if (e < 0) return pow(inv(a), -e);
        Element acc = 0, base = a;
        while (e) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    Element commutator(Element a, Element b) const {
        return mul(mul(inv(a), inv(b)), mul(a, b));
    }

private:
    const Element* table_;
    const Element* invs_;
    const detail::Backend* be_;
    std::size_t n_;
};

/// An exactly represented finite group. Immutable after construction;
/// copies share the backend and the memo cache.
class FiniteGroup {
public:
    FiniteGroup() = default;

    std::size_t order() const { return impl_->order(); }
    Element identity() const { return 0; }
    const char* backend_kind() const { return impl_->kind(); }
    std::uint64_t table_cap() const { return table_cap_; }

    bool valid() const { return impl_ != nullptr; }
    bool same_as(const FiniteGroup& o) const { return impl_ == o.impl_; }

    Element mul(Element a, Element b) const {
        require_elem(a);
        require_elem(b);
        return impl_->mul(a, b);
    }

    Element inverse(Element a) const {
        require_elem(a);
        return impl_->inv(a);
    }

    Element power(Element a, long long e) const {
        require_elem(a);
        return fast().pow(a, e);
    }

    /// Least m >= 1 with a^m = identity; always divides the group order.
    std::size_t element_order(Element a) const {
        require_elem(a);
        const FastMul fm = fast();
        std::uint64_t m = order();
        for (std::uint64_t q : prime_factors(order()))
            while (m % q == 0 && fm.pow(a, (long long)(m / q)) == 0) m /= q;
        return m;
    }

    /// The prime p when the order is a nontrivial prime power, else empty.
    std::optional<std::uint64_t> prime() const {
        auto& c = cache();
        std::lock_guard<std::recursive_mutex> lk(c.m);
        if (!c.prime_done) {
            auto fs = prime_factors(order());
            if (fs.size() == 1) {
                c.prime = fs[0];
                c.prime_exp = exact_log(fs[0], order());
            }
            c.prime_done = true;
        }
        return c.prime;
    }

    /// n with order = p^n for p-groups; 0 for the trivial group.
    int prime_exponent() const {
        if (order() == 1) return 0;
        auto p = prime();
        if (!p) throw std::domain_error("group order is not a prime power");
        std::lock_guard<std::recursive_mutex> lk(cache().m);
        return cache().prime_exp;
    }

    const std::vector<Element>& inverse_table() const {
        auto& c = cache();
        std::lock_guard<std::recursive_mutex> lk(c.m);
        if (c.inverses.empty() && order() > 0) {
            c.inverses.resize(order());
            for (Element a = 0; a < order(); ++a) c.inverses[a] = impl_->inv(a);
        }
        return c.inverses;
    }

    /// Handle for hot loops. Materializes the dense table once for small
    /// orders; larger groups multiply through the structured backend.
    FastMul fast() const {
        auto& c = cache();
        const auto& invs = inverse_table();
        std::lock_guard<std::recursive_mutex> lk(c.m);
        const std::size_t n = order();
        if (!c.table_tried) {
            c.table_tried = true;
            if (n >= 2 && n <= kAutoTableOrder) {
                c.flat_table.resize(n * n);
                for (Element a = 0; a < n; ++a)
                    for (Element b = 0; b < n; ++b)
                        c.flat_table[std::size_t(a) * n + b] = impl_->mul(a, b);
            }
        }
        return FastMul(c.flat_table.empty() ? nullptr : c.flat_table.data(), invs.data(), impl_.get(), n);
    }

    /// A small (not necessarily minimal) generating set, deterministic.
    const std::vector<Element>& generators() const;

    const std::vector<Element>& builder_generators() const {
        auto& c = cache();
        std::lock_guard<std::recursive_mutex> lk(c.m);
        if (!c.builder_gens_done) {
            if (order() > 1) c.builder_gens = impl_->builder_generators();
            c.builder_gens_done = true;
        }
        return c.builder_gens;
    }

    detail::GroupCache& cache() const { return *cache_; }
    const detail::Backend* backend() const { return impl_.get(); }
    std::shared_ptr<const detail::Backend> backend_shared() const { return impl_; }

    static FiniteGroup wrap(std::shared_ptr<const detail::Backend> be, std::uint64_t table_cap) {
        FiniteGroup g;
        g.impl_ = std::move(be);
        g.cache_ = std::make_shared<detail::GroupCache>();
        g.table_cap_ = table_cap;
        return g;
    }

private:
    static constexpr std::size_t kAutoTableOrder = 1024;

    void require_elem(Element a) const {
        if (!impl_ || a >= impl_->order()) throw std::out_of_range("element id out of range");
    }

    std::shared_ptr<const detail::Backend> impl_;
    std::shared_ptr<detail::GroupCache> cache_;
    std::uint64_t table_cap_ = 4096;
};

namespace detail {

/// Subgroup generated by gens, as a member bitset: breadth-first closure
/// under right multiplication by the generators.
inline MemberSet closure(const FastMul& fm, const std::vector<Element>& gens) {
    MemberSet s(fm.order());
    s.insert(0);
    std::vector<Element> queue;
    queue.push_back(0);
    while (!queue.empty()) {
        const Element x = queue.back();
        queue.pop_back();
        for (Element g : gens) {
            const Element y = fm.mul(x, g);
            if (s.insert(y)) queue.push_back(y);
        }
    }
    return s;
}

}  // namespace detail

inline const std::vector<Element>& FiniteGroup::generators() const {
    auto& c = cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    if (!c.small_gens_done) {
        const FastMul fm = fast();
        MemberSet have(order());
        have.insert(0);
        for (Element e = 1; e < order() && have.count() < order(); ++e) {
            if (have.test(e)) continue;
            c.small_gens.push_back(e);
            have = detail::closure(fm, c.small_gens);
        }
        c.small_gens_done = true;
    }
    return c.small_gens;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline FiniteGroup build_abelian(const std::vector<std::uint64_t>& invariants,
                                 const Caps& caps = default_caps()) {
    if (invariants.empty()) throw std::invalid_argument("build_abelian: empty invariant list");
    std::uint64_t n = 1;
    for (std::uint64_t d : invariants) {
        if (d < 1) throw std::invalid_argument("build_abelian: invariants must be positive");
        n = checked::mul((long long)n, (long long)d);
    }
    if (n > caps.max_order) throw cap_exceeded("build_abelian: order exceeds max_order cap");
    return FiniteGroup::wrap(std::make_shared<detail::AbelianBackend>(invariants), caps.table_order);
}

inline FiniteGroup build_cyclic(std::uint64_t n, const Caps& caps = default_caps()) {
    if (n < 1) throw std::invalid_argument("build_cyclic: n must be >= 1");
    return build_abelian({n}, caps);
}

inline FiniteGroup build_direct_product(const std::vector<FiniteGroup>& factors,
                                        const Caps& caps = default_caps()) {
    if (factors.empty()) throw std::invalid_argument("build_direct_product: no factors");
    auto be = std::make_shared<detail::ProductBackend>();
    std::uint64_t n = 1;
    for (const auto& f : factors) n = checked::mul((long long)n, (long long)f.order());
    if (n > caps.max_order) throw cap_exceeded("build_direct_product: order exceeds max_order cap");
    be->n = n;
    std::uint64_t s = n;
    for (const auto& f : factors) {
        s /= f.order();
        be->stride.push_back(s);
        be->factors.push_back(f.backend_shared());
    }
    return FiniteGroup::wrap(be, caps.table_order);
}

inline FiniteGroup build_unitriangular(std::size_t n, std::uint64_t p,
                                       const Caps& caps = default_caps()) {
    if (n < 2) throw std::invalid_argument("build_unitriangular: n must be >= 2");
    if (!is_prime(p)) throw std::invalid_argument("build_unitriangular: p must be prime");
    const std::size_t m = n * (n - 1) / 2;
    std::uint64_t order = 1;
    for (std::size_t t = 0; t < m; ++t) {
        order = checked::mul((long long)order, (long long)p);
        if (order > caps.max_order) throw cap_exceeded("build_unitriangular: order exceeds max_order cap");
    }
    return FiniteGroup::wrap(std::make_shared<detail::UnitriangularBackend>(n, p), caps.table_order);
}

inline FiniteGroup build_from_table(std::vector<Element> table, std::size_t n,
                                    const Caps& caps = default_caps()) {
    if (n < 1 || table.size() != n * n) throw std::invalid_argument("build_from_table: bad table size");
    if (n > caps.table_order) throw cap_exceeded("build_from_table: order exceeds table_order cap");
    for (Element v : table)
        if (v >= n) throw std::invalid_argument("build_from_table: entry out of range");
    for (Element a = 0; a < n; ++a)
        if (table[a] != a || table[std::size_t(a) * n] != a)
            throw std::invalid_argument("build_from_table: id 0 is not the identity");
    return FiniteGroup::wrap(std::make_shared<detail::TableBackend>(n, std::move(table)), caps.table_order);
}

/// Cyclic-by-abelian extension data: the kernel N as an abelian invariant
/// tuple, the action of the distinguished order-p generator on N, and the
/// kernel element adjoined when exponents wrap past p (zero = split).
struct ExtensionData {
    std::uint64_t p = 0;
    std::vector<std::uint64_t> quotient_invariants;
    IntMatrix action;
    std::vector<long long> cocycle_element;
};

namespace detail {

inline Element apply_action_tuple(const AbelianCoords& k, const IntMatrix& act, Element v) {
    std::vector<long long> out(k.rank(), 0);
    const std::uint32_t* cv = k.at(v);
    for (std::size_t i = 0; i < k.rank(); ++i) {
        long long s = 0;
        for (std::size_t j = 0; j < k.rank(); ++j)
            s = checked::add(s, checked::mul(act(i, j) % (long long)k.inv[i], (long long)cv[j]));
        out[i] = s;
    }
    return k.encode_reduced(out);
}

}  // namespace detail

inline FiniteGroup build_extension(const ExtensionData& data, const Caps& caps = default_caps()) {
    if (!is_prime(data.p)) throw std::invalid_argument("build_extension: p must be prime");
    if (data.quotient_invariants.empty())
        throw std::invalid_argument("build_extension: empty kernel invariant list");
    for (std::uint64_t d : data.quotient_invariants)
        if (d < 1) throw std::invalid_argument("build_extension: invariants must be positive");
    const std::size_t k = data.quotient_invariants.size();
    if (data.action.rows() != k || data.action.cols() != k)
        throw std::invalid_argument("build_extension: action matrix dimension mismatch");
    if (data.cocycle_element.size() != k)
        throw std::invalid_argument("build_extension: cocycle dimension mismatch");

    auto be = std::make_shared<detail::ExtensionBackend>();
    be->p = data.p;
    be->kernel.init(data.quotient_invariants);
    be->nk = be->kernel.size;
    const std::uint64_t order = checked::mul((long long)data.p, (long long)be->nk);
    if (order > caps.max_order) throw cap_exceeded("build_extension: order exceeds max_order cap");

    // well-definedness of the action on the invariant tuple
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i) {
            const long long v = checked::mul(data.action(i, j), (long long)data.quotient_invariants[j]);
            if (v % (long long)data.quotient_invariants[i] != 0)
                throw std::invalid_argument("build_extension: action is not well defined mod the invariants");
        }

    // one-step action table, then compose for alpha^j
    be->alpha_tab.resize(std::size_t(data.p) * be->nk);
    for (Element v = 0; v < be->nk; ++v) be->alpha_tab[v] = v;  // alpha^0
    std::vector<std::uint32_t> step(be->nk);
    for (Element v = 0; v < be->nk; ++v) step[v] = detail::apply_action_tuple(be->kernel, data.action, v);
    for (std::uint64_t j = 1; j < data.p; ++j)
        for (Element v = 0; v < be->nk; ++v)
            be->alpha_tab[std::size_t(j) * be->nk + v] = step[be->alpha_tab[std::size_t(j - 1) * be->nk + v]];

    // the action must be an automorphism of order dividing p: alpha^p = id
    for (Element v = 0; v < be->nk; ++v)
        if (step[be->alpha_tab[std::size_t(data.p - 1) * be->nk + v]] != v)
            throw std::invalid_argument("build_extension: action order does not divide p");

    be->z = be->kernel.encode_reduced(data.cocycle_element);
    be->neg_z = be->kernel.neg(be->z);
    if (step[be->z] != be->z)
        throw std::invalid_argument("build_extension: cocycle element is not fixed by the action");
    {
        Element zp = be->z;
        for (std::uint64_t t = 1; t < data.p; ++t) zp = be->kernel.add(zp, be->z);
        if (zp != 0) throw std::invalid_argument("build_extension: cocycle element order does not divide p");
    }
    return FiniteGroup::wrap(be, caps.table_order);
}

/// The group <a, b | a^{p^2} = b^p = 1, a^b = a^{1+p}> of order p^3.
inline FiniteGroup build_modular(std::uint64_t p, const Caps& caps = default_caps()) {
    if (!is_prime(p)) throw std::invalid_argument("build_modular: p must be prime");
    ExtensionData d;
    d.p = p;
    d.quotient_invariants = {p * p};
    d.action = IntMatrix(1, 1);
    d.action(0, 0) = (long long)(1 + p);
    d.cocycle_element = {0};
    return build_extension(d, caps);
}

// ---------------------------------------------------------------------------
// Group-axiom validation
// ---------------------------------------------------------------------------

struct AxiomReport {
    bool ok = false;
    bool exhaustive_associativity = false;
    std::uint64_t triples_checked = 0;
    std::string detail;
};

/// Identity and inverse laws exhaustively; associativity exhaustively for
/// small orders and on 10^5 seeded triples above the cap. Never silent:
/// the report says which mode ran.
inline AxiomReport check_group_axioms(const FiniteGroup& g, const Caps& caps = default_caps(),
                                      std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
    AxiomReport rep;
    const std::size_t n = g.order();
    const FastMul fm = g.fast();
    for (Element a = 0; a < n; ++a) {
        if (fm.mul(0, a) != a || fm.mul(a, 0) != a) {
            rep.detail = "identity law fails at " + std::to_string(a);
            return rep;
        }
        const Element ia = fm.inv(a);
        if (fm.mul(a, ia) != 0 || fm.mul(ia, a) != 0) {
            rep.detail = "inverse law fails at " + std::to_string(a);
            return rep;
        }
    }
    auto bad_triple = [&](Element a, Element b, Element c) {
        return fm.mul(fm.mul(a, b), c) != fm.mul(a, fm.mul(b, c));
    };
    if (n <= caps.assoc_exhaustive_order) {
        rep.exhaustive_associativity = true;
        for (Element a = 0; a < n; ++a)
            for (Element b = 0; b < n; ++b)
                for (Element c = 0; c < n; ++c) {
                    ++rep.triples_checked;
                    if (bad_triple(a, b, c)) {
                        rep.detail = "associativity fails";
                        return rep;
                    }
                }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<Element> dist(0, Element(n - 1));
        for (int t = 0; t < 100000; ++t) {
            ++rep.triples_checked;
            if (bad_triple(dist(rng), dist(rng), dist(rng))) {
                rep.detail = "associativity fails";
                return rep;
            }
        }
    }
    rep.ok = true;
    return rep;
}

}  // namespace pgroup
