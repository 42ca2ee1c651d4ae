#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pgroup/group.hpp"

namespace pgroup {

/// A sub-group of a parent FiniteGroup: closed member set plus a generating
/// list. Instances produced by this module always satisfy the closure
/// invariants; verify_subgroup re-checks them from scratch.
class Subgroup {
public:
    Subgroup() = default;
    Subgroup(FiniteGroup parent, MemberSet members, std::vector<Element> gens)
        : parent_(std::move(parent)), members_(std::move(members)), gens_(std::move(gens)) {}

    const FiniteGroup& parent() const { return parent_; }
    const MemberSet& members() const { return members_; }
    const std::vector<Element>& generators() const { return gens_; }

    std::size_t order() const { return members_.count(); }
    std::uint64_t index() const { return parent_.order() / order(); }
    bool contains(Element e) const { return members_.test(e); }
    bool contains(const Subgroup& o) const { return members_.contains_all(o.members()); }
    bool is_whole() const { return order() == parent_.order(); }
    bool is_trivial() const { return order() == 1; }
    std::vector<Element> member_list() const { return members_.to_list(); }

private:
    FiniteGroup parent_;
    MemberSet members_;
    std::vector<Element> gens_;
};

namespace detail {

inline void require_parent(const FiniteGroup& g, const Subgroup& h, const char* who) {
    if (!h.parent().same_as(g)) throw std::invalid_argument(std::string(who) + ": subgroup has a different parent group");
}

/// Greedy deterministic generating list for <s>. The input need not be
/// closed; the generators produced generate the subgroup s spans.
inline std::vector<Element> set_generators(const FiniteGroup& g, const MemberSet& s) {
    std::vector<Element> gens;
    if (s.count() <= 1) return gens;
    const FastMul fm = g.fast();
    MemberSet have(g.order());
    have.insert(0);
    bool done = false;
    s.for_each([&](Element e) {
        if (done || have.test(e)) return;
        gens.push_back(e);
        have = closure(fm, gens);
        if (have.contains_all(s)) done = true;
    });
    return gens;
}

inline MemberSet join_sets(const FiniteGroup& g, const MemberSet& a, const MemberSet& b) {
    if (a.contains_all(b)) return a;
    if (b.contains_all(a)) return b;
    std::vector<Element> gens = set_generators(g, a);
    for (Element e : set_generators(g, b)) gens.push_back(e);
    return closure(g.fast(), gens);
}

/// Exhaustive commutator closure: the subgroup generated by every [a,b]
/// with a in A, b in B. No generator shortcuts; the commutator value set
/// is scanned in full.
inline MemberSet commutator_closure(const FiniteGroup& g, const MemberSet& a, const MemberSet& b) {
    const FastMul fm = g.fast();
    MemberSet vals(g.order());
    std::vector<Element> gens;
    a.for_each([&](Element x) {
        const Element ix = fm.inv(x);
        b.for_each([&](Element y) {
            const Element c = fm.mul(fm.mul(ix, fm.inv(y)), fm.mul(x, y));
            if (vals.insert(c) && c != 0) gens.push_back(c);
        });
    });
    return closure(fm, gens);
}

/// Subgroup generated by the q-th powers of the members of h.
inline MemberSet power_closure(const FiniteGroup& g, const MemberSet& h, std::uint64_t q) {
    const FastMul fm = g.fast();
    MemberSet vals(g.order());
    std::vector<Element> gens;
    h.for_each([&](Element x) {
        const Element y = fm.pow(x, (long long)q);
        if (vals.insert(y) && y != 0) gens.push_back(y);
    });
    return closure(fm, gens);
}

inline MemberSet whole_set(const FiniteGroup& g) {
    MemberSet s(g.order());
    for (Element e = 0; e < g.order(); ++e) s.insert(e);
    return s;
}

inline const MemberSet& derived_set(const FiniteGroup& g) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    if (c.derived.empty_universe()) {
        const MemberSet w = whole_set(g);
        c.derived = commutator_closure(g, w, w);
    }
    return c.derived;
}

inline const std::vector<MemberSet>& lcs_sets(const FiniteGroup& g) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    if (c.lcs.empty()) {
        std::vector<MemberSet> terms;
        terms.push_back(whole_set(g));
        while (terms.back().count() > 1) {
            MemberSet next = (terms.size() == 1)
                                 ? derived_set(g)
                                 : commutator_closure(g, terms.back(), terms.front());
            if (next.count() == terms.back().count()) {
                // a p-group is nilpotent, so the series must strictly descend
                throw std::logic_error("lower_central_series: series stalled (group is not nilpotent)");
            }
            terms.push_back(std::move(next));
        }
        c.lcs = std::move(terms);
    }
    return c.lcs;
}

inline const MemberSet& power_set(const FiniteGroup& g, std::uint64_t q) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    auto it = c.power_sets.find(q);
    if (it == c.power_sets.end()) {
        MemberSet s = power_closure(g, whole_set(g), q);
        it = c.power_sets.emplace(q, std::move(s)).first;
    }
    return it->second;
}

inline const MemberSet& omega_set_cached(const FiniteGroup& g, int i) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    auto it = c.omega_sets.find(i);
    if (it == c.omega_sets.end()) {
        const std::uint64_t p = *g.prime();
        std::uint64_t q = 1;
        for (int t = 0; t < i; ++t) q *= p;
        const FastMul fm = g.fast();
        MemberSet s(g.order());
        for (Element e = 0; e < g.order(); ++e)
            if (fm.pow(e, (long long)q) == 0) s.insert(e);
        it = c.omega_sets.emplace(i, std::move(s)).first;
    }
    return it->second;
}

/// Center of the subgroup spanned by h, computed intrinsically: the
/// members of h commuting with a generating set of h.
inline MemberSet center_set_of(const FiniteGroup& g, const MemberSet& h) {
    const FastMul fm = g.fast();
    const std::vector<Element> hgens = set_generators(g, h);
    MemberSet out(g.order());
    h.for_each([&](Element e) {
        for (Element x : hgens)
            if (fm.mul(e, x) != fm.mul(x, e)) return;
        out.insert(e);
    });
    return out;
}

inline const MemberSet& center_set(const FiniteGroup& g) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    if (c.center.empty_universe()) {
        const FastMul fm = g.fast();
        const auto& gens = g.generators();
        MemberSet s(g.order());
        for (Element e = 0; e < g.order(); ++e) {
            bool central = true;
            for (Element x : gens)
                if (fm.mul(e, x) != fm.mul(x, e)) {
                    central = false;
                    break;
                }
            if (central) s.insert(e);
        }
        c.center = std::move(s);
    }
    return c.center;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generation and basic constructions
// ---------------------------------------------------------------------------

inline Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<Element>& gens) {
    for (Element e : gens)
        if (e >= g.order()) throw std::out_of_range("generated_subgroup: element id out of range");
    std::vector<Element> clean;
    for (Element e : gens)
        if (e != 0 && std::find(clean.begin(), clean.end(), e) == clean.end()) clean.push_back(e);
    MemberSet members = detail::closure(g.fast(), clean);
    return Subgroup(g, std::move(members), std::move(clean));
}

inline Subgroup trivial_subgroup(const FiniteGroup& g) { return generated_subgroup(g, {}); }

inline Subgroup whole_subgroup(const FiniteGroup& g) {
    return Subgroup(g, detail::whole_set(g), g.generators());
}

inline Subgroup subgroup_from_set(const FiniteGroup& g, const MemberSet& s) {
    return Subgroup(g, s, detail::set_generators(g, s));
}

/// Re-derives every Subgroup invariant from scratch.
inline bool verify_subgroup(const Subgroup& h) {
    const FiniteGroup& g = h.parent();
    if (!g.valid() || h.members().universe() != g.order()) return false;
    if (!h.members().test(0)) return false;
    if (g.order() % h.order() != 0) return false;
    const FastMul fm = g.fast();
    bool closed = true;
    h.members().for_each([&](Element a) {
        if (!closed) return;
        if (!h.members().test(fm.inv(a))) closed = false;
        h.members().for_each([&](Element b) {
            if (closed && !h.members().test(fm.mul(a, b))) closed = false;
        });
    });
    if (!closed) return false;
    for (Element e : h.generators())
        if (!h.members().test(e)) return false;
    return detail::closure(fm, h.generators()) == h.members();
}

inline Subgroup join(const Subgroup& a, const Subgroup& b) {
    detail::require_parent(a.parent(), b, "join");
    std::vector<Element> gens = a.generators();
    for (Element e : b.generators()) gens.push_back(e);
    return generated_subgroup(a.parent(), gens);
}

// ---------------------------------------------------------------------------
// Commutator and power structure
// ---------------------------------------------------------------------------

inline Subgroup commutator_subgroup(const FiniteGroup& g, const Subgroup& a, const Subgroup& b) {
    detail::require_parent(g, a, "commutator_subgroup");
    detail::require_parent(g, b, "commutator_subgroup");
    MemberSet s = detail::commutator_closure(g, a.members(), b.members());
    return subgroup_from_set(g, s);
}

inline Subgroup derived_subgroup(const FiniteGroup& g) {
    return subgroup_from_set(g, detail::derived_set(g));
}

inline bool is_abelian(const FiniteGroup& g) { return detail::derived_set(g).count() == 1; }

/// q must be a power of the group prime (q = 1 is allowed).
inline void require_p_power(const FiniteGroup& g, std::uint64_t q, const char* who) {
    if (q == 1) return;
    auto p = g.prime();
    if (!p || exact_log(*p, q) < 0)
        throw std::invalid_argument(std::string(who) + ": exponent is not a power of the group prime");
}

inline Subgroup power_subgroup(const FiniteGroup& g, const Subgroup& h, std::uint64_t q) {
    detail::require_parent(g, h, "power_subgroup");
    require_p_power(g, q, "power_subgroup");
    if (h.is_whole()) return subgroup_from_set(g, detail::power_set(g, q));
    return subgroup_from_set(g, detail::power_closure(g, h.members(), q));
}

struct SeriesRecord {
    std::vector<Subgroup> terms;  // gamma_1 = G down to the trivial subgroup
    int nilpotency_class = 0;     // first k with gamma_{k+1} trivial
};

inline SeriesRecord lower_central_series(const FiniteGroup& g) {
    const auto& sets = detail::lcs_sets(g);
    SeriesRecord rec;
    for (const auto& s : sets) rec.terms.push_back(subgroup_from_set(g, s));
    rec.nilpotency_class = int(sets.size()) - 1;
    return rec;
}

inline int nilpotency_class(const FiniteGroup& g) { return int(detail::lcs_sets(g).size()) - 1; }

/// gamma_k(G) with gamma_1 = G; k past the series returns the trivial term.
inline Subgroup lower_central_term(const FiniteGroup& g, int k) {
    if (k < 1) throw std::invalid_argument("lower_central_term: k must be >= 1");
    const auto& sets = detail::lcs_sets(g);
    const std::size_t idx = std::min<std::size_t>(std::size_t(k) - 1, sets.size() - 1);
    return subgroup_from_set(g, sets[idx]);
}

// ---------------------------------------------------------------------------
// Omega sets, Frattini quotient, center
// ---------------------------------------------------------------------------

/// Elements of order dividing p^i (includes the identity).
inline MemberSet omega_set(const FiniteGroup& g, int i) {
    if (i < 1) throw std::invalid_argument("omega_set: i must be >= 1");
    if (g.order() > 1 && !g.prime()) throw std::domain_error("omega_set: group is not a p-group");
    if (g.order() == 1) return detail::whole_set(g);
    return detail::omega_set_cached(g, i);
}

inline Subgroup omega_subgroup(const FiniteGroup& g, int i) {
    if (i < 1) throw std::invalid_argument("omega_subgroup: i must be >= 1");
    if (g.order() > 1 && !g.prime()) throw std::domain_error("omega_subgroup: group is not a p-group");
    if (g.order() == 1) return whole_subgroup(g);
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    auto it = c.omega_subs.find(i);
    if (it == c.omega_subs.end()) {
        const MemberSet& s = detail::omega_set_cached(g, i);
        std::vector<Element> gens = detail::set_generators(g, s);
        MemberSet sub = detail::closure(g.fast(), gens);
        it = c.omega_subs.emplace(i, std::move(sub)).first;
    }
    return subgroup_from_set(g, it->second);
}

inline Subgroup frattini_subgroup(const FiniteGroup& g) {
    if (g.order() == 1) return whole_subgroup(g);
    auto p = g.prime();
    if (!p) throw std::domain_error("frattini_subgroup: group is not a p-group");
    MemberSet s = detail::join_sets(g, detail::power_set(g, *p), detail::derived_set(g));
    return subgroup_from_set(g, s);
}

/// d(G) = log_p |G : G^p [G,G]| (Burnside basis theorem).
inline int min_generators(const FiniteGroup& g) {
    if (g.order() == 1) return 0;
    auto p = g.prime();
    if (!p) throw std::domain_error("min_generators: group is not a p-group");
    const Subgroup phi = frattini_subgroup(g);
    const int d = exact_log(*p, g.order() / phi.order());
    if (d < 0) throw std::logic_error("min_generators: Frattini index is not a p-power");
    return d;
}

inline Subgroup center(const FiniteGroup& g) {
    return subgroup_from_set(g, detail::center_set(g));
}

inline std::uint64_t exponent(const FiniteGroup& g) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    if (c.exponent == 0) {
        std::uint64_t e = 1;
        for (Element a = 0; a < g.order(); ++a)
            e = std::lcm<std::uint64_t>(e, g.element_order(a));
        c.exponent = e;
    }
    return c.exponent;
}

// ---------------------------------------------------------------------------
// Powerful / regular predicates
// ---------------------------------------------------------------------------

/// [G,G] <= G^p for odd p; [G,G] <= G^4 for p = 2.
inline bool is_powerful(const FiniteGroup& g) {
    if (g.order() == 1) return true;
    auto p = g.prime();
    if (!p) throw std::domain_error("is_powerful: group is not a p-group");
    const std::uint64_t q = (*p == 2) ? 4 : *p;
    return detail::power_set(g, q).contains_all(detail::derived_set(g));
}

struct RegularityResult {
    bool regular = false;
    bool checked = false;
    std::optional<std::pair<Element, Element>> witness;  // violating pair when !regular
};

/// i-regularity: for all pairs, (xy)^{-p^i} x^{p^i} y^{p^i} lies in
/// [<x,y>, <x,y>]^{p^i}. Exhaustive over all pairs; refuses beyond the cap.
inline RegularityResult is_i_regular(const FiniteGroup& g, int i, const Caps& caps = default_caps()) {
    if (i < 1) throw std::invalid_argument("is_i_regular: i must be >= 1");
    if (g.order() == 1) return {true, true, std::nullopt};
    auto p = g.prime();
    if (!p || *p == 2) throw std::domain_error("is_i_regular: requires an odd-prime p-group");
    const std::uint64_t pairs = std::uint64_t(g.order()) * g.order();
    if (pairs > caps.regular_pair_cap)
        throw cap_exceeded("is_i_regular: pair count " + std::to_string(pairs) + " exceeds regular_pair_cap " +
                           std::to_string(caps.regular_pair_cap));
    std::uint64_t q = 1;
    for (int t = 0; t < i; ++t) q *= *p;
    const FastMul fm = g.fast();

    // cache of [<x,y>,<x,y>]^{p^i} keyed by the generated subgroup
    std::unordered_map<std::uint64_t, std::vector<std::pair<MemberSet, MemberSet>>> targets;
    for (Element x = 0; x < g.order(); ++x) {
        const Element xq = fm.pow(x, (long long)q);
        for (Element y = 0; y < g.order(); ++y) {
            const Element z = fm.mul(fm.pow(fm.mul(x, y), -(long long)q), fm.mul(xq, fm.pow(y, (long long)q)));
            if (z == 0) continue;
            const MemberSet h = detail::closure(fm, {x, y});
            MemberSet* target = nullptr;
            auto& bucket = targets[h.hash()];
            for (auto& [hs, ts] : bucket)
                if (hs == h) {
                    target = &ts;
                    break;
                }
            if (!target) {
                MemberSet ts = detail::power_closure(g, detail::commutator_closure(g, h, h), q);
                bucket.emplace_back(h, std::move(ts));
                target = &bucket.back().second;
            }
            if (!target->test(z)) return {false, true, std::make_pair(x, y)};
        }
    }
    return {true, true, std::nullopt};
}

inline bool is_regular(const FiniteGroup& g, const Caps& caps = default_caps()) {
    return is_i_regular(g, 1, caps).regular;
}

/// Maximal class: order p^n with n >= 3 and nilpotency class n-1.
inline bool is_maximal_class(const FiniteGroup& g) {
    if (g.order() == 1 || !g.prime()) return false;
    const int n = g.prime_exponent();
    return n >= 3 && nilpotency_class(g) == n - 1;
}

// ---------------------------------------------------------------------------
// Normality, quotients
// ---------------------------------------------------------------------------

inline bool is_normal(const FiniteGroup& g, const Subgroup& h) {
    detail::require_parent(g, h, "is_normal");
    const FastMul fm = g.fast();
    for (Element t : g.generators()) {
        const Element it = fm.inv(t);
        bool ok = true;
        h.members().for_each([&](Element a) {
            if (ok && !h.members().test(fm.mul(fm.mul(it, a), t))) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

struct QuotientResult {
    FiniteGroup group;
    std::vector<Element> projection;  // parent element id -> coset id
};

/// Coset group G/N with canonical representatives: the smallest parent id
/// in each coset; cosets are numbered by ascending representative.
inline QuotientResult build_quotient(const FiniteGroup& g, const Subgroup& n,
                                     const Caps& caps = default_caps()) {
    detail::require_parent(g, n, "build_quotient");
    if (!is_normal(g, n)) throw std::invalid_argument("build_quotient: subgroup is not normal");
    const FastMul fm = g.fast();
    auto be = std::make_shared<detail::QuotientBackend>();
    be->parent = g.backend_shared();
    be->proj.assign(g.order(), Element(g.order()));
    for (Element e = 0; e < g.order(); ++e) {
        if (be->proj[e] != Element(g.order())) continue;
        const Element id = Element(be->reps.size());
        be->reps.push_back(e);
        n.members().for_each([&](Element m) { be->proj[fm.mul(e, m)] = id; });
    }
    QuotientResult res;
    res.projection = be->proj;
    res.group = FiniteGroup::wrap(std::move(be), caps.table_order);
    return res;
}

// ---------------------------------------------------------------------------
// Subgroup enumeration
// ---------------------------------------------------------------------------

enum class SubgroupFilter { all, proper_only, maximal_only, normal_only };

namespace detail {

/// Complete subgroup list via layered joins: every cyclic subgroup, then
/// joins with cyclic subgroups to a fixpoint. Sorted by (order, members).
inline std::shared_ptr<SubgroupLattice> full_lattice(const FiniteGroup& g, const Caps& caps) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    if (g.order() > caps.subgroup_enum_order)
        throw cap_exceeded("enumerate_subgroups: order " + std::to_string(g.order()) +
                           " exceeds subgroup_enum_order cap " + std::to_string(caps.subgroup_enum_order));
    if (c.all_subs) return c.all_subs;
    const FastMul fm = g.fast();

    std::vector<MemberSet> members;
    std::vector<std::vector<Element>> gens;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> index;
    auto insert = [&](MemberSet s, std::vector<Element> gs) -> bool {
        auto& bucket = index[s.hash()];
        for (std::size_t i : bucket)
            if (members[i] == s) return false;
        bucket.push_back(members.size());
        members.push_back(std::move(s));
        gens.push_back(std::move(gs));
        return true;
    };

    // cyclic seeds (g = 0 contributes the trivial subgroup)
    std::vector<Element> seed_gen;
    for (Element e = 0; e < g.order(); ++e) {
        std::vector<Element> gs;
        if (e != 0) gs.push_back(e);
        if (insert(closure(fm, gs), gs)) seed_gen.push_back(e);
    }
    const std::size_t nseeds = seed_gen.size();

    for (std::size_t head = 0; head < members.size(); ++head) {
        for (std::size_t si = 0; si < nseeds; ++si) {
            const Element cg = seed_gen[si];
            if (cg == 0 || members[head].test(cg)) continue;
            std::vector<Element> gs = gens[head];
            gs.push_back(cg);
            MemberSet joined = closure(fm, gs);
            insert(std::move(joined), std::move(gs));
        }
    }

    auto lat = std::make_shared<SubgroupLattice>();
    std::vector<std::size_t> order_idx(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) order_idx[i] = i;
    std::sort(order_idx.begin(), order_idx.end(), [&](std::size_t a, std::size_t b) {
        if (members[a].count() != members[b].count()) return members[a].count() < members[b].count();
        return MemberSet::cmp_lex(members[a], members[b]) < 0;
    });
    for (std::size_t i : order_idx) {
        lat->members.push_back(std::move(members[i]));
        lat->gens.push_back(std::move(gens[i]));
    }
    lat->gamma_done.assign(lat->members.size(), 0);
    lat->gamma.resize(lat->members.size());
    c.all_subs = lat;
    return lat;
}

/// Normal subgroups only: normal closures of cyclic subgroups, then joins
/// (products of normal subgroups) to a fixpoint. Works well past the full
/// enumeration cap because normal subgroups are scarce.
inline std::shared_ptr<SubgroupLattice> normal_lattice(const FiniteGroup& g, const Caps& caps) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    if (c.normal_subs) return c.normal_subs;
    if (g.order() > caps.max_order)
        throw cap_exceeded("enumerate_normal_subgroups: order exceeds max_order cap");
    const FastMul fm = g.fast();
    const auto& ggens = g.generators();

    auto normal_close = [&](std::vector<Element> gs) {
        MemberSet s = closure(fm, gs);
        for (;;) {
            std::vector<Element> fresh;
            s.for_each([&](Element a) {
                for (Element t : ggens) {
                    const Element cj = fm.mul(fm.mul(fm.inv(t), a), t);
                    if (!s.test(cj)) fresh.push_back(cj);
                }
            });
            if (fresh.empty()) return std::make_pair(s, gs);
            for (Element e : fresh)
                if (!s.test(e)) {
                    gs.push_back(e);
                    s = closure(fm, gs);
                }
        }
    };

    std::vector<MemberSet> members;
    std::vector<std::vector<Element>> gens;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> index;
    auto insert = [&](MemberSet s, std::vector<Element> gs) -> bool {
        auto& bucket = index[s.hash()];
        for (std::size_t i : bucket)
            if (members[i] == s) return false;
        bucket.push_back(members.size());
        members.push_back(std::move(s));
        gens.push_back(std::move(gs));
        return true;
    };

    MemberSet seen_cyclic(g.order());
    insert(closure(fm, {}), {});
    for (Element e = 1; e < g.order(); ++e) {
        if (seen_cyclic.test(e)) continue;
        const MemberSet cyc = closure(fm, {e});
        // only the generators of <e> may be skipped: smaller cyclic
        // subgroups inside it still need their own normal closures
        cyc.for_each([&](Element x) {
            if (g.element_order(x) == cyc.count()) seen_cyclic.insert(x);
        });
        auto [s, gs] = normal_close({e});
        insert(std::move(s), std::move(gs));
    }
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) {
            if (members[a].contains_all(members[b]) || members[b].contains_all(members[a])) continue;
            std::vector<Element> gs = gens[a];
            for (Element e : gens[b]) gs.push_back(e);
            MemberSet joined = closure(fm, gs);
            insert(std::move(joined), std::move(gs));
        }

    auto lat = std::make_shared<SubgroupLattice>();
    std::vector<std::size_t> order_idx(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) order_idx[i] = i;
    std::sort(order_idx.begin(), order_idx.end(), [&](std::size_t a, std::size_t b) {
        if (members[a].count() != members[b].count()) return members[a].count() < members[b].count();
        return MemberSet::cmp_lex(members[a], members[b]) < 0;
    });
    for (std::size_t i : order_idx) {
        lat->members.push_back(std::move(members[i]));
        lat->gens.push_back(std::move(gens[i]));
    }
    lat->gamma_done.assign(lat->members.size(), 0);
    lat->gamma.resize(lat->members.size());
    c.normal_subs = lat;
    return lat;
}

/// Lower central series of the subgroup at lattice index idx, computed
/// intrinsically (commutators of its own members) and memoized.
inline const std::vector<MemberSet>& lattice_gamma(const FiniteGroup& g, SubgroupLattice& lat, std::size_t idx) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    if (!lat.gamma_done[idx]) {
        std::vector<MemberSet> terms;
        terms.push_back(lat.members[idx]);
        while (terms.back().count() > 1) {
            MemberSet next = commutator_closure(g, terms.back(), lat.members[idx]);
            if (next.count() == terms.back().count())
                throw std::logic_error("lattice_gamma: series stalled");
            terms.push_back(std::move(next));
        }
        lat.gamma[idx] = std::move(terms);
        lat.gamma_done[idx] = 1;
    }
    return lat.gamma[idx];
}

inline const MemberSet& lattice_power(const FiniteGroup& g, SubgroupLattice& lat, std::size_t idx,
                                      std::uint64_t q) {
    auto& c = g.cache();
    std::lock_guard<std::recursive_mutex> lk(c.m);
    const auto key = std::make_pair(idx, q);
    auto it = lat.power_cache.find(key);
    if (it == lat.power_cache.end())
        it = lat.power_cache.emplace(key, power_closure(g, lat.members[idx], q)).first;
    return it->second;
}

}  // namespace detail

inline std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& g,
                                                 SubgroupFilter filter = SubgroupFilter::all,
                                                 const Caps& caps = default_caps()) {
    if (filter == SubgroupFilter::normal_only) {
        auto lat = detail::normal_lattice(g, caps);
        std::vector<Subgroup> out;
        for (std::size_t i = 0; i < lat->members.size(); ++i)
            out.emplace_back(g, lat->members[i], lat->gens[i]);
        return out;
    }
    auto lat = detail::full_lattice(g, caps);
    std::vector<Subgroup> out;
    for (std::size_t i = 0; i < lat->members.size(); ++i) {
        const MemberSet& s = lat->members[i];
        if (filter != SubgroupFilter::all && s.count() == g.order()) continue;
        if (filter == SubgroupFilter::maximal_only) {
            bool maximal = true;
            for (std::size_t j = 0; j < lat->members.size() && maximal; ++j) {
                if (j == i || lat->members[j].count() == g.order()) continue;
                if (lat->members[j].count() > s.count() && lat->members[j].contains_all(s)) maximal = false;
            }
            if (!maximal) continue;
        }
        out.emplace_back(g, s, lat->gens[i]);
    }
    return out;
}

inline std::vector<Subgroup> enumerate_normal_subgroups(const FiniteGroup& g,
                                                        const Caps& caps = default_caps()) {
    return enumerate_subgroups(g, SubgroupFilter::normal_only, caps);
}

}  // namespace pgroup
