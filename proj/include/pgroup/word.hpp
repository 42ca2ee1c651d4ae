#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pgroup/subgroup.hpp"

namespace pgroup {

/// A free-group word over named variables. Two parameterized families get
/// structured tags with closed-form verbal subgroups:
///   short(i,k): x^{p^i} [y_1,...,y_k]
///   long(i):    x^{p^i} [y_1,...,y_{p-1}]^{p^{i-1}} [z_1,...,z_p]
/// The prime p is taken from the group a word is applied to.
class Word {
public:
    enum class Family { generic, short_form, long_form };

    struct Letter {
        int var = 0;
        long long exp = 1;
    };

    static Word short_word(int i, int k) {
        if (i < 1 || k < 1) throw std::invalid_argument("short word needs i >= 1, k >= 1");
        Word w;
        w.family_ = Family::short_form;
        w.i_ = i;
        w.k_ = k;
        return w;
    }

    static Word long_word(int i) {
        if (i < 1) throw std::invalid_argument("long word needs i >= 1");
        Word w;
        w.family_ = Family::long_form;
        w.i_ = i;
        return w;
    }

    static Word generic(std::vector<Letter> letters, int arity) {
        Word w;
        w.family_ = Family::generic;
        w.letters_ = std::move(letters);
        w.arity_ = arity;
        for (const auto& l : w.letters_)
            if (l.var < 0 || l.var >= arity) throw std::invalid_argument("word letter variable out of range");
        return w;
    }

    Family family() const { return family_; }
    int param_i() const { return i_; }
    int param_k() const { return k_; }
    bool structured() const { return family_ != Family::generic; }
    const std::vector<Letter>& letters() const { return letters_; }

    /// Number of variables; long words depend on the target prime.
    int arity(std::uint64_t p = 0) const {
        switch (family_) {
            case Family::generic: return arity_;
            case Family::short_form: return k_ + 1;
            case Family::long_form:
                if (p < 3) throw std::invalid_argument("long word arity needs an odd prime");
                return int(2 * p);
        }
        return 0;
    }

    std::string to_string() const {
        switch (family_) {
            case Family::short_form: {
                std::ostringstream os;
                os << "short(" << i_ << "," << k_ << ")";
                return os.str();
            }
            case Family::long_form: {
                std::ostringstream os;
                os << "long(" << i_ << ")";
                return os.str();
            }
            case Family::generic: {
                std::ostringstream os;
                os << "word/" << arity_ << ":";
                for (const auto& l : letters_) os << " v" << l.var << "^" << l.exp;
                return os.str();
            }
        }
        return "";
    }

private:
    Family family_ = Family::generic;
    int i_ = 0, k_ = 0;
    int arity_ = 0;
    std::vector<Letter> letters_;
};

namespace detail {

inline std::uint64_t upow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r = checked::mul((long long)r, (long long)b);
    return r;
}

inline Element left_normed_commutator(const FastMul& fm, const Element* args, int n) {
    Element c = args[0];
    for (int j = 1; j < n; ++j)
        c = fm.mul(fm.mul(fm.inv(c), fm.inv(args[j])), fm.mul(c, args[j]));
    return c;
}

inline std::uint64_t word_prime(const FiniteGroup& g, const char* who) {
    auto p = g.prime();
    if (!p) throw std::domain_error(std::string(who) + ": group is not a p-group");
    return *p;
}

}  // namespace detail

/// Substitute args into the word and multiply out (commutators left-normed).
inline Element eval_word(const Word& w, const FiniteGroup& g, const std::vector<Element>& args) {
    const FastMul fm = g.fast();
    switch (w.family()) {
        case Word::Family::generic: {
            if (int(args.size()) != w.arity()) throw std::invalid_argument("eval_word: arity mismatch");
            Element acc = 0;
            for (const auto& l : w.letters()) acc = fm.mul(acc, fm.pow(args[l.var], l.exp));
            return acc;
        }
        case Word::Family::short_form: {
            const std::uint64_t p = detail::word_prime(g, "eval_word");
            if (int(args.size()) != w.arity()) throw std::invalid_argument("eval_word: arity mismatch");
            const std::uint64_t q = detail::upow(p, w.param_i());
            const Element head = fm.pow(args[0], (long long)q);
            return fm.mul(head, detail::left_normed_commutator(fm, args.data() + 1, w.param_k()));
        }
        case Word::Family::long_form: {
            const std::uint64_t p = detail::word_prime(g, "eval_word");
            if (int(args.size()) != w.arity(p)) throw std::invalid_argument("eval_word: arity mismatch");
            const std::uint64_t q = detail::upow(p, w.param_i());
            const std::uint64_t q1 = detail::upow(p, w.param_i() - 1);
            const Element head = fm.pow(args[0], (long long)q);
            const Element mid =
                fm.pow(detail::left_normed_commutator(fm, args.data() + 1, int(p - 1)), (long long)q1);
            const Element tail = detail::left_normed_commutator(fm, args.data() + p, int(p));
            return fm.mul(fm.mul(head, mid), tail);
        }
    }
    throw std::logic_error("eval_word: unknown family");
}

enum class VerbalMode { exhaustive, closed_form };

namespace detail {

/// Closed-form verbal set over an arbitrary closed member set H, using the
/// caller-supplied lower-central terms of H.
inline MemberSet verbal_closed_core(const FiniteGroup& g, const Word& w,
                                    const std::vector<MemberSet>& gamma, const MemberSet& h_pow) {
    auto gamma_term = [&](std::size_t j) -> const MemberSet& {
        const std::size_t idx = std::min(j - 1, gamma.size() - 1);
        return gamma[idx];
    };
    if (w.family() == Word::Family::short_form)
        return join_sets(g, h_pow, gamma_term(std::size_t(w.param_k())));
    const std::uint64_t p = word_prime(g, "verbal_subgroup");
    const std::uint64_t q1 = upow(p, w.param_i() - 1);
    MemberSet mid = power_closure(g, gamma_term(std::size_t(p - 1)), q1);
    return join_sets(g, join_sets(g, h_pow, mid), gamma_term(std::size_t(p)));
}

/// gamma series of an arbitrary closed member set, computed in place.
inline std::vector<MemberSet> gamma_of_set(const FiniteGroup& g, const MemberSet& h) {
    std::vector<MemberSet> terms;
    terms.push_back(h);
    while (terms.back().count() > 1) {
        MemberSet next = commutator_closure(g, terms.back(), h);
        if (next.count() == terms.back().count()) throw std::logic_error("gamma_of_set: series stalled");
        terms.push_back(std::move(next));
    }
    return terms;
}

/// Closed-form verbal set of a structured word on the subgroup spanned by h.
inline MemberSet verbal_closed_of_set(const FiniteGroup& g, const Word& w, const MemberSet& h) {
    const std::uint64_t p = word_prime(g, "verbal_subgroup");
    const std::uint64_t q = upow(p, w.param_i());
    return verbal_closed_core(g, w, gamma_of_set(g, h), power_closure(g, h, q));
}

/// Same, but reading/memoizing through a subgroup lattice entry.
inline MemberSet verbal_closed_of_lattice(const FiniteGroup& g, SubgroupLattice& lat, std::size_t idx,
                                          const Word& w) {
    const std::uint64_t p = word_prime(g, "verbal_subgroup");
    const std::uint64_t q = upow(p, w.param_i());
    return verbal_closed_core(g, w, lattice_gamma(g, lat, idx), lattice_power(g, lat, idx, q));
}

inline MemberSet verbal_closed_whole(const FiniteGroup& g, const Word& w) {
    const std::uint64_t p = word_prime(g, "verbal_subgroup");
    const std::uint64_t q = upow(p, w.param_i());
    return verbal_closed_core(g, w, lcs_sets(g), power_set(g, q));
}

/// Exhaustive verbal set over all argument tuples drawn from the member
/// list; the independent oracle for the closed forms.
inline MemberSet verbal_exhaustive_of_set(const FiniteGroup& g, const Word& w, const MemberSet& h,
                                          const Caps& caps) {
    const int arity = w.structured() ? w.arity(word_prime(g, "verbal_subgroup")) : w.arity();
    const std::vector<Element> domain = h.to_list();
    unsigned __int128 tuples = 1;
    for (int t = 0; t < arity; ++t) {
        tuples *= domain.size();
        if (tuples > caps.tuple_cap)
            throw cap_exceeded("verbal_subgroup: exhaustive tuple count exceeds tuple_cap " +
                               std::to_string(caps.tuple_cap));
    }
    MemberSet vals(g.order());
    std::vector<Element> gens;
    std::vector<std::size_t> odo(arity, 0);
    std::vector<Element> args(arity, domain.empty() ? 0 : domain[0]);
    for (;;) {
        const Element v = eval_word(w, g, args);
        if (vals.insert(v) && v != 0) gens.push_back(v);
        int pos = arity - 1;
        while (pos >= 0) {
            if (++odo[pos] < domain.size()) {
                args[pos] = domain[odo[pos]];
                break;
            }
            odo[pos] = 0;
            args[pos] = domain[0];
            --pos;
        }
        if (pos < 0) break;
    }
    return closure(g.fast(), gens);
}

}  // namespace detail

/// The subgroup generated by all values of w in G. Exhaustive mode scans
/// every argument tuple; closed_form uses the product formula for the two
/// structured families.
inline Subgroup verbal_subgroup(const Word& w, const FiniteGroup& g, VerbalMode mode,
                                const Caps& caps = default_caps()) {
    if (mode == VerbalMode::closed_form) {
        if (!w.structured())
            throw std::invalid_argument("verbal_subgroup: closed form needs a structured word");
        return subgroup_from_set(g, detail::verbal_closed_whole(g, w));
    }
    return subgroup_from_set(g, detail::verbal_exhaustive_of_set(g, w, detail::whole_set(g), caps));
}

struct OmegaMaximalResult {
    bool maximal = false;
    std::uint64_t group_index = 0;              // |G : w(G)|
    std::optional<Subgroup> witness;            // proper H with |H : w(H)| >= |G : w(G)|
};

namespace detail {

inline std::uint64_t verbal_index_lattice(const FiniteGroup& g, SubgroupLattice& lat, std::size_t idx,
                                          const Word& w, const Caps& caps) {
    MemberSet v = w.structured() ? verbal_closed_of_lattice(g, lat, idx, w)
                                 : verbal_exhaustive_of_set(g, w, lat.members[idx], caps);
    return lat.members[idx].count() / v.count();
}

}  // namespace detail

/// G is w-maximal when every proper subgroup H satisfies
/// |H : w(H)| < |G : w(G)|, with w(H) computed in H as an abstract group.
/// All proper subgroups are scanned, not only the maximal ones.
inline OmegaMaximalResult is_omega_maximal(const Word& w, const FiniteGroup& g,
                                           const Caps& caps = default_caps()) {
    auto lat = detail::full_lattice(g, caps);
    OmegaMaximalResult res;
    const MemberSet vG = w.structured() ? detail::verbal_closed_whole(g, w)
                                        : detail::verbal_exhaustive_of_set(g, w, detail::whole_set(g), caps);
    res.group_index = g.order() / vG.count();
    for (std::size_t i = 0; i < lat->members.size(); ++i) {
        if (lat->members[i].count() == g.order()) continue;
        const std::uint64_t hi = detail::verbal_index_lattice(g, *lat, i, w, caps);
        if (hi >= res.group_index) {
            res.witness = Subgroup(g, lat->members[i], lat->gens[i]);
            return res;
        }
    }
    res.maximal = true;
    return res;
}

/// Minimal member (under inclusion) of
///   C = { H <= G : |H : w(H)| >= |G : w(G)| },
/// ties broken by the canonical (order, members) subgroup order. The whole
/// group lies in C, so a minimal member always exists.
inline Subgroup find_minimal_C_member(const Word& w, const FiniteGroup& g,
                                      const Caps& caps = default_caps()) {
    auto lat = detail::full_lattice(g, caps);
    const MemberSet vG = w.structured() ? detail::verbal_closed_whole(g, w)
                                        : detail::verbal_exhaustive_of_set(g, w, detail::whole_set(g), caps);
    const std::uint64_t target = g.order() / vG.count();
    const std::size_t n = lat->members.size();
    std::vector<char> in_c(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        in_c[i] = detail::verbal_index_lattice(g, *lat, i, w, caps) >= target ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_c[i]) continue;
        bool minimal = true;
        for (std::size_t j = 0; j < i && minimal; ++j)
            if (in_c[j] && lat->members[j].count() < lat->members[i].count() &&
                lat->members[i].contains_all(lat->members[j]))
                minimal = false;
        if (minimal) return Subgroup(g, lat->members[i], lat->gens[i]);
    }
    throw std::logic_error("find_minimal_C_member: no member found");
}

struct InterchangeableResult {
    bool holds = false;
    std::optional<Subgroup> witness;  // violating normal subgroup
};

/// w is interchangeable in G when for every normal subgroup N,
///   [w(N), G] <= [N, w(G)] . [w(G), G]^p . [w(G), G, G].
inline InterchangeableResult is_interchangeable(const Word& w, const FiniteGroup& g,
                                                const Caps& caps = default_caps()) {
    const std::uint64_t p = detail::word_prime(g, "is_interchangeable");
    if (detail::derived_set(g).count() == 1) return {true, std::nullopt};  // [*, G] is trivial

    const MemberSet whole = detail::whole_set(g);
    const MemberSet vG = w.structured() ? detail::verbal_closed_whole(g, w)
                                        : detail::verbal_exhaustive_of_set(g, w, whole, caps);
    const MemberSet cwG = detail::commutator_closure(g, vG, whole);           // [w(G), G]
    const MemberSet rhs_pow = detail::power_closure(g, cwG, p);               // [w(G), G]^p
    const MemberSet rhs_comm = detail::commutator_closure(g, cwG, whole);     // [w(G), G, G]
    const MemberSet rhs_fixed = detail::join_sets(g, rhs_pow, rhs_comm);

    auto lat = detail::normal_lattice(g, caps);
    for (std::size_t i = 0; i < lat->members.size(); ++i) {
        const MemberSet& nset = lat->members[i];
        const MemberSet vN = w.structured() ? detail::verbal_closed_of_lattice(g, *lat, i, w)
                                            : detail::verbal_exhaustive_of_set(g, w, nset, caps);
        const MemberSet lhs = detail::commutator_closure(g, vN, whole);
        if (lhs.count() == 1) continue;
        if (rhs_fixed.contains_all(lhs)) continue;
        const MemberSet rhs = detail::join_sets(g, detail::commutator_closure(g, nset, vG), rhs_fixed);
        if (!rhs.contains_all(lhs)) return {false, Subgroup(g, nset, lat->gens[i])};
    }
    return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Word literal syntax: short(i,k), long(i), or free-form token strings like
// "x^9 [y1,y2,y3]" (optionally with an exponent on a bracket).
// ---------------------------------------------------------------------------

inline Word parse_word(const std::string& text) {
    auto fail = [&](const std::string& why) -> Word {
        throw std::invalid_argument("parse_word: " + why + " in \"" + text + "\"");
    };
    std::size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos; };
    auto parse_int = [&]() -> long long {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) fail("expected integer");
        return std::stoll(text.substr(start, pos - start));
    };

    skip_ws();
    for (const char* name : {"short", "long"}) {
        const std::size_t len = std::string(name).size();
        if (text.compare(pos, len, name) == 0) {
            std::size_t save = pos;
            pos += len;
            skip_ws();
            if (pos < text.size() && text[pos] == '(') {
                ++pos;
                const long long i = parse_int();
                int k = 0;
                skip_ws();
                if (std::string(name) == "short") {
                    if (pos >= text.size() || text[pos] != ',') fail("expected ','");
                    ++pos;
                    k = int(parse_int());
                }
                skip_ws();
                if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
                ++pos;
                skip_ws();
                if (pos != text.size()) fail("trailing characters");
                return std::string(name) == "short" ? Word::short_word(int(i), k) : Word::long_word(int(i));
            }
            pos = save;  // a variable that merely starts with the keyword
        }
    }

    std::vector<std::string> names;
    auto var_index = [&](const std::string& n) -> int {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return int(i);
        names.push_back(n);
        return int(names.size() - 1);
    };
    auto parse_name = [&]() -> std::string {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (std::isalpha((unsigned char)text[pos]) || text[pos] == '_')) {
            ++pos;
            while (pos < text.size() && (std::isalnum((unsigned char)text[pos]) || text[pos] == '_')) ++pos;
        }
        if (pos == start) fail("expected variable name");
        return text.substr(start, pos - start);
    };

    using Letters = std::vector<Word::Letter>;
    auto invert = [](const Letters& ls) {
        Letters out;
        for (auto it = ls.rbegin(); it != ls.rend(); ++it) out.push_back({it->var, -it->exp});
        return out;
    };
    auto append = [](Letters& dst, const Letters& src) { dst.insert(dst.end(), src.begin(), src.end()); };

    Letters word;
    skip_ws();
    while (pos < text.size()) {
        Letters factor;
        if (text[pos] == '[') {
            ++pos;
            std::vector<int> vars;
            vars.push_back(var_index(parse_name()));
            skip_ws();
            while (pos < text.size() && text[pos] == ',') {
                ++pos;
                vars.push_back(var_index(parse_name()));
                skip_ws();
            }
            if (pos >= text.size() || text[pos] != ']') fail("expected ']'");
            ++pos;
            if (vars.size() < 2) fail("commutator needs at least two entries");
            Letters c{{vars[0], 1}};
            for (std::size_t j = 1; j < vars.size(); ++j) {
                Letters next = invert(c);
                next.push_back({vars[j], -1});
                append(next, c);
                next.push_back({vars[j], 1});
                c = std::move(next);
            }
            factor = std::move(c);
        } else {
            factor.push_back({var_index(parse_name()), 1});
        }
        long long e = 1;
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            e = parse_int();
            if (e == 0) fail("zero exponent");
        }
        if (factor.size() == 1) {
            factor[0].exp *= e;
            append(word, factor);
        } else {
            Letters powered;
            const Letters body = e < 0 ? invert(factor) : factor;
            for (long long t = 0; t < (e < 0 ? -e : e); ++t) append(powered, body);
            append(word, powered);
        }
        skip_ws();
    }
    if (word.empty()) fail("empty word");
    return Word::generic(std::move(word), int(names.size()));
}

}  // namespace pgroup
