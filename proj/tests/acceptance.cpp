// Acceptance suite: every criterion below is exact (no tolerances) and
// prints one [criterion NN] PASS/FAIL line with its wall-clock time.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <map>

#include "pgroup/harness.hpp"

using namespace pgroup;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Corpus members are shared across criteria so structural caches amortize.
const std::vector<CorpusEntry>& fleet(std::uint64_t p, std::uint64_t max_order) {
    static std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<CorpusEntry>> cache;
    const auto key = std::make_pair(p, max_order);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, corpus(p, max_order)).first;
    return it->second;
}

const MaximalClassGroup& mc34() {
    static const MaximalClassGroup g = construct_example1(3, 4);
    return g;
}

const MaximalClassGroup& mc56() {
    static const MaximalClassGroup g = construct_example1(5, 6);
    return g;
}

struct Criterion {
    int id;
    const char* what;
    Clock::time_point start = Clock::now();
    bool ok = true;

    Criterion(int id_, const char* what_) : id(id_), what(what_) {}
    ~Criterion() {
        std::printf("[criterion %02d] %s  %s (%.2f s)\n", id, ok ? "PASS" : "FAIL", what,
                    seconds_since(start));
        std::fflush(stdout);
    }
};

#define CRIT(cond)                 \
    do {                           \
        const bool crit_c = (cond); \
        crit.ok = crit.ok && crit_c; \
        CHECK(crit_c);             \
    } while (0)

bool theorem_c_report_matches(const TheoremReport& r, long long order, long long cls, long long idx) {
    return r.verdict == Verdict::pass && (long long)r.order == order && r.quantities.at("class") == cls &&
           r.quantities.at("index_Gp_gamma_pm1") == idx && r.quantities.at("omega1_set") == idx &&
           r.quantities.at("omega1_subgroup") == idx && r.quantities.at("gamma_pm1_in_Gp") == 0;
}

}  // namespace

TEST_CASE("criterion 1: order-81 member of the family breaks no item of the main construction") {
    Criterion crit(1, "theorem C at (p,s) = (3,4): |G|=81, class 3, index 9 = |Omega_1|, gamma_2 not in G^3");
    const TheoremReport r = check_theorem_C(3, 4);
    CRIT(theorem_c_report_matches(r, 81, 3, 9));
    CRIT(seconds_since(crit.start) < 5.0);
}

TEST_CASE("criterion 2: the same four assertions at orders 243 and 729") {
    Criterion crit(2, "theorem C at (3,5) and (3,6) with |Omega_1| = 9");
    {
        const auto t = Clock::now();
        const TheoremReport r5 = check_theorem_C(3, 5);
        CRIT(theorem_c_report_matches(r5, 243, 4, 9));
        CRIT(seconds_since(t) < 30.0);
    }
    {
        const auto t = Clock::now();
        const TheoremReport r6 = check_theorem_C(3, 6);
        CRIT(theorem_c_report_matches(r6, 729, 5, 9));
        CRIT(seconds_since(t) < 30.0);
    }
}

TEST_CASE("criterion 3: order-15625 member at p = 5") {
    Criterion crit(3, "theorem C at (5,6): |G|=15625, class 5, index 625 = |Omega_1|, gamma_4 not in G^5");
    const TheoremReport r = check_theorem_C(5, 6);
    CRIT(theorem_c_report_matches(r, 15625, 5, 625));
    CRIT(seconds_since(crit.start) < 60.0);
}

TEST_CASE("criterion 4: the p = 3 boundary case of the powerful characterization") {
    Criterion crit(4, "G(3,4): d = 2 = log_3|Omega_1| yet not powerful");
    const FiniteGroup& g = mc34().group;
    CRIT(min_generators(g) == 2);
    CRIT(omega_subgroup(g, 1).order() == 9);
    CRIT(exact_log(3, omega_subgroup(g, 1).order()) == 2);
    CRIT(!is_powerful(g));
    CRIT(seconds_since(crit.start) < 5.0);
}

TEST_CASE("criterion 5: the p >= 5 equivalence across the full p = 5 corpus") {
    Criterion crit(5, "corpus(5,15625): powerful <=> d = log_5|Omega_1| on every member");
    int powerful_members = 0, unpowerful_members = 0;
    for (const auto& e : fleet(5, 15625)) {
        CAPTURE(e.name);
        const bool pw = is_powerful(e.group);
        const int d = min_generators(e.group);
        const int lg = exact_log(5, omega_subgroup(e.group, 1).order());
        CRIT(pw == (d == lg));
        (pw ? powerful_members : unpowerful_members)++;
    }
    CRIT(powerful_members >= 2);
    CRIT(unpowerful_members >= 2);
    CRIT(seconds_since(crit.start) < 300.0);
}

TEST_CASE("criterion 6: the k = 2, i = 2 equivalence across the p = 3 corpus") {
    Criterion crit(6, "corpus(3,729): gamma_2 in G^9 <=> |G : G^9 gamma_2| = |Omega_2| on every member");
    for (const auto& e : fleet(3, 729)) {
        CAPTURE(e.name);
        const TheoremReport r = check_theorem_B(e.group, 2, 2, e.name);
        CRIT(r.verdict == Verdict::pass);
    }
    CRIT(seconds_since(crit.start) < 120.0);
}

TEST_CASE("criterion 7: power index equals p-torsion count on powerful members") {
    Criterion crit(7, "every powerful corpus member (p = 3 and p = 5): |G : G^p| = |{g : g^p = 1}|");
    for (std::uint64_t p : {std::uint64_t(3), std::uint64_t(5)}) {
        for (const auto& e : fleet(p, p == 3 ? 729 : 15625)) {
            if (!is_powerful(e.group)) continue;
            CAPTURE(e.name);
            const std::uint64_t idx = e.group.order() / detail::power_set(e.group, p).count();
            CRIT(idx == omega_set(e.group, 1).count());
        }
    }
    CRIT(seconds_since(crit.start) < 60.0);
}

TEST_CASE("criterion 8: small-class members satisfy the power-omega equality") {
    Criterion crit(8, "class < p members: |G : G^{p^i}| = |Omega_i| for i = 1, 2");
    for (std::uint64_t p : {std::uint64_t(3), std::uint64_t(5)}) {
        for (const auto& e : fleet(p, p == 3 ? 729 : 15625)) {
            if (nilpotency_class(e.group) >= int(p)) continue;
            CAPTURE(e.name);
            std::uint64_t q = 1;
            for (int i = 1; i <= 2; ++i) {
                q *= p;
                CRIT(e.group.order() / detail::power_set(e.group, q).count() ==
                     omega_set(e.group, i).count());
            }
        }
    }
    CRIT(seconds_since(crit.start) < 120.0);
}

TEST_CASE("criterion 9: interchangeability holds for both word families") {
    Criterion crit(9, "short(i,k), i in {1,2}, 2 <= k <= p-1, and long(2) on every small corpus member");
    for (std::uint64_t p : {std::uint64_t(3), std::uint64_t(5)}) {
        const std::uint64_t cap = p == 3 ? 243 : 625;
        for (const auto& e : fleet(p, p == 3 ? 729 : 15625)) {
            if (e.group.order() > cap) continue;
            CAPTURE(e.name);
            for (int i = 1; i <= 2; ++i)
                for (int k = 2; k + 1 <= int(p); ++k) CRIT(is_interchangeable(Word::short_word(i, k), e.group).holds);
            CRIT(is_interchangeable(Word::long_word(2), e.group).holds);
        }
    }
    CRIT(seconds_since(crit.start) < 300.0);
}

TEST_CASE("criterion 10: maximal-plus-interchangeable forces a central verbal subgroup") {
    Criterion crit(10, "omega-maximal pairs have w(G) <= Z(G); the minimal-C member of G(3,4) too");
    long long maximal_pairs = 0;
    for (std::uint64_t p : {std::uint64_t(3), std::uint64_t(5)}) {
        const std::uint64_t cap = p == 3 ? 243 : 625;
        std::vector<Word> words;
        for (int i = 1; i <= 2; ++i)
            for (int k = 2; k + 1 <= int(p); ++k) words.push_back(Word::short_word(i, k));
        words.push_back(Word::long_word(2));
        for (const auto& e : fleet(p, p == 3 ? 729 : 15625)) {
            if (e.group.order() > cap) continue;
            CAPTURE(e.name);
            for (const Word& w : words) {
                const OmegaMaximalResult om = is_omega_maximal(w, e.group);
                if (!om.maximal) continue;
                ++maximal_pairs;
                if (!is_interchangeable(w, e.group).holds) continue;
                const MemberSet v = detail::verbal_closed_whole(e.group, w);
                CRIT(detail::center_set(e.group).contains_all(v));
            }
        }
    }
    CRIT(maximal_pairs > 0);
    {
        const Word w = Word::short_word(1, 2);
        const Subgroup k = find_minimal_C_member(w, mc34().group);
        const MemberSet vk = detail::verbal_closed_of_set(mc34().group, w, k.members());
        CRIT(detail::center_set_of(mc34().group, k.members()).contains_all(vk));
    }
    CRIT(seconds_since(crit.start) < 120.0);
}

TEST_CASE("criterion 11: exhaustive verbal subgroups match the closed forms") {
    Criterion crit(11, "exhaustive = closed form wherever order^arity <= 10^7");
    const Caps caps;
    long long compared = 0;
    for (std::uint64_t p : {std::uint64_t(3), std::uint64_t(5)}) {
        std::vector<Word> words;
        for (int i = 1; i <= 2; ++i)
            for (int k = 2; k + 1 <= int(p); ++k) words.push_back(Word::short_word(i, k));
        words.push_back(Word::long_word(2));
        for (const auto& e : fleet(p, p == 3 ? 729 : 15625)) {
            for (const Word& w : words) {
                unsigned __int128 tuples = 1;
                bool feasible = true;
                for (int t = 0; t < w.arity(p) && feasible; ++t) {
                    tuples *= e.group.order();
                    if (tuples > caps.tuple_cap) feasible = false;
                }
                if (!feasible) continue;
                CAPTURE(e.name);
                CAPTURE(w.to_string());
                const auto exhaustive = verbal_subgroup(w, e.group, VerbalMode::exhaustive, caps);
                const auto closed = verbal_subgroup(w, e.group, VerbalMode::closed_form, caps);
                CRIT(exhaustive.members() == closed.members());
                ++compared;
            }
        }
    }
    CRIT(compared > 0);
    CRIT(seconds_since(crit.start) < 120.0);
}

TEST_CASE("criterion 12: wrap-around powers in the family members") {
    Criterion crit(12, "G(3,4) and G(5,6): outside-kernel orders are p^2 and (j,x)^p = z^j, exhaustively");
    for (const MaximalClassGroup* mc : {&mc34(), &mc56()}) {
        const FiniteGroup& g = mc->group;
        const std::uint64_t p = mc->p;
        const Element nk = Element(mc->kernel.order());
        const FastMul fm = g.fast();
        bool orders_ok = true, powers_ok = true;
        for (Element e = nk; e < g.order(); ++e) {
            if (g.element_order(e) != p * p) orders_ok = false;
            if (fm.pow(e, (long long)p) != fm.pow(mc->z_id, (long long)(e / nk))) powers_ok = false;
        }
        CRIT(orders_ok);
        CRIT(powers_ok);
    }
    CRIT(seconds_since(crit.start) < 120.0);
}
