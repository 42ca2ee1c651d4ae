#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>

#include "pgroup/int_matrix.hpp"

using namespace pgroup;

namespace {

// Independent oracle for the SNF diagonal: d_k = D_k / D_{k-1} where D_k is
// the gcd of all k x k minors.
long long minor_gcd(const IntMatrix& m, std::size_t k) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> ri(k), ci(k);
    long long g = 0;
    std::function<void(std::size_t, std::size_t, std::vector<std::size_t>&, std::size_t,
                       const std::function<void()>&)>
        choose = [&](std::size_t from, std::size_t total, std::vector<std::size_t>& out, std::size_t pos,
                     const std::function<void()>& done) {
            if (pos == out.size()) {
                done();
                return;
            }
            for (std::size_t v = from; v + (out.size() - pos) <= total; ++v) {
                out[pos] = v;
                choose(v + 1, total, out, pos + 1, done);
            }
        };
    choose(0, rows, ri, 0, [&] {
        choose(0, cols, ci, 0, [&] {
            IntMatrix sub(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(ri[i], ci[j]);
            g = std::gcd(g, sub.det() < 0 ? -sub.det() : sub.det());
        });
    });
    return g;
}

std::vector<long long> snf_diag_oracle(const IntMatrix& m) {
    const std::size_t n = std::min(m.rows(), m.cols());
    std::vector<long long> d(n, 0);
    long long prev = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        const long long dk = minor_gcd(m, k);
        d[k - 1] = prev == 0 ? 0 : dk / prev;
        prev = dk;
        if (prev == 0) break;
    }
    return d;
}

}  // namespace

TEST_CASE("identity matrix has trivial normal form") {
    auto r = smith_normal_form(IntMatrix::identity(2));
    CHECK(r.diagonal == std::vector<long long>{1, 1});
}

TEST_CASE("diag(6,4) normalizes to diag(2,12)") {
    IntMatrix m(2, 2);
    m(0, 0) = 6;
    m(1, 1) = 4;
    auto r = smith_normal_form(m);
    CHECK(r.diagonal == std::vector<long long>{2, 12});
    CHECK(snf_diag_oracle(m) == std::vector<long long>{2, 12});
}

TEST_CASE("the order-81 kernel matrix [[3,-6],[6,-3]] gives diag(3,9)") {
    IntMatrix m(2, 2);
    m(0, 0) = 3;
    m(0, 1) = -6;
    m(1, 0) = 6;
    m(1, 1) = -3;
    CHECK(m.det() == 27);
    auto r = smith_normal_form(m);
    CHECK(r.diagonal == std::vector<long long>{3, 9});
    CHECK(snf_diag_oracle(m) == std::vector<long long>{3, 9});
}

TEST_CASE("random small matrices: transforms multiply back, diagonal matches the minor-gcd oracle") {
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<long long> entry(-9, 9);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = dim(rng), cols = dim(rng);
        IntMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = entry(rng);
        auto r = smith_normal_form(m);  // verifies L*m*R = D and unimodularity internally
        for (std::size_t k = 0; k + 1 < r.diagonal.size(); ++k) {
            CHECK(r.diagonal[k] >= 0);
            if (r.diagonal[k] != 0) CHECK(r.diagonal[k + 1] % r.diagonal[k] == 0);
        }
        CHECK(r.diagonal == snf_diag_oracle(m));
    }
}

TEST_CASE("square nonsingular: diagonal product equals |det|") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> entry(-6, 6);
    int done = 0;
    while (done < 100) {
        IntMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = entry(rng);
        const long long det = m.det();
        if (det == 0) continue;
        ++done;
        auto r = smith_normal_form(m);
        long long prod = 1;
        for (long long d : r.diagonal) prod *= d;
        CHECK(prod == (det < 0 ? -det : det));
    }
}

TEST_CASE("unimodular inverse is exact") {
    IntMatrix m(2, 2);
    m(0, 0) = 1;
    m(0, 1) = 0;
    m(1, 0) = -2;
    m(1, 1) = 1;
    CHECK(m * m.unimodular_inverse() == IntMatrix::identity(2));
    IntMatrix nonuni(2, 2);
    nonuni(0, 0) = 2;
    nonuni(1, 1) = 1;
    CHECK_THROWS_AS(nonuni.unimodular_inverse(), std::invalid_argument);
}

TEST_CASE("checked arithmetic raises instead of wrapping") {
    CHECK_THROWS_AS(checked::mul(1'000'000'000'000LL, 1'000'000'000'000LL), std::overflow_error);
    IntMatrix big(1, 1);
    big(0, 0) = (long long)1 << 62;
    CHECK_THROWS_AS(big * big, std::overflow_error);
}
