#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgroup {

namespace checked {

inline long long add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in add");
    return r;
}

inline long long sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in sub");
    return r;
}

inline long long mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in mul");
    return r;
}

}  // namespace checked

/// Exact integer matrix. All arithmetic is overflow-checked; an overflow
/// raises instead of wrapping.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    long long& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    long long operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix dimension mismatch");
        IntMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const long long aik = (*this)(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) = checked::add(r(i, j), checked::mul(aik, o(k, j)));
            }
        return r;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix dimension mismatch");
        IntMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = checked::sub(a_[i], o.a_[i]);
        return r;
    }

    IntMatrix pow(unsigned e) const {
        if (rows_ != cols_) throw std::invalid_argument("pow of non-square matrix");
        IntMatrix acc = identity(rows_);
        IntMatrix base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            if (e >>= 1) base = base * base;
        }
        return acc;
    }

    std::vector<long long> apply(const std::vector<long long>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix/vector dimension mismatch");
        std::vector<long long> r(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r[i] = checked::add(r[i], checked::mul((*this)(i, j), v[j]));
        return r;
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    long long det() const {
        if (rows_ != cols_) throw std::invalid_argument("det of non-square matrix");
        const std::size_t n = rows_;
        if (n == 0) return 1;
        IntMatrix m = *this;
        long long sign = 1, prev = 1;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (m(k, k) == 0) {
                std::size_t s = k + 1;
                while (s < n && m(s, k) == 0) ++s;
                if (s == n) return 0;
                for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(s, j));
                sign = -sign;
            }
            for (std::size_t i = k + 1; i < n; ++i)
                for (std::size_t j = k + 1; j < n; ++j) {
                    long long num = checked::sub(checked::mul(m(i, j), m(k, k)),
                                                 checked::mul(m(i, k), m(k, j)));
                    m(i, j) = num / prev;  // exact division in Bareiss
                }
            prev = m(k, k);
        }
        return checked::mul(sign, m(n - 1, n - 1));
    }

    /// Exact inverse of a unimodular matrix (det = +-1).
    IntMatrix unimodular_inverse() const {
        const long long d = det();
        if (d != 1 && d != -1) throw std::invalid_argument("matrix is not unimodular");
        const std::size_t n = rows_;
        // adjugate via cofactors; dimensions here are tiny (<= p-1)
        IntMatrix inv(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                IntMatrix minor(n - 1, n - 1);
                for (std::size_t r = 0, mr = 0; r < n; ++r) {
                    if (r == j) continue;
                    for (std::size_t c = 0, mc = 0; c < n; ++c) {
                        if (c == i) continue;
                        minor(mr, mc++) = (*this)(r, c);
                    }
                    ++mr;
                }
                long long cof = minor.det();
                if ((i + j) & 1) cof = -cof;
                inv(i, j) = d * cof;
            }
        return inv;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<long long> a_;
};

/// Result of a Smith decomposition: left * input * right = diag(diagonal),
/// with left and right unimodular and d_1 | d_2 | ... a divisibility chain.
struct SnfResult {
    std::vector<long long> diagonal;  // length min(rows, cols), nonnegative
    IntMatrix left;                   // rows x rows
    IntMatrix right;                  // cols x cols
};

/// Smith normal form by repeated pivot reduction. Exact; verified against
/// the input by multiplying back before returning.
inline SnfResult smith_normal_form(const IntMatrix& input) {
    const std::size_t m = input.rows(), n = input.cols();
    const std::size_t nmin = m < n ? m : n;
    IntMatrix d = input;
    IntMatrix left = IntMatrix::identity(m);
    IntMatrix right = IntMatrix::identity(n);

    auto swap_rows = [&](std::size_t r1, std::size_t r2) {
        if (r1 == r2) return;
        for (std::size_t j = 0; j < n; ++j) std::swap(d(r1, j), d(r2, j));
        for (std::size_t j = 0; j < m; ++j) std::swap(left(r1, j), left(r2, j));
    };
    auto swap_cols = [&](std::size_t c1, std::size_t c2) {
        if (c1 == c2) return;
        for (std::size_t i = 0; i < m; ++i) std::swap(d(i, c1), d(i, c2));
        for (std::size_t i = 0; i < n; ++i) std::swap(right(i, c1), right(i, c2));
    };
    auto add_row = [&](std::size_t dst, std::size_t src, long long f) {
        for (std::size_t j = 0; j < n; ++j)
            d(dst, j) = checked::add(d(dst, j), checked::mul(f, d(src, j)));
        for (std::size_t j = 0; j < m; ++j)
            left(dst, j) = checked::add(left(dst, j), checked::mul(f, left(src, j)));
    };
    auto add_col = [&](std::size_t dst, std::size_t src, long long f) {
        for (std::size_t i = 0; i < m; ++i)
            d(i, dst) = checked::add(d(i, dst), checked::mul(f, d(i, src)));
        for (std::size_t i = 0; i < n; ++i)
            right(i, dst) = checked::add(right(i, dst), checked::mul(f, right(i, src)));
    };

    for (std::size_t k = 0; k < nmin; ++k) {
        for (;;) {
            // locate smallest nonzero |entry| in the trailing block
            std::size_t pr = k, pc = k;
            long long best = 0;
            for (std::size_t i = k; i < m; ++i)
                for (std::size_t j = k; j < n; ++j) {
                    const long long v = d(i, j) < 0 ? -d(i, j) : d(i, j);
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pr = i;
                        pc = j;
                    }
                }
            if (best == 0) break;  // trailing block is zero
            swap_rows(k, pr);
            swap_cols(k, pc);

            bool clean = true;
            for (std::size_t i = k + 1; i < m; ++i)
                if (d(i, k) != 0) {
                    add_row(i, k, -(d(i, k) / d(k, k)));
                    if (d(i, k) != 0) clean = false;
                }
            for (std::size_t j = k + 1; j < n; ++j)
                if (d(k, j) != 0) {
                    add_col(j, k, -(d(k, j) / d(k, k)));
                    if (d(k, j) != 0) clean = false;
                }
            if (!clean) continue;

            // pivot row/col are zero; enforce divisibility of the rest
            bool divides = true;
            for (std::size_t i = k + 1; i < m && divides; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    if (d(i, j) % d(k, k) != 0) {
                        add_row(k, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (d(k, k) < 0) {
            for (std::size_t j = 0; j < n; ++j) d(k, j) = -d(k, j);
            for (std::size_t j = 0; j < m; ++j) left(k, j) = -left(k, j);
        }
    }

    SnfResult res;
    res.diagonal.resize(nmin);
    for (std::size_t k = 0; k < nmin; ++k) res.diagonal[k] = d(k, k);
    res.left = left;
    res.right = right;

    // exactness guard: transforms must reproduce the diagonal and stay unimodular
    IntMatrix check = left * input * right;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const long long want = (i == j && i < nmin) ? res.diagonal[i] : 0;
            if (check(i, j) != want) throw std::logic_error("smith_normal_form: transform mismatch");
        }
    for (std::size_t k = 0; k + 1 < nmin; ++k)
        if (res.diagonal[k] != 0 && res.diagonal[k + 1] % res.diagonal[k] != 0)
            throw std::logic_error("smith_normal_form: divisibility chain violated");
    const long long dl = left.det(), dr = right.det();
    if ((dl != 1 && dl != -1) || (dr != 1 && dr != -1))
        throw std::logic_error("smith_normal_form: non-unimodular transform");
    return res;
}

}  // namespace pgroup
