#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "formacalc/rational.hpp"

namespace formacalc {

/// Exponent vector I in N^n with the usual multi-index conventions:
/// |I| = sum of entries, I! = product of entry factorials.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t nvars) : e_(nvars, 0) {}
    MultiIndex(std::initializer_list<unsigned> xs) : e_(xs) {}
    explicit MultiIndex(std::vector<unsigned> xs) : e_(std::move(xs)) {}

    std::size_t size() const { return e_.size(); }
    unsigned operator[](std::size_t i) const { return e_[i]; }
    unsigned& operator[](std::size_t i) { return e_[i]; }
    const std::vector<unsigned>& exponents() const { return e_; }

    unsigned order() const { return std::accumulate(e_.begin(), e_.end(), 0u); }

    Integer index_factorial() const {
        Integer f = 1;
        for (unsigned x : e_) f *= factorial(x);
        return f;
    }

    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](unsigned x) { return x == 0; });
    }

    /// Componentwise I <= J.
    bool divides(const MultiIndex& other) const {
        if (size() != other.size()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (e_[i] > other.e_[i]) return false;
        return true;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        MultiIndex r(*this);
        for (std::size_t i = 0; i < size(); ++i) r.e_[i] += o.e_[i];
        return r;
    }

    /// Componentwise difference; caller guarantees o.divides(*this).
    MultiIndex operator-(const MultiIndex& o) const {
        MultiIndex r(*this);
        for (std::size_t i = 0; i < size(); ++i) r.e_[i] -= o.e_[i];
        return r;
    }

    bool operator==(const MultiIndex& o) const { return e_ == o.e_; }

    static MultiIndex unit(std::size_t nvars, std::size_t i) {
        MultiIndex m(nvars);
        m[i] = 1;
        return m;
    }

private:
    std::vector<unsigned> e_;
};

/// Graded lexicographic order: by |I| first, then lexicographic. This is the
/// canonical term order used everywhere for deterministic serialization.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        unsigned oa = a.order(), ob = b.order();
        if (oa != ob) return oa < ob;
        if (a.size() != b.size()) return a.size() < b.size();
        return a.exponents() < b.exponents();
    }
};

inline Rational multiindex_factorial(const MultiIndex& m) {
    return Rational(m.index_factorial());
}

/// Prod binom(I_i, A_i); the multivariate binomial used in Leibniz expansions.
inline Integer binomial(const MultiIndex& I, const MultiIndex& A) {
    Integer b = 1;
    for (std::size_t i = 0; i < I.size(); ++i) b *= binomial(I[i], A[i]);
    return b;
}

/// Enumerate all multi-indices with `nvars` entries and |I| == total.
inline void for_each_multiindex_of_order(std::size_t nvars, unsigned total,
                                         const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex cur(nvars);
    // Walk compositions of `total` into nvars parts.
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned rest) {
        if (i + 1 == nvars || nvars == 0) {
            if (nvars == 0) {
                if (rest == 0) fn(cur);
                return;
            }
            cur[i] = rest;
            fn(cur);
            return;
        }
        for (unsigned v = 0; v <= rest; ++v) {
            cur[i] = v;
            rec(i + 1, rest - v);
        }
    };
    if (nvars == 0) {
        if (total == 0) fn(MultiIndex(std::size_t{0}));
        return;
    }
    rec(0, total);
}

/// Enumerate all multi-indices with |I| <= max_total.
inline void for_each_multiindex_up_to(std::size_t nvars, unsigned max_total,
                                      const std::function<void(const MultiIndex&)>& fn) {
    for (unsigned t = 0; t <= max_total; ++t) for_each_multiindex_of_order(nvars, t, fn);
}

/// Strictly increasing tuple of indices drawn from {1..n}; an element of
/// Lambda_n^r where r is the length.
class OrderedTuple {
public:
    OrderedTuple() = default;
    OrderedTuple(std::initializer_list<int> xs) : idx_(xs) { check(); }
    explicit OrderedTuple(std::vector<int> xs) : idx_(std::move(xs)) { check(); }

    std::size_t size() const { return idx_.size(); }
    int operator[](std::size_t i) const { return idx_[i]; }
    const std::vector<int>& indices() const { return idx_; }
    bool empty() const { return idx_.empty(); }

    bool contains(int v) const { return std::binary_search(idx_.begin(), idx_.end(), v); }

    bool within(int n) const {
        return idx_.empty() || (idx_.front() >= 1 && idx_.back() <= n);
    }

    /// Complement inside {1..n}, ascending.
    OrderedTuple complement(int n) const {
        std::vector<int> c;
        for (int v = 1; v <= n; ++v)
            if (!contains(v)) c.push_back(v);
        return OrderedTuple(std::move(c));
    }

    /// Shift every index by delta (used when joining factor spaces).
    OrderedTuple shifted(int delta) const {
        std::vector<int> s = idx_;
        for (int& v : s) v += delta;
        return OrderedTuple(std::move(s));
    }

    bool operator==(const OrderedTuple& o) const { return idx_ == o.idx_; }
    bool operator<(const OrderedTuple& o) const {
        if (idx_.size() != o.idx_.size()) return idx_.size() < o.idx_.size();
        return idx_ < o.idx_;
    }

private:
    void check() const {
        for (std::size_t i = 0; i + 1 < idx_.size(); ++i)
            require(idx_[i] < idx_[i + 1], "E_DOMAIN", "tuple indices must be strictly increasing");
        if (!idx_.empty()) require(idx_.front() >= 1, "E_DOMAIN", "tuple indices are 1-based");
    }

    std::vector<int> idx_;
};

/// Merge two disjoint ordered tuples; sign is the parity of the interleaving
/// permutation (anticommuting degree-1 generators). Returns sign 0 on overlap.
struct MergeResult {
    int sign = 0;
    OrderedTuple merged;
};

inline MergeResult merge_tuples(const OrderedTuple& a, const OrderedTuple& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    long inversions = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return {};
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining entries of a
            inversions += static_cast<long>(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return {(inversions % 2 == 0) ? 1 : -1, OrderedTuple(std::move(out))};
}

/// Sign of the permutation sorting concat(A, B) into {1..n}; 0 if A and B
/// intersect or their union is not all of {1..n}.
inline Rational wedge_sign(const OrderedTuple& a, const OrderedTuple& b, int n) {
    if (a.size() + b.size() != static_cast<std::size_t>(n)) return 0;
    MergeResult m = merge_tuples(a, b);
    if (m.sign == 0) return 0;
    for (std::size_t i = 0; i < m.merged.size(); ++i)
        if (m.merged[i] != static_cast<int>(i) + 1) return 0;
    return m.sign;
}

/// Sign picked up when normalizing dx_{I1} dy_{J1} ^ dx_{I2} dy_{J2} into the
/// x-block-then-y-block normal form; 0 on any index collision. All of dx_i and
/// dy_j are odd generators, so moving the |I2| x's past the |J1| y's costs
/// (-1)^{|J1||I2|} and the two in-block merges contribute their own parities.
struct BlockMerge {
    int sign = 0;
    OrderedTuple xs, ys;
};

inline BlockMerge merge_basis(const OrderedTuple& i1, const OrderedTuple& j1,
                              const OrderedTuple& i2, const OrderedTuple& j2) {
    MergeResult mx = merge_tuples(i1, i2);
    if (mx.sign == 0) return {};
    MergeResult my = merge_tuples(j1, j2);
    if (my.sign == 0) return {};
    int sign = mx.sign * my.sign;
    if ((j1.size() * i2.size()) % 2 != 0) sign = -sign;
    return {sign, mx.merged, my.merged};
}

/// The constant eps((I',J'),(I,J)) of the dual pairing: the coefficient of the
/// top form in dx_{I'} dy_{J'} ^ dx_I dy_J; 0 unless the x parts partition
/// {1..n} and the y parts partition {1..k}.
inline int eps_pair(const OrderedTuple& i1, const OrderedTuple& j1,
                    const OrderedTuple& i2, const OrderedTuple& j2, int n, int k) {
    if (i1.size() + i2.size() != static_cast<std::size_t>(n)) return 0;
    if (j1.size() + j2.size() != static_cast<std::size_t>(k)) return 0;
    BlockMerge bm = merge_basis(i1, j1, i2, j2);
    if (bm.sign == 0) return 0;
    for (std::size_t i = 0; i < bm.xs.size(); ++i)
        if (bm.xs[i] != static_cast<int>(i) + 1) return 0;
    for (std::size_t j = 0; j < bm.ys.size(); ++j)
        if (bm.ys[j] != static_cast<int>(j) + 1) return 0;
    return bm.sign;
}

/// Enumerate Lambda_n^r (ascending r-subsets of {1..n}) in lexicographic order.
inline void for_each_tuple(int n, int r, const std::function<void(const OrderedTuple&)>& fn) {
    if (r < 0 || r > n) return;
    std::vector<int> cur(r);
    std::function<void(int, int)> rec = [&](int pos, int lo) {
        if (pos == r) {
            fn(OrderedTuple(cur));
            return;
        }
        for (int v = lo; v <= n - (r - pos - 1); ++v) {
            cur[pos] = v;
            rec(pos + 1, v + 1);
        }
    };
    if (r == 0) {
        fn(OrderedTuple{});
        return;
    }
    rec(0, 1);
}

/// Enumerate Lambda_{n,k}^r: pairs (I,J) with I in Lambda_n^s, J in Lambda_k^{r-s}.
inline void for_each_basis_pair(int n, int k, int r,
                                const std::function<void(const OrderedTuple&, const OrderedTuple&)>& fn) {
    for (int s = 0; s <= r; ++s) {
        if (s > n || r - s > k) continue;
        for_each_tuple(n, s, [&](const OrderedTuple& I) {
            for_each_tuple(k, r - s, [&](const OrderedTuple& J) { fn(I, J); });
        });
    }
}

inline std::size_t lambda_count(int n, int r) {
    if (r < 0 || r > n) return 0;
    Integer b = binomial(static_cast<unsigned>(n), static_cast<unsigned>(r));
    return static_cast<std::size_t>(b);
}

inline std::size_t lambda_count(int n, int k, int r) {
    std::size_t total = 0;
    for (int s = 0; s <= r; ++s)
        total += lambda_count(n, s) * lambda_count(k, r - s);
    return total;
}

} // namespace formacalc
