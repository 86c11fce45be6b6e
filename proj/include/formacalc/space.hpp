#pragma once

#include <string>

#include "formacalc/error.hpp"

namespace formacalc {

/// The coordinate model (R^n)^(k): n smooth coordinates x1..xn, k formal
/// variables y1..yk, and the working truncation order for y-series (series
/// are stored modulo (y)^{order+1}).
struct Space {
    int n = 0;
    int k = 0;
    int order = 0;

    Space() = default;
    Space(int n_, int k_, int order_) : n(n_), k(k_), order(order_) {
        require(n >= 0 && k >= 0 && order >= 0, "E_DIM", "space parameters must be nonnegative");
    }

    bool operator==(const Space& o) const { return n == o.n && k == o.k && order == o.order; }
    bool same_shape(const Space& o) const { return n == o.n && k == o.k; }

    std::string str() const {
        return "(" + std::to_string(n) + "," + std::to_string(k) + ",order=" + std::to_string(order) + ")";
    }
};

inline void require_same_space(const Space& a, const Space& b) {
    require(a.same_shape(b) && a.order == b.order, "E_SPACE",
            "space mismatch: " + a.str() + " vs " + b.str());
}

} // namespace formacalc
