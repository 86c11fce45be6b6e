#pragma once

#include <stdexcept>
#include <string>

namespace formacalc {

/// Library error with a stable machine-readable code.
///
/// Codes in use:
///   E_SYNTAX     script syntax error (carries line/column)
///   E_UNBOUND    unbound identifier in a script
///   E_TYPE       expression kind mismatch (function/form/dualform/morphism/density/scalar)
///   E_SPACE      space mismatch between operands
///   E_DEGREE     form/dual-form degree mismatch
///   E_DIM        point or tuple dimension mismatch
///   E_TRUNC      known-order / truncation budget exhausted
///   E_DOMAIN     value outside the operation's domain (non-invertible stalk,
///                degenerate interval, non-normalized bump, missing config)
///   E_INTERNAL   internal consistency failure (certificate disagreement)
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& msg) {
    throw Error(code, msg);
}

inline void require(bool cond, const char* code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

} // namespace formacalc
