#pragma once

#include "formacalc/homotopy.hpp"
#include "formacalc/json_io.hpp"
#include "formacalc/rng.hpp"

namespace formacalc {

/// Homotopy-identity residual on the Omega side, as a statement: returns an
/// empty string when (dh + hd)(w) = (id - eps g)(w) on the provable window,
/// else a short description of the failure.
inline std::string omega_residual(const FormHomotopy& H, const Form& w) {
    Form lhs = (w.degree() == 0) ? H.h(w.d()) : H.h(w).d() + H.h(w.d());
    Form rhs = (w.degree() == 0) ? w - omega_eps(w.space(), omega_g(w)) : w;
    if (forms_match(lhs, rhs)) return {};
    return "identity residual nonzero at degree " + std::to_string(w.degree());
}

/// Strongness witness d o h o d = d on the Omega side.
inline std::string omega_strongness_residual(const FormHomotopy& H, const Form& w) {
    if (w.degree() >= w.space().n + w.space().k) return {}; // d already lands in 0
    Form dw = w.d();
    Form lhs = H.h(dw).d();
    if (forms_match(lhs, dw)) return {};
    return "d h d != d at degree " + std::to_string(w.degree());
}

/// Dual-side residual: (dual_d H + H dual_d)(eta) - eta + alpha zeta(eta).
inline std::string dual_residual(const CsConfig& cfg, const DualForm& eta) {
    DualForm lhs = dual_d(cs_homotopy(eta, cfg)) + cs_homotopy(dual_d(eta), cfg);
    DualForm rhs = eta;
    if (eta.degree() == 0) rhs = rhs - cs_alpha(eta.space(), cfg, zeta(eta));
    if ((lhs - rhs).functionally_zero()) return {};
    return "identity residual nonzero at degree " + std::to_string(eta.degree());
}

inline std::string dual_strongness_residual(const CsConfig& cfg, const DualForm& eta) {
    if (eta.degree() == 0) return {};
    DualForm d1 = dual_d(eta);
    DualForm lhs = dual_d(cs_homotopy(d1, cfg));
    if ((lhs - d1).functionally_zero()) return {};
    return "dual d h d != d at degree " + std::to_string(eta.degree());
}

/// Runs the strong-exactness certification for one of the two registered
/// complexes ("omega" or "dual") on the given space: per degree, the
/// homotopy identity and the d o h o d = d witness on `samples` sampled
/// elements, plus the augmentation retraction (g o eps, resp. zeta o alpha).
inline HomotopyCertificate certify_strong_exactness(const std::string& complex_id, Space s,
                                                    int samples, std::uint64_t seed) {
    require(complex_id == "omega" || complex_id == "dual", "E_DOMAIN",
            "unknown complex id: " + complex_id);
    HomotopyCertificate cert;
    cert.complex_id = complex_id;
    cert.space = s;
    cert.samples = samples;
    Gen gen(seed);

    if (complex_id == "omega") {
        FormHomotopy H = radial_homotopy_data(s);
        cert.augmentation_ok = (omega_g(omega_eps(s, 1)) == 1);
        unsigned ydeg = s.k > 0 ? static_cast<unsigned>(std::max(0, s.order - 2)) : 0;
        for (int r = 0; r <= s.n + s.k; ++r) {
            HomotopyCertificate::DegreeResult res;
            res.degree = r;
            for (int t = 0; t < samples; ++t) {
                Form w = gen.form(s, r, 2, ydeg, 2);
                std::string e = omega_residual(H, w);
                if (!e.empty()) {
                    res.identity_ok = false;
                    res.witness = e + "; witness " + to_json(w).dump();
                    break;
                }
                e = omega_strongness_residual(H, w);
                if (!e.empty()) {
                    res.strongness_ok = false;
                    res.witness = e + "; witness " + to_json(w).dump();
                    break;
                }
            }
            cert.degrees.push_back(std::move(res));
        }
    } else {
        CsConfig cfg = CsConfig::standard(s.n);
        cert.augmentation_ok = (zeta(cs_alpha(s, cfg, 1)) == 1);
        unsigned ystar = static_cast<unsigned>(std::max(0, s.order - 1));
        for (int r = 0; r <= s.n + s.k; ++r) {
            HomotopyCertificate::DegreeResult res;
            res.degree = r;
            for (int t = 0; t < samples; ++t) {
                DualForm eta = gen.dual_form(s, r, ystar);
                std::string e = dual_residual(cfg, eta);
                if (!e.empty()) {
                    res.identity_ok = false;
                    res.witness = e + "; witness " + to_json(eta).dump();
                    break;
                }
                e = dual_strongness_residual(cfg, eta);
                if (!e.empty()) {
                    res.strongness_ok = false;
                    res.witness = e + "; witness " + to_json(eta).dump();
                    break;
                }
            }
            cert.degrees.push_back(std::move(res));
        }
    }
    return cert;
}

} // namespace formacalc
