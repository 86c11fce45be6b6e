#pragma once

#include <json.hpp>

#include "formacalc/diffop.hpp"
#include "formacalc/homotopy.hpp"

namespace formacalc {

using Json = nlohmann::ordered_json;

/// Canonical JSON forms. Exact integers are emitted as decimal strings so no
/// consumer is tempted to round them; key order is fixed by construction.

inline Json to_json(const Rational& r) {
    Json j;
    j["num"] = numerator(r).str();
    j["den"] = denominator(r).str();
    return j;
}

inline Json to_json(const MultiIndex& m) {
    Json j = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) j.push_back(m[i]);
    return j;
}

inline Json to_json(const OrderedTuple& t) {
    Json j = Json::array();
    for (std::size_t i = 0; i < t.size(); ++i) j.push_back(t[i]);
    return j;
}

inline Json to_json(const Space& s) {
    Json j;
    j["n"] = s.n;
    j["k"] = s.k;
    j["order"] = s.order;
    return j;
}

inline Json to_json(const Poly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json t;
        t["exp"] = to_json(m);
        t["coeff"] = to_json(c);
        terms.push_back(std::move(t));
    }
    Json j;
    j["nvars"] = p.nvars();
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const UniPoly& p) {
    Json coeffs = Json::array();
    for (const auto& c : p.coeffs()) coeffs.push_back(to_json(c));
    return coeffs;
}

inline Json to_json(const PiecewisePoly& f) {
    Json j;
    Json breaks = Json::array();
    for (const auto& b : f.breaks()) breaks.push_back(to_json(b));
    Json pieces = Json::array();
    for (const auto& p : f.pieces()) pieces.push_back(to_json(p));
    j["breaks"] = std::move(breaks);
    j["pieces"] = std::move(pieces);
    return j;
}

inline Json to_json(const TensorDensity& t) {
    Json terms = Json::array();
    for (const auto& term : t.terms()) {
        Json e;
        e["weight"] = to_json(term.weight);
        Json fs = Json::array();
        for (const auto& f : term.factors) fs.push_back(to_json(f));
        e["factors"] = std::move(fs);
        terms.push_back(std::move(e));
    }
    Json j;
    j["axes"] = t.axes();
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const FormalFunction& f) {
    Json terms = Json::array();
    for (const auto& [J, p] : f.coeffs()) {
        Json t;
        t["y_exp"] = to_json(J);
        t["coeff"] = to_json(p);
        terms.push_back(std::move(t));
    }
    Json j;
    j["space"] = to_json(f.space());
    j["known_order"] = f.known_order();
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const DiffOp& d) {
    Json terms = Json::array();
    for (const auto& [key, c] : d.terms()) {
        Json t;
        t["dx_exp"] = to_json(key.first);
        t["dy_exp"] = to_json(key.second);
        t["coeff"] = to_json(c);
        terms.push_back(std::move(t));
    }
    Json j;
    j["space"] = to_json(d.space());
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const Jet& jet) {
    Json terms = Json::array();
    for (const auto& [key, c] : jet.coeffs()) {
        Json t;
        t["x_exp"] = to_json(key.first);
        t["y_exp"] = to_json(key.second);
        t["coeff"] = to_json(c);
        terms.push_back(std::move(t));
    }
    Json pt = Json::array();
    for (const auto& a : jet.basepoint()) pt.push_back(to_json(a));
    Json j;
    j["space"] = to_json(jet.space());
    j["basepoint"] = std::move(pt);
    j["jet_order"] = jet.jet_order();
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const PointDistribution& d) {
    Json terms = Json::array();
    for (const auto& [key, c] : d.terms()) {
        Json t;
        t["dx_exp"] = to_json(key.first);
        t["dy_exp"] = to_json(key.second);
        t["coeff"] = to_json(c);
        terms.push_back(std::move(t));
    }
    Json pt = Json::array();
    for (const auto& a : d.basepoint()) pt.push_back(to_json(a));
    Json j;
    j["space"] = to_json(d.space());
    j["basepoint"] = std::move(pt);
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const Form& w) {
    Json terms = Json::array();
    for (const auto& [key, f] : w.terms()) {
        Json t;
        t["dx"] = to_json(key.first);
        t["dy"] = to_json(key.second);
        t["coeff"] = to_json(f);
        terms.push_back(std::move(t));
    }
    Json j;
    j["space"] = to_json(w.space());
    j["degree"] = w.degree();
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const Density& d) {
    Json terms = Json::array();
    for (const auto& [L, t] : d.terms()) {
        Json e;
        e["ystar_exp"] = to_json(L);
        e["density"] = to_json(t);
        terms.push_back(std::move(e));
    }
    Json j;
    j["space"] = to_json(d.space());
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const DualForm& w) {
    Json terms = Json::array();
    for (const auto& [key, t] : w.terms()) {
        Json e;
        e["dxstar"] = to_json(key.first);
        e["dystar"] = to_json(key.second);
        e["coeff"] = to_json(t);
        terms.push_back(std::move(e));
    }
    Json j;
    j["space"] = to_json(w.space());
    j["degree"] = w.degree();
    j["terms"] = std::move(terms);
    return j;
}

inline Json to_json(const Morphism& m) {
    Json xs = Json::array(), ys = Json::array();
    for (const auto& f : m.x_pullbacks()) xs.push_back(to_json(f));
    for (const auto& f : m.y_pullbacks()) ys.push_back(to_json(f));
    Json j;
    j["source"] = to_json(m.source());
    j["target"] = to_json(m.target());
    j["x_pullbacks"] = std::move(xs);
    j["y_pullbacks"] = std::move(ys);
    return j;
}

inline Json to_json(const HomotopyCertificate& c) {
    Json degs = Json::array();
    for (const auto& d : c.degrees) {
        Json e;
        e["degree"] = d.degree;
        e["identity_ok"] = d.identity_ok;
        e["strongness_ok"] = d.strongness_ok;
        if (!d.witness.empty()) e["witness"] = d.witness;
        degs.push_back(std::move(e));
    }
    Json j;
    j["complex"] = c.complex_id;
    j["space"] = to_json(c.space);
    j["samples"] = c.samples;
    j["augmentation_ok"] = c.augmentation_ok;
    j["degrees"] = std::move(degs);
    j["passed"] = c.passed();
    return j;
}

} // namespace formacalc
