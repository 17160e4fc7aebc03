#pragma once

// JSON encodings.
//
//   Cyclotomic<N>  {"num": [phi(N) integers], "den": positive integer}, with
//                  "conductor": N added when N != 24. Canonical: common
//                  denominator, gcd(num, den) = 1. Integers outside the int64
//                  range are written as decimal strings.
//   PuiseuxSeries  {"valid_below": "p/q", "terms": [{"exp", "coeff"}], "meta"}
//   JacobiSeries   {"valid_below": "p/q", "terms": [{"n", "r", "coeff"}], "meta"}
//   VVPair         {"comp0", "comp2", "weight", "level", "character",
//                   "representation", "provenance"}
//   UMatrix        {"m", "conductor", "resolved", "rows": [[coeff]]}
//   CheckReport    {"name", "status", "bound", "witness", "ms", "evidence"}

#include <nlohmann/json.hpp>

#include "construct.hpp"
#include "cyclotomic.hpp"
#include "jacobi.hpp"
#include "qseries.hpp"
#include "verify.hpp"
#include "weil.hpp"

namespace jkernel
{

using json = nlohmann::ordered_json;

namespace detail
{

inline json integer_json(const Integer &z)
{
    if (z.fits_slong_p()) {
        return z.get_si();
    }
    return z.get_str();
}

inline Integer integer_from_json(const json &j)
{
    if (j.is_number_integer()) {
        return Integer(j.get<long>());
    }
    if (j.is_string()) {
        Integer z;
        if (z.set_str(j.get<std::string>(), 10) != 0) {
            throw parse_error("bad integer literal '" + j.get<std::string>() + "'");
        }
        return z;
    }
    throw parse_error("expected an integer, got " + j.dump());
}

inline Rational rational_from_json(const json &j)
{
    if (j.is_string()) {
        return parse_rational(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Rational(j.get<long>());
    }
    throw parse_error("expected a rational string, got " + j.dump());
}

inline const json &field(const json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw parse_error(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

} // namespace detail

template <int N>
json to_json(const Cyclotomic<N> &x)
{
    Integer den(1);
    for (const auto &c : x.coords()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    json num = json::array();
    for (const auto &c : x.coords()) {
        const Integer v = c.get_num() * (den / c.get_den());
        num.push_back(detail::integer_json(v));
    }
    json j;
    j["num"] = num;
    j["den"] = detail::integer_json(den);
    if (N != 24) {
        j["conductor"] = N;
    }
    return j;
}

template <int N>
Cyclotomic<N> cyclotomic_from_json(const json &j)
{
    const long conductor = j.contains("conductor") ? j.at("conductor").get<long>() : 24;
    if (conductor != N) {
        throw parse_error("expected conductor " + std::to_string(N) + ", got " + std::to_string(conductor));
    }
    const json &num = detail::field(j, "num");
    if (!num.is_array() || num.size() != Cyclotomic<N>::degree) {
        throw parse_error("cyclotomic value needs " + std::to_string(Cyclotomic<N>::degree) + " numerators");
    }
    const Integer den = detail::integer_from_json(detail::field(j, "den"));
    if (den <= 0) {
        throw parse_error("denominator must be positive");
    }
    typename Cyclotomic<N>::coords_type c;
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = make_rational(detail::integer_from_json(num[i]), den);
    }
    return Cyclotomic<N>(c);
}

inline json to_json(const FormMeta &m)
{
    json j;
    j["weight"] = to_string(m.weight);
    j["index"] = m.index;
    j["level"] = m.level;
    j["character"] = m.character;
    j["kind"] = to_string(m.kind);
    j["provenance"] = m.provenance;
    return j;
}

inline FormMeta meta_from_json(const json &j)
{
    FormMeta m;
    m.weight = detail::rational_from_json(detail::field(j, "weight"));
    m.index = j.value("index", 0);
    m.level = j.value("level", 1);
    m.character = j.value("character", std::string("trivial"));
    m.kind = form_kind_from_string(j.value("kind", std::string("unchecked")));
    m.provenance = j.value("provenance", std::string());
    return m;
}

inline json to_json(const PuiseuxSeries &s)
{
    json j;
    j["valid_below"] = to_string(s.valid_below());
    json terms = json::array();
    for (const auto &[e, c] : s.terms()) {
        json t;
        t["exp"] = to_string(e);
        t["coeff"] = to_json(c);
        terms.push_back(t);
    }
    j["terms"] = terms;
    j["meta"] = s.meta() ? to_json(*s.meta()) : json(nullptr);
    return j;
}

inline PuiseuxSeries series_from_json(const json &j)
{
    PuiseuxSeries s(detail::rational_from_json(detail::field(j, "valid_below")));
    for (const auto &t : detail::field(j, "terms")) {
        const Rational e = detail::rational_from_json(detail::field(t, "exp"));
        if (e >= s.valid_below()) {
            throw parse_error("term " + power_text(e) + " lies outside the valid range");
        }
        s.add_term(e, cyclotomic_from_json<24>(detail::field(t, "coeff")));
    }
    if (j.contains("meta") && !j.at("meta").is_null()) {
        s = s.with_meta(meta_from_json(j.at("meta")));
    }
    return s;
}

inline json to_json(const JacobiSeries &s)
{
    json j;
    j["valid_below"] = to_string(s.valid_below());
    json terms = json::array();
    for (const auto &[k, c] : s.terms()) {
        json t;
        t["n"] = to_string(k.first);
        t["r"] = k.second;
        t["coeff"] = to_json(c);
        terms.push_back(t);
    }
    j["terms"] = terms;
    j["meta"] = s.meta() ? to_json(*s.meta()) : json(nullptr);
    return j;
}

inline JacobiSeries jacobi_from_json(const json &j)
{
    JacobiSeries s(detail::rational_from_json(detail::field(j, "valid_below")));
    for (const auto &t : detail::field(j, "terms")) {
        const Rational n = detail::rational_from_json(detail::field(t, "n"));
        if (n >= s.valid_below()) {
            throw parse_error("term " + power_text(n) + " lies outside the valid range");
        }
        s.add_term(n, detail::field(t, "r").get<long>(), cyclotomic_from_json<24>(detail::field(t, "coeff")));
    }
    if (j.contains("meta") && !j.at("meta").is_null()) {
        s = s.with_meta(meta_from_json(j.at("meta")));
    }
    return s;
}

inline json to_json(const VVPair &p)
{
    json j;
    j["comp0"] = to_json(p.comp0);
    j["comp2"] = to_json(p.comp2);
    j["weight"] = p.weight ? json(to_string(*p.weight)) : json(nullptr);
    j["level"] = p.level;
    j["character"] = p.character;
    j["representation"] = p.representation;
    j["provenance"] = p.provenance;
    return j;
}

inline VVPair pair_from_json(const json &j)
{
    VVPair p;
    p.comp0 = series_from_json(detail::field(j, "comp0"));
    p.comp2 = series_from_json(detail::field(j, "comp2"));
    if (j.contains("weight") && !j.at("weight").is_null()) {
        p.weight = detail::rational_from_json(j.at("weight"));
    }
    p.level = j.value("level", 4);
    p.character = j.value("character", std::string("trivial"));
    p.representation = j.value("representation", std::string("rho2"));
    p.provenance = j.value("provenance", std::string());
    return p;
}

template <int N>
json to_json(const UMatrix<N> &u)
{
    json j;
    j["m"] = u.m();
    j["conductor"] = N;
    j["resolved"] = u.resolved();
    json rows = json::array();
    for (std::size_t i = 0; i < u.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < u.size(); ++k) {
            row.push_back(to_json(u(i, k)));
        }
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

template <int N>
UMatrix<N> umatrix_from_json(const json &j)
{
    const long m = detail::field(j, "m").get<long>();
    UMatrix<N> u(m);
    const json &rows = detail::field(j, "rows");
    if (!rows.is_array() || rows.size() != u.size()) {
        throw parse_error("matrix needs 2m rows");
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != u.size()) {
            throw parse_error("matrix needs 2m columns");
        }
        for (std::size_t k = 0; k < u.size(); ++k) {
            json entry = rows[i][k];
            if (!entry.contains("conductor") && N != 24) {
                entry["conductor"] = N;
            }
            u.at(i, k) = cyclotomic_from_json<N>(entry);
        }
    }
    u.set_resolved(j.value("resolved", false));
    return u;
}

inline json to_json(const CheckReport &r)
{
    json j;
    j["name"] = r.name;
    j["status"] = r.passed ? "pass" : "fail";
    if (r.order) {
        j["bound"] = to_string(*r.order);
    } else if (r.tolerance) {
        j["bound"] = static_cast<double>(*r.tolerance);
    } else {
        j["bound"] = nullptr;
    }
    j["witness"] = r.witness;
    j["ms"] = r.ms ? json(*r.ms) : json(nullptr);
    j["evidence"] = r.evidence;
    return j;
}

} // namespace jkernel
