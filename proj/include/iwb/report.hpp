#pragma once

// JSON serialization of results. Keys keep insertion order so reports are
// byte-stable.

#include <string>
#include <vector>

#include "json.hpp"

#include "iwb/chern.hpp"
#include "iwb/coprimality.hpp"
#include "iwb/signed.hpp"

namespace iwb {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json header_line(const std::string& schema) { return Json{{"schema", schema}, {"version", kSchemaVersion}}; }

inline Json to_json(const InvariantProfile& p) {
    Json slopes = Json::array();
    for (const auto& s : p.slopes) slopes.push_back(Json{{"count", s.count}, {"valuation", s.valuation.get_str()}});
    return Json{{"mu", p.mu},
                {"lambda", p.lambda},
                {"slopes", slopes},
                {"profile", p.slopes_string()},
                {"stabilized", p.stabilized}};
}

inline Json series_coefficients(const IwasawaElement1& f, long count) {
    Json c = Json::array();
    for (long i = 0; i < count && i <= f.trunc_degree(); ++i) c.push_back(f[i].to_string());
    return c;
}

inline Json to_json(const SignedLSeries& s, long coefficients = 12) {
    Json levels = Json::array();
    for (long m : s.levels) levels.push_back(m);
    Json hist = Json::array();
    for (std::size_t n = 0; n < s.history.size(); ++n) {
        Json lv = Json::array();
        for (long m : s.history[n].levels) lv.push_back(m);
        hist.push_back(Json{{"levels", lv}, {"profile", to_json(s.history[n].profile)}, {"guard", s.history[n].guard_ok}});
    }
    Json j{{"label", s.label},
           {"p", s.p},
           {"sign", s.sign == 1 ? "+" : "-"},
           {"levels", levels},
           {"modulus_degree", degree(s.modulus)},
           {"content", s.content.get_str()},
           {"integral", s.integral},
           {"guard", s.guard_ok},
           {"profile", to_json(s.profile)},
           {"history", hist},
           {"coefficients", series_coefficients(s.series, coefficients)}};
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

inline Json to_json(const CoprimalityCertificate& c) {
    Json j{{"method", to_string(c.method)},
           {"verdict", to_string(c.verdict)},
           {"f_profile", to_json(c.f_profile)},
           {"g_profile", to_json(c.g_profile)},
           {"reason", c.reason}};
    if (c.resultant_valuation) j["resultant_valuation"] = c.resultant_valuation->get_str();
    return j;
}

inline Json to_json(const RatioReport& r) {
    return Json{{"status", r.status},
                {"expected", r.expected.get_str()},
                {"known_digits", r.known_digits},
                {"detail", r.detail}};
}

inline Json to_json(const ConditionStatus& c) { return Json{{"status", c.status}, {"detail", c.detail}}; }

inline Json to_json(const ConjectureBReport& r) {
    return Json{{"curve", r.curve},
                {"D", r.D},
                {"p", r.p},
                {"condition_a", to_json(r.a)},
                {"condition_b", to_json(r.b)},
                {"condition_c", to_json(r.c)},
                {"certificate", to_json(r.certificate)},
                {"trivial_character_ratio", to_json(r.ratio)},
                {"route", r.route},
                {"relies_on", r.relies_on},
                {"verdict", r.verdict}};
}

inline Json to_json(const PrimeDescriptor& d) {
    Json j{{"kind", d.kind == PrimeKind::Vertical ? "vertical" : "horizontal"},
           {"resolved", d.resolved},
           {"text", d.to_string()}};
    if (d.kind == PrimeKind::Vertical && d.resolved) {
        j["generators"] = Json::array({std::to_string(d.p), d.generator_string()});
    }
    if (d.kind == PrimeKind::Horizontal) j["fiber_degree"] = d.fiber_degree;
    return j;
}

inline Json to_json(const C2Divisor& c) {
    Json terms = Json::array();
    for (const auto& [d, m] : c.terms) terms.push_back(Json{{"prime", to_json(d)}, {"multiplicity", m}});
    Json j{{"terms", terms},
           {"completeness", c.completeness == Completeness::Full ? "full" : "partial-with-pushforward"},
           {"text", c.to_string()}};
    if (c.pushforward) j["pushforward"] = to_json(*c.pushforward);
    if (!c.notes.empty()) j["notes"] = c.notes;
    return j;
}

inline Json to_json(const ReductionData& r) {
    Json j{{"curve", r.curve},
           {"ell", r.ell},
           {"place", r.place},
           {"structure", to_string(r.structure)},
           {"e", r.e},
           {"f", r.f},
           {"type_over_Q", to_string(r.type_over_q)},
           {"type", to_string(r.type)}};
    if (r.tate_valuation) j["tate_valuation"] = *r.tate_valuation;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

inline Json to_json(const FudgeReport& r) {
    Json places = Json::array();
    for (const auto& fp : r.places) {
        Json j{{"reduction", to_json(fp.data)}, {"contribution", fp.contribution}, {"note", fp.note}};
        if (fp.prime) j["prime"] = to_json(*fp.prime);
        places.push_back(j);
    }
    return Json{{"p", r.p},
                {"D", r.D},
                {"outside_hypothesis", r.outside_hypothesis},
                {"places", places},
                {"total", to_json(r.total)}};
}

inline Json to_json(const std::vector<LedgerEntry>& ledger) {
    Json a = Json::array();
    for (const auto& e : ledger)
        a.push_back(Json{{"side", e.side}, {"term", e.term}, {"status", e.status}, {"detail", e.detail}});
    return a;
}

}  // namespace iwb
