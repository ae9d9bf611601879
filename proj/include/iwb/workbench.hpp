#pragma once

// Orchestration: line-structured input files, the on-disk eigensymbol cache
// and per-row reproduction of the invariant table.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "iwb/config.hpp"
#include "iwb/expected_table.hpp"
#include "iwb/report.hpp"

namespace iwb {

inline constexpr const char* kCodeVersion = "1";

// ---------------------------------------------------------------- JSONL

/// Records of a JSONL file whose first line is {"schema": schema, "version": 1}.
inline std::vector<Json> parse_jsonl(std::istream& in, const std::string& schema, const std::string& origin) {
    std::vector<Json> out;
    std::string line;
    long lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            fail(ErrorKind::Parse, origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
        require(j.is_object(), ErrorKind::Parse, origin + ":" + std::to_string(lineno) + ": expected an object");
        if (!header) {
            require(j.contains("schema") && j["schema"] == schema, ErrorKind::Parse,
                    origin + ": expected schema " + schema);
            require(j.contains("version") && j["version"] == kSchemaVersion, ErrorKind::Parse,
                    origin + ": unsupported schema version");
            header = true;
            continue;
        }
        out.push_back(std::move(j));
    }
    require(header, ErrorKind::Parse, origin + ": missing schema header");
    return out;
}

inline std::vector<Json> read_jsonl(const std::string& path, const std::string& schema) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::InvalidArgument, "cannot open " + path);
    return parse_jsonl(in, schema, path);
}

namespace detail {

template <class T>
T field(const Json& j, const char* key, const std::string& where) {
    require(j.contains(key), ErrorKind::Parse, where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(ErrorKind::Parse, where + ": field '" + key + "' has the wrong type");
    }
}

inline Rational parse_rational(const std::string& s, const std::string& where) {
    Rational q;
    require(!s.empty() && q.set_str(s, 10) == 0, ErrorKind::Parse, where + ": not a rational: " + s);
    q.canonicalize();
    return q;
}

inline Integer parse_integer(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Integer(j.get<long>());
    require(j.is_string(), ErrorKind::Parse, where + ": expected an integer");
    Integer z;
    require(z.set_str(j.get<std::string>(), 10) == 0, ErrorKind::Parse, where + ": not an integer");
    return z;
}

/// FNV-1a, 64 bit.
inline std::string checksum(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------- curves

struct CurveRecord {
    std::string label;
    std::array<long, 5> ainvs{};
    long conductor = 0;
    bool cm = false;
    bool surjective = false;

    CurveData curve() const { return CurveData(label, ainvs, conductor); }
};

inline CurveRecord parse_curve(const Json& j) {
    std::string where = "curve record";
    CurveRecord r;
    r.label = detail::field<std::string>(j, "label", where);
    where += " " + r.label;
    auto a = detail::field<std::vector<long>>(j, "ainvs", where);
    require(a.size() == 5, ErrorKind::Parse, where + ": ainvs needs five entries");
    std::copy(a.begin(), a.end(), r.ainvs.begin());
    r.conductor = detail::field<long>(j, "conductor", where);
    if (j.contains("cm")) r.cm = detail::field<bool>(j, "cm", where);
    if (j.contains("surjective")) r.surjective = detail::field<bool>(j, "surjective", where);
    return r;
}

inline std::map<std::string, CurveRecord> load_curves(const std::string& path) {
    std::map<std::string, CurveRecord> out;
    for (const auto& j : read_jsonl(path, "iwb.curves")) {
        CurveRecord r = parse_curve(j);
        require(!out.count(r.label), ErrorKind::Parse, path + ": duplicate curve " + r.label);
        out.emplace(r.label, r);
    }
    return out;
}

inline const CurveRecord& find_curve(const std::map<std::string, CurveRecord>& curves, const std::string& label) {
    auto it = curves.find(label);
    require(it != curves.end(), ErrorKind::InvalidArgument, "unknown curve " + label);
    return it->second;
}

// ---------------------------------------------------------------- series files

/// One-variable series: {"p", "N", "D"?, "coefficients": [rational strings]}.
inline IwasawaElement1 parse_series1(const Json& j, const std::string& where) {
    long p = detail::field<long>(j, "p", where);
    long N = detail::field<long>(j, "N", where);
    auto cs = detail::field<std::vector<std::string>>(j, "coefficients", where);
    require(!cs.empty(), ErrorKind::Parse, where + ": no coefficients");
    std::vector<Rational> q;
    for (const auto& s : cs) q.push_back(detail::parse_rational(s, where));
    long D = j.contains("D") ? detail::field<long>(j, "D", where) : static_cast<long>(cs.size()) - 1;
    require(p > 2 && is_prime(p), ErrorKind::InvalidArgument, where + ": p must be an odd prime");
    require(N >= 1 && D >= 0, ErrorKind::InvalidArgument, where + ": bad precision or truncation");
    return IwasawaElement1::from_rationals(p, q, D, N);
}

/// Two-variable series: {"p", "N", "D", "terms": [[i, j, c], ...]} meaning sum c S^i T^j.
inline IwasawaElement2 parse_series2(const Json& j, const std::string& where) {
    long p = detail::field<long>(j, "p", where);
    long N = detail::field<long>(j, "N", where);
    long D = detail::field<long>(j, "D", where);
    require(p > 2 && is_prime(p), ErrorKind::InvalidArgument, where + ": p must be an odd prime");
    require(N >= 1 && D >= 0, ErrorKind::InvalidArgument, where + ": bad precision or truncation");
    const Json& ts = j.contains("terms") ? j.at("terms") : Json();
    require(ts.is_array(), ErrorKind::Parse, where + ": missing terms");
    std::vector<std::tuple<long, long, Integer>> terms;
    for (const auto& t : ts) {
        require(t.is_array() && t.size() == 3 && t[0].is_number_integer() && t[1].is_number_integer(),
                ErrorKind::Parse, where + ": term must be [i, j, c]");
        long i = t[0].get<long>(), k = t[1].get<long>();
        require(i >= 0 && k >= 0, ErrorKind::Parse, where + ": negative exponent");
        terms.emplace_back(i, k, detail::parse_integer(t[2], where));
    }
    return IwasawaElement2::from_terms(p, terms, D, N);
}

inline Json series1_record(const IwasawaElement1& f, const std::vector<Rational>& exact) {
    Json cs = Json::array();
    for (const auto& q : exact) cs.push_back(q.get_str());
    return Json{{"p", f.prime()}, {"N", f.precision()}, {"D", f.trunc_degree()}, {"coefficients", cs}};
}

// ---------------------------------------------------------------- fudge inputs

inline std::vector<long> load_sigma(const std::string& path) {
    std::vector<long> out;
    for (const auto& j : read_jsonl(path, "iwb.sigma")) {
        long ell = detail::field<long>(j, "ell", "sigma record");
        require(ell > 1 && is_prime(ell), ErrorKind::InvalidArgument, "sigma entry " + std::to_string(ell) + " is not prime");
        out.push_back(ell);
    }
    return out;
}

inline std::vector<FrobeniusData> load_frobenius(const std::string& path) {
    std::vector<FrobeniusData> out;
    for (const auto& j : read_jsonl(path, "iwb.frobenius")) {
        FrobeniusData d;
        d.ell = detail::field<long>(j, "ell", "frobenius record");
        if (j.contains("place")) d.place = detail::field<int>(j, "place", "frobenius record");
        require(j.contains("a") && j.contains("b"), ErrorKind::Parse, "frobenius record: needs a and b");
        d.a = detail::parse_integer(j.at("a"), "frobenius record");
        d.b = detail::parse_integer(j.at("b"), "frobenius record");
        out.push_back(d);
    }
    return out;
}

// ---------------------------------------------------------------- symbol cache

enum class CacheStatus { Hit, Miss, Replaced };

inline std::string to_string(CacheStatus s) {
    switch (s) {
        case CacheStatus::Hit: return "hit";
        case CacheStatus::Miss: return "miss";
        case CacheStatus::Replaced: return "replaced";
    }
    return "?";
}

inline Json symbol_payload(const EigenSymbol& s) {
    Json cert = Json::array();
    for (const auto& [ell, a] : s.certificate()) cert.push_back(Json::array({ell, a}));
    return Json{{"label", s.label()},
                {"level", s.level()},
                {"sign", s.sign()},
                {"code", kCodeVersion},
                {"content", s.normalization_content().get_str()},
                {"certificate", cert},
                {"values", s.values()}};
}

/// Eigensymbols on disk, one JSON file per (label, level, sign, code version).
/// Writes go through a temporary file and a rename.
class SymbolCache {
   public:
    explicit SymbolCache(std::string dir) : dir_(std::move(dir)) {}

    const std::string& directory() const { return dir_; }

    std::string path_for(const std::string& label, long level, int sign) const {
        return (std::filesystem::path(dir_) / ("symbol-" + label + "-" + std::to_string(level) + "-" +
                                               (sign > 0 ? "plus" : "minus") + "-v" + kCodeVersion + ".json"))
            .string();
    }

    std::shared_ptr<const EigenSymbol> get(const CurveData& E, long level, int sign, CacheStatus* status = nullptr) {
        require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "sign must be + or -");
        require(level == E.conductor(), ErrorKind::InvalidArgument,
                "level " + std::to_string(level) + " differs from the conductor of " + E.label());
        std::string path = path_for(E.label(), level, sign);
        std::lock_guard<std::mutex> lock(mu_);
        if (auto it = memo_.find(path); it != memo_.end()) {
            if (status) *status = CacheStatus::Hit;
            return it->second;
        }
        bool existed = std::filesystem::exists(path);
        std::shared_ptr<const EigenSymbol> sym;
        if (existed) sym = load(path, E.label(), level, sign);
        CacheStatus st = sym ? CacheStatus::Hit : existed ? CacheStatus::Replaced : CacheStatus::Miss;
        if (!sym) {
            ManinSymbolSpace space(level, sign);
            sym = std::make_shared<const EigenSymbol>(extract_eigensymbol(space, E));
            store(path, *sym);
        }
        memo_[path] = sym;
        if (status) *status = st;
        return sym;
    }

   private:
    std::shared_ptr<const EigenSymbol> load(const std::string& path, const std::string& label, long level,
                                            int sign) const {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        Json j = Json::parse(buf.str(), nullptr, false);
        if (j.is_discarded() || !j.is_object() || j.value("schema", std::string()) != "iwb.symbol" ||
            !j.contains("payload") || !j.contains("checksum"))
            return nullptr;
        const Json& pl = j["payload"];
        if (j["checksum"] != detail::checksum(pl.dump())) return nullptr;
        try {
            if (pl.at("label") != label || pl.at("level") != level || pl.at("sign") != sign ||
                pl.at("code") != kCodeVersion)
                return nullptr;
            auto p1 = std::make_shared<const P1List>(level);
            auto values = pl.at("values").get<std::vector<long>>();
            if (values.size() != p1->size()) return nullptr;
            std::vector<std::pair<long, long>> cert;
            for (const auto& c : pl.at("certificate")) cert.emplace_back(c.at(0).get<long>(), c.at(1).get<long>());
            Rational content(pl.at("content").get<std::string>());
            content.canonicalize();
            return std::make_shared<const EigenSymbol>(p1, sign, std::move(values), content, std::move(cert), label);
        } catch (const std::exception&) {
            return nullptr;
        }
    }

    void store(const std::string& path, const EigenSymbol& s) const {
        std::filesystem::create_directories(dir_);
        Json pl = symbol_payload(s);
        Json j{{"schema", "iwb.symbol"}, {"version", kSchemaVersion}, {"checksum", detail::checksum(pl.dump())},
               {"payload", pl}};
        static std::atomic<long> counter{0};
        std::string tmp = path + ".tmp" + std::to_string(counter++);
        {
            std::ofstream out(tmp, std::ios::trunc);
            require(static_cast<bool>(out), ErrorKind::Resource, "cannot write " + tmp);
            out << j.dump() << "\n";
            require(static_cast<bool>(out), ErrorKind::Resource, "write failed for " + tmp);
        }
        std::filesystem::rename(tmp, path);
    }

    std::string dir_;
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<const EigenSymbol>> memo_;
};

// ---------------------------------------------------------------- table rows

struct TableRow {
    std::string curve;
    long D = 0;
    long p = 3;
    std::optional<bool> surjective_EK;
};

inline std::vector<TableRow> load_table(const std::string& path) {
    std::vector<TableRow> out;
    for (const auto& j : read_jsonl(path, "iwb.table")) {
        TableRow r;
        r.curve = detail::field<std::string>(j, "curve", "table record");
        r.D = detail::field<long>(j, "D", "table record " + r.curve);
        r.p = detail::field<long>(j, "p", "table record " + r.curve);
        if (j.contains("surjective_EK")) r.surjective_EK = detail::field<bool>(j, "surjective_EK", "table record " + r.curve);
        out.push_back(r);
    }
    return out;
}

struct SignedPair {
    SignedLSeries plus, minus;
};

/// theta^+ and theta^- of E twisted by chi_D (D = 1: E itself).
inline SignedPair compute_signed_pair(const CurveData& E, SymbolCache& cache, long D, const RunConfig& cfg,
                                      int inner_workers) {
    auto plus = cache.get(E, E.conductor(), 1);
    auto minus = cache.get(E, E.conductor(), -1);
    SymbolSource src(E, plus, minus, D);
    SymbolTables tab(src, cfg.p, cfg.n_max + 1, inner_workers);
    return {reconstruct_signed(tab, 1, cfg.n_max, cfg.N, cfg.trunc_degree()),
            reconstruct_signed(tab, -1, cfg.n_max, cfg.N, cfg.trunc_degree())};
}

struct RowResult {
    TableRow row;
    bool ok = false;
    std::string error;
    int exit_class = 0;  // 1 computational, 2 input
    SignedPair thE, thEK;
    ConjectureBReport conjecture;
    ShadowProducts shadows;
};

inline RowResult compute_row(const TableRow& row, const std::map<std::string, CurveRecord>& curves,
                             SymbolCache& cache, RunConfig cfg, int inner_workers = 1) {
    RowResult r;
    r.row = row;
    try {
        const CurveRecord& rec = find_curve(curves, row.curve);
        cfg.p = row.p;
        cfg.validate();
        FieldSpec K(row.D);
        K.check_prime(row.p, cfg.strict_paper_hypotheses);
        CurveData E = rec.curve();
        r.thE = compute_signed_pair(E, cache, 1, cfg, inner_workers);
        r.thEK = compute_signed_pair(E, cache, row.D, cfg, inner_workers);
        GaloisFlags flags{rec.cm, rec.surjective, row.surjective_EK.value_or(rec.surjective)};
        r.conjecture = conjecture_b_report(rec.label, row.D, row.p, r.thE.plus, r.thE.minus, r.thEK.plus,
                                           r.thEK.minus, flags);
        r.shadows = shadow_products(r.thE.plus, r.thE.minus, r.thEK.plus, r.thEK.minus, 40);
        r.ok = true;
    } catch (const Error& e) {
        r.error = e.what();
        r.exit_class = e.is_input_error() ? 2 : 1;
    } catch (const std::exception& e) {
        r.error = e.what();
        r.exit_class = 1;
    }
    return r;
}

/// Rows in parallel; each row runs single-threaded unless there is only one.
inline std::vector<RowResult> compute_table(const std::vector<TableRow>& rows,
                                            const std::map<std::string, CurveRecord>& curves, SymbolCache& cache,
                                            const RunConfig& cfg) {
    std::vector<RowResult> out(rows.size());
    int inner = rows.size() == 1 ? cfg.workers : 1;
    parallel_for(static_cast<long>(rows.size()), cfg.workers,
                 [&](long i) { out[i] = compute_row(rows[i], curves, cache, cfg, inner); });
    return out;
}

struct RowDiff {
    bool matched = false;
    std::vector<std::string> mismatches;
};

inline RowDiff diff_row(const RowResult& r) {
    RowDiff d;
    const ExpectedRow* e = find_expected(r.row.curve, r.row.D, r.row.p);
    if (!e) {
        d.mismatches.push_back("row not in the expected table");
        return d;
    }
    if (!r.ok) {
        d.mismatches.push_back("computation failed: " + r.error);
        return d;
    }
    auto check = [&](const std::string& what, const std::string& got, const std::string& want) {
        if (got != want) d.mismatches.push_back(what + ": got " + got + ", expected " + want);
    };
    const auto& P = r.thEK.plus.profile;
    const auto& M = r.thEK.minus.profile;
    check("lambda+", std::to_string(P.lambda), std::to_string(e->lambda_plus));
    check("lambda-", std::to_string(M.lambda), std::to_string(e->lambda_minus));
    check("slopes+", P.slopes_string(), e->slopes_plus);
    check("slopes-", M.slopes_string(), e->slopes_minus);
    for (const auto* s : {&r.thEK.plus, &r.thEK.minus, &r.thE.plus, &r.thE.minus}) {
        check("mu " + s->label + (s->sign > 0 ? "+" : "-"), std::to_string(s->profile.mu), "0");
        if (!s->profile.stabilized) d.mismatches.push_back(s->label + " profile unstabilized");
    }
    d.matched = d.mismatches.empty();
    return d;
}

inline Json to_json(const RowResult& r, const RowDiff& d) {
    Json j{{"curve", r.row.curve}, {"D", r.row.D}, {"p", r.row.p}, {"ok", r.ok}};
    if (!r.ok) {
        j["error"] = r.error;
    } else {
        j["theta_EK_plus"] = to_json(r.thEK.plus, 0);
        j["theta_EK_minus"] = to_json(r.thEK.minus, 0);
        j["theta_E_plus"] = to_json(r.thE.plus, 0);
        j["theta_E_minus"] = to_json(r.thE.minus, 0);
        j["conditions"] = to_json(r.conjecture);
        j["shadow"] = Json{{"reduction_applies", r.shadows.reduction_applies},
                           {"P_pp", to_json(newton_invariants(r.shadows.P_pp))},
                           {"note", r.shadows.note}};
    }
    j["expected_match"] = d.matched;
    if (!d.mismatches.empty()) j["mismatches"] = d.mismatches;
    return j;
}

}  // namespace iwb
