// iwb: command-line front end. Reports are JSONL on stdout (or --out).
// Exit status: 0 success, 1 computational failure, 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "iwb/workbench.hpp"

using namespace iwb;

namespace {

struct Output {
    std::string path;
    std::ostringstream buf;

    void header(const std::string& command) {
        Json h = header_line("iwb.report");
        h["command"] = command;
        line(h);
    }
    void line(const Json& j) { buf << j.dump() << "\n"; }
    void flush() {
        if (path.empty()) {
            std::cout << buf.str();
            return;
        }
        std::ofstream out(path, std::ios::trunc);
        require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot write " + path);
        out << buf.str();
    }
};

int parse_sign(const std::string& s) {
    if (s == "+" || s == "plus" || s == "1") return 1;
    if (s == "-" || s == "minus" || s == "-1") return -1;
    if (s == "both") return 0;
    fail(ErrorKind::InvalidArgument, "sign must be +, - or both");
}

Json config_json(const RunConfig& c) {
    return Json{{"p", c.p},
                {"n_max", c.n_max},
                {"N", c.N},
                {"D", c.trunc_degree()},
                {"strict_paper_hypotheses", c.strict_paper_hypotheses}};
}

std::vector<long> parse_phi(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stol(tok));
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidArgument, "bad phi coefficient '" + tok + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iwasawa invariant workbench"};
    app.set_config("--config", "", "TOML or INI file with option values");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    cfg.cache_dir = RunConfig::default_cache_dir();
    Output out;
    app.add_option("--p", cfg.p, "odd prime")->capture_default_str();
    app.add_option("--n-max", cfg.n_max, "largest level n (conductors up to p^{n+1})")->capture_default_str();
    app.add_option("--precision,-N", cfg.N, "p-adic precision")->capture_default_str();
    app.add_option("--trunc", cfg.D, "truncation degree (0: p^n_max - 1)")->capture_default_str();
    app.add_option("--workers,-j", cfg.workers, "worker threads")->capture_default_str();
    app.add_flag("--strict-paper-hypotheses", cfg.strict_paper_hypotheses, "require p split in K and p >= 5 for fudge");
    app.add_option("--out,-o", out.path, "report file (default stdout)");

    std::string curves_file, curve_label, series_file, series_file2, sign_str = "both", series_out;
    std::string rows_file, sigma_file, frob_file, prime_var, phi_str;
    long level = 0, twist = 1, field = 0;

    auto* symbols = app.add_subcommand("symbols", "compute or load cached eigensymbols");
    symbols->add_option("--curves", curves_file, "curve file")->required();
    symbols->add_option("--curve", curve_label, "curve label")->required();
    symbols->add_option("--level", level, "level (must equal the conductor)")->required();
    symbols->add_option("--sign", sign_str, "+, - or both")->capture_default_str();

    auto* theta = app.add_subcommand("theta", "reconstruct signed series");
    theta->add_option("--curves", curves_file, "curve file")->required();
    theta->add_option("--curve", curve_label, "curve label")->required();
    theta->add_option("--twist", twist, "fundamental discriminant (1: no twist)")->capture_default_str();
    theta->add_option("--sign", sign_str, "+, - or both")->capture_default_str();
    theta->add_option("--series-out", series_out, "also write the representatives as a series file");

    auto* invariants = app.add_subcommand("invariants", "mu, lambda and slopes of series");
    invariants->add_option("--series", series_file, "series file")->required();

    auto* table = app.add_subcommand("table", "reproduce the invariant table and diff against the fixture");
    table->add_option("--curves", curves_file, "curve file")->required();
    table->add_option("--rows", rows_file, "table rows file")->required();

    auto* coprime = app.add_subcommand("coprime", "coprimality certificate for two series");
    coprime->add_option("--f", series_file, "series file holding f")->required();
    coprime->add_option("--g", series_file2, "series file holding g (default: second record of --f)");

    auto* fudge = app.add_subcommand("fudge", "fudge divisor over Sigma minus p");
    fudge->add_option("--curves", curves_file, "curve file")->required();
    fudge->add_option("--curve", curve_label, "curve label")->required();
    fudge->add_option("--field", field, "fundamental discriminant of K")->required();
    fudge->add_option("--sigma", sigma_file, "sigma file")->required();
    fudge->add_option("--frobenius", frob_file, "Frobenius exponent file");

    auto* c2 = app.add_subcommand("c2", "c2 of Z_p[[S,T]]/(f, g)");
    c2->add_option("--series", series_file, "two-variable series file with f and g")->required();
    c2->add_option("--var", prime_var, "vertical prime (p, var - phi(other)); omit for the pushforward");
    c2->add_option("--phi", phi_str, "comma separated coefficients of phi, phi(0) = 0")->default_str("0");

    auto* specialize = app.add_subcommand("specialize", "cyclotomic specialization S, T -> X");
    specialize->add_option("--series", series_file, "two-variable series file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    int status = 0;
    try {
        cfg.validate();
        if (*symbols) {
            out.header("symbols");
            auto curves = load_curves(curves_file);
            CurveData E = find_curve(curves, curve_label).curve();
            int s = parse_sign(sign_str);
            SymbolCache cache(cfg.cache_dir);
            for (int sg : {1, -1}) {
                if (s != 0 && s != sg) continue;
                CacheStatus st;
                auto sym = cache.get(E, level, sg, &st);
                std::cerr << "symbol " << E.label() << " " << (sg > 0 ? "+" : "-") << ": cache " << to_string(st)
                          << "\n";
                Json j = symbol_payload(*sym);
                j["cache"] = to_string(st);
                j["path"] = cache.path_for(E.label(), level, sg);
                j["generators"] = sym->values().size();
                out.line(j);
            }
        } else if (*theta) {
            out.header("theta");
            out.line(Json{{"config", config_json(cfg)}});
            auto curves = load_curves(curves_file);
            CurveData E = find_curve(curves, curve_label).curve();
            int s = parse_sign(sign_str);
            SymbolCache cache(cfg.cache_dir);
            SignedPair pr = compute_signed_pair(E, cache, twist, cfg, cfg.workers);
            std::ostringstream series;
            series << header_line("iwb.series").dump() << "\n";
            for (const auto* x : {&pr.plus, &pr.minus}) {
                if (s != 0 && s != x->sign) continue;
                out.line(to_json(*x));
                series << series1_record(x->series, x->representative).dump() << "\n";
            }
            if (s == 0) out.line(Json{{"trivial_character_ratio", to_json(trivial_character_ratio_check(pr.plus, pr.minus))}});
            if (!series_out.empty()) {
                std::ofstream f(series_out, std::ios::trunc);
                require(static_cast<bool>(f), ErrorKind::InvalidArgument, "cannot write " + series_out);
                f << series.str();
            }
        } else if (*invariants) {
            out.header("invariants");
            auto recs = read_jsonl(series_file, "iwb.series");
            for (std::size_t i = 0; i < recs.size(); ++i) {
                IwasawaElement1 f = parse_series1(recs[i], series_file + " record " + std::to_string(i + 1));
                out.line(Json{{"index", i}, {"profile", to_json(newton_invariants(f))}});
            }
        } else if (*table) {
            out.header("table");
            out.line(Json{{"config", config_json(cfg)}});
            auto curves = load_curves(curves_file);
            auto rows = load_table(rows_file);
            SymbolCache cache(cfg.cache_dir);
            auto results = compute_table(rows, curves, cache, cfg);
            long matched = 0;
            for (const auto& r : results) {
                RowDiff d = diff_row(r);
                matched += d.matched;
                out.line(to_json(r, d));
                if (!r.ok) status = std::max(status, r.exit_class);
                else if (!d.matched) status = std::max(status, 1);
            }
            out.line(Json{{"summary", Json{{"rows", results.size()}, {"matched", matched}}}});
        } else if (*coprime) {
            out.header("coprime");
            auto fr = read_jsonl(series_file, "iwb.series");
            std::vector<Json> gr = series_file2.empty() ? fr : read_jsonl(series_file2, "iwb.series");
            std::size_t gi = series_file2.empty() ? 1 : 0;
            require(!fr.empty() && gr.size() > gi, ErrorKind::InvalidArgument, "two series are required");
            IwasawaElement1 f = parse_series1(fr[0], "f"), g = parse_series1(gr[gi], "g");
            require(f.prime() == g.prime(), ErrorKind::InvalidArgument, "series over different primes");
            out.line(to_json(coprime_certificate(f, g)));
        } else if (*fudge) {
            out.header("fudge");
            auto curves = load_curves(curves_file);
            CurveData E = find_curve(curves, curve_label).curve();
            FieldSpec K(field);
            auto sigma = load_sigma(sigma_file);
            std::vector<FrobeniusData> frob;
            if (!frob_file.empty()) frob = load_frobenius(frob_file);
            FudgeReport rep = fudge_c2(E, K.D, cfg.p, sigma, frob, cfg.strict_paper_hypotheses);
            Json j = to_json(rep);
            j["curve"] = E.label();
            out.line(j);
            TheoremLedgerInput in;
            in.fudge = rep.total;
            out.line(Json{{"ledger", to_json(theorem_ledger(in))}});
        } else if (*c2) {
            out.header("c2");
            auto recs = read_jsonl(series_file, "iwb.series2");
            require(recs.size() >= 2, ErrorKind::InvalidArgument, "c2 needs two series f and g");
            IwasawaElement2 f = parse_series2(recs[0], "f"), g = parse_series2(recs[1], "g");
            require(f.prime() == g.prime(), ErrorKind::InvalidArgument, "series over different primes");
            if (!prime_var.empty()) {
                require(prime_var == "S" || prime_var == "T", ErrorKind::InvalidArgument, "--var must be S or T");
                PrimeDescriptor Q = PrimeDescriptor::vertical(f.prime(), prime_var[0], parse_phi(phi_str));
                long len = local_length_vertical(f, g, Q);
                C2Divisor d;
                d.add(Q, len);
                out.line(Json{{"prime", to_json(Q)}, {"length", len}, {"divisor", to_json(d)}});
            } else {
                PushforwardResult r = pushforward_c2(f, g);
                out.line(Json{{"resultant", series_coefficients(r.resultant, 12)},
                              {"profile", to_json(r.profile)},
                              {"divisor", to_json(r.divisor)}});
            }
        } else if (*specialize) {
            out.header("specialize");
            auto recs = read_jsonl(series_file, "iwb.series2");
            for (std::size_t i = 0; i < recs.size(); ++i) {
                IwasawaElement1 s = pi_cyc(parse_series2(recs[i], series_file + " record " + std::to_string(i + 1)));
                Json j{{"index", i}, {"specialization", series_coefficients(s, s.trunc_degree() + 1)}};
                if (s.is_zero_within_precision()) j["zero_within_precision"] = true;
                else j["profile"] = to_json(newton_invariants(s));
                out.line(j);
            }
        }
        out.flush();
    } catch (const Error& e) {
        std::cerr << "iwb: " << e.what() << "\n";
        return e.is_input_error() ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "iwb: " << e.what() << "\n";
        return 1;
    }
    return status;
}
