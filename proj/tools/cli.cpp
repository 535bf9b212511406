#include "cli.hpp"

#include "qfreud/asymcheck.hpp"
#include "qfreud/qpainleve.hpp"
#include "qfreud/rhpcheck.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace qfreud::cli {

const char* const kCommands[7] = {"moments", "polys", "painleve", "series", "rhp", "asym", "hq"};

namespace {

const char* const kTol = "1e-25";

BigScalar tol() { return BigScalar(kTol); }

std::string pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }

// Uniform doubles from a fixed engine and a fixed conversion, so output only depends on the seed.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * double(eng_() >> 11) * 0x1.0p-53; }
    BigPoint annulus(double rlo, double rhi) {
        return polar(BigScalar(uniform(rlo, rhi)), BigScalar(uniform(0.05, 6.2)));
    }

private:
    std::mt19937_64 eng_;
};

std::string join(const std::vector<BigScalar>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += v[i].str();
    }
    return s;
}

std::vector<Shift> shifts_of(const RunConfig& cfg) {
    std::vector<Shift> out;
    for (const auto& s : cfg.shifts) out.push_back(Shift::parse(s));
    return out;
}

Report start(const RunConfig& cfg, const QContext& ctx) {
    Report r;
    r.command = cfg.command;
    auto guard = ctx.scope();
    r.meta = {{"command", cfg.command},
              {"q", cfg.q},
              {"precision_bits", std::to_string(ctx.precision_bits())},
              {"trunc_tol", cfg.trunc_tol},
              {"cutoff_pos", std::to_string(ctx.cutoff_pos())},
              {"cutoff_neg", std::to_string(ctx.cutoff_neg())},
              {"n_max", std::to_string(ctx.n_max())},
              {"seed", std::to_string(cfg.seed)},
              {"version", kVersion}};
    return r;
}

void flag_check(Report& r, const std::string& what, const Flags& f) {
    r.checks.push_back({"flags(" + what + ")", f.describe(), "clean", f.clean()});
}

void band_check(Report& r, const std::string& name, double ratio, double q) {
    std::ostringstream th;
    th << "[" << q / 2 << "," << 2 * q << "]";
    std::ostringstream v;
    v.precision(6);
    v << ratio;
    r.checks.push_back({name, v.str(), th.str(), ratio >= q / 2 && ratio <= 2 * q});
}

void below(Report& r, const std::string& name, const BigScalar& v, const BigScalar& limit) {
    r.checks.push_back({name, v.str(6), limit.str(6), v < limit});
}

// ---- commands ----

Report cmd_moments(const RunConfig& cfg, const QContext& ctx) {
    Report r = start(cfg, ctx);
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    r.columns = {"c", "row", "name", "value", "target", "rel_error", "status"};
    for (const Shift& c : shifts_of(cfg)) {
        MomentTable mt = compute_moments(c, 12, ctx);
        for (size_t j = 0; j < mt.m.size(); ++j)
            r.rows.push_back({c.label(), "moment", "m" + std::to_string(j), mt.m[j].str(), "", "", ""});
        auto identity = [&](const char* name, const BigScalar& num, const BigScalar& den, const BigScalar& target) {
            BigScalar v = num / den;
            BigScalar e = abs(v - target) / abs(target);
            bool ok = e < tol();
            r.rows.push_back({c.label(), "identity", name, v.str(), target.str(), e.str(6), pass_word(ok)});
            r.checks.push_back({std::string(name) + "(c=" + c.label() + ")", e.str(6), kTol, ok});
        };
        identity("m4/m0", mt.m[4], mt.m[0], BigScalar(1) / q - BigScalar(1));
        identity("m6/m2", mt.m[6], mt.m[2], pow(q, -3L) - BigScalar(1));
        flag_check(r, "c=" + c.label(), mt.flags);
    }
    return r;
}

Report cmd_polys(const RunConfig& cfg, const QContext& ctx) {
    Report r = start(cfg, ctx);
    r.columns = {"c", "n", "alpha_n", "gamma_n", "coefficients"};
    const int N = cfg.n_max;
    for (const Shift& c : shifts_of(cfg)) {
        MonicPolySeq seq = build_polys(c, N, ctx);
        PrecisionScope scope(seq.precision_used);
        for (int n = 0; n <= N; ++n) {
            const auto i = static_cast<size_t>(n);
            r.rows.push_back({seq.shift_label, std::to_string(n), seq.alpha[i].str(), seq.gamma[i].str(),
                              join(seq.coeffs[i])});
        }
        OrthogonalityReport o = verify_orthogonality(seq, ctx);
        below(r, "orthogonality(c=" + seq.shift_label + ")", o.max_residual, tol());
        below(r, "norms(c=" + seq.shift_label + ")", o.max_diagonal_error, tol());
        flag_check(r, "c=" + seq.shift_label, seq.flags);
    }
    return r;
}

Report cmd_painleve(const RunConfig& cfg, const QContext& ctx) {
    if (cfg.n_max < 12) throw ConfigError("painleve needs n-max >= 12");
    Report r = start(cfg, ctx);
    r.columns = {"c", "n", "alpha_n", "qn_alpha_n", "r_n"};
    const int N = cfg.n_max;
    AlphaOrbit base = moment_orbit(Shift::one(), N, ctx);
    for (const Shift& c : shifts_of(cfg)) {
        AlphaOrbit o = moment_orbit(c, N, ctx);
        PrecisionScope scope(std::max(o.precision_bits, base.precision_bits));
        const BigScalar& q = o.q;
        for (int n = 1; n <= N; ++n) {
            const auto i = static_cast<size_t>(n);
            BigScalar rn = (o.alpha[i] - base.alpha[i]) / (pow(q, static_cast<long>(1 - n)) - base.alpha[i]);
            r.rows.push_back({o.label, std::to_string(n), o.alpha[i].str(),
                              (pow(q, static_cast<long>(n)) * o.alpha[i]).str(), rn.str()});
        }
        auto [worst, at] = max_painleve_residual(o);
        below(r, "painleve_residual(c=" + o.label + ")", worst, tol());
        flag_check(r, "c=" + o.label, o.flags);
        if (c.is_one()) {
            LimitDiagnostic d = limit_diagnostic(o, 10, N);
            std::ostringstream v;
            v << d.kappa;
            r.checks.push_back({"limit_exponent(c=1)", v.str(), "[0.4,0.6]", d.kappa >= 0.4 && d.kappa <= 0.6});
        } else {
            auto ds = shift_discrimination({c}, N, ctx);
            PrecisionScope s2(o.precision_bits);
            r.meta.push_back({"tail_min_r(c=" + o.label + ")", ds[0].tail_min.str(12)});
        }
    }
    return r;
}

Report cmd_series(const RunConfig& cfg, const QContext& ctx) {
    Report r = start(cfg, ctx);
    auto guard = ctx.scope();
    r.columns = {"kind", "parity", "expansion", "M", "max_residual", "coefficients"};
    const SeriesKind kinds[] = {SeriesKind::A,         SeriesKind::B,          SeriesKind::PhiEven,
                                SeriesKind::PhiOdd,    SeriesKind::VarphiEven, SeriesKind::VarphiOdd,
                                SeriesKind::AInf,      SeriesKind::BInf,       SeriesKind::PsiEven,
                                SeriesKind::PsiOdd,    SeriesKind::VarPsiEven, SeriesKind::VarPsiOdd};
    const int M = default_order(ctx);
    const double q = ctx.q().to_double();
    Sampler s(cfg.seed);
    for (SeriesKind k : kinds) {
        PowerSeries dump = make_series(k, M, ctx);
        const bool asc = expansion_of(k) == Expansion::AscendingAtZero;
        const double lo = asc ? 0.1 : 1.05 * q, hi = asc ? 2.0 : 4.0;
        PowerSeries ps = make_series_for_radius(k, BigScalar(asc ? hi / (q * q) : lo), ctx);
        auto f = [&](const BigPoint& x) { return ps(x); };
        BigScalar worst(0);
        for (int i = 0; i < 5; ++i) worst = max(worst, equation_residual(equation_of(k), f, s.annulus(lo, hi), ctx.q()));
        r.rows.push_back({series_name(k), parity_of(k) == Parity::Even ? "even" : "odd", asc ? "z" : "1/z",
                          std::to_string(M), worst.str(6), join(dump.coeffs())});
        below(r, std::string("equation_residual(") + series_name(k) + ")", worst, tol());
    }
    return r;
}

Report cmd_rhp(const RunConfig& cfg, const QContext& ctx) {
    if (cfg.n_max < 12) throw ConfigError("rhp needs n-max >= 12");
    Report r = start(cfg, ctx);
    SpecialFunctionSet sf(ctx);
    RhpConstants k = rhp_constants(sf);
    auto guard = ctx.scope();
    std::vector<int> ns;
    for (int n = 8; n <= cfg.n_max; n += 2) ns.push_back(n);
    GlueTable t = glue_table(ns, ContourSpec::flower(), k, sf);
    r.columns = {"n", "residual", "ratio"};
    for (const auto& row : t.rows) {
        std::ostringstream ratio;
        ratio.precision(8);
        ratio << row.ratio;
        r.rows.push_back({std::to_string(row.n), row.residual.str(), ratio.str()});
    }
    band_check(r, "glue_ratio_per_4", t.fitted_ratio, ctx.q().to_double());
    flag_check(r, "constants", k.flags);
    flag_check(r, "glue", t.flags);
    return r;
}

Report cmd_asym(const RunConfig& cfg, const QContext& ctx) {
    if (cfg.n_max < 12) throw ConfigError("asym needs n-max >= 12");
    Report r = start(cfg, ctx);
    SpecialFunctionSet sf(ctx);
    const int N = cfg.n_max - cfg.n_max % 2;
    AsymptoticHarness h(sf, N);
    auto guard = ctx.scope();
    const double q = ctx.q().to_double();
    std::vector<int> ns;
    for (int n = 8; n <= N; n += 2) ns.push_back(n);
    auto scaled = [](double rad) {
        SampleSet s;
        s.scaled = true;
        for (double a : {0.3, 1.2, 2.5}) s.points.push_back(polar(BigScalar(rad), BigScalar(a)));
        return s;
    };
    r.columns = {"quantity", "region", "radius", "n", "max_error"};
    auto emit = [&](const AsymptoticReport& rep, const char* radius, const std::string& name) {
        for (size_t i = 0; i < rep.ns.size(); ++i)
            r.rows.push_back({rep.quantity, rep.region == AsymRegion::Near ? "near" : "far", radius,
                              std::to_string(rep.ns[i]), rep.max_error[i].str(12)});
        band_check(r, name, rep.fitted_ratio, q);
        flag_check(r, name, rep.flags);
    };
    emit(h.pn_near(ns, scaled(0.9)), "0.9", "near_P_n");
    emit(h.pn_far(ns, scaled(1.1)), "1.1", "far_P_n");
    emit(h.pn_far(ns, scaled(2.0)), "2", "far_P_n_outer");
    emit(h.pn1_far(ns, scaled(2.0)), "2", "far_P_n-1");
    GammaScaling gs = check_gamma_scaling(h.polys(), N, ctx);
    r.meta.push_back({"A_est", gs.A_est.str(30)});
    r.meta.push_back({"B_est", gs.B_est.str(30)});
    below(r, "AB_minus_q", gs.AB_gap, tol() * BigScalar(1000));
    below(r, "alpha_gamma_consistency", gs.alpha_gap, tol());
    return r;
}

Report cmd_hq(const RunConfig& cfg, const QContext& ctx) {
    Report r = start(cfg, ctx);
    SpecialFunctionSet sf(ctx);
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    r.columns = {"r", "re", "im"};
    std::vector<BigScalar> grid;
    for (int j = 0; j <= 40; ++j) grid.push_back(pow(q, BigScalar(1) - BigScalar(j) / BigScalar(20)));
    for (const auto& p : hq_ray_scan(grid, pi() / BigScalar(7), sf)) r.rows.push_back({p.r.str(), p.re.str(), p.im.str()});

    for (const auto& [name, rad] : {std::pair<std::string, BigScalar>{"|z|=1", BigScalar(1)}, {"|z|=q^1/2", sqrt(q)}}) {
        BigScalar worst(0);
        for (int j = 0; j < 64; ++j) {
            BigPoint z = polar(rad, pi() * BigScalar(2) * (BigScalar(j) + BigScalar(0.5)) / BigScalar(64));
            BigPoint h = sf.hq_series(z);
            worst = max(worst, abs(h.re) / abs(h));
        }
        below(r, "real_part(" + name + ")", worst, tol());
    }
    Sampler s(cfg.seed);
    const double qd = q.to_double();
    BigScalar sp(0), per(0);
    for (int i = 0; i < 20; ++i) {
        BigPoint z = s.annulus(qd, 1 / qd);
        BigPoint a = sf.hq_series(z), b = sf.hq_product(z);
        sp = max(sp, abs(a - b) / abs(a));
        per = max(per, abs(sf.hq_series(z * q) - a) / abs(a));
    }
    below(r, "series_vs_product", sp, tol());
    below(r, "q_periodicity", per, tol());
    return r;
}

const std::map<std::string, std::function<Report(const RunConfig&, const QContext&)>>& table() {
    static const std::map<std::string, std::function<Report(const RunConfig&, const QContext&)>> t = {
        {"moments", cmd_moments}, {"polys", cmd_polys}, {"painleve", cmd_painleve}, {"series", cmd_series},
        {"rhp", cmd_rhp},         {"asym", cmd_asym},   {"hq", cmd_hq}};
    return t;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char ch : s) {
        if (ch == '"') o += '"';
        o += ch;
    }
    return o + "\"";
}

}  // namespace

void RunConfig::validate() const {
    if (table().count(command) == 0) throw ConfigError("unknown command: " + command);
    BigScalar qv, tv;
    {
        PrecisionScope guard(128);
        try {
            qv = BigScalar(q);
            tv = BigScalar(trunc_tol);
        } catch (const std::invalid_argument&) {
            throw ConfigError("q and trunc-tol must be decimal numbers");
        }
        if (!(qv > BigScalar(0) && qv < BigScalar(1))) throw ConfigError("q must lie in (0, 1)");
        if (!(tv > BigScalar(0) && tv < BigScalar("1e-10"))) throw ConfigError("trunc-tol must lie in (0, 1e-10)");
    }
    if (precision_bits != 0 && (precision_bits < 64 || precision_bits > 1 << 20))
        throw ConfigError("precision-bits must be 0 (automatic) or in [64, 2^20]");
    if (n_max < 0 || n_max > 400) throw ConfigError("n-max must lie in [0, 400]");
    if (shifts.empty()) throw ConfigError("at least one shift is required");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    QContext ctx = QContext::make(q, std::max(precision_bits, 64), trunc_tol, std::max(n_max, 1));
    for (const auto& s : shifts) Shift::parse(s).eval(ctx);  // throws ConfigError outside (q, 1]
}

std::string RunConfig::to_kv() const {
    std::ostringstream os;
    os << "command=" << command << "\n"
       << "q=" << q << "\n"
       << "precision-bits=" << precision_bits << "\n"
       << "trunc-tol=" << trunc_tol << "\n"
       << "n-max=" << n_max << "\n";
    for (const auto& s : shifts) os << "shift-c=" << s << "\n";
    os << "format=" << format << "\n";
    if (!out.empty()) os << "out=" << out << "\n";
    os << "seed=" << seed << "\n";
    return os.str();
}

bool Report::passed() const {
    if (!error.empty()) return false;
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

bool parse_args(int argc, const char* const* argv, RunConfig& cfg, std::ostream& msg) {
    CLI::App app{"Numerics for q-Freud II orthogonal polynomials"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    std::vector<std::string> names(std::begin(kCommands), std::end(kCommands));
    app.add_option("command", cfg.command, "one of: moments polys painleve series rhp asym hq")
        ->required()
        ->check(CLI::IsMember(names));
    app.add_option("--q", cfg.q, "q in (0,1), as a decimal");
    app.add_option("--precision-bits", cfg.precision_bits, "working precision; 0 picks it from q and n-max");
    app.add_option("--trunc-tol", cfg.trunc_tol, "truncation tolerance for series and products");
    app.add_option("--n-max", cfg.n_max, "largest degree");
    app.add_option("--shift-c", cfg.shifts, "lattice shift: 1, sqrtq or a decimal in (q,1]; repeatable");
    app.add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--seed", cfg.seed, "seed for random sample points");
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, msg, msg);
        return false;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    return true;
}

Report run(const RunConfig& cfg) {
    cfg.validate();
    QContext ctx = QContext::make(cfg.q, cfg.precision_bits, cfg.trunc_tol, cfg.n_max);
    try {
        return table().at(cfg.command)(cfg, ctx);
    } catch (const NumericError& e) {
        Report r = start(cfg, ctx);
        r.error = e.what();
        return r;
    }
}

void write_csv(const Report& r, std::ostream& os) {
    for (const auto& [k, v] : r.meta) os << "# " << k << "=" << v << "\n";
    for (size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << csv_field(r.columns[i]);
    os << "\n";
    for (const auto& row : r.rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
    }
    for (const auto& c : r.checks)
        os << "# check," << csv_field(c.name) << "," << c.value << "," << c.threshold << "," << pass_word(c.pass) << "\n";
    if (!r.error.empty()) os << "# error=" << r.error << "\n";
    os << "# status=" << pass_word(r.passed()) << "\n";
}

void write_json(const Report& r, std::ostream& os) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : r.meta) j["meta"][k] = v;
    j["columns"] = r.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json o;
        for (size_t i = 0; i < row.size(); ++i) {
            if (r.columns[i] == "coefficients") {
                std::vector<std::string> parts;
                std::istringstream is(row[i]);
                for (std::string t; is >> t;) parts.push_back(t);
                o[r.columns[i]] = parts;
            } else {
                o[r.columns[i]] = row[i];
            }
        }
        j["rows"].push_back(std::move(o));
    }
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"status", pass_word(c.pass)}});
    if (!r.error.empty()) j["error"] = r.error;
    j["status"] = pass_word(r.passed());
    os << j.dump(2) << "\n";
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    Report rep;
    try {
        if (!parse_args(argc, argv, cfg, out)) return 0;
        rep = run(cfg);
    } catch (const ConfigError& e) {
        err << nlohmann::json{{"status", "config-error"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << nlohmann::json{{"status", "config-error"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
    auto write = [&](std::ostream& os) { cfg.format == "json" ? write_json(rep, os) : write_csv(rep, os); };
    if (cfg.out.empty()) {
        write(out);
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            err << nlohmann::json{{"status", "config-error"}, {"message", "cannot open " + cfg.out}}.dump() << "\n";
            return 2;
        }
        write(f);
    }
    if (!rep.passed()) {
        err << nlohmann::json{{"status", "numeric-failure"}, {"command", cfg.command}, {"error", rep.error}}.dump()
            << "\n";
        return 1;
    }
    return 0;
}

}  // namespace qfreud::cli
