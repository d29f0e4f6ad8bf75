#include "lowtwist/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"
#include "lowtwist/heights.hpp"
#include "lowtwist/parallel.hpp"
#include "lowtwist/pell.hpp"
#include "lowtwist/search.hpp"
#include "lowtwist/ternary.hpp"
#include "lowtwist/version.hpp"

namespace lowtwist::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string config_echo(const RunConfig& c) {
    std::ostringstream os;
    os << c.subcommand;
    if (c.curve_set) os << " --curve " << c.A << " " << c.B;
    if (c.subcommand == "eta") os << " --d " << c.d << " --cap " << fmt_real(c.cap);
    if (c.subcommand == "scan" || c.subcommand == "pell") os << " --X " << c.X;
    if (c.alpha) os << " --alpha " << fmt_real(*c.alpha);
    if (c.H) os << " --H " << fmt_real(*c.H);
    if (c.subcommand == "descent-audit") os << " --bound " << c.bound;
    if (c.subcommand == "family") os << " --d1-max " << c.d1_max << " --x1-max " << c.x1_max;
    if (c.f_set) os << " --f " << c.f[0] << " " << c.f[1] << " " << c.f[2];
    if (c.subcommand == "ternary")
        os << " --scales " << fmt_real(c.scale_lo) << " " << fmt_real(c.scale_hi);
    if (c.subcommand == "ternary" || c.subcommand == "pell") os << " --eps " << fmt_real(c.eps);
    if (c.subcommand == "exponents") {
        os << " --X-list";
        for (uint64_t x : c.x_list) os << " " << x;
    }
    os << " --n-iter " << c.n_iter << " --format " << c.format << " --seed " << c.seed;
    return os.str();
}

struct Output {
    FILE* fp = nullptr;
    bool owned = false;
    explicit Output(const std::string& path) {
        if (path.empty()) {
            fp = stdout;
        } else {
            fp = std::fopen(path.c_str(), "wb");
            if (!fp) throw ValidationError("cannot open output path: " + path);
            owned = true;
        }
    }
    ~Output() {
        if (owned && fp) std::fclose(fp);
    }
};

void write_json(const RunConfig& c, ordered_json& j) {
    ordered_json root;
    root["version"] = kVersion;
    root["config"] = config_echo(c);
    for (auto& [k, v] : j.items()) root[k] = v;
    Output out(c.out_path);
    std::string s = root.dump(2);
    std::fwrite(s.data(), 1, s.size(), out.fp);
    std::fputc('\n', out.fp);
}

void csv_header(FILE* fp, const RunConfig& c, const std::string& columns) {
    std::fprintf(fp, "# lowtwist %s\n", kVersion);
    std::fprintf(fp, "# config: %s\n", config_echo(c).c_str());
    std::fprintf(fp, "%s\n", columns.c_str());
}

search::SearchOptions search_opts(const RunConfig& c) {
    search::SearchOptions so;
    so.workers = c.workers;
    so.n_iter = c.n_iter;
    so.gap_guard = c.gap_guard;
    return so;
}

ordered_json record_json(const search::PointRecord& r) {
    return ordered_json{{"d", r.d.get_str()},
                        {"x", r.point.x.get_str()},
                        {"y", r.point.y.get_str()},
                        {"z", r.point.z.get_str()},
                        {"h_x", r.h_x},
                        {"h_hat", r.h_hat},
                        {"d0", r.descent.d0.get_str()},
                        {"d1", r.descent.d1.get_str()},
                        {"b1", r.descent.b1.get_str()},
                        {"x1", r.descent.x1.get_str()}};
}

void record_csv(FILE* fp, const search::PointRecord& r) {
    std::fprintf(fp, "%s,%s,%s,%s,%s,%s,%s,%s,%s,%s\n", r.d.get_str().c_str(),
                 r.point.x.get_str().c_str(), r.point.y.get_str().c_str(),
                 r.point.z.get_str().c_str(), fmt_real(r.h_x).c_str(), fmt_real(r.h_hat).c_str(),
                 r.descent.d0.get_str().c_str(), r.descent.d1.get_str().c_str(),
                 r.descent.b1.get_str().c_str(), r.descent.x1.get_str().c_str());
}

curve::CurveParams params_of(const RunConfig& c) {
    if (!c.curve_set) throw ValidationError("--curve A B is required");
    return curve::make_params(mpz_class(static_cast<long>(c.A)), mpz_class(static_cast<long>(c.B)));
}

int run_eta(const RunConfig& c) {
    auto res = search::eta(params_of(c), mpz_class(static_cast<unsigned long>(c.d)), c.cap,
                           search_opts(c));
    ordered_json j;
    j["d"] = res.d.get_str();
    j["cap_log"] = res.cap_log;
    j["status"] = res.status == search::EtaStatus::found ? "found" : "exceeds_cap";
    if (res.eta_log) j["eta_log"] = *res.eta_log;
    if (res.witness) j["witness"] = record_json(*res.witness);
    j["lower_bound_slack"] = res.lower_bound_slack;
    write_json(c, j);
    return 0;
}

int run_scan(const RunConfig& c) {
    auto params = params_of(c);
    search::SearchWindow w;
    w.X = c.X;
    w.alpha = c.alpha;
    w.H = c.H;
    auto res = search::enumerate_low_points(params, w, search_opts(c));

    uint64_t n_star = 2 * res.records.size();
    uint64_t n_distinct = 0;
    const mpz_class* last = nullptr;
    double c_emp = 0.0;
    for (const auto& r : res.records) {
        if (!last || *last != r.d) ++n_distinct;
        last = &r.d;
        c_emp = std::max(c_emp, 0.125 * heights::log_mpz(r.d) - r.h_hat);
    }

    if (c.format == "csv") {
        Output out(c.out_path);
        csv_header(out.fp, c, "d,x,y,z,h_x,h_hat,d0,d1,b1,x1");
        for (const auto& r : res.records) record_csv(out.fp, r);
        std::fprintf(out.fp, "# n_records=%zu N_star=%" PRIu64 " N=%" PRIu64 " C_emp=%s%s\n",
                     res.records.size(), n_star, n_distinct, fmt_real(c_emp).c_str(),
                     res.complete ? "" : " partial=true");
    } else {
        ordered_json j;
        ordered_json win;
        win["X"] = c.X;
        if (c.alpha) win["alpha"] = *c.alpha;
        if (c.H) win["H"] = *c.H;
        j["window"] = win;
        j["n_records"] = res.records.size();
        j["N_star"] = n_star;
        j["N"] = n_distinct;
        j["C_emp"] = c_emp;
        if (!res.complete) {
            j["partial"] = true;
            j["resume_d1"] = res.resume_d1;
        }
        auto arr = ordered_json::array();
        for (const auto& r : res.records) arr.push_back(record_json(r));
        j["records"] = arr;
        write_json(c, j);
    }
    return res.complete ? 0 : 2;
}

int run_exponents(const RunConfig& c) {
    auto params = params_of(c);
    if (!c.alpha) throw ValidationError("exponents: --alpha is required");
    if (c.x_list.size() < 3) throw ValidationError("exponents: need at least 3 X values");
    std::vector<std::pair<double, double>> series;
    ordered_json rows = ordered_json::array();
    for (uint64_t x : c.x_list) {
        uint64_t n = search::count_N_star(params, x, *c.alpha, search_opts(c));
        series.emplace_back(static_cast<double>(x), static_cast<double>(n));
        rows.push_back({{"X", x}, {"N_star", n}});
    }
    auto fit = search::fit_exponent(series);
    ordered_json j;
    j["alpha"] = *c.alpha;
    j["series"] = rows;
    j["fit"] = {{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"residual", fit.residual},
                {"n_used", fit.n_used},
                {"dropped", fit.dropped}};
    write_json(c, j);
    return 0;
}

int run_descent_audit(const RunConfig& c) {
    auto rep = descent::uniqueness_audit(params_of(c), c.bound);
    ordered_json j = descent::to_json(rep);
    write_json(c, j);
    return rep.violations.empty() ? 0 : 1;
}

int run_family(const RunConfig& c) {
    auto fam = search::minimal_family(params_of(c), c.d1_max, c.x1_max, search_opts(c));
    if (c.format == "csv") {
        Output out(c.out_path);
        csv_header(out.fp, c, "d,d1,x1,x,y,z,h_x,h_hat,eta_ratio");
        for (const auto& fr : fam) {
            std::fprintf(out.fp, "%s,%s,%s,%s,%s,%s,%s,%s,%s\n", fr.d.get_str().c_str(),
                         fr.record.descent.d1.get_str().c_str(),
                         fr.record.descent.x1.get_str().c_str(), fr.record.point.x.get_str().c_str(),
                         fr.record.point.y.get_str().c_str(), fr.record.point.z.get_str().c_str(),
                         fmt_real(fr.record.h_x).c_str(), fmt_real(fr.record.h_hat).c_str(),
                         fmt_real(fr.eta_ratio).c_str());
        }
    } else {
        ordered_json j;
        j["d1_max"] = c.d1_max;
        j["x1_max"] = c.x1_max;
        j["n_members"] = fam.size();
        auto arr = ordered_json::array();
        for (const auto& fr : fam) {
            ordered_json e = record_json(fr.record);
            e["eta_ratio"] = fr.eta_ratio;
            arr.push_back(e);
        }
        j["members"] = arr;
        write_json(c, j);
    }
    return 0;
}

int run_ternary(const RunConfig& c) {
    if (!c.f_set) throw ValidationError("ternary: --f f1 f2 f3 is required");
    auto form = ternary::make_form(c.f[0], c.f[1], c.f[2]);
    std::vector<double> scales;
    for (double s = c.scale_lo; s <= c.scale_hi + 1e-9; s *= 2) scales.push_back(s);
    ternary::CountOptions opts;
    opts.workers = c.workers;
    auto rep = ternary::exponent_scan(form, scales, c.eps, opts);
    if (c.format == "csv") {
        Output out(c.out_path);
        csv_header(out.fp, c, "scale,U1,U2,U3,V1,V2,V3,count,bound,ratio");
        for (const auto& r : rep.rows) {
            std::fprintf(out.fp, "%s,%s,%s,%s,%s,%s,%s,%" PRIu64 ",%s,%s\n",
                         fmt_real(r.scale).c_str(), fmt_real(r.box.U1).c_str(),
                         fmt_real(r.box.U2).c_str(), fmt_real(r.box.U3).c_str(),
                         fmt_real(r.box.V1).c_str(), fmt_real(r.box.V2).c_str(),
                         fmt_real(r.box.V3).c_str(), r.count, fmt_real(r.bound).c_str(),
                         fmt_real(r.ratio).c_str());
        }
        std::fprintf(out.fp, "# max_ratio=%s eps=%s\n", fmt_real(rep.max_ratio).c_str(),
                     fmt_real(rep.eps).c_str());
    } else {
        ordered_json j;
        j["eps"] = rep.eps;
        j["max_ratio"] = rep.max_ratio;
        auto arr = ordered_json::array();
        for (const auto& r : rep.rows)
            arr.push_back({{"scale", r.scale}, {"count", r.count}, {"bound", r.bound}, {"ratio", r.ratio}});
        j["rows"] = arr;
        write_json(c, j);
    }
    return 0;
}

int run_pell(const RunConfig& c) {
    if (c.X == 0) throw ValidationError("pell: --X is required");
    pell::PellRunOptions popts;
    popts.workers = c.workers;
    auto ds = pell::fundamental_discriminants(c.X);
    std::vector<pell::PellData> rows(ds.size());
    parallel_items(c.workers, ds.size(), [&](int, uint64_t i) { rows[i] = pell::pell_data(ds[i]); });
    auto siegel = pell::siegel_average(c.X, popts);
    auto conjA = pell::conjA_frequency(c.X, c.eps, popts);

    if (c.format == "csv") {
        Output out(c.out_path);
        csv_header(out.fp, c, "D,t,u,log_eps,h");
        for (const auto& r : rows)
            std::fprintf(out.fp, "%" PRIu64 ",%s,%s,%s,%u\n", r.D, r.t.get_str().c_str(),
                         r.u.get_str().c_str(), fmt_real(r.log_eps).c_str(), r.h);
        std::fprintf(out.fp, "# siegel_sum=%s siegel_ratio=%s\n", fmt_real(siegel.sum).c_str(),
                     fmt_real(siegel.ratio).c_str());
        std::fprintf(out.fp, "# conjA_eps=%s conjA_fraction=%s\n", fmt_real(c.eps).c_str(),
                     fmt_real(conjA.fraction).c_str());
    } else {
        ordered_json j;
        j["X"] = c.X;
        auto arr = ordered_json::array();
        for (const auto& r : rows)
            arr.push_back({{"D", r.D},
                           {"t", r.t.get_str()},
                           {"u", r.u.get_str()},
                           {"log_eps", r.log_eps},
                           {"h", r.h}});
        j["rows"] = arr;
        j["siegel"] = {{"sum", siegel.sum},
                       {"ratio", siegel.ratio},
                       {"n_discriminants", siegel.n_discriminants}};
        ordered_json blocks = ordered_json::array();
        for (const auto& b : conjA.blocks)
            blocks.push_back({{"lo", b.lo}, {"hi", b.hi}, {"n", b.n}, {"exceed", b.exceed}});
        j["conjA"] = {{"eps", c.eps}, {"fraction", conjA.fraction}, {"blocks", blocks}};
        write_json(c, j);
    }
    return 0;
}

}  // namespace

int run(const RunConfig& config) {
    try {
        if (config.format != "csv" && config.format != "json")
            throw ValidationError("--format must be csv or json");
        if (config.subcommand == "eta") return run_eta(config);
        if (config.subcommand == "scan") return run_scan(config);
        if (config.subcommand == "exponents") return run_exponents(config);
        if (config.subcommand == "descent-audit") return run_descent_audit(config);
        if (config.subcommand == "family") return run_family(config);
        if (config.subcommand == "ternary") return run_ternary(config);
        if (config.subcommand == "pell") return run_pell(config);
        throw ValidationError("unknown subcommand: " + config.subcommand);
    } catch (const ResourceError& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const RangeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace lowtwist::cli
