// Command-line front end: every pipeline as a subcommand with reproducible,
// machine-readable output. See README for the flag reference.
#include <array>
#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "lowtwist/cli.hpp"
#include "lowtwist/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lowtwist: low points on quadratic twists, descent audits, "
                 "ternary form counts, real quadratic field statistics"};
    app.set_version_flag("--version", lowtwist::kVersion);
    app.require_subcommand(1);

    lowtwist::cli::RunConfig cfg;
    std::vector<long long> curve_ab;
    std::vector<int64_t> f_coeffs;
    std::vector<double> scales_pair;

    auto add_common = [&](CLI::App* sub, bool needs_curve) {
        if (needs_curve)
            sub->add_option("--curve", curve_ab, "curve coefficients A B")->expected(2);
        sub->add_option("--out", cfg.out_path, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "csv or json");
        sub->add_option("--workers", cfg.workers, "worker thread count");
        sub->add_option("--seed", cfg.seed, "random seed for sampled audits");
        sub->add_option("--n-iter", cfg.n_iter, "duplication iterations for canonical heights");
        sub->add_option("--gap-guard", cfg.gap_guard, "height-window inclusion guard");
    };

    CLI::App* eta = app.add_subcommand("eta", "minimal canonical height on one twist");
    add_common(eta, true);
    eta->add_option("--d", cfg.d, "squarefree twist")->required();
    eta->add_option("--cap", cfg.cap, "height cap (natural log scale)")->required();

    CLI::App* scan = app.add_subcommand("scan", "enumerate low points over d <= X");
    add_common(scan, true);
    scan->add_option("--X", cfg.X, "twist cap")->required();
    double alpha_val = 0, h_val = 0;
    CLI::Option* oa = scan->add_option("--alpha", alpha_val, "height exponent window");
    CLI::Option* oh = scan->add_option("--H", h_val, "absolute cap on exp h_x");

    CLI::App* expo = app.add_subcommand("exponents", "N* growth series and log-log fit");
    add_common(expo, true);
    double expo_alpha = 0;
    expo->add_option("--alpha", expo_alpha, "height exponent window")->required();
    expo->add_option("--X-list", cfg.x_list, "series of twist caps")->expected(-1)->required();

    CLI::App* audit = app.add_subcommand("descent-audit", "exhaustive descent uniqueness audit");
    add_common(audit, true);
    audit->add_option("--bound", cfg.bound, "coordinate bound")->required();

    CLI::App* family = app.add_subcommand("family", "minimal-height witness family");
    add_common(family, true);
    family->add_option("--d1-max", cfg.d1_max, "d1 bound")->required();
    family->add_option("--x1-max", cfg.x1_max, "x1 bound")->required();

    CLI::App* ternary = app.add_subcommand("ternary", "ternary form solution counts");
    add_common(ternary, false);
    ternary->add_option("--f", f_coeffs, "coefficients f1 f2 f3")->expected(3)->required();
    ternary->add_option("--scales", scales_pair, "dyadic scale range: lo hi")->expected(2);
    ternary->add_option("--eps", cfg.eps, "epsilon in the bound exponent");

    CLI::App* pell = app.add_subcommand("pell", "fundamental units, class numbers, averages");
    add_common(pell, false);
    pell->add_option("--X", cfg.X, "discriminant cap")->required();
    pell->add_option("--eps", cfg.eps, "epsilon in the unit-size threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 64;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    if (!curve_ab.empty()) {
        cfg.A = curve_ab[0];
        cfg.B = curve_ab[1];
        cfg.curve_set = true;
    }
    if (!f_coeffs.empty()) {
        cfg.f = {f_coeffs[0], f_coeffs[1], f_coeffs[2]};
        cfg.f_set = true;
    }
    if (!scales_pair.empty()) {
        cfg.scale_lo = scales_pair[0];
        cfg.scale_hi = scales_pair[1];
    }
    if (cfg.subcommand == "scan") {
        if (oa->count()) cfg.alpha = alpha_val;
        if (oh->count()) cfg.H = h_val;
    }
    if (cfg.subcommand == "exponents") cfg.alpha = expo_alpha;

    return lowtwist::cli::run(cfg);
}
