#ifndef LOWTWIST_CLI_HPP
#define LOWTWIST_CLI_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lowtwist::cli {

// One subcommand per run; flags are long-form only. The config echo written
// into every output omits execution-only parameters (workers, output path),
// so reruns at different parallelism stay byte-identical.
struct RunConfig {
    std::string subcommand;

    long long A = 0;
    long long B = 0;
    bool curve_set = false;

    uint64_t d = 0;            // eta
    double cap = 0.0;          // eta
    uint64_t X = 0;            // scan / pell
    std::optional<double> alpha;
    std::optional<double> H;
    uint64_t bound = 0;        // descent-audit
    uint64_t d1_max = 0;       // family
    uint64_t x1_max = 0;       // family
    std::array<int64_t, 3> f{1, 1, 1};
    bool f_set = false;
    double scale_lo = 2.0;     // ternary dyadic scales
    double scale_hi = 32.0;
    double eps = 0.05;         // ternary bound / pell conjA
    std::vector<uint64_t> x_list;  // exponents series

    std::string out_path;      // empty = stdout
    std::string format = "json";
    int workers = 1;
    uint64_t seed = 0;
    int n_iter = 8;
    double gap_guard = 1.0;
};

// exit status: 0 ok, 1 validation/domain error, 2 resource error (partial
// output flagged), 64 usage error (raised by the flag parser in the tool).
int run(const RunConfig& config);

}

#endif
