// steinlab: experiment runner for quantum hypothesis-testing measurements.
//
// Subcommands: schur, design, exponent, ispec, ineq, gaussian, selftest.
// Exit codes: 0 success, 2 config error, 3 numeric/cap error, 4 acceptance
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steinlab/gaussian.hpp"
#include "steinlab/hypothesis_testing.hpp"
#include "steinlab/inequalities.hpp"
#include "steinlab/info_spectrum.hpp"
#include "steinlab/matrix_io.hpp"
#include "steinlab/measurement_design.hpp"
#include "steinlab/operator_algebra.hpp"
#include "steinlab/rng.hpp"
#include "steinlab/schur_weyl.hpp"
#include "steinlab/selftest.hpp"

namespace {

using nlohmann::json;
using namespace steinlab;

constexpr const char* kVersion = "0.1.0";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Flat JSON config whose keys mirror the long option names; command-line
// flags win over file values.
struct ConfigFile {
    json values = json::object();

    static ConfigFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cli", "config", "cannot open config file " + path);
        ConfigFile cf;
        try {
            in >> cf.values;
        } catch (const json::exception& e) {
            throw ConfigError("cli", "config", path + ": " + std::string(e.what()));
        }
        if (!cf.values.is_object())
            throw ConfigError("cli", "config", path + ": top level must be an object");
        return cf;
    }

    template <typename T>
    void fallback(const CLI::Option* opt, const std::string& key, T& target) const {
        if (opt->count() > 0) return;  // flag given: wins
        if (!values.contains(key)) return;
        try {
            target = values.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError("cli", "config",
                              "field '" + key + "': " + std::string(e.what()));
        }
    }
};

// State source: a file path or an inline {"dim":..,"re":..} JSON object.
DensityOperator load_state(const std::string& source, const std::string& flag) {
    try {
        if (!source.empty() && source.front() == '{')
            return DensityOperator(hermitian_from_json_text(source));
        return read_density(source);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("cli", flag, e.what());
    }
}

Complex parse_complex(const std::string& s, const std::string& flag) {
    double re = 0, im = 0;
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) {
            re = std::stod(s);
        } else {
            re = std::stod(s.substr(0, comma));
            im = std::stod(s.substr(comma + 1));
        }
    } catch (const std::exception&) {
        throw ConfigError("cli", flag, "expected RE or RE,IM, got '" + s + "'");
    }
    return {re, im};
}

void write_manifest(const std::string& artifact_path, std::uint64_t seed,
                    const std::string& config_digest_source, double wall_seconds) {
    json m{{"version", kVersion},
           {"seed", seed},
           {"config_hash", fmt(static_cast<double>(fnv1a(config_digest_source)))},
           {"wall_time_seconds", wall_seconds}};
    m["config_hash"] = std::to_string(fnv1a(config_digest_source));
    std::ofstream out(artifact_path);
    out << m.dump(2) << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// ---------------------------------------------------------------------------

int run_schur(int n, int k, std::uint64_t seed, const std::string& out_path) {
    Timer timer;
    const auto d = irreducible_decomposition(n, k, seed);
    const double comm = verify_block_commutativity(d, 20, seed + 1);
    long long bound = 1;
    for (int i = 0; i < k - 1; ++i) bound *= (n + 1);
    json out{{"n", n},
             {"k", k},
             {"block_dims", d.block_dims},
             {"w", d.blocks.width()},
             {"bound", bound},
             {"max_commutator_norm", comm}};
    std::ofstream f(out_path);
    if (!f) throw ConfigError("cli", "schur", "cannot open output file " + out_path);
    f << out.dump(2) << "\n";
    write_manifest(out_path + ".manifest.json", seed,
                   "schur:" + std::to_string(n) + ":" + std::to_string(k), timer.seconds());
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int run_design(const DensityOperator& rho, const DensityOperator& sigma, int n,
               std::uint64_t seed, const std::vector<double>& a_values,
               const std::string& out_path) {
    Timer timer;
    const auto decomp = irreducible_decomposition(n, rho.dim(), seed);
    const auto dm = design_measurement(rho, sigma, decomp);
    const auto rho_n = tensor_power(rho, n);
    const auto sigma_n = tensor_power(sigma, n);
    const auto spec = sigma_spectrum_under_rho(dm, rho_n, sigma_n, n);
    const double gap = variance_identity_gap(dm, rho, sigma, n);

    json outcomes = json::array();
    for (size_t i = 0; i < spec.values.size(); ++i)
        outcomes.push_back(json{{"value", spec.values[i]},
                                {"p_mass", spec.p_mass[i]},
                                {"q_mass", spec.q_mass[i]}});
    json bounds = json::array();
    for (double a : a_values)
        bounds.push_back(json{{"a", a}, {"bound", chernoff_markov_bound(dm, rho_n, n, a)}});
    json out{{"n", n},
             {"block_dims", decomp.block_dims},
             {"outcome_count", dm.m.size()},
             {"outcomes", outcomes},
             {"variance_identity_gap", gap},
             {"chernoff_bounds", bounds}};
    std::ofstream f(out_path);
    if (!f) throw ConfigError("cli", "design", "cannot open output file " + out_path);
    f << out.dump(2) << "\n";
    write_manifest(out_path + ".manifest.json", seed, "design:" + std::to_string(n),
                   timer.seconds());
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int run_exponent(const DensityOperator& rho, const DensityOperator& sigma, double eps,
                 int n_max, const std::string& strategy_str, std::uint64_t seed,
                 const std::string& csv_path, bool as_json) {
    Timer timer;
    Strategy strategy;
    if (strategy_str == "quantum_np")
        strategy = Strategy::quantum_np;
    else if (strategy_str == "designed_measurement")
        strategy = Strategy::designed_measurement;
    else if (strategy_str == "naive_product_basis")
        strategy = Strategy::naive_product_basis;
    else
        throw ConfigError("cli", "exponent", "unknown strategy '" + strategy_str + "'");
    if (n_max < 1) throw ConfigError("cli", "exponent", "n-max must be >= 1");

    std::vector<int> ns(n_max);
    for (int i = 0; i < n_max; ++i) ns[i] = i + 1;
    const auto curve = exponent_curve(rho, sigma, eps, ns, strategy, seed);

    std::ofstream f(csv_path);
    if (!f) throw ConfigError("cli", "exponent", "cannot open output file " + csv_path);
    if (as_json) {
        for (size_t i = 0; i < curve.n_values.size(); ++i) {
            json row{{"n", curve.n_values[i]},
                     {"alpha", curve.alpha_values[i]},
                     {"beta", curve.beta_values[i]},
                     {"minus_log_beta_over_n",
                      -std::log(curve.beta_values[i]) / curve.n_values[i]},
                     {"strategy", strategy_str},
                     {"seed", seed}};
            f << row.dump() << "\n";
        }
    } else {
        f << "n,alpha,beta,minus_log_beta_over_n,strategy,seed\n";
        for (size_t i = 0; i < curve.n_values.size(); ++i)
            f << curve.n_values[i] << "," << fmt(curve.alpha_values[i]) << ","
              << fmt(curve.beta_values[i]) << ","
              << fmt(-std::log(curve.beta_values[i]) / curve.n_values[i]) << "," << strategy_str
              << "," << seed << "\n";
    }
    write_manifest(csv_path + ".manifest.json", seed, "exponent:" + strategy_str,
                   timer.seconds());
    std::cout << "slope_estimate " << fmt(curve.slope_estimate) << " nats/copy (corrected "
              << fmt(curve.slope_estimate_corrected) << "), residual norm "
              << fmt(curve.residual_norm) << "\n";
    return 0;
}

int run_ispec(const std::string& pairs_path, double eps, const std::string& csv_path,
              std::uint64_t seed, bool as_json) {
    Timer timer;
    std::ifstream in(pairs_path);
    if (!in) throw ConfigError("cli", "ispec", "cannot open pairs file " + pairs_path);
    json jpairs;
    try {
        in >> jpairs;
    } catch (const json::exception& e) {
        throw ConfigError("cli", "ispec", pairs_path + ": " + std::string(e.what()));
    }
    if (!jpairs.is_array())
        throw ConfigError("cli", "ispec", "pairs file must be a JSON list of {n, p, q}");

    std::vector<DistributionPair> pairs;
    for (const auto& jp : jpairs) {
        DistributionPair dp;
        try {
            dp.n = jp.at("n").get<int>();
            dp.p = jp.at("p").get<std::vector<double>>();
            dp.q = jp.at("q").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw ConfigError("cli", "ispec", std::string("pair entry: ") + e.what());
        }
        validate_pair(dp, "ispec");
        pairs.push_back(std::move(dp));
    }

    const auto records = spectral_functionals(pairs);
    std::ofstream f(csv_path);
    if (!f) throw ConfigError("cli", "ispec", "cannot open output file " + csv_path);
    if (!as_json) f << "n,lambda,alpha,beta,e_minus_n_lambda\n";
    for (size_t i = 0; i < pairs.size(); ++i) {
        for (double lambda : records[i].lambda_grid) {
            const auto [alpha, beta] = classical_errors(pairs[i], threshold_test(pairs[i], lambda));
            if (as_json) {
                f << json{{"n", pairs[i].n},
                          {"lambda", lambda},
                          {"alpha", alpha},
                          {"beta", beta},
                          {"e_minus_n_lambda", std::exp(-pairs[i].n * lambda)}}
                         .dump()
                  << "\n";
            } else {
                f << pairs[i].n << "," << fmt(lambda) << "," << fmt(alpha) << "," << fmt(beta)
                  << "," << fmt(std::exp(-pairs[i].n * lambda)) << "\n";
            }
        }
    }
    for (size_t i = 0; i < pairs.size(); ++i) {
        const auto np = classical_np(pairs[i], eps);
        std::cout << "pair " << i << ": n=" << pairs[i].n << " beta_star=" << fmt(np.beta_star)
                  << " threshold=" << fmt(np.threshold)
                  << " randomization=" << fmt(np.randomization)
                  << " q05=" << fmt(records[i].quantile_lo_05)
                  << " q95=" << fmt(records[i].quantile_hi_95) << "\n";
    }
    write_manifest(csv_path + ".manifest.json", seed, "ispec", timer.seconds());
    return 0;
}

int run_ineq(const std::string& lemma, int trials, std::uint64_t seed,
             const std::string& witness_dir) {
    auto rng = labeled_stream(seed, "cli.ineq." + lemma);
    bool ok = true;
    double extremal = 0;
    std::string witness_path;

    auto dump_witness = [&](const DensityOperator& rho, const Pvm& m) {
        std::filesystem::create_directories(witness_dir);
        witness_path = witness_dir + "/witness_" + lemma + ".json";
        json w{{"rho", json::parse(hermitian_to_json_text(rho.op()))},
               {"pvm_projector_0", json::parse(hermitian_to_json_text(
                                       HermitianOperator(m.projector(0), Validate::trusted)))}};
        std::ofstream out(witness_path);
        out << w.dump(2) << "\n";
    };

    if (lemma == "2") {
        extremal = -1e30;
        for (int t = 0; t < trials; ++t) {
            const int dim = 3 + t % 3;
            const auto rho = random_density(dim, rng);
            const auto m = random_rank_one_pvm(dim, rng);
            const auto res = check_lemma2(rho, Pvm::trivial(dim), m);
            extremal = std::max(extremal, res.lhs - res.rhs);
            if (!res.ok && witness_path.empty()) {
                ok = false;
                dump_witness(rho, m);
            }
        }
        std::cout << (ok ? "PASS" : "FAIL") << " lemma 2: max(lhs - rhs) = " << fmt(extremal)
                  << " over " << trials << " trials\n";
    } else if (lemma == "3") {
        extremal = 0;
        for (int k : {2, 3, 4})
            extremal = std::max(extremal, std::abs(plog2_max(k) - plog2_max_oracle(k, 100000)));
        ok = extremal <= 1e-8;
        std::cout << (ok ? "PASS" : "FAIL")
                  << " lemma 3: max |closed form - oracle| = " << fmt(extremal) << "\n";
    } else if (lemma == "c1") {
        extremal = 1e30;
        for (int t = 0; t < trials; ++t) {
            const int dim = 2 + t % 5;
            const auto rho = (t % 10 == 0) ? random_pure(dim, rng) : random_density(dim, rng);
            const auto m = random_rank_one_pvm(dim, rng);
            const double lam = check_lemma_c1(rho, m);
            extremal = std::min(extremal, lam);
            if (lam < -1e-10 && witness_path.empty()) {
                ok = false;
                dump_witness(rho, m);
            }
        }
        std::cout << (ok ? "PASS" : "FAIL") << " pinching bound: min eigenvalue = "
                  << fmt(extremal) << " over " << trials << " trials\n";
    } else if (lemma == "c2") {
        extremal = 1e30;
        for (int t = 0; t < trials; ++t) {
            const int dim = 3 + t % 2;
            DensityOperator rho = random_density(dim, rng);
            {
                Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
                if (es.eigenvalues().minCoeff() < 1e-4) continue;  // keep rho^-t stable
            }
            const auto m = random_rank_one_pvm(dim, rng);
            for (double tt : {0.25, 0.5, 1.0}) {
                const double lam = check_lemma_c2(rho, Pvm::trivial(dim), m, tt);
                extremal = std::min(extremal, lam);
                if (lam < -1e-8 && witness_path.empty()) {
                    ok = false;
                    dump_witness(rho, m);
                }
            }
        }
        std::cout << (ok ? "PASS" : "FAIL") << " operator power bound: min eigenvalue = "
                  << fmt(extremal) << " over " << trials << " trials\n";
    } else {
        throw ConfigError("cli", "ineq", "unknown lemma '" + lemma + "' (use 2, 3, c1, c2)");
    }
    if (!witness_path.empty()) std::cout << "witness dumped to " << witness_path << "\n";
    return ok ? 0 : 4;
}

int run_gaussian(Complex theta0, Complex theta1, double nbar, int n_max, double eps,
                 int cutoff_flag, const std::string& csv_path, std::uint64_t seed,
                 bool as_json) {
    Timer timer;
    if (n_max < 1) throw ConfigError("cli", "gaussian", "n-max must be >= 1");
    const double closed = gaussian_relative_entropy(theta0, theta1, nbar);
    std::ofstream f(csv_path);
    if (!f) throw ConfigError("cli", "gaussian", "cannot open output file " + csv_path);
    if (!as_json) f << "n,alpha,beta,minus_log_beta_over_n,closed_form_D\n";
    for (int n = 1; n <= n_max; ++n) {
        const int cutoff =
            cutoff_flag > 0
                ? cutoff_flag
                : recommended_cutoff(nbar, n * std::norm(theta0 - theta1));
        const auto [alpha, beta] = gaussian_test_errors(theta0, theta1, nbar, n, eps, cutoff);
        const double rate =
            beta > 0 ? -std::log(beta) / n : std::numeric_limits<double>::infinity();
        if (as_json) {
            f << json{{"n", n},
                      {"alpha", alpha},
                      {"beta", beta},
                      {"minus_log_beta_over_n", rate},
                      {"closed_form_D", closed}}
                     .dump()
              << "\n";
        } else {
            f << n << "," << fmt(alpha) << "," << fmt(beta) << "," << fmt(rate) << ","
              << fmt(closed) << "\n";
        }
    }
    write_manifest(csv_path + ".manifest.json", seed, "gaussian", timer.seconds());
    std::cout << "closed-form exponent " << fmt(closed) << " nats/copy\n";
    return 0;
}

int run_selftest(std::uint64_t seed, const std::string& out_dir) {
    Timer timer;
    const auto results = selftest::run_all(out_dir, seed);
    for (const auto& r : results)
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name
                  << " (" << r.detail << ")\n";
    write_manifest((std::filesystem::path(out_dir) / "manifest.json").string(), seed,
                   "selftest", timer.seconds());
    if (!selftest::all_passed(results)) {
        std::cout << "selftest FAILED\n";
        return 4;
    }
    std::cout << "selftest passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steinlab: asymptotically optimal measurements for quantum hypothesis testing"};
    app.require_subcommand(1);

    std::string config_path;
    int dim_cap = 0;
    bool as_json = false;
    app.add_option("--config", config_path, "JSON config file (flags win over file values)");
    app.add_option("--dim-cap", dim_cap, "override the tensor-power dimension cap");
    app.add_flag("--json", as_json, "emit JSON lines instead of CSV where applicable");

    // schur
    auto* schur = app.add_subcommand("schur", "irreducible tensor-power decomposition");
    int s_n = 2, s_k = 2;
    std::uint64_t s_seed = 1;
    std::string s_out = "schur.json";
    auto* s_n_opt = schur->add_option("--n", s_n, "number of copies");
    auto* s_k_opt = schur->add_option("--k", s_k, "local dimension");
    auto* s_seed_opt = schur->add_option("--seed", s_seed, "seed");
    auto* s_out_opt = schur->add_option("--out", s_out, "output JSON path");

    // design
    auto* design = app.add_subcommand("design", "build the sigma-refined rank-one measurement");
    std::string d_rho, d_sigma, d_out = "design.json";
    int d_n = 2;
    std::uint64_t d_seed = 1;
    std::vector<double> d_a;
    auto* d_rho_opt = design->add_option("--rho", d_rho, "null state (file or inline JSON)");
    auto* d_sigma_opt =
        design->add_option("--sigma", d_sigma, "alternative state (file or inline JSON)");
    auto* d_n_opt = design->add_option("--n", d_n, "number of copies");
    auto* d_seed_opt = design->add_option("--seed", d_seed, "seed");
    auto* d_out_opt = design->add_option("--out", d_out, "output JSON path");
    auto* d_a_opt = design->add_option("--a", d_a, "thresholds for the tail exponent bound");

    // exponent
    auto* expo = app.add_subcommand("exponent", "error-exponent sweep over n");
    std::string e_rho, e_sigma, e_strategy = "quantum_np", e_csv = "exponent.csv";
    double e_eps = 0.05;
    int e_nmax = 8;
    std::uint64_t e_seed = 1;
    auto* e_rho_opt = expo->add_option("--rho", e_rho, "null state (file or inline JSON)");
    auto* e_sigma_opt =
        expo->add_option("--sigma", e_sigma, "alternative state (file or inline JSON)");
    auto* e_eps_opt = expo->add_option("--eps", e_eps, "first-error level in (0,1)");
    auto* e_nmax_opt = expo->add_option("--n-max", e_nmax, "largest number of copies");
    auto* e_strategy_opt = expo->add_option(
        "--strategy", e_strategy,
        "quantum_np | designed_measurement | naive_product_basis");
    auto* e_csv_opt = expo->add_option("--csv", e_csv, "output CSV path");
    auto* e_seed_opt = expo->add_option("--seed", e_seed, "seed");

    // ispec
    auto* ispec = app.add_subcommand("ispec", "classical information-spectrum diagnostics");
    std::string i_pairs, i_csv = "ispec.csv";
    double i_eps = 0.05;
    std::uint64_t i_seed = 1;
    auto* i_pairs_opt =
        ispec->add_option("--pairs", i_pairs, "JSON list of {n, p:[...], q:[...]}");
    auto* i_eps_opt = ispec->add_option("--eps", i_eps, "level for the NP summary");
    auto* i_csv_opt = ispec->add_option("--csv", i_csv, "output CSV path");
    auto* i_seed_opt = ispec->add_option("--seed", i_seed, "seed (manifest only)");

    // ineq
    auto* ineq = app.add_subcommand("ineq", "stress-test the operator inequalities");
    std::string q_lemma = "c1", q_witness = ".";
    int q_trials = 100;
    std::uint64_t q_seed = 1;
    auto* q_lemma_opt = ineq->add_option("--lemma", q_lemma, "2 | 3 | c1 | c2");
    auto* q_trials_opt = ineq->add_option("--trials", q_trials, "trial count");
    auto* q_seed_opt = ineq->add_option("--seed", q_seed, "seed");
    auto* q_witness_opt =
        ineq->add_option("--witness-dir", q_witness, "directory for failure witnesses");

    // gaussian
    auto* gauss = app.add_subcommand("gaussian", "displaced-thermal discrimination sweep");
    std::string g_theta0 = "1,0", g_theta1 = "0,0", g_csv = "gaussian.csv";
    double g_nbar = 1.0, g_eps = 0.3;
    int g_nmax = 50, g_cutoff = 0;
    std::uint64_t g_seed = 1;
    auto* g_theta0_opt = gauss->add_option("--theta0", g_theta0, "null displacement RE,IM");
    auto* g_theta1_opt =
        gauss->add_option("--theta1", g_theta1, "alternative displacement RE,IM");
    auto* g_nbar_opt = gauss->add_option("--nbar", g_nbar, "thermal photon number");
    auto* g_nmax_opt = gauss->add_option("--n-max", g_nmax, "largest number of copies");
    auto* g_eps_opt = gauss->add_option("--eps", g_eps, "acceptance half-width");
    auto* g_cutoff_opt =
        gauss->add_option("--cutoff", g_cutoff, "Fock cutoff (0 = policy per n)");
    auto* g_csv_opt = gauss->add_option("--csv", g_csv, "output CSV path");
    auto* g_seed_opt = gauss->add_option("--seed", g_seed, "seed (manifest only)");

    // selftest
    auto* self = app.add_subcommand("selftest", "run the full acceptance suite");
    std::uint64_t t_seed = 20240901;
    std::string t_out = "selftest_artifacts";
    auto* t_seed_opt = self->add_option("--seed", t_seed, "seed");
    auto* t_out_opt = self->add_option("--out", t_out, "artifact directory");

    try {
        app.parse(argc, argv);

        if (!config_path.empty()) {
            const auto cf = ConfigFile::load(config_path);
            cf.fallback(s_n_opt, "n", s_n);
            cf.fallback(s_k_opt, "k", s_k);
            cf.fallback(s_seed_opt, "seed", s_seed);
            cf.fallback(s_out_opt, "out", s_out);
            cf.fallback(d_rho_opt, "rho", d_rho);
            cf.fallback(d_sigma_opt, "sigma", d_sigma);
            cf.fallback(d_n_opt, "n", d_n);
            cf.fallback(d_seed_opt, "seed", d_seed);
            cf.fallback(d_out_opt, "out", d_out);
            cf.fallback(d_a_opt, "a", d_a);
            cf.fallback(e_rho_opt, "rho", e_rho);
            cf.fallback(e_sigma_opt, "sigma", e_sigma);
            cf.fallback(e_eps_opt, "eps", e_eps);
            cf.fallback(e_nmax_opt, "n-max", e_nmax);
            cf.fallback(e_strategy_opt, "strategy", e_strategy);
            cf.fallback(e_csv_opt, "csv", e_csv);
            cf.fallback(e_seed_opt, "seed", e_seed);
            cf.fallback(i_pairs_opt, "pairs", i_pairs);
            cf.fallback(i_eps_opt, "eps", i_eps);
            cf.fallback(i_csv_opt, "csv", i_csv);
            cf.fallback(i_seed_opt, "seed", i_seed);
            cf.fallback(q_lemma_opt, "lemma", q_lemma);
            cf.fallback(q_trials_opt, "trials", q_trials);
            cf.fallback(q_seed_opt, "seed", q_seed);
            cf.fallback(q_witness_opt, "witness-dir", q_witness);
            cf.fallback(g_theta0_opt, "theta0", g_theta0);
            cf.fallback(g_theta1_opt, "theta1", g_theta1);
            cf.fallback(g_nbar_opt, "nbar", g_nbar);
            cf.fallback(g_nmax_opt, "n-max", g_nmax);
            cf.fallback(g_eps_opt, "eps", g_eps);
            cf.fallback(g_cutoff_opt, "cutoff", g_cutoff);
            cf.fallback(g_csv_opt, "csv", g_csv);
            cf.fallback(g_seed_opt, "seed", g_seed);
            cf.fallback(t_seed_opt, "seed", t_seed);
            cf.fallback(t_out_opt, "out", t_out);
            if (cf.values.contains("dim_cap") && dim_cap == 0)
                dim_cap = cf.values.at("dim_cap").get<int>();
        }
        if (dim_cap > 0) set_dimension_cap(dim_cap);

        if (schur->parsed()) return run_schur(s_n, s_k, s_seed, s_out);
        if (design->parsed()) {
            if (d_rho.empty() || d_sigma.empty())
                throw ConfigError("cli", "design", "--rho and --sigma are required");
            return run_design(load_state(d_rho, "--rho"), load_state(d_sigma, "--sigma"), d_n,
                              d_seed, d_a, d_out);
        }
        if (expo->parsed()) {
            if (e_rho.empty() || e_sigma.empty())
                throw ConfigError("cli", "exponent", "--rho and --sigma are required");
            return run_exponent(load_state(e_rho, "--rho"), load_state(e_sigma, "--sigma"),
                                e_eps, e_nmax, e_strategy, e_seed, e_csv, as_json);
        }
        if (ispec->parsed()) {
            if (i_pairs.empty()) throw ConfigError("cli", "ispec", "--pairs is required");
            return run_ispec(i_pairs, i_eps, i_csv, i_seed, as_json);
        }
        if (ineq->parsed()) return run_ineq(q_lemma, q_trials, q_seed, q_witness);
        if (gauss->parsed())
            return run_gaussian(parse_complex(g_theta0, "--theta0"),
                                parse_complex(g_theta1, "--theta1"), g_nbar, g_nmax, g_eps,
                                g_cutoff, g_csv, g_seed, as_json);
        if (self->parsed()) return run_selftest(t_seed, t_out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
