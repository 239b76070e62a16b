#include "steinlab/info_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "steinlab/errors.hpp"

namespace steinlab {

namespace {

constexpr const char* kModule = "info_spectrum";
constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-copy log-likelihood ratio with the zero-mass conventions.
double ratio(double p, double q, int n) {
    if (p <= 0.0) return -kInf;            // no p-mass: rejected at finite lambda
    if (q <= 0.0) return kInf;             // p > 0 = q: always accepted
    return std::log(p / q) / n;
}

}  // namespace

void validate_pair(const DistributionPair& dp, const char* op) {
    if (dp.p.size() != dp.q.size() || dp.p.empty())
        throw PreconditionError(kModule, op, "p and q must be nonempty and equal length");
    if (dp.n < 1) throw PreconditionError(kModule, op, "block index n must be >= 1");
    double sp = 0, sq = 0;
    for (size_t i = 0; i < dp.p.size(); ++i) {
        if (dp.p[i] < 0 || dp.q[i] < 0)
            throw PreconditionError(kModule, op, "negative mass at outcome " + std::to_string(i));
        sp += dp.p[i];
        sq += dp.q[i];
    }
    if (std::abs(sp - 1) > 1e-9 || std::abs(sq - 1) > 1e-9)
        throw PreconditionError(kModule, op,
                                "distributions must sum to 1 (got " + std::to_string(sp) + ", " +
                                    std::to_string(sq) + ")");
}

ThresholdTest threshold_test(const DistributionPair& dp, double lambda) {
    validate_pair(dp, "threshold_test");
    ThresholdTest t{lambda, {}};
    t.acceptance_mask.resize(dp.p.size());
    for (size_t i = 0; i < dp.p.size(); ++i)
        t.acceptance_mask[i] = ratio(dp.p[i], dp.q[i], dp.n) >= lambda;
    return t;
}

std::pair<double, double> classical_errors(const DistributionPair& dp, const ThresholdTest& t) {
    validate_pair(dp, "classical_errors");
    if (t.acceptance_mask.size() != dp.p.size())
        throw PreconditionError(kModule, "classical_errors", "mask length mismatch");
    double alpha = 0, beta = 0;
    for (size_t i = 0; i < dp.p.size(); ++i) {
        if (t.acceptance_mask[i])
            beta += dp.q[i];
        else
            alpha += dp.p[i];
    }
    return {alpha, beta};
}

std::pair<bool, double> verify_lemma4_bounds(const DistributionPair& dp, double lambda) {
    const auto [alpha, beta] = classical_errors(dp, threshold_test(dp, lambda));
    (void)alpha;
    const double bound = std::exp(-dp.n * lambda);
    const double slack = bound - beta;
    // The inequality is exact in reals; allow only rounding slop.
    const bool ok = slack >= -1e-12 * std::max(1.0, bound);
    return {ok, slack};
}

NpSolution classical_np(const DistributionPair& dp, double epsilon) {
    validate_pair(dp, "classical_np");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw PreconditionError(kModule, "classical_np", "epsilon must lie in (0, 1)");

    const size_t m = dp.p.size();
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> r(m);
    for (size_t i = 0; i < m; ++i) r[i] = ratio(dp.p[i], dp.q[i], dp.n);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return r[a] > r[b]; });

    const double target = 1.0 - epsilon;  // acceptance p-mass
    double acc = 0, beta = 0;
    for (size_t idx : order) {
        if (dp.p[idx] <= 0.0) break;  // remaining outcomes carry no p-mass: never accept
        if (acc + dp.p[idx] <= target) {
            acc += dp.p[idx];
            beta += dp.q[idx];
            if (acc >= target) return {beta, r[idx], 1.0};
        } else {
            const double frac = (target - acc) / dp.p[idx];
            beta += frac * dp.q[idx];
            return {beta, r[idx], frac};
        }
    }
    // All p-mass accepted without reaching the target (possible only through
    // rounding); no further acceptance can help.
    return {beta, -kInf, 1.0};
}

std::vector<SpectralRecord> spectral_functionals(std::span<const DistributionPair> seq) {
    if (seq.empty())
        throw PreconditionError(kModule, "spectral_functionals", "empty sequence");

    std::vector<SpectralRecord> records;
    records.reserve(seq.size());
    for (const auto& dp : seq) {
        validate_pair(dp, "spectral_functionals");
        SpectralRecord rec;
        rec.n = dp.n;

        // (value, p-mass) pairs for finite ratios; +inf mass kept aside.
        std::vector<std::pair<double, double>> vals;
        double inf_mass = 0;
        for (size_t i = 0; i < dp.p.size(); ++i) {
            if (dp.p[i] <= 0.0) continue;
            const double v = ratio(dp.p[i], dp.q[i], dp.n);
            if (v == kInf)
                inf_mass += dp.p[i];
            else
                vals.emplace_back(v, dp.p[i]);
        }
        rec.p_mass_at_inf = inf_mass;
        std::sort(vals.begin(), vals.end());

        double lo = 0, hi = 0;
        if (!vals.empty()) {
            lo = vals.front().first;
            hi = vals.back().first;
        }
        // 201-point grid spanning [min - 0.1, max + 0.1].
        constexpr int kGrid = 201;
        rec.lambda_grid.resize(kGrid);
        rec.p_cdf.resize(kGrid);
        const double a = lo - 0.1, b = hi + 0.1;
        size_t cursor = 0;
        double cum = 0;
        for (int g = 0; g < kGrid; ++g) {
            const double lambda = a + (b - a) * g / (kGrid - 1);
            rec.lambda_grid[g] = lambda;
            while (cursor < vals.size() && vals[cursor].first <= lambda)
                cum += vals[cursor++].second;
            rec.p_cdf[g] = cum;
        }

        // Quantiles of the ratio under p: q_d = inf{ v : p{ratio <= v} >= d }.
        auto quantile = [&](double delta) {
            double c = 0;
            for (const auto& [v, mass] : vals) {
                c += mass;
                if (c >= delta - 1e-15) return v;
            }
            return kInf;  // mass at +inf reaches any level
        };
        rec.quantile_lo_01 = quantile(0.01);
        rec.quantile_lo_05 = quantile(0.05);
        rec.quantile_hi_95 = quantile(0.95);
        rec.quantile_hi_99 = quantile(0.99);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace steinlab
