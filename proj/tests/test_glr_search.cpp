#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mrfm/glr_search.hpp"
#include "mrfm/random.hpp"
#include "mrfm/scenario.hpp"
#include "mrfm/telegraph.hpp"
#include "support/stats.hpp"

using namespace mrfm;

namespace {

// Naive high-precision objective used as the independent oracle: per-sample
// telegraph, direct dot product, logl/coshl.
long double objective_oracle(const std::vector<double>& y, const FlipConfig& config,
                             double amplitude, double sigma, const SampleGrid& grid) {
    long double dot = 0.0L;
    for (std::size_t n = 0; n < y.size(); ++n) {
        const double t = sample_time(grid, n);
        std::size_t flips = 0;
        for (double tau : config.flip_times) flips += tau <= t;
        const long double s = (flips % 2 == 0 ? 1.0L : -1.0L) * amplitude;
        dot += y[n] * s;
    }
    const long double sigma_sq = static_cast<long double>(sigma) * sigma;
    const long double arg = dot / sigma_sq;
    const long double energy =
        static_cast<long double>(y.size()) * amplitude * amplitude / (2.0L * sigma_sq);
    if (std::abs(static_cast<double>(arg)) > 300.0)
        return std::abs(arg) + std::log1p(std::exp(-2.0L * std::abs(arg))) - std::log(2.0L) -
               energy;
    return std::log(std::cosh(arg)) - energy;
}

SampledTrace make_trace(const SampleGrid& grid, std::vector<double> values) {
    return SampledTrace{grid, TraceRole::observation, std::move(values)};
}

}  // namespace

TEST_CASE("log_cosh: agrees with the naive form on moderate arguments") {
    for (double x : {0.0, 1e-6, 0.5, 1.0, 5.0, 10.0, 25.0, 29.999}) {
        const long double naive = std::log(std::cosh(static_cast<long double>(x)));
        CHECK(log_cosh(x) == doctest::Approx(static_cast<double>(naive)).epsilon(1e-13));
    }
    CHECK(log_cosh(0.0) == 0.0);
}

TEST_CASE("log_cosh: stable asymptotic branch for large arguments") {
    const double ln2 = 0.6931471805599453;
    for (double x : {1e2, 1e3, 1e4, 1e5, 1e6}) {
        const double v = log_cosh(x);
        REQUIRE(std::isfinite(v));
        REQUIRE(std::abs(v - (x - ln2)) / (x - ln2) < 1e-9);
    }
    // Both branches agree where the naive form is still safe.
    CHECK(log_cosh(31.0) ==
          doctest::Approx(static_cast<double>(std::log(std::cosh(31.0L)))).epsilon(1e-13));
    CHECK(log_cosh(30.0 - 1e-9) == doctest::Approx(log_cosh(30.0 + 1e-9)).epsilon(1e-8));
}

TEST_CASE("log_cosh: even function") {
    for (double x : {0.25, 3.0, 42.0, 1e5}) CHECK(log_cosh(-x) == log_cosh(x));
}

TEST_CASE("objective: zero observation hits the constant energy term") {
    const SampleGrid grid = make_grid(1.0, 0.01);  // M = 100
    const SampledTrace y = make_trace(grid, std::vector<double>(100, 0.0));
    const double amplitude = 0.8;
    const double sigma = 1.3;
    const double expected = -100.0 * amplitude * amplitude / (2.0 * sigma * sigma);
    const FlipConfig config{{0.37, 0.81}, 1};
    CHECK(objective(y, config, amplitude, sigma) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("objective: even in the observation sign") {
    const SampleGrid grid = make_grid(1.0, 0.01);
    RandomStream rng(31);
    std::vector<double> values(100);
    for (double& v : values) v = rng.normal();
    std::vector<double> negated(values);
    for (double& v : negated) v = -v;
    const FlipConfig config{{0.2, 0.55, 0.7}, 1};
    CHECK(objective(make_trace(grid, values), config, 1.0, 0.7) ==
          objective(make_trace(grid, negated), config, 1.0, 0.7));
}

TEST_CASE("objective: frozen eight-sample case") {
    const SampleGrid grid = make_grid(8.0, 1.0);
    const SampledTrace y = make_trace(grid, {1, 1, 1, 1, -1, -1, -1, -1});
    const FlipConfig config{{4.0}, 1};
    // log cosh(8) - 4 = 8 - log 2 + log1p(e^-16) - 4 = 3.3068529319752230...
    const double value = objective(y, config, 1.0, 1.0);
    CHECK(value == doctest::Approx(3.306852931975223).epsilon(1e-12));
    CHECK(value ==
          doctest::Approx(static_cast<double>(objective_oracle(y.values, config, 1.0, 1.0, grid)))
              .epsilon(1e-12));
}

TEST_CASE("objective: degenerate noise is rejected") {
    const SampleGrid grid = make_grid(1.0, 0.01);
    const SampledTrace y = make_trace(grid, std::vector<double>(100, 0.0));
    CHECK_THROWS_AS(objective(y, FlipConfig{{}, 1}, 1.0, 0.0), std::domain_error);
}

TEST_CASE("correlation_fast: zero-flip configuration uses the full-trace sum") {
    const SampleGrid grid = make_grid(1.0, 0.01);
    RandomStream rng(33);
    std::vector<double> values(100);
    double total = 0.0;
    for (double& v : values) {
        v = rng.normal();
        total += v;
    }
    const PrefixSums prefix(values);
    CHECK(correlation_fast(prefix, FlipConfig{{}, 1}, 0.9, grid) == 0.9 * total);
}

TEST_CASE("correlation_fast: matches the direct dot product") {
    const RandomStream root(34);
    for (int rep = 0; rep < 300; ++rep) {
        RandomStream rng = root.derive(rep);
        const std::size_t m = 20 + static_cast<std::size_t>(rng.uniform01() * 180);
        const SampleGrid grid = make_grid(1.0, 1.0 / static_cast<double>(m));
        std::vector<double> values(m);
        for (double& v : values) v = rng.normal();
        const FlipConfig config = sample_flip_config(4.0, grid, rng);
        const double amplitude = 0.2 + rng.uniform01();

        FlipConfig plus = config;
        plus.initial_polarity = 1;
        const SampledTrace splus = synthesize_telegraph(plus, amplitude, grid);
        long double direct = 0.0L;
        for (std::size_t n = 0; n < m; ++n) direct += values[n] * splus.values[n];

        const PrefixSums prefix(values);
        const double fast = correlation_fast(prefix, config, amplitude, grid);
        REQUIRE(fast == doctest::Approx(static_cast<double>(direct)).epsilon(1e-10));
    }
}

TEST_CASE("correlation_fast: touches O(N+1) prefix entries, not O(M)") {
    const SampleGrid grid = make_grid(1.0, 1e-3);  // M = 1000
    std::vector<double> values(1000, 1.0);
    const PrefixSums prefix(values);
    const FlipConfig config{{0.1, 0.3, 0.5, 0.7, 0.9}, 1};

    prefix.reset_access_count();
    (void)correlation_fast(prefix, config, 1.0, grid);
    CHECK(prefix.access_count() == config.flip_count() + 2);
}

TEST_CASE("gibbs_sweep: no flips means nothing to resample") {
    RandomStream rng(35);
    const FlipConfig config{{}, -1};
    CHECK(gibbs_sweep(config, 3.0, rng) == config);
}

TEST_CASE("gibbs_sweep: single flip resamples uniformly on (0, T)") {
    const double duration = 3.0;
    const FlipConfig start{{0.3}, 1};
    const RandomStream root(36);
    const int draws = 100000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        RandomStream rng = root.derive(i);
        sum += gibbs_sweep(start, duration, rng).flip_times[0];
    }
    const double bound = 3.0 * (duration / std::sqrt(12.0)) / std::sqrt(draws);
    CHECK(std::abs(sum / draws - duration / 2.0) <= bound);
}

TEST_CASE("gibbs_sweep: preserves count, polarity, ordering") {
    const double duration = 2.0;
    const RandomStream root(37);
    for (int rep = 0; rep < 1000; ++rep) {
        RandomStream rng = root.derive(rep);
        const SampleGrid grid = make_grid(duration, 0.01);
        FlipConfig config = sample_flip_config(3.0, grid, rng);
        const FlipConfig swept = gibbs_sweep(config, duration, rng);
        REQUIRE(swept.flip_count() == config.flip_count());
        REQUIRE(swept.initial_polarity == config.initial_polarity);
        REQUIRE_NOTHROW(validate_flip_config(swept, duration));
    }
}

TEST_CASE("gibbs_sweep: chain marginal matches uniform order statistics") {
    // With N fixed, the stationary law of the flip times is N uniform order
    // statistics; tau_1 is then distributed as the minimum of N uniforms.
    const double duration = 2.0;
    const std::size_t n_flips = 3;
    const int chains = 3000;
    const int sweeps = 40;
    const RandomStream root(38);

    std::vector<double> chain_samples(chains);
    std::vector<double> direct_samples(chains);
    for (int c = 0; c < chains; ++c) {
        RandomStream rng = root.derive(c);
        FlipConfig config{{0.5, 1.0, 1.5}, 1};
        for (int s = 0; s < sweeps; ++s) config = gibbs_sweep(config, duration, rng);
        chain_samples[c] = config.flip_times[0];

        RandomStream oracle_rng = root.derive(c).derive(777);
        double smallest = duration;
        for (std::size_t k = 0; k < n_flips; ++k)
            smallest = std::min(smallest, oracle_rng.uniform01() * duration);
        direct_samples[c] = smallest;
    }
    const double d = test_stats::ks_statistic(chain_samples, direct_samples);
    CHECK(d <= test_stats::ks_critical(0.01, chains, chains));
}

TEST_CASE("search_max: recovers a noiseless truth that the sampler visits") {
    const SampleGrid grid = make_grid(3.0, 5e-3);  // M = 600
    const ScenarioConfig scenario = scenario_from_snr(1.0, 1.0, grid, -5.0);
    const RandomStream rng(39);

    // Truth = the exact configuration the sampler will draw at iteration 17.
    RandomStream truth_stream = rng.derive(17);
    const FlipConfig truth = sample_flip_config(scenario.flip_rate, grid, truth_stream);
    const SampledTrace y{grid, TraceRole::observation,
                         synthesize_telegraph(truth, scenario.amplitude, grid).values};

    const SamplerConfig cfg{100, SearchStrategy::prior_only, 0, 0};
    const SearchResult result = search_max(y, scenario, cfg, rng);
    const double at_truth = objective(y, truth, scenario.amplitude, scenario.noise_sigma);
    CHECK(result.best_objective == doctest::Approx(at_truth).epsilon(1e-12));
    CHECK(result.best_objective == result.objective_trace.back());
}

TEST_CASE("search_max: equals exhaustive maximization on a coarse grid") {
    const SampleGrid grid = make_grid(1.6, 0.1);  // M = 16
    const std::vector<double> slots = {0.33, 0.71, 1.09, 1.47};
    std::vector<FlipConfig> candidates;
    for (unsigned mask = 0; mask < 16; ++mask) {
        FlipConfig config;
        for (unsigned b = 0; b < 4; ++b)
            if (mask & (1u << b)) config.flip_times.push_back(slots[b]);
        candidates.push_back(std::move(config));
    }

    const RandomStream root(40);
    for (int rep = 0; rep < 30; ++rep) {
        RandomStream rng = root.derive(rep);
        const unsigned true_mask = static_cast<unsigned>(rng.uniform01() * 16.0);
        const double sigma = 0.6 + rng.uniform01();
        SampledTrace y{grid, TraceRole::observation,
                       synthesize_telegraph(
                           FlipConfig{candidates[true_mask].flip_times, rng.coin_sign()}, 1.0,
                           grid)
                           .values};
        for (double& v : y.values) v += sigma * rng.normal();

        const SearchResult got = evaluate_candidates(y, candidates, 1.0, sigma);
        long double best = -1e30L;
        std::size_t best_index = 0;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            const long double value = objective_oracle(y.values, candidates[k], 1.0, sigma, grid);
            if (value > best) {
                best = value;
                best_index = k;
            }
        }
        REQUIRE(got.best_config == candidates[best_index]);
        REQUIRE(got.best_objective ==
                doctest::Approx(static_cast<double>(best)).epsilon(1e-10));
    }
}

TEST_CASE("search_max: larger sample budgets visit a superset of candidates") {
    const SampleGrid grid = make_grid(3.0, 5e-3);
    const ScenarioConfig scenario = scenario_from_snr(1.0, 2.0, grid, -15.0);
    const RandomStream rng(41);

    RandomStream data_rng = rng.derive(9999);
    FlipConfig truth = sample_flip_config(scenario.flip_rate, grid, data_rng);
    SampledTrace y{grid, TraceRole::observation,
                   synthesize_telegraph(truth, scenario.amplitude, grid).values};
    for (double& v : y.values) v += scenario.noise_sigma * data_rng.normal();

    const SearchResult small = search_max(y, scenario, {100, SearchStrategy::prior_only, 0, 0}, rng);
    const SearchResult large = search_max(y, scenario, {500, SearchStrategy::prior_only, 0, 0}, rng);
    CHECK(large.best_objective >= small.best_objective);
    for (std::size_t i = 0; i < 100; ++i)
        REQUIRE(small.objective_trace[i] == large.objective_trace[i]);
}

TEST_CASE("search_max: objective trace is nondecreasing and deterministic") {
    const SampleGrid grid = make_grid(2.0, 0.01);
    const ScenarioConfig scenario = scenario_from_snr(0.8, 3.0, grid, -10.0);
    const RandomStream root(42);

    for (int rep = 0; rep < 20; ++rep) {
        RandomStream data_rng = root.derive(rep);
        SampledTrace y = zero_trace(grid, TraceRole::observation);
        for (double& v : y.values) v = scenario.noise_sigma * data_rng.normal();

        const SamplerConfig cfg{50, SearchStrategy::prior_only, 0, 0};
        const SearchResult a = search_max(y, scenario, cfg, root.derive(1000 + rep));
        const SearchResult b = search_max(y, scenario, cfg, root.derive(1000 + rep));
        REQUIRE(a.objective_trace == b.objective_trace);
        REQUIRE(a.best_config == b.best_config);
        for (std::size_t i = 1; i < a.objective_trace.size(); ++i)
            REQUIRE(a.objective_trace[i] >= a.objective_trace[i - 1]);
        REQUIRE(a.best_objective == a.objective_trace.back());
    }
}

TEST_CASE("search_max: gibbs-sweep strategy evaluates each sweep") {
    const SampleGrid grid = make_grid(2.0, 0.01);
    const ScenarioConfig scenario = scenario_from_snr(1.0, 2.0, grid, -8.0);
    const RandomStream rng(43);

    RandomStream data_rng = rng.derive(12);
    SampledTrace y = zero_trace(grid, TraceRole::observation);
    for (double& v : y.values) v = scenario.noise_sigma * data_rng.normal();

    const SamplerConfig cfg{20, SearchStrategy::gibbs_sweep, 3, 2};
    const SearchResult result = search_max(y, scenario, cfg, rng);
    CHECK(result.objective_trace.size() == 20 * (1 + 3));
    for (std::size_t i = 1; i < result.objective_trace.size(); ++i)
        REQUIRE(result.objective_trace[i] >= result.objective_trace[i - 1]);

    const SearchResult again = search_max(y, scenario, cfg, rng);
    CHECK(result.objective_trace == again.objective_trace);
}

TEST_CASE("search_max: argmax by objective equals argmax by |correlation|") {
    const SampleGrid grid = make_grid(1.0, 0.02);  // M = 50
    const RandomStream root(44);
    for (int rep = 0; rep < 100; ++rep) {
        RandomStream rng = root.derive(rep);
        std::vector<double> values(50);
        for (double& v : values) v = rng.normal();
        const SampledTrace y = SampledTrace{grid, TraceRole::observation, values};

        std::vector<FlipConfig> candidates;
        for (int k = 0; k < 20; ++k) candidates.push_back(sample_flip_config(4.0, grid, rng));

        const SearchResult by_objective = evaluate_candidates(y, candidates, 1.0, 0.9);
        const PrefixSums prefix(values);
        std::size_t best_by_corr = 0;
        double best_corr = -1.0;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            const double corr = std::abs(correlation_fast(prefix, candidates[k], 1.0, grid));
            if (corr > best_corr) {
                best_corr = corr;
                best_by_corr = k;
            }
        }
        REQUIRE(by_objective.best_config == candidates[best_by_corr]);
    }
}

TEST_CASE("search_max: invalid inputs") {
    const SampleGrid grid = make_grid(1.0, 0.01);
    const SampledTrace y = zero_trace(grid, TraceRole::observation);
    ScenarioConfig scenario = scenario_from_sigma(1.0, 1.0, grid, 0.0);
    CHECK_THROWS_AS(search_max(y, scenario, SamplerConfig{}, RandomStream(1)), std::domain_error);
    scenario = scenario_from_snr(1.0, 1.0, grid, -10.0);
    CHECK_THROWS_AS(search_max(y, scenario, SamplerConfig{0, SearchStrategy::prior_only, 0, 0},
                               RandomStream(1)),
                    std::invalid_argument);
}
