#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

#include "repute/common/bigint.hpp"
#include "repute/common/rng.hpp"

// Score aggregation over a permanently escrowed archive: instead of the true
// average p/n, publish an estimate computed from r randomly chosen scores.
// Includes the exact expected-error curve for the with-replacement estimator,
// the sample-size search it induces, the one-new-feedback privacy-breach
// experiment, and the release gates that mitigate the borderline cases.
namespace repute::sampling {

struct SamplingError : std::runtime_error {
    explicit SamplingError(const std::string& what) : std::runtime_error(what) {}
};
struct EmptyScoreSet : SamplingError {
    EmptyScoreSet() : SamplingError("score set is empty") {}
};

// n binary feedback scores of which p are positive
struct ScoreSet {
    std::uint64_t n = 0;
    std::uint64_t p = 0;

    ScoreSet(std::uint64_t n_, std::uint64_t p_) : n(n_), p(p_) {
        if (p > n) {
            throw SamplingError("ScoreSet: positive count exceeds total");
        }
    }
};

enum class SampleMode { WithReplacement, WithoutReplacement };

struct SampleConfig {
    std::uint64_t r = 1;
    SampleMode mode = SampleMode::WithReplacement;

    void validate(const ScoreSet& scores) const {
        if (scores.n == 0) {
            throw EmptyScoreSet();
        }
        if (r < 1) {
            throw SamplingError("SampleConfig: need at least one sample");
        }
        if (mode == SampleMode::WithoutReplacement && r > scores.n) {
            throw SamplingError("SampleConfig: cannot draw more distinct scores than exist");
        }
    }
};

// sample count for a target rate, rounded half-up; the paper's default rate is 1/2
inline std::uint64_t samples_for_rate(const Rational& rate, std::uint64_t n) {
    Int r = round_rational(rate * n);
    if (r < 1) {
        r = 1;
    }
    return static_cast<std::uint64_t>(r);
}

// T positives among r sampled scores; f_b = T*n/r is the published estimate
// of the positive count, mean = T/r estimates the positive fraction
struct Estimate {
    std::uint64_t T = 0;
    std::uint64_t r = 0;
    std::uint64_t n = 0;

    Rational mean() const { return Rational(T, r); }
    Rational f_b() const { return Rational(T, r) * n; }
};

inline Estimate sample_estimate(const ScoreSet& scores, const SampleConfig& cfg, Rng& rng) {
    cfg.validate(scores);
    std::uint64_t hits = 0;
    if (cfg.mode == SampleMode::WithReplacement) {
        for (std::uint64_t i = 0; i < cfg.r; ++i) {
            if (rng.below(scores.n) < scores.p) {
                ++hits;
            }
        }
    } else {
        // Floyd's algorithm for a uniform r-subset; index < p means positive
        std::set<std::uint64_t> chosen;
        for (std::uint64_t j = scores.n - cfg.r; j < scores.n; ++j) {
            std::uint64_t t = rng.below(j + 1);
            std::uint64_t pick = chosen.insert(t).second ? t : j;
            if (pick == j && pick != t) {
                chosen.insert(j);
            }
            if (pick < scores.p) {
                ++hits;
            }
        }
    }
    return Estimate{hits, cfg.r, scores.n};
}

namespace detail {

// exact sum_i |i/r - p/n| C(r,i) (p/n)^i (1-p/n)^(r-i), walking the pmf with
// the recurrence pmf(i+1) = pmf(i) * (r-i)/(i+1) * q/(1-q)
inline Rational expected_error_exact(std::uint64_t n, std::uint64_t p, std::uint64_t r) {
    const Rational q(p, n);
    const Rational one_minus_q = 1 - q;
    const Rational step = q / one_minus_q;
    Rational pmf = 1;
    for (std::uint64_t k = 0; k < r; ++k) {
        pmf *= one_minus_q;
    }
    Rational total = 0;
    for (std::uint64_t i = 0; i <= r; ++i) {
        Rational dist = Rational(i, r) - q;
        if (dist < 0) {
            dist = -dist;
        }
        total += dist * pmf;
        if (i < r) {
            pmf *= step;
            pmf *= Rational(r - i, i + 1);
        }
    }
    return total;
}

inline double lchoose(double nn, double kk) {
    return std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1);
}

// log-space evaluation for large r; error is bounded by accumulated double
// rounding over r+1 terms, far below the tolerances anything here asserts
inline Rational expected_error_float(std::uint64_t n, std::uint64_t p, std::uint64_t r) {
    if (p == 0 || p == n) {
        return 0;
    }
    const double q = static_cast<double>(p) / static_cast<double>(n);
    const double lq = std::log(q);
    const double l1q = std::log1p(-q);
    double total = 0;
    for (std::uint64_t i = 0; i <= r; ++i) {
        double di = static_cast<double>(i);
        double lp = lchoose(static_cast<double>(r), di) + di * lq +
                    static_cast<double>(r - i) * l1q;
        total += std::fabs(di / static_cast<double>(r) - q) * std::exp(lp);
    }
    return Rational(total);
}

}  // namespace detail

// expected |T/r - p/n| under with-replacement sampling; exact rational up to
// r = 256, floating evaluation beyond
inline Rational expected_error(std::uint64_t n, std::uint64_t p, std::uint64_t r) {
    if (n == 0 || p > n) {
        throw SamplingError("expected_error: invalid score set");
    }
    if (r < 1) {
        throw SamplingError("expected_error: need r >= 1");
    }
    if (p == 0 || p == n) {
        return 0;
    }
    if (r <= 256) {
        return detail::expected_error_exact(n, p, r);
    }
    return detail::expected_error_float(n, p, r);
}

// the error curve peaks at p/n = 1/2, and the value there depends only on the
// fraction, so (n=2, p=1) evaluates it
inline Rational worst_case_expected_error(std::uint64_t r) {
    return expected_error(2, 1, r);
}

// smallest r whose worst-case expected error is within the target
inline std::uint64_t min_samples(const Rational& target_error) {
    if (target_error <= 0 || target_error > Rational(1, 2)) {
        throw SamplingError("min_samples: target must be in (0, 1/2]");
    }
    for (std::uint64_t r = 1;; ++r) {
        if (worst_case_expected_error(r) <= target_error) {
            return r;
        }
        if (r > 1u << 20) {
            throw SamplingError("min_samples: target unreachable");
        }
    }
}

enum class BreachCase { PositiveLeft, NegativeLeft };

struct BreachResult {
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    double probability = 0.0;
    double ci95_halfwidth = 0.0;
};

// One observation pair: publish an estimate of (n, p), let one feedback of
// the given sign arrive, publish again at the same rate. A breach is a
// strictly telltale move of the published mean: up for a positive, down for
// a negative. Means are compared (not f_b) because the archive grows by one
// between the two observations.
inline BreachResult breach_probability(const ScoreSet& scores, const Rational& rate,
                                       BreachCase which, SampleMode mode,
                                       std::uint64_t trials, const Rng& rng) {
    if (trials < 1) {
        throw SamplingError("breach_probability: need at least one trial");
    }
    const ScoreSet after(scores.n + 1,
                         scores.p + (which == BreachCase::PositiveLeft ? 1 : 0));
    const SampleConfig before_cfg{samples_for_rate(rate, scores.n), mode};
    const SampleConfig after_cfg{samples_for_rate(rate, after.n), mode};
    before_cfg.validate(scores);
    after_cfg.validate(after);

    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        // per-trial substream, so results do not depend on trial scheduling
        Rng trial_rng = rng.fork("breach-trial:" + std::to_string(t));
        Rational before = sample_estimate(scores, before_cfg, trial_rng).mean();
        Rational post = sample_estimate(after, after_cfg, trial_rng).mean();
        bool breach = which == BreachCase::PositiveLeft ? post > before : post < before;
        if (breach) {
            ++hits;
        }
    }
    BreachResult res;
    res.hits = hits;
    res.trials = trials;
    res.probability = static_cast<double>(hits) / static_cast<double>(trials);
    res.ci95_halfwidth =
        1.96 * std::sqrt(res.probability * (1.0 - res.probability) /
                         static_cast<double>(trials));
    return res;
}

struct GateConfig {
    std::uint64_t min_scores = 5;
    Rational high_positive_threshold = Rational(9, 10);
    std::uint64_t high_positive_hold = 3;
};

struct GateState {
    ScoreSet scores{0, 0};
    // ratings accumulated since the last published aggregate; equals n when
    // nothing has been published yet
    std::uint64_t since_last_publish = 0;
};

// Release gates for the two borderline privacy cases: tiny archives leak
// through large swings, and nearly-uniform positive archives leak through any
// dip, so publication waits for volume and, at high positive fractions, for
// enough fresh ratings to blur which one moved the score.
inline bool release_gate(const GateState& state, const GateConfig& cfg) {
    if (state.scores.n < cfg.min_scores) {
        return false;
    }
    if (state.scores.n > 0 &&
        Rational(state.scores.p, state.scores.n) > cfg.high_positive_threshold &&
        state.since_last_publish < cfg.high_positive_hold) {
        return false;
    }
    return true;
}

}  // namespace repute::sampling
