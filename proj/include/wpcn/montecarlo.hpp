#pragma once

#include "wpcn/config.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace wpcn {

/// Recorded in output metadata so runs can be reproduced bit-for-bit.
inline constexpr std::string_view kGeneratorName = "mt19937_64 (splitmix64 substreams, 53-bit uniforms)";

/// Trials are processed in chunks of this size; chunk k always uses substream k.
inline constexpr std::int64_t kChunkTrials = 4096;

struct McOptions {
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    /// Stop early once every estimate's relative standard error is at or below this.
    std::optional<double> target_stderr;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials_used = 0;
};

/// A 64-bit Mersenne Twister seeded from (seed, stream, chunk) through splitmix64.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk);

    /// Uniform on the open interval (0, 1), built from the top 53 bits.
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

  private:
    std::mt19937_64 engine_;
};

/// Running mean and M2 (Welford) for a fixed number of quantities.
class MeanAccumulator {
  public:
    explicit MeanAccumulator(std::size_t width = 0);

    void add(std::span<const double> sample);
    /// Chan et al. pairwise merge; merging in a fixed order keeps results deterministic.
    void merge(const MeanAccumulator& other);

    std::size_t width() const { return mean_.size(); }
    std::int64_t count() const { return count_; }
    McEstimate estimate(std::size_t k) const;
    /// Largest std_error / |mean| over components with a nonzero mean.
    double max_relative_stderr() const;

  private:
    std::int64_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

/// Fills `acc` with `trials` samples drawn from `stream`.
using ChunkBody = std::function<void(RandomStream& stream, std::int64_t trials, MeanAccumulator& acc)>;

/**
 * Runs opts.trials trials in kChunkTrials-sized chunks spread over worker
 * threads, then merges the chunks in index order. `stream_id` separates
 * independent experiments sharing one seed. With a target_stderr, chunks are
 * processed in fixed rounds and the run stops after the first round that meets it.
 */
MeanAccumulator run_trials(const McOptions& opts, std::uint64_t stream_id, std::size_t width,
                           const ChunkBody& body);

/// N i.i.d. distances uniform on (0, r_e), in draw order.
std::vector<double> sample_placement(const NetworkConfig& cfg, RandomStream& rng);

/// Every quantity of the energy/SINR pipeline for one placement, indexed by rank.
struct TrialOutcome {
    std::vector<double> distance;             ///< R_(n), meters from the power station
    std::vector<double> equivalent_distance;  ///< X_(n) = R_(n) (r_d - R_(n)), ascending
    std::vector<double> energy;               ///< harvested joules per unit block
    std::vector<double> power;                ///< transmit power e_n / tau_n
    std::vector<double> sinr;
    std::vector<double> rate;  ///< tau_n log2(1 + sinr), bits per block per unit bandwidth
};

/// Ranks the placement by equivalent distance and runs harvest, transmit power, SINR and rate.
TrialOutcome evaluate_trial(std::span<const double> placement, int l, const NetworkConfig& cfg,
                            const DerivedConstants& dc);

struct RateSimulation {
    std::vector<McEstimate> per_rank;
    McEstimate sum_rate;
};

/// Ordered grouping: ranks 1..l share the WIT slots with the power station's energy signal.
RateSimulation simulate_rates(int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                              const McOptions& opts);

/**
 * Per-rank rates under both membership hypotheses for an interference group of
 * size l: as an interfered user (l - 1 other charging slots, interference at the
 * AP) and as a non-interfered user (l charging slots). Only meaningful without
 * inter-user interference, which this estimator ignores.
 */
struct HypothesisRates {
    std::vector<McEstimate> interfered;
    std::vector<McEstimate> noninterfered;
};
HypothesisRates simulate_hypothesis_rates(int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                                          const McOptions& opts);

/// Sample mean of ln R_(n).
McEstimate estimate_log_order_distance(int n, const NetworkConfig& cfg, const McOptions& opts);

/// Same for every rank from one set of trials.
std::vector<McEstimate> estimate_log_order_distances(const NetworkConfig& cfg, const McOptions& opts);

}  // namespace wpcn
