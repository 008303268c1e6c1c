#include "wpcn/montecarlo.hpp"

#include "wpcn/error.hpp"
#include "wpcn/orderstats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace wpcn {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
    std::uint64_t state = seed;
    state ^= splitmix64(state) + stream;
    state ^= splitmix64(state) + chunk;
    std::vector<std::uint32_t> words;
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t v = splitmix64(state);
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

constexpr std::int64_t kChunksPerRound = 16;

// Runs chunk bodies [first, last) across threads; results land at their chunk index.
void run_chunk_range(const McOptions& opts, std::uint64_t stream_id, std::size_t width,
                     std::int64_t first, std::int64_t last, const ChunkBody& body,
                     std::vector<MeanAccumulator>& out) {
    const auto count = last - first;
    out.assign(static_cast<std::size_t>(count), MeanAccumulator(width));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            const std::int64_t chunk = first + i;
            const std::int64_t begin = chunk * kChunkTrials;
            const std::int64_t n = std::min(kChunkTrials, opts.trials - begin);
            try {
                RandomStream rng(opts.seed, stream_id, static_cast<std::uint64_t>(chunk));
                body(rng, n, out[static_cast<std::size_t>(i)]);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const auto hw = std::max(1u, std::thread::hardware_concurrency());
    const auto threads = static_cast<std::int64_t>(std::min<std::int64_t>(hw, count));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::int64_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

void check_rank_range(int l, const NetworkConfig& cfg) {
    if (l < 0 || l > cfg.n_users) throw DomainError("interference group size outside [0, N]");
}

struct TrialScratch {
    std::vector<double> placement;
    std::vector<double> harvest_rate;
    std::vector<double> previous;
};

void evaluate_trial_into(std::span<const double> placement, int l, const NetworkConfig& cfg,
                         const DerivedConstants& dc, TrialOutcome& out, TrialScratch& scratch) {
    const auto n_users = placement.size();
    const double r_d = cfg.dist_ps_ap;
    const double alpha = cfg.path_loss_exp;

    out.distance.assign(placement.begin(), placement.end());
    const auto equiv = [r_d](double r) { return r * (r_d - r); };
    std::sort(out.distance.begin(), out.distance.end(),
              [&](double x, double y) { return equiv(x) < equiv(y); });

    out.equivalent_distance.resize(n_users);
    out.energy.resize(n_users);
    out.power.resize(n_users);
    out.sinr.resize(n_users);
    out.rate.resize(n_users);
    scratch.harvest_rate.resize(n_users);

    const double large_scale = cfg.path_loss_ref * std::pow(cfg.ref_distance, alpha);
    const double tau_n = dc.tau_n;
    for (std::size_t k = 0; k < n_users; ++k) {
        const double r = out.distance[k];
        out.equivalent_distance[k] = equiv(r);
        // received RF power from the power station, already scaled by eta
        scratch.harvest_rate[k] =
            cfg.energy_efficiency * cfg.ps_power * large_scale * cfg.fading_gain_wet / std::pow(r, alpha);
        const bool interfered = static_cast<int>(k) < l;
        const double charge_time = cfg.tau0 + (interfered ? l - 1 : l) * tau_n;
        out.energy[k] = scratch.harvest_rate[k] * charge_time;
    }

    if (cfg.inter_user_interference && l > 0) {
        // Energy from the other interfered users' transmissions; their powers depend
        // on what they harvested, so iterate to the fixed point.
        const double gain = std::pow(10.0, cfg.inter_user_gain_db / 10.0) * cfg.energy_efficiency;
        scratch.previous = out.energy;
        for (int iter = 0; iter < 200; ++iter) {
            double group_power = 0.0;
            for (int i = 0; i < l; ++i) group_power += scratch.previous[i] / tau_n;
            double change = 0.0;
            for (std::size_t k = 0; k < n_users; ++k) {
                const bool interfered = static_cast<int>(k) < l;
                const double charge_time = cfg.tau0 + (interfered ? l - 1 : l) * tau_n;
                const double others = group_power - (interfered ? scratch.previous[k] / tau_n : 0.0);
                const double e = scratch.harvest_rate[k] * charge_time + gain * others * tau_n;
                change = std::max(change, std::abs(e - scratch.previous[k]) / e);
                out.energy[k] = e;
            }
            scratch.previous = out.energy;
            if (change < 1e-14) break;
        }
    }

    for (std::size_t k = 0; k < n_users; ++k) {
        const bool interfered = static_cast<int>(k) < l;
        out.power[k] = out.energy[k] / tau_n;
        const double received =
            out.power[k] * large_scale * cfg.fading_gain_wit / std::pow(r_d - out.distance[k], alpha);
        const double impairment = dc.noise_power_w + (interfered ? dc.interference_power_w : 0.0);
        out.sinr[k] = received / impairment;
        out.rate[k] = tau_n * std::log2(1.0 + out.sinr[k]);
    }
}

void fill_placement(const NetworkConfig& cfg, RandomStream& rng, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(cfg.n_users));
    for (double& r : out) r = cfg.wet_radius * rng.uniform();
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk)
    : engine_(make_engine(seed, stream, chunk)) {}

std::uint64_t RandomStream::below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

MeanAccumulator::MeanAccumulator(std::size_t width) : mean_(width, 0.0), m2_(width, 0.0) {}

void MeanAccumulator::add(std::span<const double> sample) {
    ++count_;
    const double inv = 1.0 / static_cast<double>(count_);
    for (std::size_t k = 0; k < mean_.size(); ++k) {
        const double delta = sample[k] - mean_[k];
        mean_[k] += delta * inv;
        m2_[k] += delta * (sample[k] - mean_[k]);
    }
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    for (std::size_t k = 0; k < mean_.size(); ++k) {
        const double delta = other.mean_[k] - mean_[k];
        mean_[k] += delta * nb / n;
        m2_[k] += other.m2_[k] + delta * delta * na * nb / n;
    }
    count_ += other.count_;
}

McEstimate MeanAccumulator::estimate(std::size_t k) const {
    McEstimate e;
    e.mean = mean_[k];
    e.trials_used = count_;
    if (count_ > 1) {
        const double var = m2_[k] / static_cast<double>(count_ - 1);
        e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(count_));
    }
    return e;
}

double MeanAccumulator::max_relative_stderr() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < mean_.size(); ++k) {
        const auto e = estimate(k);
        if (e.mean != 0.0) worst = std::max(worst, e.std_error / std::abs(e.mean));
    }
    return worst;
}

MeanAccumulator run_trials(const McOptions& opts, std::uint64_t stream_id, std::size_t width,
                           const ChunkBody& body) {
    if (opts.trials < 1) throw DomainError("Monte Carlo trials must be at least 1");
    const std::int64_t chunks = (opts.trials + kChunkTrials - 1) / kChunkTrials;
    const std::int64_t round = opts.target_stderr ? kChunksPerRound : chunks;

    MeanAccumulator total(width);
    std::vector<MeanAccumulator> parts;
    for (std::int64_t first = 0; first < chunks; first += round) {
        const std::int64_t last = std::min(chunks, first + round);
        run_chunk_range(opts, stream_id, width, first, last, body, parts);
        for (const auto& p : parts) total.merge(p);
        if (opts.target_stderr && total.count() > 1 && total.max_relative_stderr() <= *opts.target_stderr) {
            break;
        }
    }
    return total;
}

std::vector<double> sample_placement(const NetworkConfig& cfg, RandomStream& rng) {
    std::vector<double> out;
    fill_placement(cfg, rng, out);
    return out;
}

TrialOutcome evaluate_trial(std::span<const double> placement, int l, const NetworkConfig& cfg,
                            const DerivedConstants& dc) {
    check_rank_range(l, cfg);
    if (placement.size() != static_cast<std::size_t>(cfg.n_users)) {
        throw DomainError("placement size differs from n_users");
    }
    TrialOutcome out;
    TrialScratch scratch;
    evaluate_trial_into(placement, l, cfg, dc, out, scratch);
    return out;
}

RateSimulation simulate_rates(int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                              const McOptions& opts) {
    check_rank_range(l, cfg);
    const auto n_users = static_cast<std::size_t>(cfg.n_users);
    const auto acc = run_trials(opts, 1, n_users + 1, [&](RandomStream& rng, std::int64_t trials, MeanAccumulator& a) {
        TrialScratch scratch;
        TrialOutcome outcome;
        std::vector<double> sample(n_users + 1);
        for (std::int64_t t = 0; t < trials; ++t) {
            fill_placement(cfg, rng, scratch.placement);
            evaluate_trial_into(scratch.placement, l, cfg, dc, outcome, scratch);
            double sum = 0.0;
            for (std::size_t k = 0; k < n_users; ++k) {
                sample[k] = outcome.rate[k];
                sum += outcome.rate[k];
            }
            sample[n_users] = sum;
            a.add(sample);
        }
    });
    RateSimulation sim;
    for (std::size_t k = 0; k < n_users; ++k) sim.per_rank.push_back(acc.estimate(k));
    sim.sum_rate = acc.estimate(n_users);
    return sim;
}

HypothesisRates simulate_hypothesis_rates(int l, const NetworkConfig& cfg, const DerivedConstants& dc,
                                          const McOptions& opts) {
    check_rank_range(l, cfg);
    const auto n_users = static_cast<std::size_t>(cfg.n_users);
    const double alpha = cfg.path_loss_exp;
    const double r_d = cfg.dist_ps_ap;
    const double large_scale = cfg.path_loss_ref * std::pow(cfg.ref_distance, alpha);
    const double tau_n = dc.tau_n;
    // Interfered users charge during the other l - 1 group slots; the rest during all l.
    const double charge_interfered = l >= 1 ? cfg.tau0 + (l - 1) * tau_n : 0.0;
    const double charge_free = cfg.tau0 + l * tau_n;

    const auto acc = run_trials(opts, 2, 2 * n_users, [&](RandomStream& rng, std::int64_t trials, MeanAccumulator& a) {
        std::vector<double> placement;
        std::vector<double> sample(2 * n_users);
        for (std::int64_t t = 0; t < trials; ++t) {
            fill_placement(cfg, rng, placement);
            std::sort(placement.begin(), placement.end(),
                      [r_d](double x, double y) { return x * (r_d - x) < y * (r_d - y); });
            for (std::size_t k = 0; k < n_users; ++k) {
                const double r = placement[k];
                const double harvest =
                    cfg.energy_efficiency * cfg.ps_power * large_scale * cfg.fading_gain_wet / std::pow(r, alpha);
                const double link = large_scale * cfg.fading_gain_wit / std::pow(r_d - r, alpha);
                const double p_interfered = harvest * charge_interfered / tau_n;
                const double p_free = harvest * charge_free / tau_n;
                sample[k] = tau_n * std::log2(1.0 + p_interfered * link / (dc.noise_power_w + dc.interference_power_w));
                sample[n_users + k] = tau_n * std::log2(1.0 + p_free * link / dc.noise_power_w);
            }
            a.add(sample);
        }
    });
    HypothesisRates out;
    for (std::size_t k = 0; k < n_users; ++k) {
        out.interfered.push_back(acc.estimate(k));
        out.noninterfered.push_back(acc.estimate(n_users + k));
    }
    return out;
}

std::vector<McEstimate> estimate_log_order_distances(const NetworkConfig& cfg, const McOptions& opts) {
    const auto n_users = static_cast<std::size_t>(cfg.n_users);
    const auto acc = run_trials(opts, 3, n_users, [&](RandomStream& rng, std::int64_t trials, MeanAccumulator& a) {
        std::vector<double> placement;
        for (std::int64_t t = 0; t < trials; ++t) {
            fill_placement(cfg, rng, placement);
            std::sort(placement.begin(), placement.end());
            for (double& r : placement) r = std::log(r);
            a.add(placement);
        }
    });
    std::vector<McEstimate> out;
    for (std::size_t k = 0; k < n_users; ++k) out.push_back(acc.estimate(k));
    return out;
}

McEstimate estimate_log_order_distance(int n, const NetworkConfig& cfg, const McOptions& opts) {
    validate(OrderStatSpec{n, cfg.n_users});
    return estimate_log_order_distances(cfg, opts)[static_cast<std::size_t>(n - 1)];
}

}  // namespace wpcn
