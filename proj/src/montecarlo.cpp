#include "dfcnoma/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dfcnoma::montecarlo {

void SimulationPlan::validate() const
{
    if (n_shards < 1)
        throw std::invalid_argument("SimulationPlan: n_shards must be >= 1");
    if (n_samples < n_shards)
        throw std::invalid_argument("SimulationPlan: n_samples must be >= n_shards");
}

OutageEvents outage_events(const SystemConfig& cfg, const SinrSet& g)
{
    const double lambda1 = rate_to_snr_threshold(cfg.r1);
    const double lambda3 = rate_to_snr_threshold(cfg.r3);
    const double lambda_d = rate_to_snr_threshold(cfg.rd);

    OutageEvents ev;
    ev.u1 = !(g.gamma_b1_s3 > lambda3 && g.gamma_b1_s1 > lambda1);
    ev.u3 = !(g.gamma_b2_s3 > lambda3 && g.gamma_23_s3 > lambda3);
    ev.d1 = g.d2d_receiver && !(g.gamma_2d_s3 > lambda3 && g.gamma_2d_s2 > lambda_d);
    return ev;
}

namespace {

// Welford running moments; merge() is Chan's pairwise update.
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o)
    {
        if (o.n == 0)
            return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
};

struct ShardTally {
    std::array<Moments, 4> rates;  // c1, cd, c3, c_total
    std::array<std::uint64_t, 3> outages{};  // u1, u3, d1
    std::uint64_t n = 0;

    void merge(const ShardTally& o)
    {
        for (std::size_t i = 0; i < rates.size(); ++i)
            rates[i].merge(o.rates[i]);
        for (std::size_t i = 0; i < outages.size(); ++i)
            outages[i] += o.outages[i];
        n += o.n;
    }
};

ShardTally run_shard(const SystemConfig& cfg, std::uint64_t seed, std::uint32_t shard, std::uint64_t count)
{
    CounterRng rng(seed, shard);
    ShardTally t;
    for (std::uint64_t i = 0; i < count; ++i) {
        const SinrSet g = compute_sinrs(cfg, sample_channels(cfg, rng));
        const RateSet r = compute_rates(g);
        t.rates[0].add(r.c1);
        t.rates[1].add(r.cd);
        t.rates[2].add(r.c3);
        t.rates[3].add(r.c_total);
        const OutageEvents ev = outage_events(cfg, g);
        t.outages[0] += ev.u1;
        t.outages[1] += ev.u3;
        t.outages[2] += ev.d1;
    }
    t.n = count;
    return t;
}

ShardTally run_plan(const SystemConfig& cfg, const SimulationPlan& plan)
{
    cfg.validate();
    plan.validate();

    const std::uint32_t shards = plan.n_shards;
    std::vector<ShardTally> tallies(shards);
    auto shard_size = [&](std::uint32_t s) {
        const std::uint64_t base = plan.n_samples / shards;
        return base + (s < plan.n_samples % shards ? 1 : 0);
    };

    unsigned workers = plan.max_threads ? plan.max_threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, shards);

    std::atomic<std::uint32_t> next{0};
    auto work = [&]() {
        for (std::uint32_t s = next++; s < shards; s = next++)
            tallies[s] = run_shard(cfg, plan.master_seed, s, shard_size(s));
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }

    ShardTally total;
    for (const auto& t : tallies)
        total.merge(t);
    return total;
}

EstimateWithCI from_moments(const Moments& m)
{
    EstimateWithCI e;
    e.mean = m.mean;
    e.n_samples = m.n;
    const double var = m.n > 1 ? m.m2 / static_cast<double>(m.n - 1) : 0.0;
    e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(m.n));
    e.ci_half_width = kZ95 * e.std_error;
    return e;
}

EstimateWithCI from_count(std::uint64_t events, std::uint64_t n)
{
    EstimateWithCI e;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(events) / nn;
    e.mean = p;
    e.n_samples = n;
    const double var = n > 1 ? p * (1.0 - p) * nn / (nn - 1.0) : 0.0;
    e.std_error = std::sqrt(var / nn);
    e.ci_half_width = kZ95 * e.std_error;
    e.low_count = events < kLowCountThreshold || n - events < kLowCountThreshold;
    return e;
}

}  // namespace

LinkEstimates estimate_link_metrics(const SystemConfig& cfg, const SimulationPlan& plan)
{
    const ShardTally t = run_plan(cfg, plan);
    LinkEstimates out;
    out.capacity.u1 = from_moments(t.rates[0]);
    out.capacity.d1 = from_moments(t.rates[1]);
    out.capacity.u3 = from_moments(t.rates[2]);
    out.capacity.esc = from_moments(t.rates[3]);
    out.outage.u1 = from_count(t.outages[0], t.n);
    out.outage.u3 = from_count(t.outages[1], t.n);
    if (cfg.d2d_present())
        out.outage.d1 = from_count(t.outages[2], t.n);
    return out;
}

CapacityEstimates estimate_ergodic_capacities(const SystemConfig& cfg, const SimulationPlan& plan)
{
    return estimate_link_metrics(cfg, plan).capacity;
}

OutageEstimates estimate_outage(const SystemConfig& cfg, const SimulationPlan& plan)
{
    return estimate_link_metrics(cfg, plan).outage;
}

}  // namespace dfcnoma::montecarlo
