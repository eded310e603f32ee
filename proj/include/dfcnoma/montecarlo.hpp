#pragma once

#include <cstdint>
#include <optional>

#include "dfcnoma/system_model.hpp"

namespace dfcnoma::montecarlo {

/// Sample mean with a 95 % normal-approximation confidence interval.
struct EstimateWithCI {
    double mean = 0.0;
    double ci_half_width = 0.0;
    std::uint64_t n_samples = 0;
    /// ci_half_width / 1.96
    double std_error = 0.0;
    /// Outage estimate resting on fewer than 30 outage events, or fewer than
    /// 30 successes. The normal interval is unreliable in either tail.
    bool low_count = false;
};

struct SimulationPlan {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t master_seed = 0x5eed;
    std::uint32_t n_shards = 16;
    /// Worker threads; 0 picks hardware concurrency. Never affects results.
    std::uint32_t max_threads = 0;

    /// Throws std::invalid_argument unless n_samples >= n_shards >= 1.
    void validate() const;
};

struct CapacityEstimates {
    EstimateWithCI u1;
    EstimateWithCI d1;
    EstimateWithCI u3;
    EstimateWithCI esc;
};

struct OutageEstimates {
    EstimateWithCI u1;
    EstimateWithCI u3;
    std::optional<EstimateWithCI> d1;  ///< absent without a D2D receiver
};

struct LinkEstimates {
    CapacityEstimates capacity;
    OutageEstimates outage;
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr std::uint64_t kLowCountThreshold = 30;

/// Capacities and outages from one shared pass over the channel draws.
LinkEstimates estimate_link_metrics(const SystemConfig& cfg, const SimulationPlan& plan);

CapacityEstimates estimate_ergodic_capacities(const SystemConfig& cfg, const SimulationPlan& plan);

/// Outage events are evaluated on the same draw for both of a user's
/// decoding conditions.
OutageEstimates estimate_outage(const SystemConfig& cfg, const SimulationPlan& plan);

/// Per-user outage indicators for one draw; d1 is false without D1.
struct OutageEvents {
    bool u1 = false;
    bool u3 = false;
    bool d1 = false;
};

OutageEvents outage_events(const SystemConfig& cfg, const SinrSet& sinrs);

}  // namespace dfcnoma::montecarlo
