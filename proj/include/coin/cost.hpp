#pragma once

#include "coin/radio.hpp"
#include "coin/scenario.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace coin {

struct CostBreakdown {
    double delay = 0.0;        // s, queue-inclusive when a node is supplied
    double energy = 0.0;       // J
    double weighted_cost = 0.0;
    double queue_delay = 0.0;  // s, zero for local execution
    Destination destination = Destination::Local;
};

struct QueueSnapshot {
    double service_time = 0.0;
    double arrival_rate = 0.0;
    double service_rate = 0.0;  // +inf when the queue is empty
    double utilization = 0.0;
    double queue_delay = 0.0;
};

class InfeasibleProfile : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double local_delay(const UserSpec& user, const SubtaskSpec& subtask);
double local_energy(const SubtaskSpec& subtask, const ScenarioConfig& config);
CostBreakdown local_cost(const UserSpec& user, const SubtaskSpec& subtask,
                         const ScenarioConfig& config);

// P/F_dest + (I+V)/rate. Throws std::domain_error on rate <= 0.
double offload_delay_no_queue(const SubtaskSpec& subtask, Destination dest,
                              const ScenarioConfig& config, double rate);

// Branch rule: saturated (u >= 1) -> backlog + s, else M/M/1-style
// u^2/(1-u) * s. The printed definitions make u >= 1 whenever the queue is
// nonempty; the unsaturated branch is reachable only synthetically.
double queue_delay_formula(double utilization, double backlog, double service_time);

// Eq-9/14 quantities for a job with the given service time arriving at the
// node's current queue. In ServiceInclusive mode an empty queue yields Q = s; in
// WaitingOnly mode it yields Q = 0.
QueueSnapshot queue_delay(const NodeState& node, double service_time, QueueModel model);

// Full offloading cost. Pass node = nullptr for the user-side (game) scope
// where the queue term is excluded.
CostBreakdown offload_cost(const UserSpec& user, const SubtaskSpec& subtask,
                           Destination dest, double rate, const NodeState* node,
                           const ScenarioConfig& config);

// Rates for every offloaded unit under the profile; local units get 0.
std::vector<std::vector<double>> compute_rates(const StrategyProfile& profile,
                                               const std::vector<UserSpec>& users,
                                               const ScenarioConfig& config);

double user_slot_cost(int k, const StrategyProfile& profile,
                      const std::vector<std::vector<double>>& rates,
                      const std::vector<std::vector<SubtaskSpec>>& tasks,
                      const Scenario& scenario, const ScenarioConfig& config,
                      bool include_queue);

struct SystemCostReport {
    double cost = 0.0;
    double fin_overflow_bits = 0.0;  // software volume beyond the cache
    double ein_overflow_bits = 0.0;
    int deadline_violations = 0;     // units whose total delay exceeds tau
    bool cache_feasible() const { return fin_overflow_bits == 0.0 && ein_overflow_bits == 0.0; }
};

// Computes the Eq-19 objective and constraint diagnostics without failing on
// violations; the harness counts them.
SystemCostReport evaluate_system(const StrategyProfile& profile,
                                 const std::vector<std::vector<SubtaskSpec>>& tasks,
                                 const Scenario& scenario, const ScenarioConfig& config,
                                 bool include_queue);

// Strict variant: throws InfeasibleProfile naming the overfull destination.
double system_cost(const StrategyProfile& profile,
                   const std::vector<std::vector<SubtaskSpec>>& tasks,
                   const Scenario& scenario, const ScenarioConfig& config,
                   bool include_queue);

} // namespace coin
