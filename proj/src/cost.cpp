#include "coin/cost.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coin {

double local_delay(const UserSpec& user, const SubtaskSpec& subtask) {
    return subtask.load_cycles / user.local_cpu;
}

double local_energy(const SubtaskSpec& subtask, const ScenarioConfig& config) {
    const double p = subtask.load_cycles;
    return config.energy_coefficient * p * p * p / (config.deadline_s * config.deadline_s);
}

CostBreakdown local_cost(const UserSpec& user, const SubtaskSpec& subtask,
                         const ScenarioConfig& config) {
    CostBreakdown c;
    c.destination = Destination::Local;
    c.delay = local_delay(user, subtask);
    c.energy = local_energy(subtask, config);
    c.weighted_cost = user.delay_weight * c.delay + user.energy_weight * c.energy;
    return c;
}

double offload_delay_no_queue(const SubtaskSpec& subtask, Destination dest,
                              const ScenarioConfig& config, double rate) {
    if (rate <= 0.0) throw std::domain_error("offload_delay_no_queue: rate must be positive");
    const double dest_cpu = dest == Destination::Fin ? config.fin_cpu : config.ein_cpu;
    return subtask.load_cycles / dest_cpu + (subtask.input_bits + subtask.software_bits) / rate;
}

double queue_delay_formula(double utilization, double backlog, double service_time) {
    if (utilization >= 1.0) return backlog + service_time;
    return utilization * utilization / (1.0 - utilization) * service_time;
}

QueueSnapshot queue_delay(const NodeState& node, double service_time, QueueModel model) {
    if (service_time <= 0.0) throw std::domain_error("queue_delay: service_time must be positive");
    QueueSnapshot snap;
    snap.service_time = service_time;
    snap.arrival_rate = 1.0 / service_time;
    if (node.queue.empty()) {
        snap.service_rate = std::numeric_limits<double>::infinity();
        snap.utilization = 1.0;
        snap.queue_delay = model == QueueModel::ServiceInclusive ? service_time : 0.0;
        return snap;
    }
    const double backlog = node.backlog();
    snap.service_rate = 1.0 / (backlog + service_time);
    snap.utilization = snap.arrival_rate / snap.service_rate;  // always >= 1 here
    snap.queue_delay = queue_delay_formula(snap.utilization, backlog, service_time);
    return snap;
}

CostBreakdown offload_cost(const UserSpec& user, const SubtaskSpec& subtask,
                           Destination dest, double rate, const NodeState* node,
                           const ScenarioConfig& config) {
    CostBreakdown c;
    c.destination = dest;
    const double base_delay = offload_delay_no_queue(subtask, dest, config, rate);
    if (node != nullptr)
        c.queue_delay = queue_delay(*node, base_delay, config.queue_model).queue_delay;
    c.delay = base_delay + c.queue_delay;
    c.energy = user.transmit_power * (subtask.input_bits + subtask.software_bits) / rate;
    c.weighted_cost = user.delay_weight * c.delay + user.energy_weight * c.energy;
    return c;
}

std::vector<std::vector<double>> compute_rates(const StrategyProfile& profile,
                                               const std::vector<UserSpec>& users,
                                               const ScenarioConfig& config) {
    std::vector<std::vector<double>> rates(profile.decisions.size());
    for (std::size_t k = 0; k < profile.decisions.size(); ++k) {
        rates[k].resize(profile.decisions[k].size(), 0.0);
        for (std::size_t v = 0; v < profile.decisions[k].size(); ++v) {
            const auto& d = profile.decisions[k][v];
            if (d.offloaded())
                rates[k][v] = uplink_rate(static_cast<int>(k), d, profile, users, config);
        }
    }
    return rates;
}

double user_slot_cost(int k, const StrategyProfile& profile,
                      const std::vector<std::vector<double>>& rates,
                      const std::vector<std::vector<SubtaskSpec>>& tasks,
                      const Scenario& scenario, const ScenarioConfig& config,
                      bool include_queue) {
    const auto& row = profile.decisions.at(k);
    if (row.size() != tasks.at(k).size())
        throw std::invalid_argument("user_slot_cost: profile does not cover all subtasks");
    double total = 0.0;
    for (std::size_t v = 0; v < row.size(); ++v) {
        const auto& d = row[v];
        const auto& st = tasks[k][v];
        if (!d.offloaded()) {
            total += local_cost(scenario.users[k], st, config).weighted_cost;
        } else {
            const NodeState* node = nullptr;
            if (include_queue)
                node = d.dest == Destination::Fin ? &scenario.fin : &scenario.ein;
            total += offload_cost(scenario.users[k], st, d.dest, rates[k][v], node, config)
                         .weighted_cost;
        }
    }
    return total;
}

SystemCostReport evaluate_system(const StrategyProfile& profile,
                                 const std::vector<std::vector<SubtaskSpec>>& tasks,
                                 const Scenario& scenario, const ScenarioConfig& config,
                                 bool include_queue) {
    profile.validate(config.channel_count);
    const auto rates = compute_rates(profile, scenario.users, config);

    SystemCostReport report;
    double fin_volume = 0.0, ein_volume = 0.0;
    for (std::size_t k = 0; k < profile.decisions.size(); ++k) {
        report.cost += user_slot_cost(static_cast<int>(k), profile, rates, tasks, scenario,
                                      config, include_queue);
        for (std::size_t v = 0; v < profile.decisions[k].size(); ++v) {
            const auto& d = profile.decisions[k][v];
            const auto& st = tasks[k][v];
            double delay;
            if (d.offloaded()) {
                if (d.dest == Destination::Fin)
                    fin_volume += st.software_bits;
                else
                    ein_volume += st.software_bits;
                const NodeState* node = nullptr;
                if (include_queue)
                    node = d.dest == Destination::Fin ? &scenario.fin : &scenario.ein;
                delay = offload_cost(scenario.users[k], st, d.dest, rates[k][v], node, config)
                            .delay;
            } else {
                delay = local_delay(scenario.users[k], st);
            }
            if (delay > config.deadline_s) ++report.deadline_violations;
        }
    }
    report.fin_overflow_bits = std::max(0.0, fin_volume - scenario.fin.cache_bits);
    report.ein_overflow_bits = std::max(0.0, ein_volume - scenario.ein.cache_bits);
    return report;
}

double system_cost(const StrategyProfile& profile,
                   const std::vector<std::vector<SubtaskSpec>>& tasks,
                   const Scenario& scenario, const ScenarioConfig& config,
                   bool include_queue) {
    const auto report = evaluate_system(profile, tasks, scenario, config, include_queue);
    if (report.fin_overflow_bits > 0.0)
        throw InfeasibleProfile("FIN cache overfull by " +
                                std::to_string(report.fin_overflow_bits) + " bits");
    if (report.ein_overflow_bits > 0.0)
        throw InfeasibleProfile("EIN cache overfull by " +
                                std::to_string(report.ein_overflow_bits) + " bits");
    return report.cost;
}

} // namespace coin
