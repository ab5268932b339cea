#include "coin/radio.hpp"

#include "coin/cost.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coin {

StrategyProfile StrategyProfile::all_local(int users, int subtasks) {
    StrategyProfile p;
    p.decisions.assign(users, std::vector<UnitDecision>(subtasks));
    return p;
}

void StrategyProfile::validate(int channel_count) const {
    for (const auto& row : decisions) {
        for (const auto& d : row) {
            if (d.channel < 0 || d.channel > channel_count)
                throw std::invalid_argument("decision channel out of [0, M]");
            if (d.offloaded() && d.dest == Destination::Local)
                throw std::invalid_argument("offloaded unit without destination bit");
            if (!d.offloaded() && d.dest != Destination::Local)
                throw std::invalid_argument("local unit with destination bit set");
        }
    }
}

double channel_gain(const UserSpec& user, Destination dest) {
    switch (dest) {
        case Destination::Fin: return user.channel_gain_fin;
        case Destination::Ein: return user.channel_gain_ein;
        default: throw std::invalid_argument("channel_gain: local has no destination gain");
    }
}

double interference_sum(int k, int channel, Destination dest,
                        const StrategyProfile& profile,
                        const std::vector<UserSpec>& users) {
    double sum = 0.0;
    for (std::size_t n = 0; n < profile.decisions.size(); ++n) {
        if (static_cast<int>(n) == k) continue;
        for (const auto& d : profile.decisions[n]) {
            if (d.channel == channel && d.dest == dest)
                sum += users[n].transmit_power * channel_gain(users[n], dest);
        }
    }
    return sum;
}

double rate_from_interference(const UserSpec& user, Destination dest, double interference,
                              const ScenarioConfig& config) {
    const double signal = user.transmit_power * channel_gain(user, dest);
    const double sinr = signal / (interference + config.noise_variance);
    return config.bandwidth_hz / config.channel_count * std::log2(1.0 + sinr);
}

double uplink_rate(int k, const UnitDecision& decision, const StrategyProfile& profile,
                   const std::vector<UserSpec>& users, const ScenarioConfig& config) {
    if (!decision.offloaded())
        throw std::invalid_argument("uplink_rate: decision is local");
    const double isum = interference_sum(k, decision.channel, decision.dest, profile, users);
    return rate_from_interference(users[k], decision.dest, isum, config);
}

double interference(int k, int channel, Destination dest, const StrategyProfile& profile,
                    const std::vector<UserSpec>& users, const ScenarioConfig& config) {
    const double isum = interference_sum(k, channel, dest, profile, users);
    const double own = users[k].transmit_power * channel_gain(users[k], dest);
    return isum / own - config.noise_variance;
}

OffloadThreshold offload_threshold(const UserSpec& user, const SubtaskSpec& subtask,
                                   Destination dest, const ScenarioConfig& config) {
    // Local cost exceeds the offload cost exactly when
    //   (I+V)(dT + dE*rho)/rate <= C_L - dT * P/F_dest =: slack,
    // i.e. when the rate clears N/slack, i.e. when the SINR clears
    // 2^(M*N/(B*slack)) - 1. Rewritten in interference terms that is
    //   interference_sum <= rho*eta/theta - sigma^2.
    const double dest_cpu = dest == Destination::Fin ? config.fin_cpu : config.ein_cpu;
    const double payload = subtask.input_bits + subtask.software_bits;
    const double local = user.delay_weight * local_delay(user, subtask) +
                         user.energy_weight * local_energy(subtask, config);
    const double slack = local - user.delay_weight * subtask.load_cycles / dest_cpu;

    OffloadThreshold t;
    if (slack <= 0.0) {
        t.never = true;
        t.ratio_threshold = -std::numeric_limits<double>::infinity();
        t.power_threshold = -std::numeric_limits<double>::infinity();
        return t;
    }
    const double numer = payload * (user.delay_weight + user.energy_weight * user.transmit_power);
    const double exponent = config.channel_count * numer / (config.bandwidth_hz * slack);
    const double theta = std::exp2(exponent) - 1.0;  // required SINR
    const double own = user.transmit_power * channel_gain(user, dest);
    t.power_threshold = own / theta - config.noise_variance;
    t.ratio_threshold = t.power_threshold / own - config.noise_variance;
    return t;
}

} // namespace coin
