#pragma once

#include "coin/game.hpp"
#include "coin/scenario.hpp"
#include "coin/solver.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace coin {

// Plain fully connected network: rectifier hidden layers, linear output
// (the output layer carries no activation; the action vector is applied to
// it as weights when forming Q). Deterministic in inference mode; training
// mode draws an input dropout mask from the supplied RNG.
class MlpNetwork {
public:
    MlpNetwork() = default;
    MlpNetwork(int input_width, std::vector<int> hidden_widths, int output_width,
               double input_dropout, std::uint64_t init_seed);

    std::vector<double> forward(const std::vector<double>& features) const;
    std::vector<double> forward_training(const std::vector<double>& features,
                                         std::mt19937_64& rng,
                                         std::vector<std::vector<double>>& activations,
                                         std::vector<double>& dropout_mask) const;

    int input_width() const { return input_width_; }
    int output_width() const { return output_width_; }
    std::size_t parameter_count() const;

    // Flat views used by the SGD update and the finite-difference oracle.
    double* parameter(std::size_t index);
    double parameter(std::size_t index) const;

    void save(const std::string& path) const;   // hexfloat text, bit-exact
    static MlpNetwork load(const std::string& path);

    bool operator==(const MlpNetwork&) const = default;

    struct Layer {
        std::vector<double> weights;  // row-major, out x in
        std::vector<double> bias;
        int in = 0, out = 0;
        bool operator==(const Layer&) const = default;
    };
    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }
    double input_dropout() const { return input_dropout_; }

private:
    int input_width_ = 0;
    int output_width_ = 0;
    double input_dropout_ = 0.0;
    std::vector<Layer> layers_;
};

struct Transition {
    std::vector<double> state;
    std::vector<int> action;   // entries in {0,1,2}, one per decision unit
    double reward = 0.0;
    std::vector<double> next_state;
    // Feasibility context for the argmax over next-state actions.
    std::vector<double> next_volumes;
    std::vector<std::uint8_t> next_active;
};

class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {}

    void push(Transition t);
    std::size_t size() const { return ring_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::size_t insertions() const { return insertions_; }
    const Transition& at(std::size_t i) const { return ring_[i]; }

    // Uniform without replacement within a batch.
    std::vector<const Transition*> sample(std::size_t batch, std::mt19937_64& rng) const;

private:
    std::size_t capacity_ = 0;
    std::size_t insertions_ = 0;
    std::vector<Transition> ring_;
};

struct StateEncoder {
    // Per-unit feature: equal-weight combination of min-max normalized
    // subtask tuple, user CPU, destination CPU and cache headroom, and queue
    // backlog; plus the per-unit activity indicator. Width = 2 * units.
    static std::vector<double> encode(const Scenario& scenario,
                                      const std::vector<std::vector<SubtaskSpec>>& tasks,
                                      const StrategyProfile& profile,
                                      const GameContext& ctx);
    static int width(const ScenarioConfig& config) {
        return 2 * config.user_count * config.subtask_count;
    }
};

double q_value(const std::vector<double>& theta, const std::vector<int>& action);

// Feasible argmax of sum b_v * Theta_v over cache-respecting actions.
// Inactive units are pinned to local.
std::vector<int> solve_feasible_argmax(const std::vector<double>& theta,
                                       const std::vector<double>& volumes,
                                       const std::vector<std::uint8_t>& active,
                                       const ScenarioConfig& config);

std::vector<int> select_action(const std::vector<double>& theta_main,
                               const std::vector<int>& ne_action,
                               const std::vector<double>& volumes,
                               const std::vector<std::uint8_t>& active,
                               double epsilon, const ScenarioConfig& config,
                               std::mt19937_64& rng);

// Double-DQN target: argmax under the main net, value under the target net.
double compute_target(const Transition& transition, const MlpNetwork& main_net,
                      const MlpNetwork& target_net, double discount,
                      const ScenarioConfig& config);

// One Huber-loss SGD step over the batch; returns the pre-update mean loss.
// Throws std::runtime_error on non-finite loss or gradients (no update then).
double train_step(MlpNetwork& main_net, const MlpNetwork& target_net,
                  const std::vector<const Transition*>& batch, double learning_rate,
                  double discount, const ScenarioConfig& config, std::mt19937_64& rng);

void sync_target(const MlpNetwork& main_net, MlpNetwork& target_net, long long slot, int period);

inline double reward(double cost_now, double cost_next) { return cost_now - cost_next; }

double huber(double residual);
double huber_grad(double residual);

} // namespace coin
