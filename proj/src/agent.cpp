#include "coin/agent.hpp"

#include "coin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coin {

MlpNetwork::MlpNetwork(int input_width, std::vector<int> hidden_widths, int output_width,
                       double input_dropout, std::uint64_t init_seed)
    : input_width_(input_width), output_width_(output_width), input_dropout_(input_dropout) {
    auto rng = make_rng(derive_seed(init_seed, {tag("mlp-init")}));
    int in = input_width;
    std::vector<int> widths = std::move(hidden_widths);
    widths.push_back(output_width);
    for (int out : widths) {
        Layer layer;
        layer.in = in;
        layer.out = out;
        // Kaiming-style fan-in scaling
        const double scale = std::sqrt(2.0 / in);
        std::normal_distribution<double> init(0.0, scale);
        layer.weights.resize(static_cast<std::size_t>(out) * in);
        for (double& w : layer.weights) w = init(rng);
        layer.bias.assign(out, 0.0);
        layers_.push_back(std::move(layer));
        in = out;
    }
}

std::size_t MlpNetwork::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
}

double* MlpNetwork::parameter(std::size_t index) {
    for (auto& l : layers_) {
        if (index < l.weights.size()) return &l.weights[index];
        index -= l.weights.size();
        if (index < l.bias.size()) return &l.bias[index];
        index -= l.bias.size();
    }
    throw std::out_of_range("MlpNetwork::parameter");
}

double MlpNetwork::parameter(std::size_t index) const {
    return const_cast<MlpNetwork*>(this)->parameter(index)[0];
}

namespace {

void affine(const MlpNetwork::Layer& layer, const std::vector<double>& in,
            std::vector<double>& out) {
    out.assign(layer.out, 0.0);
    for (int r = 0; r < layer.out; ++r) {
        double acc = layer.bias[r];
        const double* w = layer.weights.data() + static_cast<std::size_t>(r) * layer.in;
        for (int c = 0; c < layer.in; ++c) acc += w[c] * in[c];
        out[r] = acc;
    }
}

void check_finite(const std::vector<double>& v, int layer_index) {
    for (double x : v)
        if (!std::isfinite(x))
            throw std::runtime_error("non-finite activation in layer " +
                                     std::to_string(layer_index));
}

} // namespace

std::vector<double> MlpNetwork::forward(const std::vector<double>& features) const {
    if (static_cast<int>(features.size()) != input_width_)
        throw std::invalid_argument("forward: feature width mismatch");
    std::vector<double> cur = features, next;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        affine(layers_[i], cur, next);
        if (i + 1 < layers_.size())
            for (double& x : next) x = std::max(0.0, x);
        check_finite(next, static_cast<int>(i));
        cur.swap(next);
    }
    return cur;
}

std::vector<double> MlpNetwork::forward_training(const std::vector<double>& features,
                                                 std::mt19937_64& rng,
                                                 std::vector<std::vector<double>>& activations,
                                                 std::vector<double>& dropout_mask) const {
    if (static_cast<int>(features.size()) != input_width_)
        throw std::invalid_argument("forward_training: feature width mismatch");
    // inverted dropout applied to the input layer only
    dropout_mask.assign(features.size(), 1.0);
    if (input_dropout_ > 0.0) {
        std::bernoulli_distribution drop(input_dropout_);
        for (double& m : dropout_mask)
            m = drop(rng) ? 0.0 : 1.0 / (1.0 - input_dropout_);
    }
    activations.clear();
    std::vector<double> cur(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) cur[i] = features[i] * dropout_mask[i];
    activations.push_back(cur);

    std::vector<double> next;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        affine(layers_[i], cur, next);
        if (i + 1 < layers_.size())
            for (double& x : next) x = std::max(0.0, x);
        check_finite(next, static_cast<int>(i));
        activations.push_back(next);
        cur = next;
    }
    return cur;
}

void MlpNetwork::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << "coin-mlp 1\n";
    out << input_width_ << ' ' << output_width_ << ' ';
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", input_dropout_);
    out << buf << '\n' << layers_.size() << '\n';
    for (const auto& l : layers_) {
        out << l.in << ' ' << l.out << '\n';
        for (double w : l.weights) {
            std::snprintf(buf, sizeof buf, "%a", w);
            out << buf << '\n';
        }
        for (double b : l.bias) {
            std::snprintf(buf, sizeof buf, "%a", b);
            out << buf << '\n';
        }
    }
}

MlpNetwork MlpNetwork::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "coin-mlp" || version != 1)
        throw std::runtime_error("unrecognized checkpoint format: " + path);
    MlpNetwork net;
    std::string token;
    in >> net.input_width_ >> net.output_width_ >> token;
    net.input_dropout_ = std::strtod(token.c_str(), nullptr);
    std::size_t layer_count = 0;
    in >> layer_count;
    net.layers_.resize(layer_count);
    for (auto& l : net.layers_) {
        in >> l.in >> l.out;
        l.weights.resize(static_cast<std::size_t>(l.in) * l.out);
        l.bias.resize(l.out);
        for (double& w : l.weights) {
            in >> token;
            w = std::strtod(token.c_str(), nullptr);
        }
        for (double& b : l.bias) {
            in >> token;
            b = std::strtod(token.c_str(), nullptr);
        }
    }
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    return net;
}

void ReplayMemory::push(Transition t) {
    if (ring_.size() < capacity_) {
        ring_.push_back(std::move(t));
    } else {
        ring_[insertions_ % capacity_] = std::move(t);
    }
    ++insertions_;
}

std::vector<const Transition*> ReplayMemory::sample(std::size_t batch,
                                                    std::mt19937_64& rng) const {
    batch = std::min(batch, ring_.size());
    // partial Fisher-Yates over an index vector: uniform without replacement
    std::vector<std::size_t> idx(ring_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<const Transition*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
        out.push_back(&ring_[idx[i]]);
    }
    return out;
}

std::vector<double> StateEncoder::encode(const Scenario& scenario,
                                         const std::vector<std::vector<SubtaskSpec>>& tasks,
                                         const StrategyProfile& profile,
                                         const GameContext& ctx) {
    const auto& config = *ctx.config;
    const double unit = config.bits_per_unit();
    const double cpu_max = std::max({config.fin_cpu, config.ein_cpu, config.local_cpu});
    const int n_units = config.user_count * config.subtask_count;

    std::vector<double> features(2 * n_units, 0.0);
    int u = 0;
    for (int k = 0; k < config.user_count; ++k) {
        for (int v = 0; v < config.subtask_count; ++v, ++u) {
            const auto& st = tasks[k][v];
            const auto& d = profile.decisions[k][v];
            const Destination dest = d.offloaded() ? d.dest : ctx.preferred_dest[k][v];
            const NodeState& node = dest == Destination::Fin ? scenario.fin : scenario.ein;

            const auto norm = [](double x, double lo, double hi) {
                return hi > lo ? std::clamp((x - lo) / (hi - lo), 0.0, 1.0) : 0.0;
            };
            const double backlog = node.backlog();
            double f = 0.0;
            f += norm(st.input_bits, unit, config.input_max * unit);
            f += norm(st.software_bits, unit, config.volume_max * unit);
            f += norm(st.load_cycles, 1e9, config.load_max_gigacycles * 1e9);
            f += scenario.users[k].local_cpu / cpu_max;
            f += node.cpu / cpu_max;
            f += node.cache_bits > 0.0
                     ? std::clamp(1.0 - st.software_bits / node.cache_bits, 0.0, 1.0)
                     : 0.0;
            f += backlog / (backlog + 10.0 * config.deadline_s);
            features[u] = f / 7.0;  // all chi weights set to 1
            features[n_units + u] = d.offloaded() ? 1.0 : 0.0;
        }
    }
    return features;
}

double q_value(const std::vector<double>& theta, const std::vector<int>& action) {
    if (theta.size() != action.size())
        throw std::invalid_argument("q_value: theta/action length mismatch");
    double q = 0.0;
    for (std::size_t v = 0; v < theta.size(); ++v) {
        if (action[v] < 0 || action[v] > 2)
            throw std::invalid_argument("q_value: action entry outside {0,1,2}");
        q += action[v] * theta[v];
    }
    return q;
}

std::vector<int> solve_feasible_argmax(const std::vector<double>& theta,
                                       const std::vector<double>& volumes,
                                       const std::vector<std::uint8_t>& active,
                                       const ScenarioConfig& config) {
    // gather active units into a sub-instance, scatter the result back
    KnapsackInstance inst;
    std::vector<std::size_t> map;
    for (std::size_t v = 0; v < theta.size(); ++v) {
        if (!active[v]) continue;
        inst.values.push_back(theta[v]);
        inst.volumes.push_back(volumes[v]);
        map.push_back(v);
    }
    inst.fin_cache = config.fin_cache_bits();
    inst.ein_cache = config.ein_cache_bits();
    inst.step = std::max(inst.fin_cache, inst.ein_cache) / config.knapsack_bins;

    std::vector<int> action(theta.size(), 0);
    if (inst.values.empty()) return action;
    const auto sub = solve_optimal_action(inst);
    for (std::size_t i = 0; i < map.size(); ++i) action[map[i]] = sub[i];
    return action;
}

std::vector<int> select_action(const std::vector<double>& theta_main,
                               const std::vector<int>& ne_action,
                               const std::vector<double>& volumes,
                               const std::vector<std::uint8_t>& active,
                               double epsilon, const ScenarioConfig& config,
                               std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) return ne_action;
    return solve_feasible_argmax(theta_main, volumes, active, config);
}

double compute_target(const Transition& tr, const MlpNetwork& main_net,
                      const MlpNetwork& target_net, double discount,
                      const ScenarioConfig& config) {
    const auto theta_main = main_net.forward(tr.next_state);
    const auto best = solve_feasible_argmax(theta_main, tr.next_volumes, tr.next_active, config);
    const auto theta_target = target_net.forward(tr.next_state);
    return tr.reward + discount * q_value(theta_target, best);
}

double huber(double r) {
    const double a = std::abs(r);
    return a <= 1.0 ? 0.5 * r * r : a - 0.5;
}

double huber_grad(double r) { return std::clamp(r, -1.0, 1.0); }

double train_step(MlpNetwork& main_net, const MlpNetwork& target_net,
                  const std::vector<const Transition*>& batch, double learning_rate,
                  double discount, const ScenarioConfig& config, std::mt19937_64& rng) {
    if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
    const auto& layers = main_net.layers();

    std::vector<std::vector<double>> grad_w(layers.size()), grad_b(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        grad_w[i].assign(layers[i].weights.size(), 0.0);
        grad_b[i].assign(layers[i].bias.size(), 0.0);
    }

    double loss = 0.0;
    std::vector<std::vector<double>> acts;
    std::vector<double> mask;
    for (const Transition* tr : batch) {
        const auto theta = main_net.forward_training(tr->state, rng, acts, mask);
        const double pred = q_value(theta, tr->action);
        const double target = compute_target(*tr, main_net, target_net, discount, config);
        const double residual = pred - target;
        loss += huber(residual);

        // dQ/dTheta_v = b_v: the action vector is the last-layer weighting
        const double g = huber_grad(residual) / static_cast<double>(batch.size());
        std::vector<double> delta(theta.size());
        for (std::size_t v = 0; v < theta.size(); ++v) delta[v] = g * tr->action[v];

        for (std::size_t i = layers.size(); i-- > 0;) {
            const auto& in = acts[i];
            auto& gw = grad_w[i];
            auto& gb = grad_b[i];
            const auto& layer = layers[i];
            std::vector<double> prev_delta(layer.in, 0.0);
            for (int r = 0; r < layer.out; ++r) {
                const double d = delta[r];
                if (d == 0.0) continue;
                gb[r] += d;
                const double* w = layer.weights.data() + static_cast<std::size_t>(r) * layer.in;
                double* gwr = gw.data() + static_cast<std::size_t>(r) * layer.in;
                for (int c = 0; c < layer.in; ++c) {
                    gwr[c] += d * in[c];
                    prev_delta[c] += d * w[c];
                }
            }
            if (i > 0) {  // relu derivative on the hidden activation
                for (int c = 0; c < layers[i].in; ++c)
                    if (acts[i][c] <= 0.0) prev_delta[c] = 0.0;
            }
            delta.swap(prev_delta);
        }
    }
    loss /= static_cast<double>(batch.size());
    if (!std::isfinite(loss)) throw std::runtime_error("train_step: non-finite loss");
    for (const auto& g : grad_w)
        for (double x : g)
            if (!std::isfinite(x)) throw std::runtime_error("train_step: non-finite gradient");

    auto& mutable_layers = main_net.layers();
    for (std::size_t i = 0; i < mutable_layers.size(); ++i) {
        for (std::size_t j = 0; j < mutable_layers[i].weights.size(); ++j)
            mutable_layers[i].weights[j] -= learning_rate * grad_w[i][j];
        for (std::size_t j = 0; j < mutable_layers[i].bias.size(); ++j)
            mutable_layers[i].bias[j] -= learning_rate * grad_b[i][j];
    }
    return loss;
}

void sync_target(const MlpNetwork& main_net, MlpNetwork& target_net, long long slot,
                 int period) {
    if (period < 1) throw std::invalid_argument("sync_target: period must be >= 1");
    if (slot % period == 0) target_net = main_net;
}

} // namespace coin
