#include "coin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace coin {

namespace {

double default_step(const KnapsackInstance& inst) {
    // gcd of the volumes rounded to integers, floored at one unit
    long long g = 0;
    for (double v : inst.volumes) {
        const long long r = std::max<long long>(1, std::llround(v));
        g = std::gcd(g, r);
    }
    return g == 0 ? 1.0 : static_cast<double>(g);
}

int volume_steps(double volume, double step) {
    // round up so that DP feasibility implies real feasibility
    return static_cast<int>(std::ceil(volume / step - 1e-12));
}

} // namespace

double action_objective(const KnapsackInstance& inst, const std::vector<int>& action) {
    double total = 0.0;
    for (std::size_t i = 0; i < action.size(); ++i) total += action[i] * inst.values[i];
    return total;
}

bool action_feasible(const KnapsackInstance& inst, const std::vector<int>& action) {
    double fin = 0.0, ein = 0.0;
    for (std::size_t i = 0; i < action.size(); ++i) {
        if (action[i] == 1) fin += inst.volumes[i];
        if (action[i] == 2) ein += inst.volumes[i];
    }
    return fin <= inst.fin_cache && ein <= inst.ein_cache;
}

std::vector<int> solve_optimal_action(const KnapsackInstance& inst) {
    if (inst.step < 0.0) throw std::domain_error("solve_optimal_action: step must be > 0");
    const int n = static_cast<int>(inst.values.size());
    if (n == 0) return {};
    const double step = inst.step > 0.0 ? inst.step : default_step(inst);

    const int cf = static_cast<int>(std::floor(inst.fin_cache / step + 1e-12));
    const int ce = static_cast<int>(std::floor(inst.ein_cache / step + 1e-12));
    std::vector<int> vsteps(n);
    for (int i = 0; i < n; ++i) vsteps[i] = volume_steps(inst.volumes[i], step);

    // suffix DP: best[v][f][e] = max objective over units v..n-1 with f/e
    // capacity steps remaining
    const int width = (cf + 1) * (ce + 1);
    std::vector<double> best(static_cast<std::size_t>(n + 1) * width, 0.0);
    auto cell = [&](int v, int f, int e) -> double& {
        return best[static_cast<std::size_t>(v) * width + f * (ce + 1) + e];
    };

    for (int v = n - 1; v >= 0; --v) {
        for (int f = 0; f <= cf; ++f) {
            for (int e = 0; e <= ce; ++e) {
                double b = cell(v + 1, f, e);  // b_v = 0
                if (vsteps[v] <= f)
                    b = std::max(b, inst.values[v] + cell(v + 1, f - vsteps[v], e));
                if (vsteps[v] <= e)
                    b = std::max(b, 2.0 * inst.values[v] + cell(v + 1, f, e - vsteps[v]));
                cell(v, f, e) = b;
            }
        }
    }

    // backtrack, trying b_v in {0,1,2} order for the lexicographically
    // smallest optimal vector
    std::vector<int> action(n, 0);
    int f = cf, e = ce;
    for (int v = 0; v < n; ++v) {
        const double want = cell(v, f, e);
        if (cell(v + 1, f, e) == want) {
            action[v] = 0;
        } else if (vsteps[v] <= f && inst.values[v] + cell(v + 1, f - vsteps[v], e) == want) {
            action[v] = 1;
            f -= vsteps[v];
        } else {
            action[v] = 2;
            e -= vsteps[v];
        }
    }
    return action;
}

std::vector<int> brute_force_action(const KnapsackInstance& inst) {
    const int n = static_cast<int>(inst.values.size());
    if (n > 12) throw std::length_error("brute_force_action: 3^" + std::to_string(n) +
                                        " actions exceed the enumeration limit (F <= 12)");
    std::vector<int> action(n, 0), best_action(n, 0);
    double best = -std::numeric_limits<double>::infinity();
    // lexicographic enumeration: first strict improvement wins ties
    while (true) {
        if (action_feasible(inst, action)) {
            const double obj = action_objective(inst, action);
            if (obj > best) {
                best = obj;
                best_action = action;
            }
        }
        int i = n - 1;
        while (i >= 0 && action[i] == 2) action[i--] = 0;
        if (i < 0) break;
        ++action[i];
    }
    return best_action;
}

} // namespace coin
