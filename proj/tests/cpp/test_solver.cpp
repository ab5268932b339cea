#include "coin/solver.hpp"
#include "coin/rng.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace coin;

namespace {

KnapsackInstance instance(std::vector<double> values, std::vector<double> volumes,
                          double fin_cache, double ein_cache, double step = 1.0) {
    KnapsackInstance inst;
    inst.values = std::move(values);
    inst.volumes = std::move(volumes);
    inst.fin_cache = fin_cache;
    inst.ein_cache = ein_cache;
    inst.step = step;
    return inst;
}

} // namespace

TEST_CASE("hand-solved instances") {
    SUBCASE("only the big item fits the fin cache") {
        const auto b = solve_optimal_action(instance({3.0, 1.0}, {2.0, 2.0}, 2.0, 0.0));
        CHECK(b == std::vector<int>{1, 0});
    }
    SUBCASE("zero caches force all-local") {
        const auto b = solve_optimal_action(instance({5.0, 7.0, 1.0}, {1.0, 1.0, 1.0}, 0.0, 0.0));
        CHECK(b == std::vector<int>{0, 0, 0});
    }
    SUBCASE("unconstrained positive values all take the double weight") {
        const auto b = solve_optimal_action(instance({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, 3.0, 3.0));
        CHECK(b == std::vector<int>{2, 2, 2});
    }
    SUBCASE("negative value is never taken") {
        CHECK(brute_force_action(instance({-1.0}, {1.0}, 5.0, 5.0)) == std::vector<int>{0});
        CHECK(solve_optimal_action(instance({-1.0}, {1.0}, 5.0, 5.0)) == std::vector<int>{0});
    }
    SUBCASE("single positive value prefers the heavier weight") {
        CHECK(brute_force_action(instance({5.0}, {1.0}, 5.0, 5.0)) == std::vector<int>{2});
    }
}

TEST_CASE("argument validation") {
    auto inst = instance({1.0}, {1.0}, 1.0, 1.0);
    inst.step = -1.0;
    CHECK_THROWS_AS(solve_optimal_action(inst), std::domain_error);

    KnapsackInstance big;
    big.values.assign(13, 1.0);
    big.volumes.assign(13, 1.0);
    CHECK_THROWS_AS(brute_force_action(big), std::length_error);
}

TEST_CASE("dp equals enumeration, objective and tie-break") {
    auto rng = make_rng(41);
    std::uniform_int_distribution<int> theta_grid(-8000, 8000);
    std::uniform_int_distribution<int> vol(1, 12);
    std::uniform_int_distribution<int> cache(0, 30);
    std::uniform_int_distribution<int> count(1, 8);

    for (int trial = 0; trial < 500; ++trial) {
        KnapsackInstance inst;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            // dyadic grid values make objective comparisons exact in floating
            // point, so tie-breaks are well-defined
            inst.values.push_back(theta_grid(rng) / 1024.0);
            inst.volumes.push_back(static_cast<double>(vol(rng)));
        }
        inst.fin_cache = static_cast<double>(cache(rng));
        inst.ein_cache = static_cast<double>(cache(rng));
        inst.step = 1.0;

        const auto dp = solve_optimal_action(inst);
        const auto bf = brute_force_action(inst);
        CHECK(action_feasible(inst, dp));
        CHECK(action_objective(inst, dp) == action_objective(inst, bf));
        CHECK(dp == bf);
    }
}

TEST_CASE("default step is the gcd of the volumes") {
    // volumes 4 and 6: gcd 2; caches 6/0 admit only one of the two on fin
    const auto b = solve_optimal_action(instance({2.0, 3.0}, {4.0, 6.0}, 6.0, 0.0, 0.0));
    CHECK(b == std::vector<int>{0, 1});
}

TEST_CASE("growing a cache never shrinks the objective") {
    auto rng = make_rng(43);
    std::uniform_int_distribution<int> theta_grid(-8000, 8000);
    std::uniform_int_distribution<int> vol(1, 10);
    for (int trial = 0; trial < 50; ++trial) {
        KnapsackInstance inst;
        for (int i = 0; i < 6; ++i) {
            inst.values.push_back(theta_grid(rng) / 1024.0);
            inst.volumes.push_back(static_cast<double>(vol(rng)));
        }
        inst.fin_cache = 5.0;
        inst.ein_cache = 5.0;
        inst.step = 1.0;
        double prev = action_objective(inst, solve_optimal_action(inst));
        for (int grow = 0; grow < 10; ++grow) {
            inst.ein_cache += 2.0;
            const double obj = action_objective(inst, solve_optimal_action(inst));
            CHECK(obj >= prev);
            prev = obj;
        }
    }
}

TEST_CASE("ceil rounding keeps dp answers feasible on fractional volumes") {
    auto rng = make_rng(47);
    std::uniform_real_distribution<double> vol(0.5, 10.0);
    std::uniform_int_distribution<int> theta_grid(-8000, 8000);
    for (int trial = 0; trial < 200; ++trial) {
        KnapsackInstance inst;
        for (int i = 0; i < 7; ++i) {
            inst.values.push_back(theta_grid(rng) / 1024.0);
            inst.volumes.push_back(vol(rng));
        }
        inst.fin_cache = 15.0;
        inst.ein_cache = 20.0;
        inst.step = 2.5;
        const auto dp = solve_optimal_action(inst);
        CHECK(action_feasible(inst, dp));
    }
}
