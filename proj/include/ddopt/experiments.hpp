#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddopt/problem.hpp"

namespace ddopt {

/// Two-good market: prices x, demand z with means shifted by the deploy, and
/// a revenue floor constraint whose threshold also reacts to the deploy.
struct MarketParams {
    double a1 = 0.8, a2 = 0.2;     // demand slopes (loss curvature)
    double a3 = 0.6, a4 = 1.0;     // constraint coefficients
    double zeta_L1 = 1.0, zeta_R1 = 5.5;
    double zeta_L2 = 0.5, zeta_R2 = 2.2;
    double e1 = 1.2;
    double v1_lower = 1.7, v2_lower = 2.5;
    double eps = 0.0;              // demand endpoint shift per unit of x1
    double eps_g = 0.0;            // cost endpoint shift per unit of x1
};

PerformativeProblem market_problem(const MarketParams& params);

/// Dynamic parking pricing: scalar price deviation x, occupancy target and a
/// strategic feature whose mean moves against the price.
struct PricingParams {
    double v = 0.03;        // regularizer
    double t = 0.005;       // strategic-feature trade-off weight
    double c1 = 0.5, c2 = 5.0;
    double eta = 0.18;      // reference dual step size
    double x0 = -1.0;       // initial price deviation
    double x_bar = 3.0;     // nominal price
    double A = 0.157;       // occupancy sensitivity to price
    double eps = 0.0;       // strategic-response sensitivity
};

PerformativeProblem pricing_problem(const PricingParams& params, double base_z2_mean,
                                    double base_zeta_mean, double zeta_variance = 0.0);

/// Scalar toy problem: loss x^2 under the self-referential constraint
/// x >= theta * x_t, whose iterates are exactly theta^t * x0.
PerformativeProblem one_dim_example(double theta);

struct ParkingRecord {
    double price = 0.0;          // currency per hour
    double total_time = 0.0;     // hours
    double occupied_time = 0.0;  // hours
    double occupancy = 0.0;      // occupied_time / total_time
};

struct ParkingData {
    std::vector<ParkingRecord> records;
    std::size_t rejected = 0;
    std::vector<std::string> rejection_reasons;  // one entry per rejected row
};

/// CSV with header columns price,total_time,occupied_time (extra columns
/// ignored). Rows violating the record invariants are rejected and counted.
ParkingData load_parking_csv(const std::string& path, char delimiter = ',');

void save_parking_csv(const std::string& path, const std::vector<ParkingRecord>& records,
                      char delimiter = ',');

/// Seed-deterministic stand-in for the parking dataset: base occupancy from a
/// normal truncated to [0,1], price steps around the nominal, occupancy
/// depressed by A per unit of price above nominal.
std::vector<ParkingRecord> generate_synthetic_parking(std::size_t n, std::uint64_t seed, double A,
                                                      double nominal_price);

/// Least-squares slope of occupancy against -(price - nominal).
double estimate_A(const std::vector<ParkingRecord>& records, double nominal_price);

/// Occupancy-sensitivity constant and strategic mean estimated from records,
/// packaged into a pricing problem.
PerformativeProblem pricing_problem_from_records(const std::vector<ParkingRecord>& records,
                                                 PricingParams params, double nominal_price,
                                                 double base_z2_mean);

/// Density-quotient sensitivity bounds for the market maps, kept for
/// reference; the constructors declare the exact mean-shift values instead,
/// which are what the W1 estimates converge to.
double market_density_ratio_eps(const MarketParams& params);
double market_density_ratio_eps_g(const MarketParams& params);

}  // namespace ddopt
