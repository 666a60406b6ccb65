#pragma once

#include <cstdint>
#include <cstddef>

#include "ddopt/numerics.hpp"

namespace ddopt {

enum class Family { AffineMeanUniform, AffineMeanEmpirical, Constant };

/// Decision-dependent distribution map. The induced distribution of a
/// decision x is, per coordinate,
///   uniform family:   U[lower_i + (lower_shift x)_i, upper_i + (upper_shift x)_i]
///                     translated by (mean_shift x)_i,
///   empirical family: a row of base_samples translated by mean_shift x,
///   constant family:  a point mass at base_mean.
/// declared_sensitivity is the Lipschitz constant of the map in the
/// Wasserstein-1 metric that the constructor vouches for.
struct DistributionMap {
    Family family = Family::Constant;
    std::size_t dimension = 0;
    std::size_t decision_dim = 0;

    Vector lower, upper;             // uniform base endpoints
    Matrix lower_shift, upper_shift; // uniform endpoint coefficients (dimension x decision_dim)
    Matrix base_samples;             // empirical table (rows x dimension)
    Vector base_mean;                // constant family

    Matrix mean_shift;               // dimension x decision_dim
    double declared_sensitivity = 0.0;

    Vector box_lo, box_hi;           // decision box for endpoint validity
};

DistributionMap constant_map(Vector mean, std::size_t decision_dim);
DistributionMap uniform_map(Vector lower, Vector upper, Matrix lower_shift, Matrix upper_shift,
                            Matrix mean_shift, double declared_sensitivity,
                            Vector box_lo, Vector box_hi);
DistributionMap empirical_map(Matrix base_samples, Matrix mean_shift, double declared_sensitivity,
                              Vector box_lo, Vector box_hi);

struct SampleBatch {
    std::size_t dimension = 0;
    std::size_t rows = 0;
    Matrix values;        // rows x dimension
    std::uint64_t seed = 0;
};

/// Exact expectation of the induced distribution at decision x.
Vector mean(const DistributionMap& map, const Vector& x);

/// n i.i.d. draws from the induced distribution, reproducible per seed.
SampleBatch sample(const DistributionMap& map, const Vector& x, std::size_t n, std::uint64_t seed);

/// Exact empirical W1 between two one-dimensional batches of equal size:
/// mean absolute difference of order statistics.
double wasserstein1_sorted(const SampleBatch& a, const SampleBatch& b);

/// Closed-form W1 between U[a,b] and U[a2,b2] via quantile integration.
double wasserstein1_uniform(double a, double b, double a2, double b2);

/// W1(D(x), D(x2)) / ||x - x2||, an empirical lower estimate of the
/// sensitivity constant. Analytic for uniform and constant families,
/// order-statistics based for one-dimensional empirical maps.
double estimate_sensitivity(const DistributionMap& map, const Vector& x, const Vector& x2,
                            std::size_t n, std::uint64_t seed);

}  // namespace ddopt
