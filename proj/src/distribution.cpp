#include "ddopt/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ddopt/errors.hpp"
#include "ddopt/rng.hpp"

namespace ddopt {

namespace {

bool endpoints_move(const DistributionMap& map) {
    if (map.family != Family::AffineMeanUniform) return false;
    for (double c : map.lower_shift.data)
        if (c != 0.0) return true;
    for (double c : map.upper_shift.data)
        if (c != 0.0) return true;
    return false;
}

void check_decision(const DistributionMap& map, const Vector& x) {
    if (x.size() != map.decision_dim)
        throw InvalidInput("distribution: decision dimension mismatch");
    if (!all_finite(x)) throw InvalidInput("distribution: non-finite decision");
    if (endpoints_move(map) && !map.box_lo.empty()) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < map.box_lo[i] || x[i] > map.box_hi[i])
                throw std::domain_error("distribution: decision outside declared box");
    }
}

// endpoints of coordinate i at decision x, mean shift folded in
std::pair<double, double> uniform_endpoints(const DistributionMap& map, const Vector& x,
                                            std::size_t i) {
    double shift = 0.0;
    for (std::size_t j = 0; j < map.decision_dim; ++j) shift += map.mean_shift(i, j) * x[j];
    double lo = map.lower[i] + shift;
    double hi = map.upper[i] + shift;
    for (std::size_t j = 0; j < map.decision_dim; ++j) {
        lo += map.lower_shift(i, j) * x[j];
        hi += map.upper_shift(i, j) * x[j];
    }
    if (lo >= hi)
        throw std::domain_error("distribution: uniform endpoints inverted at this decision");
    return {lo, hi};
}

Vector empirical_mean(const Matrix& table) {
    Vector m(table.cols, 0.0);
    for (std::size_t r = 0; r < table.rows; ++r)
        for (std::size_t c = 0; c < table.cols; ++c) m[c] += table(r, c);
    for (double& v : m) v /= static_cast<double>(table.rows);
    return m;
}

}  // namespace

DistributionMap constant_map(Vector mean, std::size_t decision_dim) {
    if (!all_finite(mean)) throw InvalidInput("constant_map: non-finite mean");
    DistributionMap m;
    m.family = Family::Constant;
    m.dimension = mean.size();
    m.decision_dim = decision_dim;
    m.base_mean = std::move(mean);
    m.mean_shift = Matrix(m.dimension, decision_dim);
    m.declared_sensitivity = 0.0;
    return m;
}

DistributionMap uniform_map(Vector lower, Vector upper, Matrix lower_shift, Matrix upper_shift,
                            Matrix mean_shift, double declared_sensitivity,
                            Vector box_lo, Vector box_hi) {
    if (lower.size() != upper.size()) throw InvalidInput("uniform_map: endpoint size mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i])) throw InvalidInput("uniform_map: base endpoints inverted");
    if (declared_sensitivity < 0.0) throw InvalidInput("uniform_map: negative sensitivity");
    DistributionMap m;
    m.family = Family::AffineMeanUniform;
    m.dimension = lower.size();
    m.decision_dim = mean_shift.cols;
    m.lower = std::move(lower);
    m.upper = std::move(upper);
    m.lower_shift = std::move(lower_shift);
    m.upper_shift = std::move(upper_shift);
    m.mean_shift = std::move(mean_shift);
    m.declared_sensitivity = declared_sensitivity;
    m.box_lo = std::move(box_lo);
    m.box_hi = std::move(box_hi);
    return m;
}

DistributionMap empirical_map(Matrix base_samples, Matrix mean_shift, double declared_sensitivity,
                              Vector box_lo, Vector box_hi) {
    if (base_samples.rows == 0) throw InvalidInput("empirical_map: empty sample table");
    if (!all_finite(base_samples)) throw InvalidInput("empirical_map: non-finite samples");
    if (declared_sensitivity < 0.0) throw InvalidInput("empirical_map: negative sensitivity");
    DistributionMap m;
    m.family = Family::AffineMeanEmpirical;
    m.dimension = base_samples.cols;
    m.decision_dim = mean_shift.cols;
    m.base_samples = std::move(base_samples);
    m.base_mean = empirical_mean(m.base_samples);
    m.mean_shift = std::move(mean_shift);
    m.declared_sensitivity = declared_sensitivity;
    m.box_lo = std::move(box_lo);
    m.box_hi = std::move(box_hi);
    return m;
}

Vector mean(const DistributionMap& map, const Vector& x) {
    check_decision(map, x);
    Vector m(map.dimension, 0.0);
    switch (map.family) {
        case Family::Constant:
            m = map.base_mean;
            break;
        case Family::AffineMeanUniform:
            for (std::size_t i = 0; i < map.dimension; ++i) {
                auto [lo, hi] = uniform_endpoints(map, x, i);
                m[i] = 0.5 * (lo + hi);
            }
            break;
        case Family::AffineMeanEmpirical:
            m = map.base_mean;
            for (std::size_t i = 0; i < map.dimension; ++i)
                for (std::size_t j = 0; j < map.decision_dim; ++j)
                    m[i] += map.mean_shift(i, j) * x[j];
            break;
    }
    return m;
}

SampleBatch sample(const DistributionMap& map, const Vector& x, std::size_t n,
                   std::uint64_t seed) {
    if (n < 1) throw InvalidInput("sample: need n >= 1");
    check_decision(map, x);
    SampleBatch batch;
    batch.dimension = map.dimension;
    batch.rows = n;
    batch.seed = seed;
    batch.values = Matrix(n, map.dimension);

    auto rng = make_rng(seed);
    switch (map.family) {
        case Family::Constant:
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < map.dimension; ++c)
                    batch.values(r, c) = map.base_mean[c];
            break;
        case Family::AffineMeanUniform: {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < map.dimension; ++c) {
                    auto [lo, hi] = uniform_endpoints(map, x, c);
                    batch.values(r, c) = lo + (hi - lo) * unit(rng);
                }
            break;
        }
        case Family::AffineMeanEmpirical: {
            Vector shift(map.dimension, 0.0);
            for (std::size_t i = 0; i < map.dimension; ++i)
                for (std::size_t j = 0; j < map.decision_dim; ++j)
                    shift[i] += map.mean_shift(i, j) * x[j];
            std::uniform_int_distribution<std::size_t> pick(0, map.base_samples.rows - 1);
            for (std::size_t r = 0; r < n; ++r) {
                std::size_t row = pick(rng);
                for (std::size_t c = 0; c < map.dimension; ++c)
                    batch.values(r, c) = map.base_samples(row, c) + shift[c];
            }
            break;
        }
    }
    return batch;
}

double wasserstein1_sorted(const SampleBatch& a, const SampleBatch& b) {
    if (a.dimension != 1 || b.dimension != 1)
        throw InvalidInput("wasserstein1_sorted: batches must be one-dimensional");
    if (a.rows != b.rows)
        throw InvalidInput("wasserstein1_sorted: batches must have equal row counts");
    Vector sa = a.values.data;
    Vector sb = b.values.data;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double s = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) s += std::abs(sa[i] - sb[i]);
    return s / static_cast<double>(sa.size());
}

double wasserstein1_uniform(double a, double b, double a2, double b2) {
    if (!(a < b) || !(a2 < b2))
        throw InvalidInput("wasserstein1_uniform: degenerate interval");
    // quantile difference d(q) = u + q s
    double u = a - a2;
    double s = (b - a) - (b2 - a2);
    if (s == 0.0) return std::abs(u);
    double qstar = -u / s;
    if (qstar <= 0.0 || qstar >= 1.0) return std::abs(u + 0.5 * s);
    double first = u * qstar + 0.5 * s * qstar * qstar;
    double second = u * (1.0 - qstar) + 0.5 * s * (1.0 - qstar * qstar);
    return std::abs(first) + std::abs(second);
}

double estimate_sensitivity(const DistributionMap& map, const Vector& x, const Vector& x2,
                            std::size_t n, std::uint64_t seed) {
    Vector diff = sub(x, x2);
    double dist = norm(diff);
    if (dist == 0.0) throw InvalidInput("estimate_sensitivity: identical decisions");
    check_decision(map, x);
    check_decision(map, x2);

    double w1 = 0.0;
    switch (map.family) {
        case Family::Constant:
            w1 = 0.0;
            break;
        case Family::AffineMeanUniform: {
            // per-coordinate analytic W1, combined in Euclidean norm; exact
            // whenever at most one coordinate moves with the decision
            double sq = 0.0;
            for (std::size_t i = 0; i < map.dimension; ++i) {
                auto [lo1, hi1] = uniform_endpoints(map, x, i);
                auto [lo2, hi2] = uniform_endpoints(map, x2, i);
                double wi = wasserstein1_uniform(lo1, hi1, lo2, hi2);
                sq += wi * wi;
            }
            w1 = std::sqrt(sq);
            break;
        }
        case Family::AffineMeanEmpirical: {
            // translation family: W1 equals the norm of the mean shift
            Vector shift = matvec(map.mean_shift, diff);
            if (map.dimension == 1 && map.base_samples.rows > 1) {
                w1 = wasserstein1_sorted(sample(map, x, n, seed), sample(map, x2, n, seed));
            } else {
                w1 = norm(shift);
            }
            break;
        }
    }
    return w1 / dist;
}

}  // namespace ddopt
