#include "ddopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ddopt/errors.hpp"
#include "ddopt/rng.hpp"

namespace ddopt {

PerformativeProblem market_problem(const MarketParams& pr) {
    if (!(pr.a1 > 0.0) || !(pr.a2 > 0.0))
        throw InvalidInput("market: demand slopes must be positive");
    if (!(pr.zeta_L1 < pr.zeta_R1) || !(pr.zeta_L2 < pr.zeta_R2))
        throw InvalidInput("market: demand supports must be nondegenerate");
    if (pr.eps < 0.0 || pr.eps_g < 0.0)
        throw InvalidInput("market: sensitivities must be nonnegative");

    PerformativeProblem p;
    p.decision_dim = 2;
    const double a1 = pr.a1, a2 = pr.a2;
    p.loss = [a1, a2](const Vector& x, const Vector& z) {
        return -x[0] * (z[0] - a1 * x[0]) - x[1] * (z[1] - a2 * x[1]);
    };
    p.loss_grad_x = [a1, a2](const Vector& x, const Vector& z) {
        return Vector{-z[0] + 2.0 * a1 * x[0], -z[1] + 2.0 * a2 * x[1]};
    };

    // demand: z1 ~ U[zeta_L1, zeta_R1 + eps*x1], z2 ~ U[zeta_L2, zeta_R2];
    // shifting only one endpoint moves the mean by eps/2 per unit of x1,
    // which is also the exact W1 sensitivity of the map
    Matrix upper_shift(2, 2);
    upper_shift(0, 0) = pr.eps;
    p.objective_map = uniform_map({pr.zeta_L1, pr.zeta_L2}, {pr.zeta_R1, pr.zeta_R2}, Matrix(2, 2),
                                  upper_shift, Matrix(2, 2), pr.eps / 2.0, {}, {});

    // constraint threshold: w = -(v1 + E[v2] + e1) with
    // v1 ~ U[v1_lower, 1.2*v1_lower + eps_g*x1]; E[v2] = 1.1*v2_lower
    const double shift0 = 1.1 * pr.v2_lower + pr.e1;
    Matrix w_lower_shift(1, 2);
    w_lower_shift(0, 0) = -pr.eps_g;
    p.constraint_map =
        uniform_map({-1.2 * pr.v1_lower - shift0}, {-pr.v1_lower - shift0}, w_lower_shift,
                    Matrix(1, 2), Matrix(1, 2), pr.eps_g / 2.0, {}, {});

    p.G = Matrix(1, 2);
    p.G(0, 0) = -pr.a3;
    p.G(0, 1) = -pr.a4;

    p.box_lo = {0.0, 0.0};
    p.box_hi = {10.0, 10.0};
    p.constants.gamma = 2.0 * std::min(a1, a2);
    p.constants.beta_x = 2.0 * std::max(a1, a2);
    p.constants.beta_z = 1.0;
    p.constants.L_z = norm(p.box_hi);
    p.constants.eps = p.objective_map.declared_sensitivity;
    p.constants.eps_g = p.constraint_map.declared_sensitivity;
    p.quadratic_in_x = true;
    p.validate();
    return p;
}

PerformativeProblem pricing_problem(const PricingParams& pr, double base_z2_mean,
                                    double base_zeta_mean, double zeta_variance) {
    if (!(pr.v > 0.0) || !(pr.t > 0.0)) throw InvalidInput("pricing: need v > 0 and t > 0");
    if (!(pr.v + 2.0 * pr.A * pr.A > 0.0)) throw InvalidInput("pricing: curvature must be positive");
    if (pr.eps < 0.0) throw InvalidInput("pricing: eps must be nonnegative");
    if (zeta_variance < 0.0) throw InvalidInput("pricing: variance must be nonnegative");

    PerformativeProblem p;
    p.decision_dim = 1;
    const double v = pr.v, t = pr.t, A = pr.A, x_bar = pr.x_bar;
    // z = (zeta, z2): squared occupancy-tracking error, strategic-feature
    // reward, and a quadratic regularizer
    p.loss = [v, t, A, x_bar](const Vector& x, const Vector& z) {
        double e = z[0] - A * x[0] - 0.7;
        return e * e - t * z[1] * (x[0] + x_bar) + 0.5 * v * x[0] * x[0];
    };
    p.loss_grad_x = [v, t, A, x_bar](const Vector& x, const Vector& z) {
        double e = z[0] - A * x[0] - 0.7;
        return Vector{-2.0 * A * e - t * z[1] + v * x[0]};
    };

    // zeta static, modeled as a symmetric two-point table with the given
    // mean and variance; z2 a point mass whose mean falls by eps per unit
    // price
    double w = std::sqrt(zeta_variance);
    Matrix table(2, 2);
    table(0, 0) = base_zeta_mean - w;
    table(1, 0) = base_zeta_mean + w;
    table(0, 1) = base_z2_mean;
    table(1, 1) = base_z2_mean;
    Matrix mean_shift(2, 1);
    mean_shift(1, 0) = -pr.eps;
    p.objective_map = empirical_map(table, mean_shift, pr.eps, {}, {});
    if (zeta_variance > 0.0)
        p.variance_offset = [zeta_variance](const Vector&) { return zeta_variance; };

    // constraint -c1 x <= c2 - E[z2 | x_t]: w = c2 - z2
    Matrix base_w(1, 1);
    base_w(0, 0) = pr.c2 - base_z2_mean;
    Matrix w_shift(1, 1);
    w_shift(0, 0) = pr.eps;
    p.constraint_map = empirical_map(base_w, w_shift, pr.eps, {}, {});

    p.G = Matrix(1, 1);
    p.G(0, 0) = -pr.c1;

    p.box_lo = {-3.0};
    p.box_hi = {10.0};
    p.constants.gamma = v + 2.0 * A * A;
    p.constants.beta_x = v + 2.0 * A * A;
    p.constants.beta_z = std::sqrt(4.0 * A * A + t * t);
    double zeta_hi = std::max(base_zeta_mean + w, 1.0);
    double dev = std::max(std::abs(zeta_hi - A * p.box_lo[0] - 0.7),
                          std::abs(0.0 - A * p.box_hi[0] - 0.7));
    p.constants.L_z = std::hypot(2.0 * dev, t * (p.box_hi[0] + x_bar));
    p.constants.eps = pr.eps;
    p.constants.eps_g = pr.eps;
    p.quadratic_in_x = true;
    p.validate();
    return p;
}

PerformativeProblem one_dim_example(double theta) {
    if (!(theta > 0.0)) throw InvalidInput("one_dim_example: theta must be positive");
    PerformativeProblem p;
    p.decision_dim = 1;
    p.loss = [](const Vector& x, const Vector&) { return x[0] * x[0]; };
    p.loss_grad_x = [](const Vector& x, const Vector&) { return Vector{2.0 * x[0]}; };
    p.objective_map = constant_map({0.0}, 1);

    // constraint x >= theta * x_t as -x <= -theta * x_t
    Matrix base(1, 1);
    Matrix shift(1, 1);
    shift(0, 0) = -theta;
    p.constraint_map = empirical_map(base, shift, theta, {}, {});

    p.G = Matrix(1, 1);
    p.G(0, 0) = -1.0;
    p.box_lo = {-1e9};
    p.box_hi = {1e9};
    p.constants.gamma = 2.0;
    p.constants.beta_x = 2.0;
    p.constants.beta_z = 0.0;
    p.constants.L_z = 0.0;
    p.constants.eps = 0.0;
    p.constants.eps_g = theta;
    p.quadratic_in_x = true;
    p.validate();
    return p;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ParkingData load_parking_csv(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("parking csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("parking csv: missing header row");

    auto header = split_line(line, delimiter);
    long ip = -1, itt = -1, iot = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string h = trim(header[i]);
        if (h == "price") ip = static_cast<long>(i);
        else if (h == "total_time") itt = static_cast<long>(i);
        else if (h == "occupied_time") iot = static_cast<long>(i);
    }
    if (ip < 0 || itt < 0 || iot < 0)
        throw InvalidInput("parking csv: header must name price, total_time, occupied_time");

    ParkingData data;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split_line(line, delimiter);
        auto reject = [&](const std::string& why) {
            ++data.rejected;
            data.rejection_reasons.push_back("row " + std::to_string(row) + ": " + why);
        };
        std::size_t needed = static_cast<std::size_t>(std::max({ip, itt, iot})) + 1;
        if (fields.size() < needed) {
            reject("too few columns");
            continue;
        }
        ParkingRecord r;
        try {
            r.price = std::stod(fields[static_cast<std::size_t>(ip)]);
            r.total_time = std::stod(fields[static_cast<std::size_t>(itt)]);
            r.occupied_time = std::stod(fields[static_cast<std::size_t>(iot)]);
        } catch (const std::exception&) {
            reject("unparseable number");
            continue;
        }
        if (!(r.total_time > 0.0)) {
            reject("total_time must be positive");
            continue;
        }
        if (r.occupied_time < 0.0 || r.occupied_time > r.total_time) {
            reject("occupied_time outside [0, total_time]");
            continue;
        }
        r.occupancy = r.occupied_time / r.total_time;
        data.records.push_back(r);
    }
    return data;
}

void save_parking_csv(const std::string& path, const std::vector<ParkingRecord>& records,
                      char delimiter) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("parking csv: cannot write " + path);
    char buf[96];
    out << "price" << delimiter << "total_time" << delimiter << "occupied_time\n";
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.17g%c%.17g%c%.17g\n", r.price, delimiter, r.total_time,
                      delimiter, r.occupied_time);
        out << buf;
    }
}

std::vector<ParkingRecord> generate_synthetic_parking(std::size_t n, std::uint64_t seed, double A,
                                                      double nominal_price) {
    if (n < 1) throw InvalidInput("synthetic parking: n must be at least 1");
    auto gen = make_rng(seed, 0);
    std::normal_distribution<double> base_occ(0.7, 0.08);
    std::uniform_int_distribution<int> step(-2, 2);
    std::uniform_real_distribution<double> hours(2.0, 12.0);

    std::vector<ParkingRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double zeta;
        do {
            zeta = base_occ(gen);
        } while (zeta < 0.0 || zeta > 1.0);
        ParkingRecord r;
        r.price = nominal_price + 0.25 * step(gen);
        r.total_time = hours(gen);
        r.occupancy = std::clamp(zeta - A * (r.price - nominal_price), 0.0, 1.0);
        r.occupied_time = r.occupancy * r.total_time;
        out.push_back(r);
    }
    return out;
}

double estimate_A(const std::vector<ParkingRecord>& records, double nominal_price) {
    if (records.size() < 2) throw InsufficientData("estimate_A: need at least two records");
    double sx = 0.0, sy = 0.0;
    for (const auto& r : records) {
        sx += -(r.price - nominal_price);
        sy += r.occupancy;
    }
    double n = static_cast<double>(records.size());
    double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& r : records) {
        double dx = -(r.price - nominal_price) - mx;
        sxx += dx * dx;
        sxy += dx * (r.occupancy - my);
    }
    if (sxx <= 0.0) throw InsufficientData("estimate_A: all prices identical");
    return sxy / sxx;
}

PerformativeProblem pricing_problem_from_records(const std::vector<ParkingRecord>& records,
                                                 PricingParams params, double nominal_price,
                                                 double base_z2_mean) {
    params.A = estimate_A(records, nominal_price);
    double s = 0.0, s2 = 0.0;
    for (const auto& r : records) {
        s += r.occupancy;
        s2 += r.occupancy * r.occupancy;
    }
    double n = static_cast<double>(records.size());
    double mean_occ = s / n;
    double var_occ = std::max(0.0, s2 / n - mean_occ * mean_occ);
    return pricing_problem(params, base_z2_mean, mean_occ, var_occ);
}

double market_density_ratio_eps(const MarketParams& pr) {
    return pr.eps * (1.0 / (pr.zeta_R1 - pr.zeta_L1) + 1.0 / pr.zeta_R1);
}

double market_density_ratio_eps_g(const MarketParams& pr) {
    return pr.eps_g * (1.0 / (0.2 * pr.v1_lower) + 1.0 / (1.2 * pr.v1_lower));
}

}  // namespace ddopt
