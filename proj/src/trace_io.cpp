#include "ddopt/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ddopt/errors.hpp"

namespace ddopt {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    return out;
}

}  // namespace

std::string trace_to_csv(const Trace& trace) {
    if (trace.records.empty()) throw InvalidInput("trace_to_csv: empty trace");
    const std::size_t n = trace.records.front().x.size();
    const std::size_t dw = trace.records.front().lambda.size();

    std::ostringstream out;
    out << "t";
    for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
    for (std::size_t i = 0; i < dw; ++i) out << ",lambda_" << i;
    out << ",dist_to_xs,constraint_residual,objective\n";
    for (const auto& r : trace.records) {
        out << r.t;
        for (std::size_t i = 0; i < n; ++i) out << ',' << fmt(r.x[i]);
        for (std::size_t i = 0; i < dw; ++i) out << ',' << fmt(r.lambda[i]);
        out << ',' << fmt(r.dist_to_reference) << ',' << fmt(r.constraint_residual) << ','
            << fmt(r.objective_value) << '\n';
    }
    return out.str();
}

Trace trace_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("trace csv: missing header");
    auto header = split(line, ',');
    std::size_t n = 0, dw = 0;
    for (const auto& h : header) {
        if (h.rfind("x_", 0) == 0) ++n;
        if (h.rfind("lambda_", 0) == 0) ++dw;
    }
    if (header.size() != 1 + n + dw + 3) throw InvalidInput("trace csv: unexpected header");

    Trace trace;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f.size() != header.size()) throw InvalidInput("trace csv: ragged row");
        TraceRecord r;
        std::size_t k = 0;
        r.t = static_cast<std::size_t>(std::stoull(f[k++]));
        r.x.resize(n);
        for (std::size_t i = 0; i < n; ++i) r.x[i] = std::stod(f[k++]);
        r.lambda.resize(dw);
        for (std::size_t i = 0; i < dw; ++i) r.lambda[i] = std::stod(f[k++]);
        r.dist_to_reference = std::stod(f[k++]);
        r.constraint_residual = std::stod(f[k++]);
        r.objective_value = std::stod(f[k++]);
        trace.records.push_back(std::move(r));
    }
    return trace;
}

std::string trace_to_json(const Trace& trace) {
    if (trace.records.empty()) throw InvalidInput("trace_to_json: empty trace");
    const std::size_t n = trace.records.front().x.size();
    const std::size_t dw = trace.records.front().lambda.size();

    nlohmann::ordered_json j;
    j["status"] = to_string(trace.status);
    auto col = [&](auto getter) {
        std::vector<double> v;
        v.reserve(trace.records.size());
        for (const auto& r : trace.records) v.push_back(getter(r));
        return v;
    };
    {
        std::vector<std::size_t> t;
        for (const auto& r : trace.records) t.push_back(r.t);
        j["t"] = t;
    }
    for (std::size_t i = 0; i < n; ++i)
        j["x_" + std::to_string(i)] = col([i](const TraceRecord& r) { return r.x[i]; });
    for (std::size_t i = 0; i < dw; ++i)
        j["lambda_" + std::to_string(i)] = col([i](const TraceRecord& r) { return r.lambda[i]; });
    j["dist_to_xs"] = col([](const TraceRecord& r) { return r.dist_to_reference; });
    j["constraint_residual"] = col([](const TraceRecord& r) { return r.constraint_residual; });
    j["objective"] = col([](const TraceRecord& r) { return r.objective_value; });
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ddopt
