#include "edgefaas/bench/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace edgefaas::bench {

using nlohmann::json;

ReportFormat format_from_name(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown report format: " + name);
}

namespace {

// Shortest representation that round-trips the double exactly.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = std::strtod(buf, nullptr);
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == back) return shorter;
    }
    return buf;
}

}  // namespace

std::string reports_to_csv(const std::vector<BenchReport>& reports) {
    std::ostringstream out;
    out << "test,scenario,param,n,mean,min,max,std,p25,p50,p75\n";
    for (const auto& r : reports) {
        const Summary& s = r.summary;
        out << r.test << ',' << r.scenario << ',' << r.param << ',' << r.n() << ',' << fmt(s.mean)
            << ',' << fmt(s.min) << ',' << fmt(s.max) << ',' << fmt(s.std) << ',' << fmt(s.p25)
            << ',' << fmt(s.p50) << ',' << fmt(s.p75) << '\n';
    }
    return out.str();
}

std::string reports_to_json(const std::vector<BenchReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        const Summary& s = r.summary;
        arr.push_back({{"test", r.test},
                       {"scenario", r.scenario},
                       {"param", r.param},
                       {"n", r.n()},
                       {"mean", s.mean},
                       {"min", s.min},
                       {"max", s.max},
                       {"std", s.std},
                       {"p25", s.p25},
                       {"p50", s.p50},
                       {"p75", s.p75}});
    }
    return arr.dump(2) + "\n";
}

namespace {

BenchReport from_fields(const std::vector<std::string>& f) {
    if (f.size() != 11) throw IoError("expected 11 CSV fields, got " + std::to_string(f.size()));
    BenchReport r;
    r.test = f[0];
    r.scenario = f[1];
    r.param = f[2];
    std::size_t n = std::stoull(f[3]);
    r.samples.assign(n, 0.0);  // raw samples are not serialized; only the count survives
    r.summary.mean = std::stod(f[4]);
    r.summary.min = std::stod(f[5]);
    r.summary.max = std::stod(f[6]);
    r.summary.std = std::stod(f[7]);
    r.summary.p25 = std::stod(f[8]);
    r.summary.p50 = std::stod(f[9]);
    r.summary.p75 = std::stod(f[10]);
    return r;
}

}  // namespace

std::vector<BenchReport> reports_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV");
    if (line != "test,scenario,param,n,mean,min,max,std,p25,p50,p75")
        throw IoError("unexpected CSV header: " + line);
    std::vector<BenchReport> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        out.push_back(from_fields(fields));
    }
    return out;
}

std::vector<BenchReport> reports_from_json(const std::string& text) {
    json arr;
    try {
        arr = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("report JSON: ") + e.what());
    }
    std::vector<BenchReport> out;
    for (const auto& j : arr) {
        BenchReport r;
        r.test = j.at("test").get<std::string>();
        r.scenario = j.at("scenario").get<std::string>();
        r.param = j.at("param").get<std::string>();
        r.samples.assign(j.at("n").get<std::size_t>(), 0.0);
        r.summary.mean = j.at("mean").get<double>();
        r.summary.min = j.at("min").get<double>();
        r.summary.max = j.at("max").get<double>();
        r.summary.std = j.at("std").get<double>();
        r.summary.p25 = j.at("p25").get<double>();
        r.summary.p50 = j.at("p50").get<double>();
        r.summary.p75 = j.at("p75").get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

void emit_report(const std::vector<BenchReport>& reports, ReportFormat format,
                 const std::string& path) {
    if (reports.empty()) throw IoError("no reports to emit");
    std::string text =
        format == ReportFormat::Csv ? reports_to_csv(reports) : reports_to_json(reports);
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw IoError("cannot open for write: " + path);
    f << text;
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace edgefaas::bench
