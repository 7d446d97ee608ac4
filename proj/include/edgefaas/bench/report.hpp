#pragma once

#include "edgefaas/bench/stats.hpp"

namespace edgefaas::bench {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ReportFormat { Csv, Json };
ReportFormat format_from_name(const std::string& name);

/// CSV columns: test,scenario,param,n,mean,min,max,std,p25,p50,p75.
std::string reports_to_csv(const std::vector<BenchReport>& reports);
std::string reports_to_json(const std::vector<BenchReport>& reports);

/// Inverse of the emitters, minus raw samples.
std::vector<BenchReport> reports_from_csv(const std::string& text);
std::vector<BenchReport> reports_from_json(const std::string& text);

void emit_report(const std::vector<BenchReport>& reports, ReportFormat format,
                 const std::string& path);

}  // namespace edgefaas::bench
