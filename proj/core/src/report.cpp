#include "halfline/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidArgument("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) {
        return {};
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string to_csv(const std::vector<ConvergenceRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
        out += r.preset;
        out += ',' + format_number(r.b);
        out += ',' + format_number(r.t);
        out += ',' + format_number(r.epsilon);
        out += ',' + r.metric;
        out += ',' + format_number(r.value);
        out += ',' + (r.ratio ? format_number(*r.ratio) : std::string());
        out += '\n';
    }
    return out;
}

std::map<std::string, bool> monotonicity_verdicts(const std::vector<ConvergenceRecord>& records) {
    std::map<std::string, bool> out;
    for (const auto& r : records) {
        auto [it, inserted] = out.try_emplace(r.metric, true);
        if (r.ratio && !(*r.ratio < 1.0)) {
            it->second = false;
        }
    }
    return out;
}

std::string summary_json(const std::vector<ConvergenceRecord>& records,
                         const std::vector<CheckOutcome>& outcomes) {
    nlohmann::ordered_json j;
    j["records"] = records.size();
    auto& metrics = j["metrics"] = nlohmann::ordered_json::object();
    for (const auto& [metric, monotone] : monotonicity_verdicts(records)) {
        metrics[metric] = {{"monotone", monotone}};
    }
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    bool pass = true;
    for (const auto& o : outcomes) {
        checks.push_back({{"metric", o.check.metric},
                          {"kind", std::string(check_kind_name(o.check.kind))},
                          {"threshold", o.check.threshold},
                          {"pass", o.pass},
                          {"detail", o.detail}});
        pass = pass && o.pass;
    }
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

ReportFiles emit_report(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path,
                        const std::vector<CheckOutcome>& outcomes) {
    ReportFiles files{path, path};
    files.json.replace_extension(".json");
    if (files.json == files.csv) {
        files.json += ".summary.json";
    }
    write_file(files.csv, to_csv(records));
    write_file(files.json, summary_json(records, outcomes));
    return files;
}

}  // namespace halfline
