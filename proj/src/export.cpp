#include "leoaoi/export.hpp"

#include <array>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace leoaoi {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::vector<ResultRow> rows_for(const RunResult& r, const std::string& experiment,
                                const std::string& axis, const std::string& axis_value) {
    std::vector<ResultRow> rows;
    for (int m = 0; m < kClasses; ++m) {
        ResultRow row;
        row.experiment = experiment;
        row.seed = r.seed;
        row.axis = axis;
        row.axis_value = axis_value;
        row.cls = m + 1;
        row.mean_aoi_ticks = r.classes[m].mean_aoi;
        row.violation_rate = r.classes[m].violation_rate;
        row.epsilon = r.classes[m].epsilon;
        row.compliant = r.classes[m].compliant;
        row.mean_power_w = r.mean_power_w;
        row.forced_ho = r.forced_ho;
        row.disc_ho = r.disc_ho;
        row.pingpong_events = static_cast<int>(r.pingpong.size());
        rows.push_back(row);
    }
    return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << kCsvHeader << "\n";
    for (const auto& r : rows) {
        os << r.experiment << ',' << r.seed << ',' << r.axis << ',' << r.axis_value << ',' << r.cls << ','
           << format_number(r.mean_aoi_ticks) << ',' << format_number(r.violation_rate) << ','
           << format_number(r.epsilon) << ',' << (r.compliant ? "true" : "false") << ','
           << format_number(r.mean_power_w) << ',' << r.forced_ho << ',' << r.disc_ho << ','
           << r.pingpong_events << "\n";
    }
    return os.str();
}

std::string to_json(const std::vector<ResultRow>& rows) {
    auto num = [](double x) { return std::stod(format_number(x)); };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["experiment"] = r.experiment;
        j["seed"] = r.seed;
        j["axis"] = r.axis;
        j["axis_value"] = r.axis_value;
        j["class"] = r.cls;
        j["mean_aoi_ticks"] = num(r.mean_aoi_ticks);
        j["violation_rate"] = num(r.violation_rate);
        j["epsilon"] = num(r.epsilon);
        j["compliant"] = r.compliant;
        j["mean_power_w"] = num(r.mean_power_w);
        j["forced_ho"] = r.forced_ho;
        j["disc_ho"] = r.disc_ho;
        j["pingpong_events"] = r.pingpong_events;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

void export_results(const std::vector<ResultRow>& rows, ExportFormat format,
                    const std::filesystem::path& path) {
    require(!rows.empty(), "export_results: nothing to export");
    const std::string body = format == ExportFormat::csv ? to_csv(rows) : to_json(rows);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != kCsvHeader) throw std::runtime_error(path.string() + ": unexpected CSV header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (line.back() == ',') f.emplace_back();
        if (f.size() != 13) throw std::runtime_error(path.string() + ": malformed row: " + line);
        ResultRow r;
        r.experiment = f[0];
        r.seed = std::stoull(f[1]);
        r.axis = f[2];
        r.axis_value = f[3];
        r.cls = std::stoi(f[4]);
        r.mean_aoi_ticks = std::stod(f[5]);
        r.violation_rate = std::stod(f[6]);
        r.epsilon = std::stod(f[7]);
        r.compliant = f[8] == "true";
        r.mean_power_w = std::stod(f[9]);
        r.forced_ho = std::stoi(f[10]);
        r.disc_ho = std::stoi(f[11]);
        r.pingpong_events = std::stoi(f[12]);
        rows.push_back(r);
    }
    return rows;
}

MeanCI mean_ci95(const std::vector<double>& xs) {
    MeanCI c;
    c.n = static_cast<int>(xs.size());
    if (xs.empty()) return c;
    for (double x : xs) c.mean += x;
    c.mean /= c.n;
    if (c.n < 2) return c;
    double ss = 0.0;
    for (double x : xs) ss += (x - c.mean) * (x - c.mean);
    const double sd = std::sqrt(ss / (c.n - 1));
    const boost::math::students_t dist(c.n - 1);
    c.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(c.n);
    return c;
}

std::string format_compliance_table(const std::vector<ResultRow>& rows) {
    // (experiment, axis, value) -> class -> rates across seeds. Axis values
    // order numerically, so 100 comes after 20.
    struct KeyLess {
        static double value_of(const std::string& v) {
            if (v.empty()) return 0.0;
            char* end = nullptr;
            const double x = std::strtod(v.c_str(), &end);
            return end && *end == '\0' ? x : 0.0;
        }
        bool operator()(const std::tuple<std::string, std::string, std::string>& a,
                        const std::tuple<std::string, std::string, std::string>& b) const {
            if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
            if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
            const double x = value_of(std::get<2>(a)), y = value_of(std::get<2>(b));
            if (x != y) return x < y;
            return std::get<2>(a) < std::get<2>(b);
        }
    };
    std::map<std::tuple<std::string, std::string, std::string>, std::array<std::vector<double>, kClasses>, KeyLess>
        groups;
    std::array<double, kClasses> eps{};
    for (const auto& r : rows) {
        if (r.cls < 1 || r.cls > kClasses) continue;
        groups[{r.experiment, r.axis, r.axis_value}][r.cls - 1].push_back(r.violation_rate);
        eps[r.cls - 1] = r.epsilon;
    }
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-28s %-22s %-22s %-22s\n", "configuration", "class 1", "class 2", "class 3");
    os << buf;
    for (const auto& [key, per_class] : groups) {
        const auto& [exp, axis, value] = key;
        std::string label = exp;
        if (axis != "none" && !axis.empty()) label += " " + axis + "=" + value;
        std::snprintf(buf, sizeof buf, "%-28s", label.c_str());
        os << buf;
        for (int m = 0; m < kClasses; ++m) {
            const auto ci = mean_ci95(per_class[m]);
            std::snprintf(buf, sizeof buf, " %.4f ± %.4f (n=%d)  ", ci.mean, ci.half_width, ci.n);
            os << buf;
        }
        os << "\n";
    }
    std::snprintf(buf, sizeof buf, "%-28s %-22.4f %-22.4f %-22.4f\n", "budget epsilon", eps[0], eps[1], eps[2]);
    os << buf;
    return os.str();
}

}  // namespace leoaoi
