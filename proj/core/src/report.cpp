#include "wbary/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wbary {

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line needs two equal-length samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LinearFit f;
    const double denom = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ss += e * e;
    }
    f.rms_residual = std::sqrt(ss / n);
    return f;
}

bool ScanReport::all_pass() const {
    for (const auto& [name, ok] : verdicts)
        if (!ok) return false;
    return true;
}

std::vector<double> ScanReport::column(const std::string& name) const {
    size_t idx = columns.size();
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) idx = i;
    if (idx == columns.size()) throw std::invalid_argument("no column " + name);
    std::vector<double> out;
    for (const auto& row : rows) out.push_back(row.at(idx));
    return out;
}

nlohmann::json ScanReport::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["params"] = params;
    j["columns"] = columns;
    j["rows"] = rows;
    nlohmann::json jf = nlohmann::json::object();
    for (const auto& [name, fit] : fits)
        jf[name] = {{"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"rms_residual", fit.rms_residual}};
    j["fits"] = jf;
    j["verdicts"] = verdicts;
    j["scalars"] = scalars;
    j["all_pass"] = all_pass();
    return j;
}

std::string ScanReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    for (size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

std::string hash8(const nlohmann::json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(8, '0');
    for (int i = 0; i < 8; ++i) out[static_cast<size_t>(i)] = hex[(h >> (60 - 4 * i)) & 0xF];
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << content;
}

}  // namespace wbary
