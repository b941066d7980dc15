#include "finsler/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace finsler {

check_record make_record(std::string check_id, double residual, double tolerance, int point_index)
{
    return {std::move(check_id), point_index, residual, tolerance, residual < tolerance};
}

void check_report::add(std::string check_id, double residual, double tolerance)
{
    records_.push_back(make_record(std::move(check_id), residual, tolerance));
}

void check_report::merge(const check_report& other, int point_index)
{
    for (auto r : other.records_) {
        r.point_index = point_index;
        records_.push_back(std::move(r));
    }
    notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
}

void check_report::merge(const check_report& other)
{
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
    notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
}

bool check_report::all_passed() const noexcept
{
    return std::all_of(records_.begin(), records_.end(), [](const auto& r) { return r.passed; });
}

double check_report::max_residual(const std::string& check_id) const
{
    double worst = 0.0;
    for (const auto& r : records_) {
        if (r.check_id == check_id) {
            worst = std::isnan(r.residual) ? r.residual : std::max(worst, r.residual);
            if (std::isnan(worst)) {
                return worst;
            }
        }
    }
    return worst;
}

const check_record* check_report::find(const std::string& check_id) const
{
    for (const auto& r : records_) {
        if (r.check_id == check_id) {
            return &r;
        }
    }
    return nullptr;
}

std::map<std::string, check_summary> check_report::summary() const
{
    std::map<std::string, check_summary> out;
    for (const auto& r : records_) {
        auto& s = out[r.check_id];
        ++s.count;
        s.passed += r.passed ? 1 : 0;
        s.max_residual = std::max(s.max_residual, r.residual);
        s.tolerance = r.tolerance;
    }
    return out;
}

void check_report::normalize_order()
{
    std::stable_sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) {
        if (a.check_id != b.check_id) {
            return a.check_id < b.check_id;
        }
        return a.point_index < b.point_index;
    });
    std::sort(notes_.begin(), notes_.end());
    notes_.erase(std::unique(notes_.begin(), notes_.end()), notes_.end());
}

std::string format_residual(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9e", value);
    return buf;
}

std::string to_csv(const check_report& report)
{
    std::ostringstream out;
    out << "check_id,point_index,residual,tolerance,passed\n";
    for (const auto& r : report.records()) {
        out << r.check_id << ',' << r.point_index << ',' << format_residual(r.residual) << ','
            << format_residual(r.tolerance) << ',' << (r.passed ? "true" : "false") << '\n';
    }
    return out.str();
}

std::string to_summary_text(const check_report& report)
{
    std::ostringstream out;
    std::size_t total = 0;
    std::size_t passed = 0;
    for (const auto& [id, s] : report.summary()) {
        total += s.count;
        passed += s.passed;
        out << (s.passed == s.count ? "PASS " : "FAIL ") << id << ": " << s.passed << '/' << s.count
            << " passed, max residual " << format_residual(s.max_residual) << " (tolerance "
            << format_residual(s.tolerance) << ")\n";
    }
    for (const auto& n : report.notes()) {
        out << "note: " << n << '\n';
    }
    out << "total: " << passed << '/' << total << " records passed\n";
    return out.str();
}

void emit_report(const check_report& report, const std::filesystem::path& prefix)
{
    const auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw std::ios_base::failure("cannot open " + path.string() + " for writing");
        }
        file << text;
        file.flush();
        if (!file) {
            throw std::ios_base::failure("write failed for " + path.string());
        }
    };
    if (prefix.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(prefix.parent_path(), ec);
    }
    write(prefix.string() + ".csv", to_csv(report));
    write(prefix.string() + "_summary.txt", to_summary_text(report));
}

} // namespace finsler
