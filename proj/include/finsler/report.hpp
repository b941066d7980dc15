#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace finsler {

struct check_record {
    std::string check_id;
    int point_index = 0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

// passed is always residual < tolerance; NaN residuals fail.
check_record make_record(std::string check_id, double residual, double tolerance, int point_index = 0);

struct check_summary {
    std::size_t count = 0;
    std::size_t passed = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
};

class check_report {
public:
    void add(std::string check_id, double residual, double tolerance);
    void add(check_record record) { records_.push_back(std::move(record)); }
    // Appends other's records, relabelled with point_index.
    void merge(const check_report& other, int point_index);
    void merge(const check_report& other);
    void note(std::string text) { notes_.push_back(std::move(text)); }

    const std::vector<check_record>& records() const noexcept { return records_; }
    const std::vector<std::string>& notes() const noexcept { return notes_; }
    bool all_passed() const noexcept;
    bool empty() const noexcept { return records_.empty(); }

    // Max residual over records whose id equals check_id (0 when absent).
    double max_residual(const std::string& check_id) const;
    const check_record* find(const std::string& check_id) const;
    std::map<std::string, check_summary> summary() const;

    // Stable sort by (check_id, point_index); notes sorted, duplicates dropped.
    void normalize_order();

private:
    std::vector<check_record> records_;
    std::vector<std::string> notes_;
};

std::string format_residual(double value);
std::string to_csv(const check_report& report);
std::string to_summary_text(const check_report& report);

// Writes <prefix>.csv and <prefix>_summary.txt. Throws std::ios_base::failure on I/O errors.
void emit_report(const check_report& report, const std::filesystem::path& prefix);

} // namespace finsler
