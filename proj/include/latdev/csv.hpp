#ifndef LATDEV_CSV_HPP
#define LATDEV_CSV_HPP

#include <cstdio>
#include <string>
#include <vector>

namespace latdev {

// Deterministic CSV assembly: doubles in %.17g so identical runs are
// byte-identical, no locale dependence, '\n' line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    static std::string format(double x) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }

    CsvTable& cell(double x) { return cell(format(x)); }
    CsvTable& cell(long x) { return cell(std::to_string(x)); }
    CsvTable& cell(int x) { return cell(std::to_string(x)); }
    CsvTable& cell(const std::string& s) {
        row_.push_back(s);
        if (row_.size() == columns_.size()) {
            rows_.push_back(row_);
            row_.clear();
        }
        return *this;
    }

    std::string to_string() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> row_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace latdev

#endif
