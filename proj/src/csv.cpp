#include "latdev/csv.hpp"

#include <fstream>

#include "latdev/errors.hpp"

namespace latdev {

std::string CsvTable::to_string() const {
    std::string out;
    for (size_t c = 0; c < columns_.size(); ++c) {
        if (c) out += ',';
        out += columns_[c];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << to_string();
}

}  // namespace latdev
