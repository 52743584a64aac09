#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "wentzell/errors.hpp"

namespace wentzell {

/// 17 significant digits: round-trips doubles exactly, so identical runs
/// produce byte-identical files.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw ConfigError("csv: cannot open " + path.string());
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns[i];
        }
        out_ << '\n';
        width_ = columns.size();
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != width_)
            throw ConfigError("csv: row width does not match the header");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& cells) {
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (double v : cells) s.push_back(format_g17(v));
        row(s);
    }

private:
    std::ofstream out_;
    std::size_t width_ = 0;
};

} // namespace wentzell
