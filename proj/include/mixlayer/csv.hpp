#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mixlayer {

/// 17 significant digits: doubles round-trip losslessly.
inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// CSV emitter; writes to <path>.tmp and renames into place on close so
/// readers never observe a partial file.
class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, const std::string& header)
        : path_(std::move(path)), tmp_(path_.string() + ".tmp") {
        if (path_.has_parent_path())
            std::filesystem::create_directories(path_.parent_path());
        out_.open(tmp_, std::ios::trunc);
        if (!out_) throw std::runtime_error("cannot open " + tmp_.string());
        out_ << header << '\n';
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

    void close() {
        if (!out_.is_open()) return;
        out_.close();
        std::filesystem::rename(tmp_, path_);
    }

    ~CsvWriter() {
        try {
            close();
        } catch (...) {
        }
    }

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

private:
    std::filesystem::path path_, tmp_;
    std::ofstream out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    if (std::getline(in, line)) t.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        t.rows.push_back(split_csv_line(line));
    }
    return t;
}

}  // namespace mixlayer
