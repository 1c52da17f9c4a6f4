#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace abmdp::csv {

/// Decimal form with 15 significant digits, locale-independent.
inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

/// Minimal CSV writer: one header, then rows; always '\n' line endings so
/// repeated runs are byte-comparable.
class Writer {
public:
    Writer(const std::string& path, const std::string& header) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
        out_ << header << "\n";
    }

    void row(const std::string& line) { out_ << line << "\n"; }

    ~Writer() { out_.flush(); }

private:
    std::ofstream out_;
};

}  // namespace abmdp::csv
