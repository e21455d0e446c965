#include "mlsde/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace mlsde {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void CsvWriter::separator() {
    if (row_open_) buffer_ += ',';
    row_open_ = true;
}

void CsvWriter::field(const std::string& s) {
    separator();
    buffer_ += s;
}

void CsvWriter::field(const char* s) {
    separator();
    buffer_ += s;
}

void CsvWriter::field(double v) {
    separator();
    buffer_ += format_double(v);
}

void CsvWriter::field(std::int64_t v) {
    separator();
    buffer_ += std::to_string(v);
}

void CsvWriter::field(std::uint64_t v) {
    separator();
    buffer_ += std::to_string(v);
}

void CsvWriter::field(bool v) {
    separator();
    buffer_ += v ? '1' : '0';
}

void CsvWriter::end_row() {
    buffer_ += '\n';
    row_open_ = false;
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << buffer_;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace mlsde
