#pragma once

#include <cstdint>
#include <string>

namespace mlsde {

// Comma-separated rows with deterministic formatting: doubles use the
// shortest round-trip representation, non-finite values serialize as
// inf/-inf/nan.
class CsvWriter {
public:
    void field(const std::string& s);
    void field(const char* s);
    void field(double v);
    void field(std::int64_t v);
    void field(int v) { field(static_cast<std::int64_t>(v)); }
    void field(std::uint64_t v);
    void field(bool v);
    void end_row();

    const std::string& str() const { return buffer_; }
    void write_file(const std::string& path) const;

private:
    void separator();
    std::string buffer_;
    bool row_open_ = false;
};

std::string format_double(double v);

}  // namespace mlsde
