#include "isaacs/csv.hpp"

#include <cstdio>

#include "isaacs/error.hpp"

namespace isaacs {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string());
    for (auto h : header) field(h);
    end_row();
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string());
    for (const auto& h : header) field(std::string_view(h));
    end_row();
}

CsvWriter& CsvWriter::field(double v) { return field(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::field(long long v) { return field(std::string_view(std::to_string(v))); }

CsvWriter& CsvWriter::field(std::string_view v) {
    if (!first_) out_ << ',';
    out_ << v;
    first_ = false;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

}  // namespace isaacs
