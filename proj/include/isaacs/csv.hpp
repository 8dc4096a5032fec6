#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace isaacs {

/// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& field(double v);
    CsvWriter& field(long long v);
    CsvWriter& field(std::string_view v);
    void end_row();

private:
    std::ofstream out_;
    bool first_ = true;
};

}  // namespace isaacs
