#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace guideq::io {

/// RFC 4180 writer: CRLF line endings, fields quoted only when needed,
/// doubles written round-trip exact (%.17g).
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);

    void header(std::initializer_list<std::string_view> names);
    void header(std::span<const std::string> names);
    void row(std::initializer_list<double> values);
    void row(std::span<const double> values);
    /// Mixed row; each element already formatted.
    void raw_row(std::span<const std::string> fields);

    const std::filesystem::path& path() const { return path_; }

private:
    void end_line();

    std::filesystem::path path_;
    std::ofstream out_;
};

std::string format_double(double v);
std::string quote_field(std::string_view field);

/// Reads an RFC 4180 file into rows of fields (quoted fields unescaped).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace guideq::io
