#include "guideq/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "guideq/errors.hpp"

namespace guideq::io {

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote_field(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary)
{
    if (!out_) {
        throw IoError("cannot write " + path.string());
    }
}

void CsvWriter::end_line()
{
    out_ << "\r\n";
    if (!out_) {
        throw IoError("write failed: " + path_.string());
    }
}

void CsvWriter::header(std::initializer_list<std::string_view> names)
{
    bool first = true;
    for (auto n : names) {
        out_ << (first ? "" : ",") << quote_field(n);
        first = false;
    }
    end_line();
}

void CsvWriter::header(std::span<const std::string> names)
{
    raw_row(names);
}

void CsvWriter::row(std::initializer_list<double> values)
{
    row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << format_double(values[i]);
    }
    end_line();
}

void CsvWriter::raw_row(std::span<const std::string> fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out_ << (i ? "," : "") << quote_field(fields[i]);
    }
    end_line();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            any = true;
        } else if (ch == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (ch == '\r' || ch == '\n') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += ch;
            any = true;
        }
    }
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace guideq::io
