#ifndef DRESSEDW_IO_HPP
#define DRESSEDW_IO_HPP

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frames.hpp"
#include "types.hpp"

namespace dressedw {

using json = nlohmann::json;

/// Shortest "%.*g" text that parses back to the same double.
inline std::string format_double(double x)
{
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) {
            break;
        }
    }
    return buf;
}

/// RFC 4180: quote a field holding a comma, quote, CR or LF; double the quotes.
inline std::string csv_escape(const std::string &field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

class CsvTable {
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row)
    {
        require(row.size() == header_.size(), "CSV row width does not match header");
        rows_.push_back(std::move(row));
    }

    void add_row(std::initializer_list<double> values)
    {
        std::vector<std::string> row;
        for (double v : values) {
            row.push_back(format_double(v));
        }
        add_row(std::move(row));
    }

    const std::vector<std::string> &header() const { return header_; }
    const std::vector<std::vector<std::string>> &rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    void write(std::ostream &os) const
    {
        write_line(os, header_);
        for (const auto &r : rows_) {
            write_line(os, r);
        }
    }

    std::string str() const
    {
        std::ostringstream os;
        write(os);
        return os.str();
    }

private:
    static void write_line(std::ostream &os, const std::vector<std::string> &fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) {
                os << ',';
            }
            os << csv_escape(fields[i]);
        }
        os << "\r\n";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Creates dir if needed and checks that a file can be written there.
inline void ensure_writable_directory(const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw ValidationError("output directory '" + dir.string() + "' cannot be created");
    }
    const auto probe = dir / ".dressedw-write-probe";
    {
        std::ofstream f(probe);
        if (!f) {
            throw ValidationError("output directory '" + dir.string() + "' is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

inline void write_text_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ValidationError("cannot open '" + path.string() + "' for writing");
    }
    f << content;
    if (!f) {
        throw Error("write to '" + path.string() + "' failed");
    }
}

inline json to_json(const CancellationReport &r)
{
    return {{"pass", r.pass},
            {"worst_residual", r.worst_residual},
            {"worst_time", r.worst_time},
            {"plus_minus_max", r.plus_minus_max},
            {"grid_points", r.grid_points}};
}

} // namespace dressedw

#endif // DRESSEDW_IO_HPP
