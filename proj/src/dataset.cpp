#include "screenlab/dataset.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "screenlab/errors.hpp"

namespace screenlab {

namespace {

enum Column { ColZ, ColD, ColY, ColStated, ColType, ColCount };
constexpr std::array<std::string_view, ColCount> kNames{"z", "d", "y", "stated_complier", "true_type"};

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void schema_fail(int line, std::string_view column, const std::string& msg) {
    throw Error(ErrorCode::SchemaError,
                "line " + std::to_string(line) + ", column " + std::string(column) + ": " + msg);
}

int parse_binary(std::string_view f, int line, std::string_view column) {
    if (f == "0") return 0;
    if (f == "1") return 1;
    schema_fail(line, column, "expected 0 or 1, got '" + std::string(f) + "'");
}

std::string format_real(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

Sample read_dataset(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw Error(ErrorCode::SchemaError, "dataset is empty; a header row is required");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::array<std::optional<std::size_t>, ColCount> index;
    const auto header = split_fields(line);
    for (std::size_t i = 0; i < header.size(); ++i) {
        bool known = false;
        for (int c = 0; c < ColCount; ++c) {
            if (header[i] == kNames[static_cast<std::size_t>(c)]) {
                if (index[static_cast<std::size_t>(c)]) schema_fail(1, header[i], "duplicate column");
                index[static_cast<std::size_t>(c)] = i;
                known = true;
            }
        }
        if (!known) schema_fail(1, header[i], "unknown column");
    }
    for (int c : {ColZ, ColD, ColY})
        if (!index[static_cast<std::size_t>(c)])
            schema_fail(1, kNames[static_cast<std::size_t>(c)], "required column missing from header");

    std::vector<Unit> units;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": expected " +
                                                    std::to_string(header.size()) + " fields, got " +
                                                    std::to_string(fields.size()));
        Unit u;
        u.z = parse_binary(fields[*index[ColZ]], line_no, "z");
        u.d = parse_binary(fields[*index[ColD]], line_no, "d");
        {
            const auto f = fields[*index[ColY]];
            double y = 0.0;
            const auto res = std::from_chars(f.data(), f.data() + f.size(), y);
            if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(y))
                schema_fail(line_no, "y", "expected a finite real number, got '" + std::string(f) + "'");
            u.y = y;
        }
        if (index[ColStated]) u.stated_complier = parse_binary(fields[*index[ColStated]], line_no, "stated_complier") == 1;
        if (index[ColType]) {
            const auto f = fields[*index[ColType]];
            if (f == "c")
                u.true_type = UnitType::Complier;
            else if (f == "a")
                u.true_type = UnitType::AlwaysTaker;
            else if (f == "n")
                u.true_type = UnitType::NeverTaker;
            else
                schema_fail(line_no, "true_type", "expected c, a or n, got '" + std::string(f) + "'");
        }
        units.push_back(u);
    }
    if (units.empty()) throw Error(ErrorCode::SchemaError, "dataset has a header but no rows");
    return make_sample(std::move(units), DgpKind::External);
}

Sample read_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::SchemaError, "cannot open dataset '" + path + "'");
    return read_dataset(in);
}

void write_dataset(std::ostream& out, const Sample& s) {
    const bool stated = s.has_stated_types();
    const bool types = s.has_types();
    out << "z,d,y";
    if (stated) out << ",stated_complier";
    if (types) out << ",true_type";
    out << '\n';
    for (std::size_t i = 0; i < s.units.size(); ++i) {
        const auto& u = s.units[i];
        if (u.d != 0.0 && u.d != 1.0)
            throw Error(ErrorCode::SchemaError, "unit " + std::to_string(i) + " has non-binary take-up");
        out << u.z << ',' << static_cast<int>(u.d) << ',' << format_real(u.y);
        if (stated) out << ',' << (*u.stated_complier ? 1 : 0);
        if (types) {
            const char c = *u.true_type == UnitType::Complier ? 'c' : *u.true_type == UnitType::AlwaysTaker ? 'a' : 'n';
            out << ',' << c;
        }
        out << '\n';
    }
}

void write_dataset_file(const std::string& path, const Sample& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::SchemaError, "cannot write dataset '" + path + "'");
    write_dataset(out, s);
}

}  // namespace screenlab
