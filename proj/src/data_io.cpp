#include "beran/data_io.hpp"

#include "beran/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace beran {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Comma separated, double quotes allowed around a field.
std::vector<std::string> split_row(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.emplace_back(trim(cur));
    return out;
}

Error row_error(const std::string& source, std::size_t line, const std::string& what) {
    return Error(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view cell, const std::string& source, std::size_t line, const std::string& column) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size())
        throw row_error(source, line, "column '" + column + "': cannot parse '" + std::string(cell) + "' as a number");
    if (!std::isfinite(v)) throw row_error(source, line, "column '" + column + "': value is not finite");
    return v;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

void DatasetSchema::validate() const {
    if (covariate_column.empty() || time_column.empty() || status_column.empty())
        throw Error(ErrorKind::schema, "column names must be non-empty");
    if (covariate_column == time_column || covariate_column == status_column || time_column == status_column)
        throw Error(ErrorKind::schema, "covariate, time and status columns must be distinct");
}

DatasetStats describe(const SurvivalSample& sample) {
    return {sample.size(), sample.events(), sample.censoring_fraction()};
}

Dataset parse_csv(const std::string& text, const DatasetSchema& schema, const std::string& source) {
    schema.validate();
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_row(line);
            break;
        }
    }
    if (header.empty()) throw Error(ErrorKind::empty_dataset, source + ": empty file");
    if (line_no == 1 && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

    const auto find = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw Error(ErrorKind::schema, source + ": missing column '" + name + "'");
    };
    const std::size_t cx = find(schema.covariate_column);
    const std::size_t cz = find(schema.time_column);
    const std::size_t cd = find(schema.status_column);
    std::vector<std::pair<std::string, std::size_t>> factor_cols;
    if (schema.filter_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (i != cx && i != cz && i != cd) factor_cols.emplace_back(header[i], i);
    } else {
        for (const auto& f : schema.filter_columns) factor_cols.emplace_back(f, find(f));
    }

    std::vector<double> x, z;
    std::vector<int> d;
    Dataset data;
    for (const auto& [name, idx] : factor_cols) data.factors[name];
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != header.size())
            throw row_error(source, line_no,
                            "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
        x.push_back(parse_number(cells[cx], source, line_no, schema.covariate_column));
        const double t = parse_number(cells[cz], source, line_no, schema.time_column);
        if (t < 0.0) throw row_error(source, line_no, "column '" + schema.time_column + "': negative time");
        z.push_back(t);
        const double s = parse_number(cells[cd], source, line_no, schema.status_column);
        if (s != 0.0 && s != 1.0)
            throw row_error(source, line_no, "column '" + schema.status_column + "': status must be 0 or 1");
        d.push_back(static_cast<int>(s));
        for (const auto& [name, idx] : factor_cols) data.factors[name].push_back(cells[idx]);
    }
    if (z.empty()) throw Error(ErrorKind::empty_dataset, source + ": no data rows");
    data.sample = SurvivalSample(std::move(x), std::move(z), std::move(d));
    data.stats = describe(data.sample);
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema, path.string());
}

void save_csv(const std::filesystem::path& path, const Dataset& data, const DatasetSchema& schema) {
    schema.validate();
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << schema.covariate_column << ',' << schema.time_column << ',' << schema.status_column;
    for (const auto& [name, values] : data.factors) out << ',' << quote_if_needed(name);
    out << '\n';
    const auto& s = data.sample;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(s.x()[i]) << ',' << format_double(s.z()[i]) << ',' << s.delta()[i];
        for (const auto& [name, values] : data.factors) out << ',' << quote_if_needed(values.at(i));
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

void save_csv(const std::filesystem::path& path, const SurvivalSample& sample) {
    Dataset d;
    d.sample = sample;
    save_csv(path, d);
}

Dataset filter_subpopulation(const Dataset& data, const SubpopulationFilter& filter) {
    for (const auto& [name, values] : filter)
        if (!data.factors.count(name)) throw Error(ErrorKind::schema, "unknown filter column '" + name + "'");
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.sample.size(); ++i) {
        bool keep = true;
        for (const auto& [name, values] : filter) keep = keep && values.count(data.factors.at(name)[i]) > 0;
        if (keep) rows.push_back(i);
    }
    if (rows.empty()) throw Error(ErrorKind::empty_dataset, "no rows match the subpopulation filter");
    Dataset out;
    out.sample = data.sample.subset(rows);
    for (const auto& [name, values] : data.factors) {
        auto& col = out.factors[name];
        col.reserve(rows.size());
        for (std::size_t r : rows) col.push_back(values[r]);
    }
    out.stats = describe(out.sample);
    return out;
}

} // namespace beran
