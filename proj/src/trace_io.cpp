#include "rabispec/trace_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rabispec/system_io.hpp"

namespace rabispec {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot write '" + path + "'");
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_field(const std::string& s, const std::string& path, int line, int col) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << path << ":" << line << ": field " << col + 1 << " ('" << s
           << "') is not a number";
        fail(errc::parse_error, os.str());
    }
}

} // namespace

void write_trace_csv(const PopulationTrace& trace, const std::string& path) {
    auto out = open_out(path);
    const int n = trace.levels();
    out << "t";
    for (int i = 0; i < n; ++i) out << ",Pi_" << i + 1;
    for (int i = 0; i < n; ++i) out << ",Re_a" << i + 1 << ",Im_a" << i + 1;
    out << "\n";
    for (int r = 0; r < trace.samples(); ++r) {
        out << format_double(trace.times[static_cast<std::size_t>(r)]);
        for (int i = 0; i < n; ++i) out << "," << format_double(trace.populations(r, i));
        for (int i = 0; i < n; ++i) {
            out << "," << format_double(trace.amplitudes(r, i).real());
            out << "," << format_double(trace.amplitudes(r, i).imag());
        }
        out << "\n";
    }
}

PopulationTrace load_trace_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) fail(errc::parse_error, path + ": missing header row");
    const auto header = split_csv(line);
    if (header.empty() || header[0] != "t")
        fail(errc::parse_error, path + ": first column must be 't'");
    if ((header.size() - 1) % 3 != 0)
        fail(errc::parse_error, path + ": expected 1 + 3N columns");
    const int n = static_cast<int>((header.size() - 1) / 3);

    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size()) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected " << header.size()
               << " fields, got " << fields.size();
            fail(errc::parse_error, os.str());
        }
        std::vector<double> row(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c)
            row[c] = parse_field(fields[c], path, lineno, static_cast<int>(c));
        times.push_back(row[0]);
        rows.push_back(std::move(row));
    }

    PopulationTrace trace;
    trace.times = std::move(times);
    const auto m = static_cast<Eigen::Index>(rows.size());
    trace.populations.resize(m, n);
    trace.amplitudes.resize(m, n);
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        for (int i = 0; i < n; ++i) {
            trace.populations(r, i) = row[static_cast<std::size_t>(1 + i)];
            trace.amplitudes(r, i) = {row[static_cast<std::size_t>(1 + n + 2 * i)],
                                      row[static_cast<std::size_t>(1 + n + 2 * i + 1)]};
        }
    }
    return trace;
}

void write_trace_json(const PopulationTrace& trace, const std::string& path) {
    const int n = trace.levels();
    json doc;
    doc["t"] = trace.times;
    auto pops = json::array();
    auto re = json::array();
    auto im = json::array();
    for (int i = 0; i < n; ++i) {
        std::vector<double> p(static_cast<std::size_t>(trace.samples()));
        std::vector<double> ar(p.size()), ai(p.size());
        for (int r = 0; r < trace.samples(); ++r) {
            p[static_cast<std::size_t>(r)] = trace.populations(r, i);
            ar[static_cast<std::size_t>(r)] = trace.amplitudes(r, i).real();
            ai[static_cast<std::size_t>(r)] = trace.amplitudes(r, i).imag();
        }
        pops.push_back(p);
        re.push_back(ar);
        im.push_back(ai);
    }
    doc["Pi"] = pops;
    doc["Re_a"] = re;
    doc["Im_a"] = im;
    auto out = open_out(path);
    out << doc.dump() << "\n";
}

void write_curves_csv(const CurveSet& curves, const std::string& path) {
    auto out = open_out(path);
    out << curves.x_name;
    for (const auto& name : curves.names) out << "," << name;
    out << "\n";
    for (std::size_t r = 0; r < curves.x.size(); ++r) {
        out << format_double(curves.x[r]);
        for (const auto& col : curves.columns) out << "," << format_double(col[r]);
        out << "\n";
    }
}

CurveSet load_curves_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) fail(errc::parse_error, path + ": missing header row");
    const auto header = split_csv(line);
    if (header.size() < 2) fail(errc::parse_error, path + ": expected at least 2 columns");

    CurveSet curves;
    curves.x_name = header[0];
    curves.names.assign(header.begin() + 1, header.end());
    curves.columns.resize(curves.names.size());

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size()) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected " << header.size()
               << " fields, got " << fields.size();
            fail(errc::parse_error, os.str());
        }
        curves.x.push_back(parse_field(fields[0], path, lineno, 0));
        for (std::size_t c = 1; c < fields.size(); ++c)
            curves.columns[c - 1].push_back(
                parse_field(fields[c], path, lineno, static_cast<int>(c)));
    }
    return curves;
}

} // namespace rabispec
