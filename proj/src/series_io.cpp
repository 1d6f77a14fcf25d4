#include "autohsic/series_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace autohsic {

SeriesParseError::SeriesParseError(int line_number, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
      line(line_number) {}

namespace {

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_csv_numbers(const std::string& text, int line) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string token = strip(text.substr(pos, comma - pos));
        if (token.empty()) throw SeriesParseError(line, "empty value");
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) throw SeriesParseError(line, "bad number '" + token + "'");
            values.push_back(v);
        } catch (const SeriesParseError&) {
            throw;
        } catch (const std::exception&) {
            throw SeriesParseError(line, "bad number '" + token + "'");
        }
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return values;
}

SpaceDescriptor parse_header(const std::string& header, int line) {
    std::istringstream in(header);
    std::string kind;
    in >> kind;
    try {
        if (kind == "vector") {
            int d = 0;
            if (!(in >> d)) throw SeriesParseError(line, "vector header needs a dimension");
            return SpaceDescriptor::euclidean(d);
        }
        if (kind == "matrix") {
            int rows = 0, cols = 0;
            if (!(in >> rows >> cols))
                throw SeriesParseError(line, "matrix header needs rows and columns");
            return SpaceDescriptor::matrix(rows, cols);
        }
        if (kind == "function") {
            std::string rest;
            std::getline(in, rest);
            return SpaceDescriptor::functional(parse_csv_numbers(strip(rest), line));
        }
    } catch (const SeriesParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw SeriesParseError(line, e.what());
    }
    throw SeriesParseError(line, "unknown space kind '" + kind + "' (vector|matrix|function)");
}

} // namespace

ObjectSeries read_series(std::istream& in) {
    std::string raw_line;
    int line_number = 0;
    bool have_header = false;
    SpaceDescriptor space = SpaceDescriptor::euclidean(1);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, raw_line)) {
        ++line_number;
        const std::string text = strip(raw_line);
        if (text.empty() || text[0] == '#') continue;
        if (!have_header) {
            space = parse_header(text, line_number);
            have_header = true;
            continue;
        }
        std::vector<double> values = parse_csv_numbers(text, line_number);
        if (static_cast<int>(values.size()) != space.element_size())
            throw SeriesParseError(line_number,
                                   "row has " + std::to_string(values.size()) + " values, expected " +
                                       std::to_string(space.element_size()));
        for (double v : values)
            if (!std::isfinite(v)) throw SeriesParseError(line_number, "non-finite value");
        rows.push_back(std::move(values));
    }
    if (!have_header) throw SeriesParseError(line_number, "missing header line");
    if (rows.empty()) throw SeriesParseError(line_number, "series has no observations");
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()), space.element_size());
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (int j = 0; j < space.element_size(); ++j)
            data(static_cast<Eigen::Index>(t), j) = rows[t][static_cast<std::size_t>(j)];
    return ObjectSeries(space, std::move(data));
}

ObjectSeries read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SeriesParseError(0, "cannot open '" + path + "'");
    return read_series(in);
}

namespace {
std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

void write_series(std::ostream& out, const ObjectSeries& series) {
    const auto& space = series.space();
    switch (space.kind()) {
        case SpaceKind::EuclideanVector:
            out << "vector " << space.element_size() << "\n";
            break;
        case SpaceKind::Matrix:
            out << "matrix " << space.rows() << " " << space.cols() << "\n";
            break;
        case SpaceKind::FunctionalGrid: {
            out << "function ";
            const auto& grid = space.grid();
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (i > 0) out << ",";
                out << format_double(grid[i]);
            }
            out << "\n";
            break;
        }
    }
    for (int t = 0; t < series.length(); ++t) {
        for (int j = 0; j < space.element_size(); ++j) {
            if (j > 0) out << ",";
            out << format_double(series.data()(t, j));
        }
        out << "\n";
    }
}

void write_series_file(const std::string& path, const ObjectSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_series(out, series);
}

} // namespace autohsic
