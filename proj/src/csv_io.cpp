#include "sever/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace sever {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t line) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line) + ": non-numeric cell '" +
                         std::string(cell) + "'");
    }
    return v;
}

std::vector<double> parse_row(std::string_view text, std::size_t line) {
    std::vector<double> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        cells.push_back(parse_cell(text.substr(start, comma - start), line));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    return in;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
    Matrix x;
    Vec y;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = parse_row(line, line_no);
        if (cells.size() < 2) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": missing label column (need at least one feature and a label)");
        }
        if (width == 0) {
            width = cells.size();
            x = Matrix(0, width - 1);
        } else if (cells.size() != width) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(width) + " cells, found " +
                             std::to_string(cells.size()));
        }
        y.push_back(cells.back());
        cells.pop_back();
        x.append_row(cells);
    }
    if (y.empty()) {
        throw ParseError("no rows");
    }
    return {std::move(x), std::move(y)};
}

Dataset load_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return read_dataset_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

TrainTestSplit split_dataset(const Dataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error("split_dataset: test_fraction must lie in (0, 1)");
    }
    const std::size_t n = data.size();
    if (n < 2) {
        throw Error("split_dataset: need at least two samples");
    }
    auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> test_ids(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::size_t> train_ids(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(test_ids.begin(), test_ids.end());
    std::sort(train_ids.begin(), train_ids.end());
    return {data.subset(train_ids), data.subset(test_ids)};
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto s = data.sample(i);
        for (double v : s.x) {
            out << format_double(v) << ',';
        }
        out << format_double(s.y) << '\n';
    }
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_dataset_csv(out, data);
}

void save_provenance(const Provenance& prov, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "id,is_outlier\n";
    for (std::size_t i = 0; i < prov.is_outlier.size(); ++i) {
        out << i << ',' << static_cast<int>(prov.is_outlier[i] != 0) << '\n';
    }
}

Provenance load_provenance(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || trim(line) != "id,is_outlier") {
        throw ParseError(path.string() + ": line 1: expected header 'id,is_outlier'");
    }
    ++line_no;
    Provenance prov;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = parse_row(line, line_no);
        if (cells.size() != 2 || cells[0] != static_cast<double>(prov.is_outlier.size()) ||
            (cells[1] != 0.0 && cells[1] != 1.0)) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             ": expected '<next id>,<0|1>'");
        }
        prov.is_outlier.push_back(cells[1] != 0.0 ? 1 : 0);
    }
    return prov;
}

void write_scores_header(std::ostream& out) { out << "round,id,score,is_outlier\n"; }

void write_scores(std::ostream& out, std::size_t round, const ScoreReport& report,
                  const Provenance* prov) {
    for (std::size_t j = 0; j < report.indices.size(); ++j) {
        const auto id = report.indices[j];
        const int flag =
            prov != nullptr && id < prov->is_outlier.size() && prov->is_outlier[id] != 0 ? 1 : 0;
        out << round << ',' << id << ',' << format_double(report.scores[j]) << ',' << flag << '\n';
    }
}

void save_scores(const std::vector<ScoreReport>& rounds, const Provenance* prov,
                 const std::filesystem::path& path) {
    auto out = open_out(path);
    write_scores_header(out);
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        write_scores(out, r + 1, rounds[r], prov);
    }
}

}  // namespace sever
