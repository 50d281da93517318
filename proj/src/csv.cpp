#include "mivt/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mivt/errors.hpp"

namespace mivt {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    return out;
}

std::string format_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", t);
    return buf;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return in;
}

}  // namespace

void write_counts_csv(const CountSeries& series, const std::string& path) {
    series.validate();
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << "t";
    for (const std::string& label : series.labels) out << "," << label;
    out << "\n";
    for (std::size_t k = 0; k < series.length(); ++k) {
        out << format_time(static_cast<double>(k + 1) * series.delta);
        for (std::size_t i = 0; i < series.dim(); ++i) out << "," << series.counts[i][k];
        out << "\n";
    }
    if (!out) throw std::invalid_argument("failed while writing: " + path);
}

CountSeries read_counts_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty counts file: " + path);
    std::vector<std::string> header = split(line, ',');
    if (header.size() < 2 || header[0] != "t")
        throw std::invalid_argument("counts CSV must start with a `t` column: " + path);

    CountSeries series;
    series.labels.assign(header.begin() + 1, header.end());
    series.counts.assign(series.labels.size(), {});
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != header.size())
            throw std::invalid_argument("ragged counts row in " + path);
        if (first) {
            series.delta = std::stod(fields[0]);
            first = false;
        }
        for (std::size_t i = 1; i < fields.size(); ++i) {
            std::size_t pos = 0;
            const long long v = std::stoll(fields[i], &pos);
            if (pos != fields[i].size())
                throw std::invalid_argument("non-integer count in " + path + ": " + fields[i]);
            series.counts[i - 1].push_back(v);
        }
    }
    series.validate();
    return series;
}

std::vector<double> read_events_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty events file: " + path);
    if (split(line, ',').front() != "timestamp")
        throw std::invalid_argument("events CSV needs a `timestamp` header: " + path);
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const double t = std::stod(line);
        if (!std::isfinite(t) || t < 0.0)
            throw std::invalid_argument("events must be finite non-negative seconds: " + path);
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

CountSeries bin_events(const std::vector<std::vector<double>>& events, double delta,
                       double start, double end, std::vector<std::string> labels) {
    if (events.empty()) throw std::invalid_argument("bin_events: no event streams");
    if (!(delta > 0.0)) throw std::invalid_argument("bin_events: delta must be positive");
    if (!(start < end)) throw std::invalid_argument("bin_events: start must precede end");
    const auto bins = static_cast<std::int64_t>(std::floor((end - start) / delta));
    if (bins < 1) throw std::invalid_argument("bin_events: window shorter than one bin");

    CountSeries series;
    series.delta = delta;
    series.counts.assign(events.size(), std::vector<std::int64_t>(static_cast<std::size_t>(bins), 0));
    for (std::size_t i = 0; i < events.size(); ++i) {
        for (double t : events[i]) {
            if (t < start || t >= end) continue;
            const auto k = static_cast<std::int64_t>(std::floor((t - start) / delta));
            if (k >= 0 && k < bins) ++series.counts[i][static_cast<std::size_t>(k)];
        }
    }
    if (labels.size() == events.size()) {
        series.labels = std::move(labels);
    } else {
        for (std::size_t i = 0; i < events.size(); ++i)
            series.labels.push_back("y" + std::to_string(i + 1));
    }
    series.validate();
    return series;
}

void write_acf_csv(const std::vector<double>& acf_values, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << "lag,r\n";
    for (std::size_t h = 0; h < acf_values.size(); ++h) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", acf_values[h]);
        out << (h + 1) << "," << buf << "\n";
    }
}

}  // namespace mivt
