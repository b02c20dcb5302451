#include "phasecov/trajectory_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace phasecov {

std::string format_g17(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return std::string(buf.data());
}

void write_eigenvalue_csv(std::ostream& os, const EigenvalueTrajectory& traj) {
    os << "t,lambda1,lambda3,lambda_star\n";
    for (int i = 0; i < traj.size(); ++i) {
        os << format_g17(traj.grid.time(i)) << ',' << format_g17(traj.lambda1[i]) << ','
           << format_g17(traj.lambda3[i]) << ',' << format_g17(traj.lambda_star[i]) << '\n';
    }
}

void write_rate_csv(std::ostream& os, const RateTrajectory& rates) {
    os << "t,gamma_plus,gamma_minus,gamma3\n";
    for (int i = 0; i < rates.size(); ++i) {
        os << format_g17(rates.grid.time(i)) << ',' << format_g17(rates.gamma_plus[i]) << ','
           << format_g17(rates.gamma_minus[i]) << ',' << format_g17(rates.gamma3[i]) << '\n';
    }
}

namespace {

struct ParsedColumns {
    TimeGrid grid;
    std::array<std::vector<double>, 3> cols;
};

ParsedColumns read_columns(std::istream& is, const std::string& expected_header) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header) {
        throw std::invalid_argument("csv: expected header '" + expected_header + "', got '" +
                                    line + "'");
    }

    std::vector<double> t;
    ParsedColumns out;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::array<double, 4> vals{};
        char comma = ',';
        for (int k = 0; k < 4; ++k) {
            if (!(row >> vals[k]) || !std::isfinite(vals[k])) {
                throw std::invalid_argument("csv: malformed row '" + line + "'");
            }
            if (k < 3 && !(row >> comma && comma == ',')) {
                throw std::invalid_argument("csv: malformed row '" + line + "'");
            }
        }
        t.push_back(vals[0]);
        for (int k = 0; k < 3; ++k) out.cols[k].push_back(vals[k + 1]);
    }

    const int n = static_cast<int>(t.size());
    if (n < 3) throw std::invalid_argument("csv: need at least 3 rows");
    if (std::abs(t.front()) > 1e-12) throw std::invalid_argument("csv: time column must start at 0");
    const double t_max = t.back();
    if (!(t_max > 0.0)) throw std::invalid_argument("csv: final time must be positive");
    const double h = t_max / (n - 1);
    for (int i = 0; i < n; ++i) {
        if (std::abs(t[i] - i * h) > 1e-9 * std::max(1.0, t_max)) {
            throw std::invalid_argument("csv: time column must be uniformly spaced");
        }
    }
    out.grid = TimeGrid::uniform(t_max, n);
    return out;
}

}  // namespace

EigenvalueTrajectory read_eigenvalue_csv(std::istream& is) {
    ParsedColumns p = read_columns(is, "t,lambda1,lambda3,lambda_star");
    EigenvalueTrajectory traj;
    traj.grid = p.grid;
    traj.lambda1 = std::move(p.cols[0]);
    traj.lambda3 = std::move(p.cols[1]);
    traj.lambda_star = std::move(p.cols[2]);
    return traj;
}

RateTrajectory read_rate_csv(std::istream& is) {
    ParsedColumns p = read_columns(is, "t,gamma_plus,gamma_minus,gamma3");
    RateTrajectory rates;
    rates.grid = p.grid;
    rates.gamma_plus = std::move(p.cols[0]);
    rates.gamma_minus = std::move(p.cols[1]);
    rates.gamma3 = std::move(p.cols[2]);
    return rates;
}

}  // namespace phasecov
