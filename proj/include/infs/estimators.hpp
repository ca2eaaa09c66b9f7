#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "infs/dataset.hpp"
#include "infs/errors.hpp"
#include "infs/parallel.hpp"

namespace infs {

constexpr int kDefaultBins = 10;

// Equal-width binning on [0,1]: x -> floor(x * bins), top edge clamped.
inline std::vector<int> discretize(const std::vector<double>& column, int bins) {
    if (bins < 2) throw ValidationError("discretize: bins must be >= 2");
    std::vector<int> out;
    out.reserve(column.size());
    for (double v : column) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError("discretize: value " + std::to_string(v) +
                                  " outside [0,1]; normalize first");
        }
        int b = static_cast<int>(std::floor(v * bins));
        out.push_back(std::min(b, bins - 1));
    }
    return out;
}

struct JointHistogram {
    std::vector<std::size_t> counts;  // row-major, row_bins x col_bins
    int row_bins = 0;
    int col_bins = 0;
    std::size_t total = 0;

    std::size_t at(int m, int n) const {
        return counts[static_cast<std::size_t>(m) * col_bins + n];
    }

    std::size_t row_marginal(int m) const {
        std::size_t s = 0;
        for (int n = 0; n < col_bins; ++n) s += at(m, n);
        return s;
    }

    std::size_t col_marginal(int n) const {
        std::size_t s = 0;
        for (int m = 0; m < row_bins; ++m) s += at(m, n);
        return s;
    }

    static JointHistogram build(const std::vector<int>& x, const std::vector<int>& y) {
        if (x.size() != y.size()) throw ValidationError("joint histogram: length mismatch");
        if (x.empty()) throw ValidationError("joint histogram: empty input");
        JointHistogram h;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < 0 || y[i] < 0) throw ValidationError("joint histogram: negative symbol");
            h.row_bins = std::max(h.row_bins, x[i] + 1);
            h.col_bins = std::max(h.col_bins, y[i] + 1);
        }
        h.counts.assign(static_cast<std::size_t>(h.row_bins) * h.col_bins, 0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            ++h.counts[static_cast<std::size_t>(x[i]) * h.col_bins + y[i]];
        }
        h.total = x.size();
        return h;
    }
};

// I(X;Y) in bits from empirical frequencies, summed over cells with
// positive joint mass. Rounding can leave a tiny negative residue; that is
// clamped to zero.
inline double mutual_information(const std::vector<int>& x, const std::vector<int>& y) {
    JointHistogram h = JointHistogram::build(x, y);
    double total = static_cast<double>(h.total);
    std::vector<double> row_p(h.row_bins), col_p(h.col_bins);
    for (int m = 0; m < h.row_bins; ++m) row_p[m] = h.row_marginal(m) / total;
    for (int n = 0; n < h.col_bins; ++n) col_p[n] = h.col_marginal(n) / total;

    double info = 0.0;
    for (int m = 0; m < h.row_bins; ++m) {
        for (int n = 0; n < h.col_bins; ++n) {
            std::size_t c = h.at(m, n);
            if (c == 0) continue;
            double joint = c / total;
            info += joint * std::log2(joint / (row_p[m] * col_p[n]));
        }
    }
    return info < 0.0 ? 0.0 : info;
}

inline double entropy(const std::vector<int>& x) { return mutual_information(x, x); }

// Pearson's coefficient with sample means. Zero variance on either side has
// no defined linear relation and returns 0.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
    if (x.size() < 2) throw ValidationError("pearson: need at least 2 samples");
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

// d x d table of absolute Pearson coefficients. Symmetric by construction,
// diagonal exactly 1.
struct CorrelationMatrix {
    std::vector<double> values;
    std::vector<std::string> feature_names;
    std::size_t dim = 0;

    double at(std::size_t i, std::size_t j) const { return values[i * dim + j]; }

    static CorrelationMatrix build(const Dataset& d) {
        CorrelationMatrix m;
        m.dim = d.n_cols();
        m.feature_names = d.feature_names();
        m.values.assign(m.dim * m.dim, 0.0);
        parallel_for(m.dim, [&](std::size_t i) {
            m.values[i * m.dim + i] = 1.0;
            for (std::size_t j = i + 1; j < m.dim; ++j) {
                double r = std::abs(pearson(d.columns[i].values, d.columns[j].values));
                m.values[i * m.dim + j] = r;
                m.values[j * m.dim + i] = r;
            }
        });
        return m;
    }
};

enum class AvgCorrDivisor { full_dimension, dimension_minus_one };

inline std::string to_string(AvgCorrDivisor divisor) {
    return divisor == AvgCorrDivisor::full_dimension ? "d" : "d-1";
}

inline AvgCorrDivisor avg_corr_divisor_from_string(const std::string& s) {
    if (s == "d") return AvgCorrDivisor::full_dimension;
    if (s == "d-1") return AvgCorrDivisor::dimension_minus_one;
    throw ValidationError("avg_corr_divisor must be \"d\" or \"d-1\", got \"" + s + "\"");
}

// Average absolute correlation of feature i against all others. The sum has
// d-1 terms but the default divisor is the full dimension d, exactly as the
// score definition prints it.
inline double avg_abs_corr(const CorrelationMatrix& m, std::size_t i,
                           AvgCorrDivisor divisor = AvgCorrDivisor::full_dimension) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m.dim; ++j) {
        if (j != i) sum += m.at(i, j);
    }
    double denom = divisor == AvgCorrDivisor::full_dimension
                       ? static_cast<double>(m.dim)
                       : static_cast<double>(m.dim - 1);
    return sum / denom;
}

}  // namespace infs
