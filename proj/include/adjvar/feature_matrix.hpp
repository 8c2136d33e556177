#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace adjvar {

enum class ColumnKind { RawNumeric, FrequencyEncoded, NullIndicator };

inline std::string_view to_string(ColumnKind k) {
    switch (k) {
        case ColumnKind::RawNumeric: return "raw_numeric";
        case ColumnKind::FrequencyEncoded: return "frequency_encoded";
        case ColumnKind::NullIndicator: return "null_indicator";
    }
    return "";
}

inline constexpr double kNull = std::numeric_limits<double>::quiet_NaN();

inline bool is_null(double v) noexcept { return std::isnan(v); }

// Column-oriented numeric table; NaN marks a null cell.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    explicit FeatureMatrix(std::size_t rows) : rows_(rows) {}

    void add_column(std::string name, ColumnKind kind, std::vector<double> values) {
        if (values.size() != rows_) {
            throw std::invalid_argument("column '" + name + "' has " + std::to_string(values.size()) +
                                        " rows, expected " + std::to_string(rows_));
        }
        names_.push_back(std::move(name));
        kinds_.push_back(kind);
        columns_.push_back(std::move(values));
    }

    void append(const FeatureMatrix& other) {
        for (std::size_t c = 0; c < other.cols(); ++c) add_column(other.names_[c], other.kinds_[c], other.columns_[c]);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return columns_.size(); }
    const std::string& name(std::size_t c) const { return names_.at(c); }
    ColumnKind kind(std::size_t c) const { return kinds_.at(c); }
    const std::vector<double>& column(std::size_t c) const { return columns_.at(c); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::ptrdiff_t find(std::string_view name) const {
        for (std::size_t c = 0; c < names_.size(); ++c)
            if (names_[c] == name) return static_cast<std::ptrdiff_t>(c);
        return -1;
    }

    FeatureMatrix select_rows(const std::vector<std::size_t>& rows) const {
        FeatureMatrix out(rows.size());
        for (std::size_t c = 0; c < cols(); ++c) {
            std::vector<double> v;
            v.reserve(rows.size());
            for (auto r : rows) v.push_back(columns_[c][r]);
            out.add_column(names_[c], kinds_[c], std::move(v));
        }
        return out;
    }

    // Dense copy with nulls replaced by `fill`.
    Eigen::MatrixXd to_dense(double fill = -1.0) const {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols()));
        for (std::size_t c = 0; c < cols(); ++c)
            for (std::size_t r = 0; r < rows_; ++r) {
                const double v = columns_[c][r];
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = is_null(v) ? fill : v;
            }
        return m;
    }

    friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
        if (a.rows_ != b.rows_ || a.names_ != b.names_ || a.kinds_ != b.kinds_) return false;
        for (std::size_t c = 0; c < a.cols(); ++c)
            for (std::size_t r = 0; r < a.rows_; ++r) {
                const double x = a.columns_[c][r], y = b.columns_[c][r];
                if (!(x == y || (is_null(x) && is_null(y)))) return false;
            }
        return true;
    }

private:
    std::size_t rows_ = 0;
    std::vector<std::string> names_;
    std::vector<ColumnKind> kinds_;
    std::vector<std::vector<double>> columns_;
};

}  // namespace adjvar
