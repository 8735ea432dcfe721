#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hybridsched {

/// Dense square matrix of nonnegative reals, row-major. Used for traffic
/// demand, residue capacity and matching weights alike.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n, double value = 0.0) : n_(n), a_(static_cast<std::size_t>(n) * n, value) {
        if (n < 0) throw std::invalid_argument("Matrix: negative size");
    }

    int size() const { return n_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    std::span<const double> row(int i) const {
        return {a_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }

    const std::vector<double>& data() const { return a_; }

    bool operator==(const Matrix& other) const = default;

private:
    int n_ = 0;
    std::vector<double> a_;
};

inline std::vector<double> row_sums(const Matrix& m) {
    std::vector<double> sums(m.size(), 0.0);
    for (int i = 0; i < m.size(); ++i) {
        double s = 0.0;
        for (double v : m.row(i)) s += v;
        sums[i] = s;
    }
    return sums;
}

inline std::vector<double> col_sums(const Matrix& m) {
    std::vector<double> sums(m.size(), 0.0);
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) sums[j] += m(i, j);
    return sums;
}

/// Largest row or column sum; the remaining-work bound the packet switch
/// must cover.
inline double max_load(const Matrix& m) {
    double best = 0.0;
    for (double s : row_sums(m)) best = std::max(best, s);
    for (double s : col_sums(m)) best = std::max(best, s);
    return best;
}

inline double l1_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v;
    return s;
}

inline double max_entry(const Matrix& m) {
    double best = 0.0;
    for (double v : m.data()) best = std::max(best, v);
    return best;
}

inline bool is_nonnegative(const Matrix& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](double v) { return v >= 0.0; });
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Matrix+: size mismatch");
    Matrix out(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

}  // namespace hybridsched
