#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace starspec {

/// Cubic Hermite interpolant on a uniform grid, built from value and slope
/// tables. Evaluation reproduces the tables exactly at the nodes, and the
/// derivative is the analytic derivative of the piecewise cubic.
class UniformHermite {
public:
    UniformHermite() = default;

    UniformHermite(double x0, double h, std::vector<double> f, std::vector<double> df)
        : x0_(x0), h_(h), f_(std::move(f)), df_(std::move(df)) {
        if (f_.size() != df_.size() || f_.size() < 2)
            throw std::invalid_argument("UniformHermite: bad table sizes");
        if (h_ <= 0.0) throw std::invalid_argument("UniformHermite: step must be positive");
    }

    double xmin() const { return x0_; }
    double xmax() const { return x0_ + h_ * static_cast<double>(f_.size() - 1); }

    double value(double x) const {
        std::size_t i;
        double t;
        locate(x, i, t);
        const double t2 = t * t, t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * f_[i] + (t3 - 2.0 * t2 + t) * h_ * df_[i] +
               (-2.0 * t3 + 3.0 * t2) * f_[i + 1] + (t3 - t2) * h_ * df_[i + 1];
    }

    double deriv(double x) const {
        std::size_t i;
        double t;
        locate(x, i, t);
        const double t2 = t * t;
        return ((6.0 * t2 - 6.0 * t) * f_[i] + (3.0 * t2 - 4.0 * t + 1.0) * h_ * df_[i] +
                (-6.0 * t2 + 6.0 * t) * f_[i + 1] + (3.0 * t2 - 2.0 * t) * h_ * df_[i + 1]) /
               h_;
    }

private:
    void locate(double x, std::size_t& i, double& t) const {
        const double s = (x - x0_) / h_;
        double fi = std::floor(s);
        if (fi < 0.0) fi = 0.0;
        const double imax = static_cast<double>(f_.size() - 2);
        if (fi > imax) fi = imax;
        i = static_cast<std::size_t>(fi);
        t = s - fi;
        // Exact node hit: avoid t=1 rounding on the right element edge.
        if (t >= 1.0 && i + 2 < f_.size()) {
            ++i;
            t -= 1.0;
        }
    }

    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> f_;
    std::vector<double> df_;
};

/// Complete cubic spline on a uniform grid (end slopes prescribed).
/// Used as an independent derivative route when validating tables: the
/// spline never sees the stored slope tables except at the two ends.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(double x0, double h, const std::vector<double>& f, double d_left, double d_right)
        : x0_(x0), h_(h), f_(f) {
        const std::size_t n = f.size();
        if (n < 3) throw std::invalid_argument("CubicSpline: need at least 3 points");
        // Solve the tridiagonal system for node slopes m_i (complete spline).
        std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), rhs(n, 0.0);
        b[0] = 1.0;
        rhs[0] = d_left;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            a[i] = 1.0;
            b[i] = 4.0;
            c[i] = 1.0;
            rhs[i] = 3.0 * (f[i + 1] - f[i - 1]) / h;
        }
        b[n - 1] = 1.0;
        rhs[n - 1] = d_right;
        m_.assign(n, 0.0);
        // Thomas algorithm.
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (rhs[i] - c[i] * m_[i + 1]) / b[i];
    }

    double deriv_at_node(std::size_t i) const { return m_.at(i); }

private:
    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> f_;
    std::vector<double> m_;
};

}  // namespace starspec
