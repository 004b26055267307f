#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace starspec {

// Gauss-Legendre rule on [-1,1]. Nodes by Newton iteration on P_n with the
// usual Chebyshev initial guess; symmetric pairs are filled from one half.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;

    explicit GaussLegendre(std::size_t n) : x(n), w(n) {
        if (n == 0) throw std::invalid_argument("GaussLegendre: n must be positive");
        const std::size_t m = (n + 1) / 2;
        for (std::size_t i = 0; i < m; ++i) {
            double t = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (std::size_t k = 2; k <= n; ++k) {
                    double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            x[i] = -t;
            x[n - 1 - i] = t;
            double wi = 2.0 / ((1.0 - t * t) * dp * dp);
            w[i] = wi;
            w[n - 1 - i] = wi;
        }
        if (n % 2 == 1) x[n / 2] = 0.0;
    }

    // Nodes/weights mapped to [a,b].
    void mapped(double a, double b, std::vector<double>& xs, std::vector<double>& ws) const {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        xs.resize(x.size());
        ws.resize(w.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            xs[i] = c + h * x[i];
            ws[i] = h * w[i];
        }
    }
};

}  // namespace starspec
