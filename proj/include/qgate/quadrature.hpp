#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "qgate/errors.hpp"

namespace qgate {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], found by
// Newton iteration on the Legendre recurrence.
struct GaussLegendreRule {
    std::vector<double> node;
    std::vector<double> weight;

    explicit GaussLegendreRule(int n) : node(n), weight(n) {
        const double pi = 3.14159265358979323846;
        const int m = (n + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
                }
                pp = n * (z * p1 - p2) / (z * z - 1.0);
                const double z1 = z;
                z = z1 - p1 / pp;
                if (std::abs(z - z1) <= 1e-15) break;
            }
            node[i] = -z;
            node[n - 1 - i] = z;
            weight[i] = weight[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }
};

inline const GaussLegendreRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GaussLegendreRule(n)).first;
    return it->second; // std::map references stay valid under later inserts
}

inline constexpr int kDefaultQuadOrder = 16;
inline constexpr int kDefaultMinPanels = 256;
inline constexpr int kMaxPanels = 1 << 21;

// Composite Gauss-Legendre over `panels` equal panels of [a, b].
// Panel sums are accumulated with Kahan compensation so panel counts in the
// 10^5 range do not erode the 1e-12 relative targets used downstream.
template <typename Scalar, typename F>
Scalar integrate_panels(F&& f, Scalar a, Scalar b, int panels, int order = kDefaultQuadOrder) {
    if (a == b) return Scalar(0);
    const GaussLegendreRule& rule = gauss_legendre(order);
    const Scalar h = (b - a) / Scalar(panels);
    Scalar sum = 0, comp = 0;
    for (int p = 0; p < panels; ++p) {
        const Scalar x0 = a + h * Scalar(p);
        Scalar panel = 0;
        for (int j = 0; j < order; ++j) {
            const Scalar x = x0 + h * Scalar(0.5) * (Scalar(1) + Scalar(rule.node[j]));
            panel += Scalar(rule.weight[j]) * f(x);
        }
        panel *= h / Scalar(2);
        const Scalar y = panel - comp;
        const Scalar t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// Panel-doubling driver: doubles the panel count until successive values
// agree to rel_tol (with abs_tol as a floor for integrals vanishing by
// parity). Panel counts stay even so 0 is always a panel boundary on
// symmetric windows (keeps kinked envelopes inside single panels).
template <typename Scalar, typename F>
Scalar integrate(F&& f, Scalar a, Scalar b, Scalar rel_tol = Scalar(1e-12),
                 Scalar abs_tol = Scalar(1e-15), int min_panels = kDefaultMinPanels,
                 int order = kDefaultQuadOrder) {
    Scalar prev = integrate_panels(f, a, b, min_panels, order);
    for (int n = 2 * min_panels; n <= kMaxPanels; n *= 2) {
        const Scalar cur = integrate_panels(f, a, b, n, order);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + abs_tol) return cur;
        prev = cur;
    }
    throw IntegrationError("integrate: panel doubling did not converge");
}

// Running integral S(u) = int_a^u f over a fixed panel grid: full panels are
// prefix sums, the trailing partial panel is integrated on demand, so each
// evaluation costs one quadrature panel.
template <typename Scalar, typename F>
class CumulativeIntegral {
public:
    CumulativeIntegral(F f, Scalar a, Scalar b, int panels, int order = kDefaultQuadOrder)
        : f_(std::move(f)), a_(a), h_((b - a) / Scalar(panels)), panels_(panels), order_(order),
          prefix_(static_cast<std::size_t>(panels) + 1, Scalar(0)) {
        Scalar comp = 0;
        for (int p = 0; p < panels; ++p) {
            const Scalar piece = integrate_panels(f_, a_ + h_ * Scalar(p), a_ + h_ * Scalar(p + 1), 1, order_);
            const Scalar y = piece - comp;
            const Scalar t = prefix_[p] + y;
            comp = (t - prefix_[p]) - y;
            prefix_[p + 1] = t;
        }
    }

    Scalar operator()(Scalar u) const {
        if (u <= a_) return Scalar(0);
        const Scalar end = a_ + h_ * Scalar(panels_);
        if (u >= end) return prefix_[panels_];
        int k = static_cast<int>((u - a_) / h_);
        if (k >= panels_) k = panels_ - 1;
        const Scalar x0 = a_ + h_ * Scalar(k);
        return prefix_[k] + integrate_panels(f_, x0, u, 1, order_);
    }

    Scalar total() const { return prefix_[panels_]; }

private:
    F f_;
    Scalar a_, h_;
    int panels_, order_;
    std::vector<Scalar> prefix_;
};

// Least-squares slope of y against x (used for log-log scaling exponents).
template <typename Scalar>
Scalar fit_slope(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need two or more paired samples");
    Scalar mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= Scalar(x.size());
    my /= Scalar(y.size());
    Scalar sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace qgate
