#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>

namespace stripforge {

/**
 * Truncated derivative jet of a scalar function of one variable.
 *
 * Stores f, f', ..., f^(order) at a single point. Arithmetic follows the
 * Leibniz rule and keeps the smaller order of the two operands; constants
 * carry the full order. derivative() shifts the jet and drops one order, so
 * nested expressions such as (κ'/κ·2λ(1+λ²))'' can be written exactly as
 * they read and evaluated nodewise.
 */
class Jet {
public:
    static constexpr int kMaxOrder = 3;

    Jet() = default;

    /// Constant: all derivatives zero, full order.
    Jet(double value) { d_[0] = value; } // NOLINT(google-explicit-constructor)

    Jet(std::initializer_list<double> derivs)
    {
        assert(derivs.size() >= 1 && derivs.size() <= kMaxOrder + 1);
        std::copy(derivs.begin(), derivs.end(), d_.begin());
        order_ = static_cast<int>(derivs.size()) - 1;
    }

    static Jet from_array(const std::array<double, kMaxOrder + 1>& d, int order)
    {
        Jet j;
        j.d_ = d;
        j.order_ = order;
        for (int k = order + 1; k <= kMaxOrder; ++k) j.d_[k] = 0.0;
        return j;
    }

    int order() const { return order_; }
    double value() const { return d_[0]; }
    double operator[](int k) const { return d_[k]; }
    const std::array<double, kMaxOrder + 1>& data() const { return d_; }

    Jet derivative() const
    {
        assert(order_ >= 1);
        Jet r;
        r.order_ = order_ - 1;
        for (int k = 0; k < order_; ++k) r.d_[k] = d_[k + 1];
        return r;
    }

    Jet truncated(int order) const { return from_array(d_, std::min(order, order_)); }

    Jet operator-() const
    {
        Jet r = *this;
        for (auto& x : r.d_) x = -x;
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b)
    {
        Jet r;
        r.order_ = std::min(a.order_, b.order_);
        for (int k = 0; k <= r.order_; ++k) r.d_[k] = a.d_[k] + b.d_[k];
        return r;
    }

    friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        Jet r;
        r.order_ = std::min(a.order_, b.order_);
        for (int k = 0; k <= r.order_; ++k) {
            double acc = 0.0;
            for (int j = 0; j <= k; ++j) acc += binomial(k, j) * a.d_[j] * b.d_[k - j];
            r.d_[k] = acc;
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b)
    {
        Jet q;
        q.order_ = std::min(a.order_, b.order_);
        for (int k = 0; k <= q.order_; ++k) {
            double acc = a.d_[k];
            for (int j = 1; j <= k; ++j) acc -= binomial(k, j) * b.d_[j] * q.d_[k - j];
            q.d_[k] = acc / b.d_[0];
        }
        return q;
    }

    Jet& operator+=(const Jet& o) { return *this = *this + o; }
    Jet& operator-=(const Jet& o) { return *this = *this - o; }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    friend Jet sqrt(const Jet& f)
    {
        Jet r;
        r.order_ = f.order_;
        r.d_[0] = std::sqrt(f.d_[0]);
        for (int k = 1; k <= r.order_; ++k) {
            double acc = f.d_[k];
            for (int j = 1; j < k; ++j) acc -= binomial(k, j) * r.d_[j] * r.d_[k - j];
            r.d_[k] = acc / (2.0 * r.d_[0]);
        }
        return r;
    }

    friend Jet exp(const Jet& f)
    {
        // y' = f' y, expanded with Leibniz.
        Jet y;
        y.order_ = f.order_;
        y.d_[0] = std::exp(f.d_[0]);
        for (int k = 1; k <= y.order_; ++k) {
            double acc = 0.0;
            for (int j = 1; j <= k; ++j) acc += binomial(k - 1, j - 1) * f.d_[j] * y.d_[k - j];
            y.d_[k] = acc;
        }
        return y;
    }

    friend Jet square(const Jet& f) { return f * f; }

private:
    static constexpr double binomial(int n, int k)
    {
        constexpr double table[kMaxOrder + 1][kMaxOrder + 1] = {
            {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
        return table[n][k];
    }

    std::array<double, kMaxOrder + 1> d_{};
    int order_ = kMaxOrder;
};

/**
 * Re-express a jet taken in a parameter t as a jet in a new parameter s with
 * ds/dt = 1/rate, i.e. d/ds = rate · d/dt. Requires rate to carry one order
 * less than f; the result has f's order.
 */
inline Jet reparametrize(const Jet& f, const Jet& rate)
{
    std::array<double, Jet::kMaxOrder + 1> out{};
    out[0] = f.value();
    Jet current = f;
    for (int k = 1; k <= f.order(); ++k) {
        current = rate * current.derivative();
        out[k] = current.value();
    }
    return Jet::from_array(out, f.order());
}

} // namespace stripforge
