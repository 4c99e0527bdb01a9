#pragma once

// Exact U(1) phases restricted to roots of unity, stored as integer
// exponents num/order meaning exp(2*pi*i*num/order). All cocycle and
// symmetry phase arithmetic stays exact; conversion to complex happens
// only at the state-vector boundary.

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace plaq {

class PhaseExponent {
public:
    PhaseExponent() : num_(0), order_(1) {}

    PhaseExponent(std::int64_t num, std::int64_t order) {
        if (order <= 0) throw std::invalid_argument("PhaseExponent: order must be positive");
        num %= order;
        if (num < 0) num += order;
        // canonical reduced form, so 2/4 and 1/2 compare equal
        std::int64_t g = std::gcd(num, order);
        if (g == 0) g = order;  // num == 0
        num_ = num / g;
        order_ = order / g;
        if (num_ == 0) order_ = 1;
    }

    static PhaseExponent one() { return PhaseExponent(); }

    std::int64_t num() const { return num_; }
    std::int64_t order() const { return order_; }

    // numerator rescaled to an explicit root-of-unity order
    std::int64_t num_at(std::int64_t order) const {
        if (order % order_ != 0)
            throw std::invalid_argument("PhaseExponent: order " + std::to_string(order_) +
                                        " does not divide " + std::to_string(order));
        return num_ * (order / order_);
    }

    bool is_one() const { return num_ == 0; }

    PhaseExponent operator*(const PhaseExponent& o) const {
        std::int64_t l = std::lcm(order_, o.order_);
        return PhaseExponent(num_ * (l / order_) + o.num_ * (l / o.order_), l);
    }
    PhaseExponent& operator*=(const PhaseExponent& o) { return *this = *this * o; }

    PhaseExponent inverse() const { return PhaseExponent(-num_, order_); }

    PhaseExponent pow(std::int64_t k) const {
        std::int64_t e = (num_ * (k % order_)) % order_;
        return PhaseExponent(e, order_);
    }

    bool operator==(const PhaseExponent& o) const { return num_ == o.num_ && order_ == o.order_; }
    bool operator!=(const PhaseExponent& o) const { return !(*this == o); }

    std::complex<double> value() const {
        const double theta = 2.0 * 3.14159265358979323846 * static_cast<double>(num_) /
                             static_cast<double>(order_);
        return {std::cos(theta), std::sin(theta)};
    }

    std::string str() const { return std::to_string(num_) + "/" + std::to_string(order_); }

private:
    std::int64_t num_;
    std::int64_t order_;
};

}  // namespace plaq
