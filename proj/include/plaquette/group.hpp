#pragma once

// Finite abelian groups Z_d1 x ... x Z_dm with exact element arithmetic.
// Elements are canonical residue tuples; an element also has a dense index
// (lexicographic rank) used by all tabulated maps.

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace plaq {

struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroupElement {
    std::vector<int> coords;

    bool operator==(const GroupElement& o) const { return coords == o.coords; }
    bool operator!=(const GroupElement& o) const { return coords != o.coords; }

    std::string str() const {
        if (coords.size() == 1) return std::to_string(coords[0]);
        std::string s = "(";
        for (size_t i = 0; i < coords.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(coords[i]);
        }
        return s + ")";
    }
};

class GroupSpec {
public:
    static constexpr int kDefaultOrderBound = 12;

    explicit GroupSpec(std::vector<int> factors, int order_bound = kDefaultOrderBound)
        : factors_(std::move(factors)) {
        if (factors_.empty()) throw std::invalid_argument("GroupSpec: no factors");
        order_ = 1;
        for (int d : factors_) {
            if (d < 2) throw std::invalid_argument("GroupSpec: every factor must be >= 2");
            order_ *= d;
        }
        if (order_ > order_bound)
            throw capacity_error("GroupSpec: order " + std::to_string(order_) +
                                 " exceeds bound " + std::to_string(order_bound));
    }

    // "Z2", "Z3", "Z2xZ2", ...
    static GroupSpec parse(const std::string& text, int order_bound = kDefaultOrderBound) {
        std::vector<int> factors;
        size_t pos = 0;
        while (pos < text.size()) {
            if (text[pos] != 'Z' && text[pos] != 'z')
                throw std::invalid_argument("GroupSpec: cannot parse '" + text + "'");
            ++pos;
            size_t end = pos;
            while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
            if (end == pos) throw std::invalid_argument("GroupSpec: cannot parse '" + text + "'");
            factors.push_back(std::stoi(text.substr(pos, end - pos)));
            pos = end;
            if (pos < text.size()) {
                if (text[pos] != 'x' && text[pos] != 'X')
                    throw std::invalid_argument("GroupSpec: cannot parse '" + text + "'");
                ++pos;
            }
        }
        return GroupSpec(std::move(factors), order_bound);
    }

    const std::vector<int>& factors() const { return factors_; }
    int order() const { return order_; }
    bool cyclic() const { return factors_.size() == 1; }

    bool operator==(const GroupSpec& o) const { return factors_ == o.factors_; }
    bool operator!=(const GroupSpec& o) const { return !(*this == o); }

    GroupElement identity() const { return GroupElement{std::vector<int>(factors_.size(), 0)}; }

    GroupElement element(const std::vector<int>& coords) const {
        if (coords.size() != factors_.size())
            throw std::invalid_argument("GroupElement: coordinate count mismatch");
        GroupElement e{coords};
        for (size_t i = 0; i < coords.size(); ++i) {
            e.coords[i] %= factors_[i];
            if (e.coords[i] < 0) e.coords[i] += factors_[i];
        }
        return e;
    }

    GroupElement mul(const GroupElement& a, const GroupElement& b) const {
        check(a);
        check(b);
        GroupElement r = a;
        for (size_t i = 0; i < factors_.size(); ++i)
            r.coords[i] = (a.coords[i] + b.coords[i]) % factors_[i];
        return r;
    }

    GroupElement inv(const GroupElement& a) const {
        check(a);
        GroupElement r = a;
        for (size_t i = 0; i < factors_.size(); ++i)
            r.coords[i] = (factors_[i] - a.coords[i]) % factors_[i];
        return r;
    }

    // lexicographic rank: first coordinate most significant
    int index_of(const GroupElement& a) const {
        check(a);
        int idx = 0;
        for (size_t i = 0; i < factors_.size(); ++i) idx = idx * factors_[i] + a.coords[i];
        return idx;
    }

    GroupElement element_at(int index) const {
        if (index < 0 || index >= order_) throw std::invalid_argument("GroupSpec: index out of range");
        std::vector<int> coords(factors_.size());
        for (size_t i = factors_.size(); i-- > 0;) {
            coords[i] = index % factors_[i];
            index /= factors_[i];
        }
        return GroupElement{std::move(coords)};
    }

    int mul_index(int a, int b) const {
        return index_of(mul(element_at(a), element_at(b)));
    }
    int inv_index(int a) const { return index_of(inv(element_at(a))); }

    std::vector<GroupElement> enumerate() const {
        std::vector<GroupElement> out;
        out.reserve(order_);
        for (int i = 0; i < order_; ++i) out.push_back(element_at(i));
        return out;
    }

    int element_order(const GroupElement& a) const {
        GroupElement x = a;
        int n = 1;
        while (x != identity()) {
            x = mul(x, a);
            ++n;
        }
        return n;
    }

    bool is_generator(const GroupElement& a) const { return element_order(a) == order_; }

private:
    void check(const GroupElement& a) const {
        if (a.coords.size() != factors_.size())
            throw std::invalid_argument("GroupElement belongs to a different GroupSpec");
        for (size_t i = 0; i < factors_.size(); ++i)
            if (a.coords[i] < 0 || a.coords[i] >= factors_[i])
                throw std::invalid_argument("GroupElement: coordinate not canonical");
    }

    std::vector<int> factors_;
    int order_;
};

}  // namespace plaq
