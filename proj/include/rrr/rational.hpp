#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rrr {

// Exact rational on int64 with 128-bit intermediates. The relaxation
// evaluation path must certify values like 1/3 exactly, so no floating point.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(std::int64_t v) : num_(v), den_(1) {}  // NOLINT: implicit by design
    Rat(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        num_ = g ? num / g : num;
        den_ = g ? den / g : den;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_integer() const { return den_ == 1; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rat operator-() const { return Rat(-num_, den_); }
    Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
    Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    using i128 = __int128;

    static Rat make(i128 num, i128 den) {
        if (den < 0) { num = -num; den = -den; }
        const i128 a = num < 0 ? -num : num;
        i128 g = gcd128(a, den);
        if (g == 0) g = 1;
        num /= g;
        den /= g;
        if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Rat r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }
    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { const i128 t = a % b; a = b; b = t; }
        return a;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rat pos_part(const Rat& r) { return r > Rat(0) ? r : Rat(0); }

}  // namespace rrr
