#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <stdexcept>

namespace qan {

// Exact rational arithmetic on int64. Areas and genera in this project stay
// tiny (reduced areas <= 16, denominators divide lcm of periods <= 64), but
// every comparison that feeds a minimality certificate must be exact, so no
// floating point anywhere.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }
    bool operator<=(const Rational& o) const { return num_ * o.den_ <= o.num_ * den_; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    bool is_integer() const { return den_ == 1; }
    long long as_integer() const {
        if (den_ != 1) throw std::domain_error("rational is not an integer: " + str());
        return num_;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Parses "p", "p/q".
    static Rational parse(const std::string& s);

private:
    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    long long num_;
    long long den_;
};

} // namespace qan
