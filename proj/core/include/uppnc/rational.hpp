#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "uppnc/errors.hpp"

namespace upp {

// Exact rational number extended with +inf and -inf.
// Finite values are kept in lowest terms with a positive denominator.
class ExtendedRational {
public:
    ExtendedRational() = default;
    ExtendedRational(int v) : q_(v) {}
    ExtendedRational(long v) : q_(v) {}
    ExtendedRational(long long v);
    ExtendedRational(long num, long den);
    explicit ExtendedRational(const mpz_class& v) : q_(v) {}
    explicit ExtendedRational(const mpq_class& v) : q_(v) { q_.canonicalize(); }
    explicit ExtendedRational(mpq_class&& v) : q_(std::move(v)) { q_.canonicalize(); }

    static ExtendedRational plus_infinity();
    static ExtendedRational minus_infinity();
    static ExtendedRational parse(std::string_view text);

    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_infinite() const { return kind_ != Kind::Finite; }
    bool is_plus_inf() const { return kind_ == Kind::PlusInf; }
    bool is_minus_inf() const { return kind_ == Kind::MinusInf; }
    bool is_zero() const { return is_finite() && sgn(q_) == 0; }
    bool is_integer() const;
    int sign() const;

    // Finite payload; throws DomainError on infinities.
    const mpq_class& q() const;
    mpz_class numerator() const { return q().get_num(); }
    mpz_class denominator() const { return q().get_den(); }

    ExtendedRational floor() const;
    ExtendedRational ceil() const;
    ExtendedRational abs() const;

    std::string str() const;

    ExtendedRational operator-() const;
    ExtendedRational& operator+=(const ExtendedRational& o);
    ExtendedRational& operator-=(const ExtendedRational& o);
    ExtendedRational& operator*=(const ExtendedRational& o);
    ExtendedRational& operator/=(const ExtendedRational& o);

    friend ExtendedRational operator+(ExtendedRational a, const ExtendedRational& b) { return a += b; }
    friend ExtendedRational operator-(ExtendedRational a, const ExtendedRational& b) { return a -= b; }
    friend ExtendedRational operator*(ExtendedRational a, const ExtendedRational& b) { return a *= b; }
    friend ExtendedRational operator/(ExtendedRational a, const ExtendedRational& b) { return a /= b; }

    friend bool operator==(const ExtendedRational& a, const ExtendedRational& b);
    friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b);

private:
    enum class Kind : std::uint8_t { Finite, PlusInf, MinusInf };
    Kind kind_ = Kind::Finite;
    mpq_class q_;
};

using Rat = ExtendedRational;

std::ostream& operator<<(std::ostream& os, const ExtendedRational& r);

inline const Rat& rmin(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rmax(const Rat& a, const Rat& b) { return a < b ? b : a; }

// Smallest positive rational that is an integer multiple of both a and b.
Rat rat_lcm(const Rat& a, const Rat& b);

// Prime factorization by trial division over a table of the first 1000
// primes, continuing with odd divisors if a cofactor remains.
std::vector<std::uint64_t> factorize(std::uint64_t n);

// The first 1000 primes.
const std::vector<std::uint64_t>& prime_table();

}  // namespace upp
