#include "uppnc/rational.hpp"

#include <cctype>
#include <ostream>

namespace upp {

ExtendedRational::ExtendedRational(long long v) {
    q_ = mpz_class(std::to_string(v));
}

ExtendedRational::ExtendedRational(long num, long den) {
    if (den == 0) throw DomainError("zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

ExtendedRational ExtendedRational::plus_infinity() {
    ExtendedRational r;
    r.kind_ = Kind::PlusInf;
    return r;
}

ExtendedRational ExtendedRational::minus_infinity() {
    ExtendedRational r;
    r.kind_ = Kind::MinusInf;
    return r;
}

static bool valid_integer(std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

ExtendedRational ExtendedRational::parse(std::string_view text) {
    if (text == "+inf" || text == "inf") return plus_infinity();
    if (text == "-inf") return minus_infinity();
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
    if (!valid_integer(num, true) || (slash != std::string_view::npos && !valid_integer(den, false)))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    std::string n(num);
    if (!n.empty() && n[0] == '+') n.erase(0, 1);
    mpq_class q;
    q.get_num() = mpz_class(n, 10);
    q.get_den() = den.empty() ? mpz_class(1) : mpz_class(std::string(den), 10);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return ExtendedRational(std::move(q));
}

bool ExtendedRational::is_integer() const {
    return is_finite() && q_.get_den() == 1;
}

int ExtendedRational::sign() const {
    switch (kind_) {
        case Kind::PlusInf: return 1;
        case Kind::MinusInf: return -1;
        default: return sgn(q_);
    }
}

const mpq_class& ExtendedRational::q() const {
    if (!is_finite()) throw DomainError("finite value expected, got " + str());
    return q_;
}

ExtendedRational ExtendedRational::floor() const {
    if (!is_finite()) return *this;
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return ExtendedRational(r);
}

ExtendedRational ExtendedRational::ceil() const {
    if (!is_finite()) return *this;
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return ExtendedRational(r);
}

ExtendedRational ExtendedRational::abs() const {
    if (kind_ == Kind::MinusInf) return plus_infinity();
    if (!is_finite()) return *this;
    ExtendedRational r;
    r.q_ = ::abs(q_);
    return r;
}

std::string ExtendedRational::str() const {
    switch (kind_) {
        case Kind::PlusInf: return "+inf";
        case Kind::MinusInf: return "-inf";
        default: return q_.get_str();
    }
}

ExtendedRational ExtendedRational::operator-() const {
    ExtendedRational r;
    switch (kind_) {
        case Kind::PlusInf: r.kind_ = Kind::MinusInf; break;
        case Kind::MinusInf: r.kind_ = Kind::PlusInf; break;
        default: r.q_ = -q_;
    }
    return r;
}

ExtendedRational& ExtendedRational::operator+=(const ExtendedRational& o) {
    if (is_finite() && o.is_finite()) {
        q_ += o.q_;
        return *this;
    }
    if (is_finite()) {
        kind_ = o.kind_;
        q_ = 0;
        return *this;
    }
    if (o.is_finite() || kind_ == o.kind_) return *this;
    throw DomainError("+inf + -inf is undefined");
}

ExtendedRational& ExtendedRational::operator-=(const ExtendedRational& o) {
    if (is_finite() && o.is_finite()) {
        q_ -= o.q_;
        return *this;
    }
    return *this += -o;
}

ExtendedRational& ExtendedRational::operator*=(const ExtendedRational& o) {
    if (is_finite() && o.is_finite()) {
        q_ *= o.q_;
        return *this;
    }
    int s = sign() * o.sign();
    if (s == 0) throw DomainError("0 * inf is undefined");
    kind_ = s > 0 ? Kind::PlusInf : Kind::MinusInf;
    q_ = 0;
    return *this;
}

ExtendedRational& ExtendedRational::operator/=(const ExtendedRational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    if (is_finite() && o.is_finite()) {
        q_ /= o.q_;
        return *this;
    }
    if (is_finite()) {
        q_ = 0;
        return *this;
    }
    if (o.is_infinite()) throw DomainError("inf / inf is undefined");
    if (o.sign() < 0) kind_ = kind_ == Kind::PlusInf ? Kind::MinusInf : Kind::PlusInf;
    return *this;
}

bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.q_ == b.q_;
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
    auto rank = [](const ExtendedRational& x) {
        return x.is_minus_inf() ? 0 : x.is_finite() ? 1 : 2;
    };
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra <=> rb;
    if (ra != 1) return std::strong_ordering::equal;
    int c = cmp(a.q_, b.q_);
    return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const ExtendedRational& r) {
    return os << r.str();
}

Rat rat_lcm(const Rat& a, const Rat& b) {
    if (!a.is_finite() || !b.is_finite() || a.sign() <= 0 || b.sign() <= 0)
        throw DomainError("rat_lcm requires finite positive operands");
    const mpq_class& x = a.q();
    const mpq_class& y = b.q();
    mpz_class ps = x.get_num() * y.get_den();
    mpz_class rq = y.get_num() * x.get_den();
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), ps.get_mpz_t(), rq.get_mpz_t());
    mpq_class r(l, x.get_den() * y.get_den());
    return Rat(std::move(r));
}

const std::vector<std::uint64_t>& prime_table() {
    static const std::vector<std::uint64_t> table = [] {
        std::vector<std::uint64_t> primes;
        primes.reserve(1000);
        const std::size_t limit = 7920;  // the 1000th prime is 7919
        std::vector<bool> composite(limit, false);
        for (std::size_t i = 2; i < limit && primes.size() < 1000; ++i) {
            if (composite[i]) continue;
            primes.push_back(i);
            for (std::size_t j = i * i; j < limit; j += i) composite[j] = true;
        }
        return primes;
    }();
    return table;
}

std::vector<std::uint64_t> factorize(std::uint64_t n) {
    if (n == 0) throw DomainError("factorize(0) is undefined");
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : prime_table()) {
        if (p * p > n) break;
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    }
    for (std::uint64_t p = prime_table().back() + 2; p * p <= n; p += 2) {
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace upp
