#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace hopfcyc {

// Exact scalars.  Every value in the library is an element of ℚ or of a
// prime field 𝔽_p; there is no floating point anywhere in the system.

/// Arbitrary-precision rational number (GMP-backed).
class Rational {
    mpq_class v_;

public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    explicit Rational(mpq_class v) : v_(std::move(v)) {}

    /// Accepts "n", "-n" or "p/q" with nonzero q.
    static Rational parse(std::string_view s) {
        if (!looks_numeric(s)) throw ParseError("not a rational literal: '" + std::string(s) + "'");
        mpq_class q;
        if (q.set_str(std::string(s), 10) != 0)
            throw ParseError("not a rational literal: '" + std::string(s) + "'");
        if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
        q.canonicalize();
        return Rational(std::move(q));
    }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw Error("division by zero");
        return Rational(mpq_class(v_ / o.v_));
    }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

    Rational inv() const {
        if (is_zero()) throw Error("inverse of zero");
        return Rational(mpq_class(1 / v_));
    }

    bool operator==(const Rational& o) const { return v_ == o.v_; }
    bool operator!=(const Rational& o) const { return v_ != o.v_; }

    std::string str() const { return v_.get_str(); }
    static std::string field_name() { return "Q"; }

private:
    static bool looks_numeric(std::string_view s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        bool digit = false, slash = false;
        for (; i < s.size(); ++i) {
            if (s[i] >= '0' && s[i] <= '9') { digit = true; continue; }
            if (s[i] == '/' && !slash && digit) { slash = true; digit = false; continue; }
            return false;
        }
        return digit;
    }
};

/// Prime field 𝔽_p with a process-wide modulus, set once before any
/// computation.  Values are stored reduced to [0, p).
class Fp {
    std::uint64_t v_ = 0;

    static std::uint64_t& modulus_ref() {
        static std::uint64_t p = 0;
        return p;
    }

public:
    static void set_modulus(std::uint64_t p) {
        if (p < 2 || !is_prime(p)) throw Error("F_p modulus must be prime, got " + std::to_string(p));
        if (p >= (std::uint64_t(1) << 31)) throw Error("F_p modulus too large");
        modulus_ref() = p;
    }
    static std::uint64_t modulus() {
        if (modulus_ref() == 0) throw Error("F_p modulus not set");
        return modulus_ref();
    }

    Fp() = default;
    Fp(long n) {
        const std::int64_t p = static_cast<std::int64_t>(modulus());
        std::int64_t r = n % p;
        if (r < 0) r += p;
        v_ = static_cast<std::uint64_t>(r);
    }

    static Fp from_raw(std::uint64_t r) {
        Fp x;
        x.v_ = r % modulus();
        return x;
    }

    /// Accepts the same "n" / "p/q" literals as Rational; q must be a unit.
    static Fp parse(std::string_view s) {
        Rational r = Rational::parse(s); // reuse the syntax check
        std::string t = r.str();
        std::size_t slash = t.find('/');
        mpz_class num(slash == std::string::npos ? t : t.substr(0, slash));
        mpz_class den(slash == std::string::npos ? std::string("1") : t.substr(slash + 1));
        mpz_class p(static_cast<unsigned long>(modulus()));
        mpz_class nm = num % p; if (nm < 0) nm += p;
        mpz_class dm = den % p; if (dm < 0) dm += p;
        if (dm == 0) throw ParseError("denominator of '" + std::string(s) + "' vanishes mod p");
        Fp a = from_raw(nm.get_ui());
        Fp b = from_raw(dm.get_ui());
        return a * b.inv();
    }

    std::uint64_t raw() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp operator-() const { return from_raw(v_ == 0 ? 0 : modulus() - v_); }
    Fp operator+(const Fp& o) const { return from_raw(v_ + o.v_); }
    Fp operator-(const Fp& o) const { return from_raw(v_ + modulus() - o.v_); }
    Fp operator*(const Fp& o) const { return from_raw(v_ * o.v_); }
    Fp operator/(const Fp& o) const { return *this * o.inv(); }
    Fp& operator+=(const Fp& o) { v_ = (v_ + o.v_) % modulus(); return *this; }
    Fp& operator-=(const Fp& o) { v_ = (v_ + modulus() - o.v_) % modulus(); return *this; }
    Fp& operator*=(const Fp& o) { v_ = (v_ * o.v_) % modulus(); return *this; }

    /// Fermat inverse: a^(p-2).
    Fp inv() const {
        if (v_ == 0) throw Error("inverse of zero");
        return pow(modulus() - 2);
    }

    Fp pow(std::uint64_t e) const {
        std::uint64_t base = v_, acc = 1, p = modulus();
        while (e) {
            if (e & 1) acc = (acc * base) % p;
            base = (base * base) % p;
            e >>= 1;
        }
        return from_raw(acc);
    }

    bool operator==(const Fp& o) const { return v_ == o.v_; }
    bool operator!=(const Fp& o) const { return v_ != o.v_; }

    std::string str() const { return std::to_string(v_); }
    static std::string field_name() { return "F" + std::to_string(modulus()); }

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
};

template<class K>
concept exact_field = std::regular<K> && requires(const K a, const K b) {
    { a + b } -> std::convertible_to<K>;
    { a - b } -> std::convertible_to<K>;
    { a * b } -> std::convertible_to<K>;
    { -a } -> std::convertible_to<K>;
    { a.inv() } -> std::convertible_to<K>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.str() } -> std::convertible_to<std::string>;
    { K(1) } -> std::convertible_to<K>;
    { K::parse(std::string_view{}) } -> std::convertible_to<K>;
    { K::field_name() } -> std::convertible_to<std::string>;
};

static_assert(exact_field<Rational>);
static_assert(exact_field<Fp>);

} // namespace hopfcyc
