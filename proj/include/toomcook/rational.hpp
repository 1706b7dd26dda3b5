/*
   Copyright 2026 The toomcook Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "toomcook/errors.hpp"

namespace toomcook {

/// Exact fraction in canonical form: denominator > 0 and
/// gcd(|numerator|, denominator) = 1.
class Rational {
  public:
    Rational() = default;
    Rational(long value) : q_(value) {} // NOLINT(google-explicit-constructor)
    Rational(int value) : q_(static_cast<long>(value)) {} // NOLINT
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0)
            throw NumericalError("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// The exact value of a finite binary floating point number.
    template <std::floating_point T>
    static Rational from_float(T value) {
        if (!std::isfinite(value))
            throw ValidationError("cannot represent a non-finite value exactly");
        int exp = 0;
        const T frac = std::frexp(value, &exp);
        constexpr int digits = std::numeric_limits<T>::digits;
        // frac * 2^digits is an integer that fits in 64 bits for float/double.
        const auto mant = static_cast<std::int64_t>(std::ldexp(frac, digits));
        mpz_class num(static_cast<long>(mant));
        mpz_class den(1);
        const int shift = exp - digits;
        if (shift >= 0)
            mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
        else
            mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
        return {num, den};
    }

    /// Parses "3", "-4", "1/2", "-4/3".
    static Rational parse(std::string_view text);

    [[nodiscard]] mpz_class numerator() const { return q_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return q_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const { return q_; }

    [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
    [[nodiscard]] int sign() const { return sgn(q_); }
    [[nodiscard]] bool is_integer() const { return q_.get_den() == 1; }

    /// True for +-2^k, k any integer (including negative).
    [[nodiscard]] bool is_power_of_two() const {
        if (is_zero())
            return false;
        const mpz_class n = ::abs(q_.get_num());
        const mpz_class& d = q_.get_den();
        return mpz_popcount(n.get_mpz_t()) == 1 && mpz_popcount(d.get_mpz_t()) == 1;
    }

    [[nodiscard]] std::string to_string() const {
        if (is_integer())
            return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    [[nodiscard]] Rational abs() const { return Rational(mpq_class(::abs(q_))); }

    [[nodiscard]] Rational pow(unsigned exponent) const {
        mpz_class num;
        mpz_class den;
        mpz_pow_ui(num.get_mpz_t(), q_.get_num_mpz_t(), exponent);
        mpz_pow_ui(den.get_mpz_t(), q_.get_den_mpz_t(), exponent);
        Rational r;
        r.q_ = mpq_class(num, den); // already canonical: powers of coprime integers
        return r;
    }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero())
            throw NumericalError("division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

  private:
    mpq_class q_;
};

inline Rational Rational::parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> mpz_class {
        std::string_view digits = s;
        if (!digits.empty() && (digits.front() == '-' || digits.front() == '+'))
            digits.remove_prefix(1);
        if (digits.empty())
            throw ValidationError("malformed rational '" + std::string(text) + "'");
        for (char c : digits)
            if (c < '0' || c > '9')
                throw ValidationError("malformed rational '" + std::string(text) + "'");
        std::string str(s.front() == '+' ? s.substr(1) : s);
        return mpz_class(str, 10);
    };
    while (!text.empty() && text.front() == ' ')
        text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ')
        text.remove_suffix(1);
    if (text.empty())
        throw ValidationError("empty rational");
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return {parse_int(text), mpz_class(1)};
    const mpz_class num = parse_int(text.substr(0, slash));
    const std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && den_text.front() == '-')
        throw ValidationError("denominator must be positive in '" + std::string(text) + "'");
    const mpz_class den = parse_int(den_text);
    if (den == 0)
        throw ValidationError("zero denominator in '" + std::string(text) + "'");
    return {num, den};
}

/// Round to the nearest T, ties to even. Subnormal results are rounded
/// at the subnormal spacing. Throws NumericalError on overflow.
template <std::floating_point T>
T to_nearest(const Rational& v) {
    static_assert(std::numeric_limits<T>::radix == 2);
    if (v.is_zero())
        return T(0);
    constexpr int precision = std::numeric_limits<T>::digits;
    constexpr int min_ulp_exp = std::numeric_limits<T>::min_exponent - precision;

    const mpz_class num = abs(v.numerator());
    const mpz_class den = v.denominator();
    const auto num_bits = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
    const auto den_bits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));

    // Choose the ulp exponent e so that floor(|v| / 2^e) has `precision` bits.
    // |v| lies in [2^(num_bits-den_bits-1), 2^(num_bits-den_bits+1)).
    long e = num_bits - den_bits - precision + 1;
    auto scaled_quotient = [&](long exp, mpz_class& rem, mpz_class& divisor) {
        mpz_class a = num;
        divisor = den;
        if (exp >= 0)
            mpz_mul_2exp(divisor.get_mpz_t(), divisor.get_mpz_t(), static_cast<mp_bitcnt_t>(exp));
        else
            mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(-exp));
        mpz_class q;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), a.get_mpz_t(), divisor.get_mpz_t());
        return q;
    };
    mpz_class rem;
    mpz_class divisor;
    mpz_class q = scaled_quotient(e, rem, divisor);
    if (mpz_sizeinbase(q.get_mpz_t(), 2) < static_cast<size_t>(precision)) {
        --e;
        q = scaled_quotient(e, rem, divisor);
    }
    if (e < min_ulp_exp) {
        e = min_ulp_exp;
        q = scaled_quotient(e, rem, divisor);
    }
    const mpz_class twice_rem = rem * 2;
    const int c = cmp(twice_rem, divisor);
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t())))
        q += 1;

    // q <= 2^precision, exactly representable in T.
    const T mantissa = static_cast<T>(q.get_d());
    if (e > std::numeric_limits<T>::max_exponent)
        throw NumericalError("value " + v.to_string() + " overflows the target precision");
    const T result = std::ldexp(mantissa, static_cast<int>(e));
    if (std::isinf(result))
        throw NumericalError("value " + v.to_string() + " overflows the target precision");
    return v.sign() < 0 ? -result : result;
}

} // namespace toomcook
