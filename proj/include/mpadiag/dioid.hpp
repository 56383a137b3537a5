#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace mpadiag {

using Rational = mpq_class;

enum class DioidKind { MaxPlusQ, MaxPlusNonNegQ, MaxPlusN };

std::string to_string(DioidKind kind);
std::optional<DioidKind> parse_dioid_kind(std::string_view text);

// Element of (Q u {-inf}, max, +). Finite values are kept gcd-reduced.
class DioidValue {
public:
    DioidValue() = default;  // -inf
    DioidValue(const Rational& q);
    DioidValue(long n);

    static DioidValue neg_inf() { return DioidValue(); }
    static DioidValue zero() { return DioidValue(); }
    static DioidValue one() { return DioidValue(0L); }

    bool is_neg_inf() const { return neg_inf_; }
    // Precondition: !is_neg_inf().
    const Rational& value() const { return q_; }

    bool operator==(const DioidValue& o) const;
    bool operator!=(const DioidValue& o) const { return !(*this == o); }

    std::string str() const;

private:
    bool neg_inf_ = true;
    Rational q_;
};

DioidValue oplus(const DioidValue& a, const DioidValue& b);
DioidValue otimes(const DioidValue& a, const DioidValue& b);
// a <= b iff a (+) b == b.
bool canonical_leq(const DioidValue& a, const DioidValue& b);
bool canonical_lt(const DioidValue& a, const DioidValue& b);
// a^n under otimes; a^0 is the unit.
DioidValue dioid_pow(const DioidValue& a, unsigned long n);

bool admits(DioidKind kind, const DioidValue& v);

// Accepts "-inf", integers and p/q with an optional sign. Throws std::invalid_argument.
DioidValue parse_dioid_value(std::string_view text);
Rational parse_rational(std::string_view text);
std::string rational_str(const Rational& q);

}  // namespace mpadiag
