#include "mpadiag/dioid.hpp"

#include <cctype>
#include <stdexcept>

namespace mpadiag {

std::string to_string(DioidKind kind) {
    switch (kind) {
    case DioidKind::MaxPlusQ: return "maxplus-q";
    case DioidKind::MaxPlusNonNegQ: return "maxplus-nonneg-q";
    case DioidKind::MaxPlusN: return "maxplus-n";
    }
    return "?";
}

std::optional<DioidKind> parse_dioid_kind(std::string_view text) {
    if (text == "maxplus-q") return DioidKind::MaxPlusQ;
    if (text == "maxplus-nonneg-q") return DioidKind::MaxPlusNonNegQ;
    if (text == "maxplus-n") return DioidKind::MaxPlusN;
    return std::nullopt;
}

DioidValue::DioidValue(const Rational& q) : neg_inf_(false), q_(q) { q_.canonicalize(); }

DioidValue::DioidValue(long n) : neg_inf_(false), q_(n) {}

bool DioidValue::operator==(const DioidValue& o) const {
    if (neg_inf_ || o.neg_inf_) return neg_inf_ == o.neg_inf_;
    return q_ == o.q_;
}

std::string DioidValue::str() const {
    if (neg_inf_) return "-inf";
    return rational_str(q_);
}

DioidValue oplus(const DioidValue& a, const DioidValue& b) {
    if (a.is_neg_inf()) return b;
    if (b.is_neg_inf()) return a;
    return a.value() >= b.value() ? a : b;
}

DioidValue otimes(const DioidValue& a, const DioidValue& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return DioidValue::neg_inf();
    return DioidValue(Rational(a.value() + b.value()));
}

bool canonical_leq(const DioidValue& a, const DioidValue& b) { return oplus(a, b) == b; }

bool canonical_lt(const DioidValue& a, const DioidValue& b) { return a != b && canonical_leq(a, b); }

DioidValue dioid_pow(const DioidValue& a, unsigned long n) {
    if (n == 0) return DioidValue::one();
    if (a.is_neg_inf()) return a;
    return DioidValue(Rational(a.value() * n));
}

bool admits(DioidKind kind, const DioidValue& v) {
    if (v.is_neg_inf()) return true;
    const Rational& q = v.value();
    switch (kind) {
    case DioidKind::MaxPlusQ: return true;
    case DioidKind::MaxPlusNonNegQ: return sgn(q) >= 0;
    case DioidKind::MaxPlusN: return sgn(q) >= 0 && q.get_den() == 1;
    }
    return false;
}

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{} : body.substr(slash + 1);
    auto digits = [](std::string_view s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (!digits(num) || (slash != std::string_view::npos && !digits(den)))
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    mpz_class n(std::string(num), 10);
    mpz_class d(1);
    if (slash != std::string_view::npos) {
        d = mpz_class(std::string(den), 10);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    Rational q(n, d);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

DioidValue parse_dioid_value(std::string_view text) {
    if (text == "-inf") return DioidValue::neg_inf();
    return DioidValue(parse_rational(text));
}

std::string rational_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace mpadiag
