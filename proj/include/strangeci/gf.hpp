#pragma once

// Finite fields GF(p^m) with table-driven arithmetic.
//
// Elements are stored packed: the residue c_0 + c_1 t + ... + c_{m-1} t^{m-1}
// modulo the field's modulus is the integer c_0 + c_1 p + ... + c_{m-1} p^{m-1}.
// Counting the packed value upwards is the canonical element enumeration order
// (odometer, low-degree coefficient fastest), and prime-field constants are the
// packed values below p in every extension.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "strangeci/errors.hpp"

namespace strangeci {

using Coeff = std::uint32_t;

inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 20;

namespace detail {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

// Dense univariate polynomials over GF(p), low-degree first. Only used while
// building fields, never on hot paths.
using UPoly = std::vector<unsigned>;

inline void trim(UPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline unsigned inv_mod(unsigned a, unsigned p) {
    // p is prime and small; Fermat.
    std::uint64_t r = 1, b = a % p;
    for (unsigned e = p - 2; e != 0; e >>= 1) {
        if (e & 1U) r = r * b % p;
        b = b * b % p;
    }
    return static_cast<unsigned>(r);
}

inline UPoly poly_mod(UPoly a, const UPoly& m, unsigned p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const unsigned lead_inv = inv_mod(m.back(), p);
    while (a.size() > dm) {
        const std::size_t shift = a.size() - 1 - dm;
        const unsigned c = static_cast<unsigned>(std::uint64_t{a.back()} * lead_inv % p);
        for (std::size_t i = 0; i <= dm; ++i) {
            a[i + shift] = static_cast<unsigned>((a[i + shift] + std::uint64_t{p - c} * m[i]) % p);
        }
        trim(a);
    }
    return a;
}

inline UPoly poly_mulmod(const UPoly& a, const UPoly& b, const UPoly& m, unsigned p) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = static_cast<unsigned>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
        }
    }
    return poly_mod(std::move(r), m, p);
}

inline UPoly poly_gcd(UPoly a, UPoly b, unsigned p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        UPoly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

inline UPoly poly_powmod(UPoly base, std::uint64_t e, const UPoly& m, unsigned p) {
    UPoly r{1};
    base = poly_mod(std::move(base), m, p);
    while (e != 0) {
        if (e & 1U) r = poly_mulmod(r, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

/// Irreducibility over GF(p): no factor of degree <= deg/2, i.e.
/// gcd(f, t^{p^i} - t) = 1 for i = 1..deg/2.
inline bool is_irreducible(const UPoly& f, unsigned p) {
    const std::size_t deg = f.size() - 1;
    if (deg <= 1) return deg == 1;
    UPoly x{0, 1};
    UPoly xp = x;
    for (std::size_t i = 1; i <= deg / 2; ++i) {
        xp = poly_powmod(xp, p, f, p);
        UPoly diff = xp;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        if (diff.empty()) return false;
        if (poly_gcd(f, diff, p).size() > 1) return false;
    }
    return true;
}

}  // namespace detail

/// GF(p^m), immutable once built. Obtain instances through make_field so that
/// equal (p, m) share one descriptor.
class FieldDescriptor {
public:
    FieldDescriptor(unsigned p, unsigned m, std::vector<unsigned> modulus)
        : p_(p), m_(m), modulus_(std::move(modulus)) {
        q_ = 1;
        for (unsigned i = 0; i < m_; ++i) q_ *= p_;
        pow_p_.resize(m_ + 1);
        pow_p_[0] = 1;
        for (unsigned i = 1; i <= m_; ++i) pow_p_[i] = pow_p_[i - 1] * p_;
        build_tables();
    }

    unsigned characteristic() const { return p_; }
    unsigned degree() const { return m_; }
    Coeff order() const { return q_; }
    /// Monic modulus, low-degree coefficient first (length m + 1).
    const std::vector<unsigned>& modulus() const { return modulus_; }
    bool is_prime_field() const { return m_ == 1; }

    Coeff zero() const { return 0; }
    Coeff one() const { return 1; }
    Coeff from_int(long long v) const {
        long long r = v % static_cast<long long>(p_);
        if (r < 0) r += p_;
        return static_cast<Coeff>(r);
    }
    bool in_prime_subfield(Coeff x) const { return x < p_; }

    Coeff add(Coeff a, Coeff b) const {
        if (p_ == 2) return a ^ b;
        Coeff r = 0, pw = 1;
        while ((a | b) != 0) {
            unsigned s = a % p_ + b % p_;
            if (s >= p_) s -= p_;
            r += s * pw;
            pw *= p_;
            a /= p_;
            b /= p_;
        }
        return r;
    }
    Coeff neg(Coeff a) const {
        if (p_ == 2) return a;
        Coeff r = 0, pw = 1;
        while (a != 0) {
            const unsigned d = a % p_;
            if (d != 0) r += (p_ - d) * pw;
            pw *= p_;
            a /= p_;
        }
        return r;
    }
    Coeff sub(Coeff a, Coeff b) const { return add(a, neg(b)); }
    Coeff mul(Coeff a, Coeff b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    Coeff inv(Coeff a) const {
        if (a == 0) throw ArithmeticError("division by zero in GF(" + describe() + ")");
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }
    Coeff div(Coeff a, Coeff b) const { return mul(a, inv(b)); }
    Coeff pow(Coeff a, std::uint64_t e) const {
        if (e == 0) return 1;
        if (a == 0) return 0;
        const std::uint64_t k = (std::uint64_t{log_[a]} * (e % (q_ - 1))) % (q_ - 1);
        return exp_[k];
    }
    Coeff frobenius(Coeff a) const { return pow(a, p_); }

    /// Smallest d dividing m with a in GF(p^d).
    unsigned subfield_degree(Coeff a) const {
        if (a == 0 || m_ == 1) return 1;
        const std::uint64_t k = log_[a];
        for (unsigned d = 1; d < m_; ++d) {
            if (m_ % d != 0) continue;
            if ((k * (pow_p_[d] - 1)) % (q_ - 1) == 0) return d;
        }
        return m_;
    }

    /// Least element generating the multiplicative group.
    Coeff primitive_element() const { return exp_[1]; }

    std::vector<unsigned> digits(Coeff a) const {
        std::vector<unsigned> d(m_, 0);
        for (unsigned i = 0; i < m_; ++i) {
            d[i] = a % p_;
            a /= p_;
        }
        return d;
    }
    Coeff pack(std::span<const unsigned> d) const {
        Coeff r = 0;
        for (std::size_t i = d.size(); i-- > 0;) r = r * p_ + d[i] % p_;
        return r;
    }

    /// "GF(p)" or "GF(p^m)".
    std::string describe() const {
        return m_ == 1 ? std::to_string(p_) : std::to_string(p_) + "^" + std::to_string(m_);
    }

    /// Prime field: 0..p-1. Extension: reduced polynomial in t, highest degree first.
    std::string format(Coeff a) const {
        if (m_ == 1) return std::to_string(a);
        if (a == 0) return "0";
        const auto d = digits(a);
        std::string out;
        for (unsigned i = m_; i-- > 0;) {
            if (d[i] == 0) continue;
            if (!out.empty()) out += '+';
            if (i == 0) {
                out += std::to_string(d[i]);
                continue;
            }
            if (d[i] != 1) out += std::to_string(d[i]) + "*";
            out += 't';
            if (i > 1) out += "^" + std::to_string(i);
        }
        return out;
    }

    Coeff parse(std::string_view text) const;

private:
    void build_tables();
    Coeff slow_mul(Coeff a, Coeff b) const {
        if (m_ == 1) return static_cast<Coeff>(std::uint64_t{a} * b % p_);
        const auto da = digits(a), db = digits(b);
        detail::UPoly r(2 * m_, 0);
        for (unsigned i = 0; i < m_; ++i) {
            if (da[i] == 0) continue;
            for (unsigned j = 0; j < m_; ++j) {
                r[i + j] = static_cast<unsigned>((r[i + j] + std::uint64_t{da[i]} * db[j]) % p_);
            }
        }
        auto red = detail::poly_mod(std::move(r), modulus_, p_);
        red.resize(m_, 0);
        return pack(red);
    }

    unsigned p_;
    unsigned m_;
    std::vector<unsigned> modulus_;
    Coeff q_ = 0;
    std::vector<std::uint64_t> pow_p_;
    std::vector<Coeff> exp_;  // length 2(q-1)
    std::vector<Coeff> log_;  // length q, log_[0] unused
};

inline void FieldDescriptor::build_tables() {
    const Coeff n = q_ - 1;
    exp_.assign(2 * static_cast<std::size_t>(n), 0);
    log_.assign(q_, 0);
    std::vector<Coeff> powers(n);
    for (Coeff g = 1; g < q_; ++g) {
        Coeff x = g;
        Coeff k = 1;
        powers[0] = g;
        bool primitive = true;
        while (x != 1) {
            x = slow_mul(x, g);
            if (k >= n) {
                primitive = false;
                break;
            }
            powers[k++] = x;
        }
        if (!primitive || k != n) continue;
        // powers[i] = g^{i+1}; rotate so exp_[0] = 1.
        for (Coeff i = 0; i < n; ++i) {
            const Coeff v = powers[(i + n - 1) % n];
            exp_[i] = v;
            exp_[i + n] = v;
            log_[v] = i;
        }
        return;
    }
    throw Error("no primitive element found in GF(" + describe() + ")");
}

namespace detail {

struct ElementParser {
    const FieldDescriptor& f;
    std::string_view s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool at_digit() {
        skip_ws();
        return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
    }
    unsigned long long integer() {
        skip_ws();
        if (!at_digit()) throw SyntaxError("expected integer at offset " + std::to_string(pos) + " in '" + std::string(s) + "'");
        unsigned long long v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + static_cast<unsigned>(s[pos] - '0');
            if (v > (1ULL << 40)) throw SyntaxError("integer too large in '" + std::string(s) + "'");
            ++pos;
        }
        return v;
    }
    Coeff term() {
        Coeff c = 1;
        bool have_coeff = false;
        if (at_digit()) {
            c = f.from_int(static_cast<long long>(integer() % f.characteristic()));
            have_coeff = true;
            if (!peek('*')) return c;
            ++pos;
        }
        skip_ws();
        if (pos >= s.size() || s[pos] != 't') {
            if (have_coeff) throw SyntaxError("expected 't' after '*' in '" + std::string(s) + "'");
            throw SyntaxError("expected element term in '" + std::string(s) + "'");
        }
        if (f.degree() == 1) throw SyntaxError("generator 't' used in prime field GF(" + f.describe() + ")");
        ++pos;
        unsigned long long e = 1;
        if (peek('^')) {
            ++pos;
            e = integer();
        }
        return f.mul(c, f.pow(static_cast<Coeff>(f.characteristic()), e));
    }
    Coeff expr() {
        Coeff acc = 0;
        bool negate = false;
        if (peek('-')) {
            ++pos;
            negate = true;
        } else if (peek('+')) {
            ++pos;
        }
        for (;;) {
            Coeff t = term();
            acc = f.add(acc, negate ? f.neg(t) : t);
            if (peek('+')) {
                ++pos;
                negate = false;
            } else if (peek('-')) {
                ++pos;
                negate = true;
            } else {
                break;
            }
        }
        skip_ws();
        if (pos != s.size()) throw SyntaxError("trailing characters in field element '" + std::string(s) + "'");
        return acc;
    }
};

}  // namespace detail

// The generator t is the packed value p (digit vector (0, 1, 0, ...)).
inline Coeff FieldDescriptor::parse(std::string_view text) const {
    detail::ElementParser parser{*this, text};
    return parser.expr();
}

using FieldRef = std::shared_ptr<const FieldDescriptor>;

/// Lexicographically least monic irreducible polynomial of degree m over GF(p),
/// coefficients c_0, c_1, ... compared low-degree first.
inline std::vector<unsigned> least_irreducible(unsigned p, unsigned m) {
    std::vector<unsigned> lower(m, 0);
    for (;;) {
        detail::UPoly cand(lower.begin(), lower.end());
        cand.push_back(1);
        if (detail::is_irreducible(cand, p)) return cand;
        // advance: c_{m-1} varies fastest so c_0 stays most significant
        std::size_t i = m;
        while (i-- > 0) {
            if (++lower[i] < p) break;
            lower[i] = 0;
            if (i == 0) throw Error("no irreducible polynomial found");
        }
    }
}

/// Shared, deterministic construction of GF(p^m).
inline FieldRef make_field(unsigned p, unsigned m) {
    if (!detail::is_prime(p)) throw InvalidInput("characteristic " + std::to_string(p) + " is not prime");
    if (m < 1) throw InvalidInput("extension degree must be >= 1");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxFieldOrder) {
            throw InvalidInput("field GF(" + std::to_string(p) + "^" + std::to_string(m) +
                               ") exceeds the supported order 2^20");
        }
    }
    static std::mutex mu;
    static std::map<std::pair<unsigned, unsigned>, FieldRef> cache;
    std::lock_guard lock(mu);
    auto it = cache.find({p, m});
    if (it != cache.end()) return it->second;
    auto f = std::make_shared<const FieldDescriptor>(p, m, least_irreducible(p, m));
    cache.emplace(std::pair{p, m}, f);
    return f;
}

inline bool same_field(const FieldDescriptor& a, const FieldDescriptor& b) {
    return a.characteristic() == b.characteristic() && a.degree() == b.degree();
}

/// Image table of the fixed embedding GF(p^m) -> GF(p^{mk}): t maps to the
/// least root (in enumeration order) of the source modulus.
inline const std::vector<Coeff>& embedding_table(const FieldDescriptor& source, const FieldDescriptor& target) {
    if (source.characteristic() != target.characteristic()) {
        throw InvalidInput("cannot embed GF(" + source.describe() + ") into GF(" + target.describe() + ")");
    }
    if (target.degree() % source.degree() != 0) {
        throw InvalidInput("GF(" + source.describe() + ") is not a subfield of GF(" + target.describe() + ")");
    }
    static std::mutex mu;
    static std::map<std::tuple<unsigned, unsigned, unsigned>, std::vector<Coeff>> cache;
    const auto key = std::tuple{source.characteristic(), source.degree(), target.degree()};
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<Coeff> image(source.order());
    if (source.degree() == 1) {
        std::iota(image.begin(), image.end(), Coeff{0});
    } else {
        const auto& mod = source.modulus();
        Coeff root = 0;
        bool found = false;
        for (Coeff x = 0; x < target.order(); ++x) {
            Coeff acc = 0;
            for (std::size_t i = mod.size(); i-- > 0;) acc = target.add(target.mul(acc, x), static_cast<Coeff>(mod[i]));
            if (acc == 0) {
                root = x;
                found = true;
                break;
            }
        }
        if (!found) throw Error("modulus has no root in target field");
        for (Coeff x = 0; x < source.order(); ++x) {
            const auto d = source.digits(x);
            Coeff acc = 0;
            for (std::size_t i = d.size(); i-- > 0;) acc = target.add(target.mul(acc, root), static_cast<Coeff>(d[i]));
            image[x] = acc;
        }
    }
    return cache.emplace(key, std::move(image)).first->second;
}

/// Element of a field; arithmetic checks that both operands share the field.
class FieldElement {
public:
    FieldElement(FieldRef field, Coeff value) : field_(std::move(field)), value_(value) {
        if (value_ >= field_->order()) throw InvalidInput("element out of range for GF(" + field_->describe() + ")");
    }

    static FieldElement zero(FieldRef f) { return {std::move(f), 0}; }
    static FieldElement one(FieldRef f) { return {std::move(f), 1}; }
    static FieldElement parse(FieldRef f, std::string_view text) {
        const Coeff v = f->parse(text);
        return {std::move(f), v};
    }

    const FieldRef& field() const { return field_; }
    Coeff value() const { return value_; }
    bool is_zero() const { return value_ == 0; }

    FieldElement operator+(const FieldElement& o) const { return {field_, field_->add(value_, check(o))}; }
    FieldElement operator-(const FieldElement& o) const { return {field_, field_->sub(value_, check(o))}; }
    FieldElement operator*(const FieldElement& o) const { return {field_, field_->mul(value_, check(o))}; }
    FieldElement operator/(const FieldElement& o) const { return {field_, field_->div(value_, check(o))}; }
    FieldElement operator-() const { return {field_, field_->neg(value_)}; }
    FieldElement inv() const { return {field_, field_->inv(value_)}; }
    FieldElement pow(std::uint64_t e) const { return {field_, field_->pow(value_, e)}; }
    FieldElement frobenius() const { return {field_, field_->frobenius(value_)}; }

    bool operator==(const FieldElement& o) const { return same_field(*field_, *o.field_) && value_ == o.value_; }

    std::string to_string() const { return field_->format(value_); }

private:
    Coeff check(const FieldElement& o) const {
        if (!same_field(*field_, *o.field_)) {
            throw InvalidInput("mixed fields GF(" + field_->describe() + ") and GF(" + o.field_->describe() + ")");
        }
        return o.value_;
    }

    FieldRef field_;
    Coeff value_;
};

inline FieldElement embed(const FieldElement& x, const FieldRef& target) {
    return {target, embedding_table(*x.field(), *target)[x.value()]};
}

}  // namespace strangeci
