#pragma once

// Sparse homogeneous polynomials in z_0..z_N over GF(p^m).

#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strangeci/errors.hpp"
#include "strangeci/exactla.hpp"
#include "strangeci/gf.hpp"

namespace strangeci {

/// Exponent vector. Ordered graded-lexicographically with z_0 > z_1 > ... > z_N.
struct Monomial {
    std::vector<unsigned> exponents;

    Monomial() = default;
    explicit Monomial(std::vector<unsigned> e) : exponents(std::move(e)) {}

    unsigned degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0U); }
    std::size_t n_vars() const { return exponents.size(); }

    std::strong_ordering operator<=>(const Monomial& o) const {
        if (auto c = degree() <=> o.degree(); c != 0) return c;
        return exponents <=> o.exponents;
    }
    bool operator==(const Monomial& o) const = default;

    Monomial operator*(const Monomial& o) const {
        Monomial r = *this;
        for (std::size_t i = 0; i < exponents.size(); ++i) r.exponents[i] += o.exponents[i];
        return r;
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            if (exponents[i] == 0) continue;
            if (!out.empty()) out += '*';
            out += "z" + std::to_string(i);
            if (exponents[i] > 1) out += "^" + std::to_string(exponents[i]);
        }
        return out;
    }
};

/// All monomials of total degree d in n variables, descending in the term order.
inline std::vector<Monomial> monomials_of_degree(std::size_t n_vars, unsigned d) {
    std::vector<Monomial> out;
    if (n_vars == 0) {
        if (d == 0) out.emplace_back();
        return out;
    }
    std::vector<unsigned> e(n_vars, 0);
    // recursive fill: exponent of z_i from high to low gives descending lex order
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i + 1 == n_vars) {
            e[i] = left;
            out.emplace_back(e);
            return;
        }
        for (unsigned k = left + 1; k-- > 0;) {
            e[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, d);
    return out;
}

class HomogeneousPolynomial {
public:
    using TermMap = std::map<Monomial, Coeff, std::greater<>>;

    HomogeneousPolynomial(FieldRef field, std::size_t n_vars, unsigned degree)
        : field_(std::move(field)), n_vars_(n_vars), degree_(degree) {
        if (n_vars_ == 0) throw InvalidInput("polynomial needs at least one variable");
    }

    static HomogeneousPolynomial from_monomial(FieldRef field, const Monomial& m, Coeff c = 1) {
        HomogeneousPolynomial f(std::move(field), m.n_vars(), m.degree());
        f.add_term(m, c);
        return f;
    }
    /// The linear form sum_j row[j] z_j.
    static HomogeneousPolynomial linear_form(FieldRef field, std::span<const Coeff> row) {
        HomogeneousPolynomial f(field, row.size(), 1);
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::vector<unsigned> e(row.size(), 0);
            e[j] = 1;
            f.add_term(Monomial(std::move(e)), row[j]);
        }
        return f;
    }

    const FieldRef& field() const { return field_; }
    std::size_t n_vars() const { return n_vars_; }
    unsigned degree() const { return degree_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    Coeff coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? 0 : it->second;
    }
    FieldElement coefficient_element(const Monomial& m) const { return {field_, coefficient(m)}; }

    /// Accumulates c * m; zero sums are dropped.
    void add_term(const Monomial& m, Coeff c) {
        if (m.n_vars() != n_vars_) throw InvalidInput("monomial has the wrong number of variables");
        if (m.degree() != degree_) {
            throw HomogeneityError("term " + m.to_string() + " of degree " + std::to_string(m.degree()) +
                                   " in a polynomial of degree " + std::to_string(degree_));
        }
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second = field_->add(it->second, c);
            if (it->second == 0) terms_.erase(it);
        }
    }

    HomogeneousPolynomial operator+(const HomogeneousPolynomial& o) const {
        check_compatible(o);
        HomogeneousPolynomial r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    HomogeneousPolynomial operator-(const HomogeneousPolynomial& o) const { return *this + o.scaled(field_->neg(1)); }
    HomogeneousPolynomial scaled(Coeff s) const {
        HomogeneousPolynomial r(field_, n_vars_, degree_);
        if (s == 0) return r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, field_->mul(c, s));
        return r;
    }
    HomogeneousPolynomial times_monomial(const Monomial& mono, Coeff s = 1) const {
        HomogeneousPolynomial r(field_, n_vars_, degree_ + mono.degree());
        if (s == 0) return r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m * mono, field_->mul(c, s));
        return r;
    }
    HomogeneousPolynomial operator*(const HomogeneousPolynomial& o) const {
        if (!same_field(*field_, *o.field_)) throw InvalidInput("product of polynomials over different fields");
        if (n_vars_ != o.n_vars_) throw InvalidInput("product of polynomials in different rings");
        HomogeneousPolynomial r(field_, n_vars_, degree_ + o.degree_);
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, field_->mul(c1, c2));
        return r;
    }

    bool operator==(const HomogeneousPolynomial& o) const {
        return same_field(*field_, *o.field_) && n_vars_ == o.n_vars_ && degree_ == o.degree_ && terms_ == o.terms_;
    }

    /// True when no monomial involves z_i.
    bool is_free_of(std::size_t i) const {
        for (const auto& [m, c] : terms_)
            if (m.exponents[i] != 0) return false;
        return true;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += '+';
            const std::string cs = field_->format(c);
            const bool composite = cs.find_first_of("+*") != std::string::npos;
            const std::string coeff = composite ? "(" + cs + ")" : cs;
            if (m.degree() == 0) {
                out += coeff;
            } else if (c == 1) {
                out += m.to_string();
            } else {
                out += coeff + "*" + m.to_string();
            }
        }
        return out;
    }

private:
    void check_compatible(const HomogeneousPolynomial& o) const {
        if (!same_field(*field_, *o.field_)) throw InvalidInput("polynomials over different fields");
        if (n_vars_ != o.n_vars_) throw InvalidInput("polynomials in different numbers of variables");
        if (degree_ != o.degree_) {
            throw HomogeneityError("sum of polynomials of degrees " + std::to_string(degree_) + " and " +
                                   std::to_string(o.degree_));
        }
    }

    FieldRef field_;
    std::size_t n_vars_;
    unsigned degree_;
    TermMap terms_;
};

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view s, FieldRef field, std::size_t n_vars)
        : s_(s), field_(std::move(field)), n_vars_(n_vars) {}

    HomogeneousPolynomial parse() {
        std::vector<TermOut> terms;
        bool negate = false;
        if (peek('-')) {
            ++pos_;
            negate = true;
        } else if (peek('+')) {
            ++pos_;
        }
        for (;;) {
            TermOut t = term();
            if (negate) t.c = field_->neg(t.c);
            terms.push_back(std::move(t));
            if (peek('+')) {
                ++pos_;
                negate = false;
            } else if (peek('-')) {
                ++pos_;
                negate = true;
            } else {
                break;
            }
        }
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character");
        const unsigned d = terms.front().m.degree();
        HomogeneousPolynomial f(field_, n_vars_, d);
        for (const auto& t : terms) {
            if (t.m.degree() != d) {
                throw HomogeneityError("inhomogeneous polynomial '" + std::string(s_) + "': degrees " +
                                       std::to_string(d) + " and " + std::to_string(t.m.degree()));
            }
            f.add_term(t.m, t.c);
        }
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool at_digit() {
        skip_ws();
        return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
    }
    unsigned long long integer() {
        if (!at_digit()) fail("expected integer");
        unsigned long long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + static_cast<unsigned>(s_[pos_++] - '0');
            if (v > (1ULL << 40)) fail("integer too large");
        }
        return v;
    }
    Coeff coefficient() {
        if (peek('(')) {
            const std::size_t close = s_.find(')', pos_);
            if (close == std::string_view::npos) fail("unbalanced parenthesis");
            const Coeff c = field_->parse(s_.substr(pos_ + 1, close - pos_ - 1));
            pos_ = close + 1;
            return c;
        }
        if (peek('t')) {
            const std::size_t start = pos_++;
            if (peek('^')) {
                ++pos_;
                integer();
            }
            return field_->parse(s_.substr(start, pos_ - start));
        }
        return field_->from_int(static_cast<long long>(integer() % field_->characteristic()));
    }
    void factor(Monomial& m) {
        if (!peek('z')) fail("expected variable z<index>");
        ++pos_;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected variable index");
        const auto idx = integer();
        if (idx >= n_vars_) {
            throw InvalidInput("variable z" + std::to_string(idx) + " out of range for " + std::to_string(n_vars_) +
                               " variables");
        }
        unsigned long long e = 1;
        if (peek('^')) {
            ++pos_;
            e = integer();
            if (e > 1000) fail("exponent too large");
        }
        m.exponents[idx] += static_cast<unsigned>(e);
    }
    struct TermOut {
        Monomial m;
        Coeff c;
    };
    TermOut term() {
        TermOut t{Monomial(std::vector<unsigned>(n_vars_, 0)), 1};
        if (at_digit() || peek('(') || peek('t')) {
            t.c = coefficient();
            if (!peek('*')) return t;
            ++pos_;
        }
        factor(t.m);
        while (peek('*')) {
            ++pos_;
            factor(t.m);
        }
        return t;
    }

    std::string_view s_;
    FieldRef field_;
    std::size_t n_vars_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar: term ('+' term)*, term := [coeff '*'] factor ('*' factor)*,
/// factor := 'z' index ['^' exponent], coeff := integer | '(' element ')'.
/// '-' reads as +(p-1)*. Terms with vanishing coefficients still fix the degree.
inline HomogeneousPolynomial parse_polynomial(std::string_view text, const FieldRef& field, std::size_t n_vars) {
    return detail::PolyParser(text, field, n_vars).parse();
}

/// Formal partial derivative d/dz_i with exponents reduced mod p.
inline HomogeneousPolynomial partial_derivative(const HomogeneousPolynomial& f, std::size_t i) {
    if (i >= f.n_vars()) throw InvalidInput("derivative index " + std::to_string(i) + " out of range");
    const auto& F = *f.field();
    HomogeneousPolynomial d(f.field(), f.n_vars(), f.degree() == 0 ? 0 : f.degree() - 1);
    if (f.degree() == 0) return d;
    for (const auto& [m, c] : f.terms()) {
        const unsigned e = m.exponents[i];
        if (e == 0) continue;
        const Coeff k = F.from_int(e);
        if (k == 0) continue;
        Monomial dm = m;
        dm.exponents[i] -= 1;
        d.add_term(dm, F.mul(c, k));
    }
    return d;
}

/// j-fold derivative in z_i.
inline HomogeneousPolynomial partial_derivative(const HomogeneousPolynomial& f, std::size_t i, unsigned j) {
    HomogeneousPolynomial d = f;
    for (unsigned k = 0; k < j; ++k) d = partial_derivative(d, i);
    return d;
}

/// Coefficients mapped into an extension field.
inline HomogeneousPolynomial embed_polynomial(const HomogeneousPolynomial& f, const FieldRef& target) {
    if (same_field(*f.field(), *target)) return f;
    const auto& table = embedding_table(*f.field(), *target);
    HomogeneousPolynomial r(target, f.n_vars(), f.degree());
    for (const auto& [m, c] : f.terms()) r.add_term(m, table[c]);
    return r;
}

/// Value at a coordinate vector over point_field, an extension of f's field.
inline Coeff evaluate_raw(const HomogeneousPolynomial& f, std::span<const Coeff> coords,
                          const FieldDescriptor& point_field) {
    if (coords.size() != f.n_vars()) throw InvalidInput("point has the wrong number of coordinates");
    const std::vector<Coeff>* table = nullptr;
    if (!same_field(*f.field(), point_field)) table = &embedding_table(*f.field(), point_field);
    Coeff acc = 0;
    for (const auto& [m, c] : f.terms()) {
        Coeff t = table ? (*table)[c] : c;
        for (std::size_t i = 0; i < coords.size() && t != 0; ++i) {
            if (m.exponents[i] != 0) t = point_field.mul(t, point_field.pow(coords[i], m.exponents[i]));
        }
        acc = point_field.add(acc, t);
    }
    return acc;
}

inline FieldElement evaluate(const HomogeneousPolynomial& f, std::span<const Coeff> coords, const FieldRef& point_field) {
    return {point_field, evaluate_raw(f, coords, *point_field)};
}

/// Checks sum_j z_j * df/dz_j == (e mod p) * f. Always holds; exposed as a self-test.
inline bool euler_identity_check(const HomogeneousPolynomial& f) {
    HomogeneousPolynomial lhs(f.field(), f.n_vars(), f.degree());
    if (f.degree() == 0) return true;
    for (std::size_t j = 0; j < f.n_vars(); ++j) {
        std::vector<unsigned> e(f.n_vars(), 0);
        e[j] = 1;
        lhs = lhs + partial_derivative(f, j).times_monomial(Monomial(std::move(e)));
    }
    return lhs == f.scaled(f.field()->from_int(f.degree()));
}

/// f(M z): substitutes z_i <- sum_j M[i][j] z_j. M must be invertible.
inline HomogeneousPolynomial linear_change(const HomogeneousPolynomial& f, const Matrix& M) {
    if (M.rows() != f.n_vars() || M.cols() != f.n_vars()) throw InvalidInput("coordinate change has the wrong size");
    if (!is_invertible(M)) throw InvalidInput("coordinate change matrix is singular");
    FieldRef target = M.field();
    Matrix Mt = M;
    if (f.field()->degree() > M.field()->degree()) {
        target = f.field();
        const auto& table = embedding_table(*M.field(), *target);
        Mt = Matrix(target, M.rows(), M.cols());
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t j = 0; j < M.cols(); ++j) Mt(i, j) = table[M(i, j)];
    }
    const HomogeneousPolynomial g = embed_polynomial(f, target);
    const std::size_t n = g.n_vars();
    // powers[i][k] = (row i of M as a linear form)^k
    std::vector<std::vector<HomogeneousPolynomial>> powers(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<unsigned> zero(n, 0);
        powers[i].push_back(HomogeneousPolynomial::from_monomial(target, Monomial(zero)));
        powers[i].push_back(HomogeneousPolynomial::linear_form(target, Mt.row(i)));
    }
    HomogeneousPolynomial out(target, n, g.degree());
    for (const auto& [m, c] : g.terms()) {
        HomogeneousPolynomial t = HomogeneousPolynomial::from_monomial(target, Monomial(std::vector<unsigned>(n, 0)), c);
        for (std::size_t i = 0; i < n; ++i) {
            const unsigned e = m.exponents[i];
            if (e == 0) continue;
            while (powers[i].size() <= e) powers[i].push_back(powers[i].back() * powers[i][1]);
            t = t * powers[i][e];
        }
        out = out + t;
    }
    return out;
}

}  // namespace strangeci
