#pragma once

// Pointwise projective geometry: points, systems, Jacobians, tangent spaces,
// the Gauss map and exhaustive singular-point search over bounded extensions.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "strangeci/errors.hpp"
#include "strangeci/exactla.hpp"
#include "strangeci/gf.hpp"
#include "strangeci/hompoly.hpp"

namespace strangeci {

/// Point of P^N over GF(p^m), normalized so the first nonzero coordinate is 1.
class ProjectivePoint {
public:
    ProjectivePoint(FieldRef field, std::vector<Coeff> coords) : field_(std::move(field)), coords_(std::move(coords)) {
        const auto& f = *field_;
        auto it = std::find_if(coords_.begin(), coords_.end(), [](Coeff c) { return c != 0; });
        if (it == coords_.end()) throw InvalidInput("projective point with all coordinates zero");
        for (auto c : coords_)
            if (c >= f.order()) throw InvalidInput("coordinate out of range for GF(" + f.describe() + ")");
        pivot_ = static_cast<std::size_t>(it - coords_.begin());
        const Coeff s = f.inv(*it);
        for (auto& c : coords_) c = f.mul(c, s);
    }

    /// Standard basis point e_i in P^{n_vars - 1}.
    static ProjectivePoint unit(FieldRef field, std::size_t n_vars, std::size_t i) {
        std::vector<Coeff> c(n_vars, 0);
        c.at(i) = 1;
        return {std::move(field), std::move(c)};
    }

    const FieldRef& field() const { return field_; }
    std::span<const Coeff> coords() const { return coords_; }
    const std::vector<Coeff>& coord_vector() const { return coords_; }
    std::size_t n_vars() const { return coords_.size(); }
    std::size_t pivot() const { return pivot_; }
    FieldElement coord(std::size_t i) const { return {field_, coords_.at(i)}; }

    /// Degree over GF(p) of the smallest field containing every coordinate.
    unsigned min_field_degree() const {
        unsigned d = 1;
        for (auto c : coords_) d = std::lcm(d, field_->subfield_degree(c));
        return d;
    }
    bool is_prime_rational() const {
        return std::all_of(coords_.begin(), coords_.end(), [&](Coeff c) { return field_->in_prime_subfield(c); });
    }

    ProjectivePoint embedded(const FieldRef& target) const {
        if (same_field(*field_, *target)) return *this;
        const auto& table = embedding_table(*field_, *target);
        std::vector<Coeff> c(coords_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = table[coords_[i]];
        return {target, std::move(c)};
    }

    bool operator==(const ProjectivePoint& o) const {
        if (coords_.size() != o.coords_.size()) return false;
        if (same_field(*field_, *o.field_)) return coords_ == o.coords_;
        if (field_->characteristic() != o.field_->characteristic()) return false;
        const auto common = make_field(field_->characteristic(), std::lcm(field_->degree(), o.field_->degree()));
        return embedded(common).coords_ == o.embedded(common).coords_;
    }

    /// Enumeration order: pivot ascending, then coordinates lexicographically.
    bool precedes(const ProjectivePoint& o) const {
        if (pivot_ != o.pivot_) return pivot_ < o.pivot_;
        return coords_ < o.coords_;
    }

    /// "(c0:c1:...:cN)", prefixed "@GF(p^m)" over a proper extension.
    std::string to_string() const {
        std::string out;
        if (!field_->is_prime_field()) out = "@GF(" + field_->describe() + ")";
        out += '(';
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (i) out += ':';
            out += field_->format(coords_[i]);
        }
        return out + ')';
    }

private:
    FieldRef field_;
    std::vector<Coeff> coords_;
    std::size_t pivot_ = 0;
};

/// Parses "(c0:...:cN)" or "@GF(p^m)(c0:...:cN)". Without a prefix the
/// coordinates are read in default_field.
inline ProjectivePoint parse_point(std::string_view text, const FieldRef& default_field, std::size_t n_vars) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    std::string_view s = trim(text);
    FieldRef field = default_field;
    if (!s.empty() && s.front() == '@') {
        if (s.substr(0, 4) != "@GF(") throw SyntaxError("expected '@GF(' in point '" + std::string(text) + "'");
        const auto close = s.find(')');
        if (close == std::string_view::npos) throw SyntaxError("unterminated field spec in '" + std::string(text) + "'");
        const std::string spec(s.substr(4, close - 4));
        unsigned p = 0, m = 1;
        const auto caret = spec.find('^');
        try {
            p = static_cast<unsigned>(std::stoul(spec.substr(0, caret)));
            if (caret != std::string::npos) m = static_cast<unsigned>(std::stoul(spec.substr(caret + 1)));
        } catch (const std::exception&) {
            throw SyntaxError("bad field spec '" + spec + "'");
        }
        field = make_field(p, m);
        if (field->characteristic() != default_field->characteristic()) {
            throw InvalidInput("point field characteristic differs from the system's");
        }
        s = trim(s.substr(close + 1));
    }
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
        throw SyntaxError("point must look like (c0:...:cN), got '" + std::string(text) + "'");
    }
    s = s.substr(1, s.size() - 2);
    std::vector<Coeff> coords;
    for (;;) {
        const auto colon = s.find(':');
        coords.push_back(field->parse(trim(s.substr(0, colon))));
        if (colon == std::string_view::npos) break;
        s = s.substr(colon + 1);
    }
    if (coords.size() != n_vars) {
        throw InvalidInput("point has " + std::to_string(coords.size()) + " coordinates, expected " +
                           std::to_string(n_vars));
    }
    return {field, std::move(coords)};
}

/// Generators (f^1, ..., f^r) in P^N with coefficients in GF(p).
class PolynomialSystem {
public:
    explicit PolynomialSystem(std::vector<HomogeneousPolynomial> gens) : gens_(std::move(gens)) {
        if (gens_.empty()) throw InvalidInput("a system needs at least one generator");
        const auto& f0 = gens_.front();
        if (f0.n_vars() < 2) throw InvalidInput("ambient space must be at least P^1");
        auto prime = make_field(f0.field()->characteristic(), 1);
        for (auto& g : gens_) {
            if (g.n_vars() != f0.n_vars()) throw InvalidInput("generators live in different numbers of variables");
            if (g.field()->characteristic() != prime->characteristic()) throw InvalidInput("generators over different characteristics");
            if (g.is_zero()) throw InvalidInput("zero generator");
            if (g.degree() < 1) throw InvalidInput("generators must have degree >= 1");
            if (!g.field()->is_prime_field()) g = restrict_to_prime(g, prime);
        }
        if (gens_.size() > ambient_dim()) throw InvalidInput("more generators than the ambient dimension");
    }

    const FieldRef& field() const { return gens_.front().field(); }
    unsigned characteristic() const { return field()->characteristic(); }
    std::size_t n_vars() const { return gens_.front().n_vars(); }
    std::size_t ambient_dim() const { return n_vars() - 1; }
    std::size_t size() const { return gens_.size(); }
    const std::vector<HomogeneousPolynomial>& generators() const { return gens_; }
    const HomogeneousPolynomial& operator[](std::size_t k) const { return gens_.at(k); }
    std::vector<unsigned> degrees() const {
        std::vector<unsigned> d;
        for (const auto& g : gens_) d.push_back(g.degree());
        return d;
    }
    std::vector<std::string> to_strings() const {
        std::vector<std::string> out;
        for (const auto& g : gens_) out.push_back(g.to_string());
        return out;
    }

    /// S o M, generator by generator. M must have GF(p) entries.
    PolynomialSystem transformed(const Matrix& M) const {
        std::vector<HomogeneousPolynomial> out;
        for (const auto& g : gens_) out.push_back(linear_change(g, M));
        return PolynomialSystem(std::move(out));
    }

    bool operator==(const PolynomialSystem& o) const { return gens_ == o.gens_; }

private:
    static HomogeneousPolynomial restrict_to_prime(const HomogeneousPolynomial& g, const FieldRef& prime) {
        HomogeneousPolynomial r(prime, g.n_vars(), g.degree());
        for (const auto& [m, c] : g.terms()) {
            if (!g.field()->in_prime_subfield(c)) {
                throw InvalidInput("system generators must have coefficients in GF(" + prime->describe() + ")");
            }
            r.add_term(m, c);
        }
        return r;
    }

    std::vector<HomogeneousPolynomial> gens_;
};

inline PolynomialSystem parse_system(const std::vector<std::string>& texts, const FieldRef& field, std::size_t n_vars) {
    std::vector<HomogeneousPolynomial> gens;
    for (const auto& t : texts) gens.push_back(parse_polynomial(t, field, n_vars));
    return PolynomialSystem(std::move(gens));
}

/// Basis of a subspace of K^{N+1}, kept in reduced row echelon form.
class LinearSubspace {
public:
    LinearSubspace(FieldRef field, std::size_t ambient, const std::vector<Vector>& spanning)
        : field_(std::move(field)), ambient_(ambient), basis_(detail::echelon_rows(field_, spanning, ambient)) {}

    const FieldRef& field() const { return field_; }
    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dimension() const { return basis_.size(); }
    const std::vector<Vector>& basis() const { return basis_; }

    bool contains(std::span<const Coeff> v) const {
        if (v.size() != ambient_) throw InvalidInput("vector has the wrong length");
        return in_span(field_, v, basis_);
    }
    /// Projective point (embedded into a common field) lies in P(subspace).
    bool contains(const ProjectivePoint& x) const {
        const unsigned deg = std::lcm(field_->degree(), x.field()->degree());
        const auto common = make_field(field_->characteristic(), deg);
        const auto& table = embedding_table(*field_, *common);
        std::vector<Vector> b;
        for (const auto& row : basis_) {
            Vector r(row.size());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = table[row[i]];
            b.push_back(std::move(r));
        }
        return in_span(common, x.embedded(common).coords(), b);
    }
    bool operator==(const LinearSubspace& o) const {
        return same_field(*field_, *o.field_) && ambient_ == o.ambient_ && basis_ == o.basis_;
    }

private:
    FieldRef field_;
    std::size_t ambient_;
    std::vector<Vector> basis_;
};

/// r x (N+1) matrix [f^k_{z_j}(a)], j = 0..N, over the point's field.
inline Matrix jacobian_full(const PolynomialSystem& S, const ProjectivePoint& a) {
    if (a.n_vars() != S.n_vars()) throw InvalidInput("point and system live in different spaces");
    Matrix J(a.field(), S.size(), S.n_vars());
    for (std::size_t k = 0; k < S.size(); ++k)
        for (std::size_t j = 0; j < S.n_vars(); ++j)
            J(k, j) = evaluate_raw(partial_derivative(S[k], j), a.coords(), *a.field());
    return J;
}

/// Jacobian without the z_0 column (columns z_1..z_N).
inline Matrix jacobian_D(const PolynomialSystem& S, const ProjectivePoint& a) {
    const std::size_t drop[] = {0};
    return jacobian_full(S, a).without_columns(drop);
}

/// Jacobian without the z_0 and z_N columns (columns z_1..z_{N-1}).
inline Matrix jacobian_Dprime(const PolynomialSystem& S, const ProjectivePoint& a) {
    const std::size_t drop[] = {0, S.ambient_dim()};
    return jacobian_full(S, a).without_columns(drop);
}

inline bool on_zero_set(const PolynomialSystem& S, const ProjectivePoint& a) {
    for (const auto& g : S.generators())
        if (evaluate_raw(g, a.coords(), *a.field()) != 0) return false;
    return true;
}

inline bool is_singular_at(const PolynomialSystem& S, const ProjectivePoint& a) {
    if (!on_zero_set(S, a)) return false;
    return rank(jacobian_full(S, a)) < S.size();
}

/// Embedded tangent space at a smooth point, as the kernel of the Jacobian.
inline LinearSubspace tangent_space(const PolynomialSystem& S, const ProjectivePoint& x) {
    if (!on_zero_set(S, x)) throw InvalidInput("point " + x.to_string() + " is not on the zero set");
    auto rk = rank_and_kernel(jacobian_full(S, x));
    if (rk.rank < S.size()) throw SingularPointError("point " + x.to_string() + " is singular");
    return {x.field(), S.n_vars(), rk.kernel};
}

/// Tangent hyperplane of the hypersurface f = 0 at a, as a dual point.
inline ProjectivePoint gauss_map(const HomogeneousPolynomial& f, const ProjectivePoint& a) {
    if (a.n_vars() != f.n_vars()) throw InvalidInput("point and polynomial live in different spaces");
    if (evaluate_raw(f, a.coords(), *a.field()) != 0) throw InvalidInput("point " + a.to_string() + " is not on the hypersurface");
    std::vector<Coeff> grad(f.n_vars());
    for (std::size_t j = 0; j < f.n_vars(); ++j) grad[j] = evaluate_raw(partial_derivative(f, j), a.coords(), *a.field());
    if (std::all_of(grad.begin(), grad.end(), [](Coeff c) { return c == 0; })) {
        throw SingularPointError("all partials vanish at " + a.to_string());
    }
    return {a.field(), std::move(grad)};
}

// ---------------------------------------------------------------------------
// Singular-point search

struct SingularPoint {
    unsigned m;  // degree of the minimal field of definition
    ProjectivePoint point;

    bool operator==(const SingularPoint&) const = default;
};

struct SearchOptions {
    unsigned m_min = 1;
    unsigned m_max = 3;
    std::uint64_t budget = 100'000'000;  // enumerated points, all levels together
    unsigned jobs = 1;
};

struct SingularSearchResult {
    std::vector<SingularPoint> points;
    unsigned searched_through = 0;  // last completed extension degree
    std::uint64_t evaluated = 0;
};

/// Budget exhausted before the requested bound; carries what was found so far.
class BudgetExceeded : public ResourceError {
public:
    BudgetExceeded(const std::string& what, SingularSearchResult partial)
        : ResourceError(what), partial_(std::move(partial)) {}
    const SingularSearchResult& partial() const { return partial_; }

private:
    SingularSearchResult partial_;
};

/// Number of points of P^N over GF(q), saturating.
inline std::uint64_t projective_point_count(std::uint64_t q, std::size_t N) {
    std::uint64_t total = 0, pw = 1;
    for (std::size_t i = 0; i <= N; ++i) {
        total += pw;
        if (pw > (std::uint64_t{1} << 62) / q) return UINT64_MAX;
        pw *= q;
    }
    return total;
}

namespace detail {

// A system specialised to one point field: coefficients pre-embedded and
// partials precomputed, evaluated from per-coordinate power tables.
class CompiledSystem {
public:
    CompiledSystem(const PolynomialSystem& S, FieldRef field) : field_(std::move(field)), n_(S.n_vars()) {
        for (const auto& g : S.generators()) {
            gens_.push_back(compile(g));
            std::vector<Compiled> parts;
            for (std::size_t j = 0; j < n_; ++j) parts.push_back(compile(partial_derivative(g, j)));
            partials_.push_back(std::move(parts));
            max_deg_ = std::max(max_deg_, g.degree());
        }
    }

    std::size_t n_vars() const { return n_; }
    std::size_t rows() const { return gens_.size(); }
    unsigned max_degree() const { return max_deg_; }
    const FieldDescriptor& field() const { return *field_; }

    void fill_powers(std::vector<Coeff>& powers, std::size_t i, Coeff x) const {
        const std::size_t w = max_deg_ + 1;
        powers[i * w] = 1;
        for (std::size_t d = 1; d < w; ++d) powers[i * w + d] = field_->mul(powers[i * w + d - 1], x);
    }

    bool vanishes(const std::vector<Coeff>& powers) const {
        for (const auto& g : gens_)
            if (eval(g, powers) != 0) return false;
        return true;
    }

    std::size_t jacobian_rank(const std::vector<Coeff>& powers) const {
        Matrix J(field_, gens_.size(), n_);
        for (std::size_t k = 0; k < gens_.size(); ++k)
            for (std::size_t j = 0; j < n_; ++j) J(k, j) = eval(partials_[k][j], powers);
        return rank(J);
    }

private:
    struct Term {
        Coeff c;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;  // (var, exponent)
    };
    using Compiled = std::vector<Term>;

    Compiled compile(const HomogeneousPolynomial& g) const {
        const auto& table = embedding_table(*g.field(), *field_);
        Compiled out;
        for (const auto& [m, c] : g.terms()) {
            Term t{table[c], {}};
            for (std::size_t i = 0; i < m.exponents.size(); ++i)
                if (m.exponents[i] != 0) t.factors.emplace_back(static_cast<std::uint32_t>(i), m.exponents[i]);
            out.push_back(std::move(t));
        }
        return out;
    }

    Coeff eval(const Compiled& g, const std::vector<Coeff>& powers) const {
        const std::size_t w = max_deg_ + 1;
        Coeff acc = 0;
        for (const auto& t : g) {
            Coeff v = t.c;
            for (const auto& [i, e] : t.factors) {
                v = field_->mul(v, powers[i * w + e]);
                if (v == 0) break;
            }
            acc = field_->add(acc, v);
        }
        return acc;
    }

    FieldRef field_;
    std::size_t n_;
    unsigned max_deg_ = 0;
    std::vector<Compiled> gens_;
    std::vector<std::vector<Compiled>> partials_;
};

struct SearchChunk {
    std::size_t pivot;
    std::uint64_t begin, end;  // linear index range over the free coordinates
    std::vector<std::vector<Coeff>> found;
};

// True when no Frobenius conjugate of coords precedes it.
inline bool least_in_orbit(const FieldDescriptor& f, const std::vector<Coeff>& coords, unsigned m) {
    std::vector<Coeff> c = coords;
    for (unsigned i = 1; i < m; ++i) {
        for (auto& x : c) x = f.frobenius(x);
        if (c < coords) return false;
    }
    return true;
}

inline void search_chunk(const CompiledSystem& cs, unsigned m, std::size_t r, SearchChunk& chunk) {
    const auto& f = cs.field();
    const std::size_t n = cs.n_vars();
    const std::size_t w = cs.max_degree() + 1;
    const Coeff q = f.order();
    std::vector<Coeff> coords(n, 0);
    std::vector<Coeff> powers(n * w, 0);
    coords[chunk.pivot] = 1;
    // decode begin; the last coordinate is the least significant digit
    std::uint64_t idx = chunk.begin;
    for (std::size_t i = n; i-- > chunk.pivot + 1;) {
        coords[i] = static_cast<Coeff>(idx % q);
        idx /= q;
    }
    for (std::size_t i = 0; i < n; ++i) cs.fill_powers(powers, i, coords[i]);
    for (std::uint64_t it = chunk.begin; it < chunk.end; ++it) {
        if (cs.vanishes(powers)) {
            unsigned deg = 1;
            for (auto c : coords) deg = std::lcm(deg, f.subfield_degree(c));
            if (deg == m && least_in_orbit(f, coords, m) && cs.jacobian_rank(powers) < r) {
                chunk.found.push_back(coords);
            }
        }
        // odometer step; refresh power tables of the touched coordinates only
        for (std::size_t i = n; i-- > chunk.pivot + 1;) {
            if (++coords[i] < q) {
                cs.fill_powers(powers, i, coords[i]);
                break;
            }
            coords[i] = 0;
            cs.fill_powers(powers, i, 0);
        }
    }
}

}  // namespace detail

/// All singular points of S rational over GF(p^m), m_min <= m <= m_max, each at
/// its minimal field of definition, one representative per Frobenius orbit,
/// ordered by m and then by enumeration order. Points whose minimal field has
/// degree below m_min are skipped (they belong to an earlier search).
inline SingularSearchResult singular_search(const PolynomialSystem& S, const SearchOptions& opt = {}) {
    if (opt.m_min < 1 || opt.m_max < opt.m_min) throw InvalidInput("invalid extension bounds");
    const unsigned p = S.characteristic();
    const std::size_t N = S.ambient_dim();
    SingularSearchResult result;
    result.searched_through = opt.m_min - 1;
    for (unsigned m = opt.m_min; m <= opt.m_max; ++m) {
        std::uint64_t q = 1;
        for (unsigned i = 0; i < m; ++i) {
            q *= p;
            if (q > kMaxFieldOrder) break;
        }
        const std::uint64_t count = q > kMaxFieldOrder ? UINT64_MAX : projective_point_count(q, N);
        if (count == UINT64_MAX || result.evaluated + count > opt.budget) {
            throw BudgetExceeded("singular search over GF(" + std::to_string(p) + "^" + std::to_string(m) +
                                     ") exceeds the budget of " + std::to_string(opt.budget) + " point evaluations",
                                 result);
        }
        const auto field = make_field(p, m);
        const detail::CompiledSystem cs(S, field);
        std::vector<detail::SearchChunk> chunks;
        const unsigned jobs = std::max(1U, opt.jobs);
        for (std::size_t k = 0; k <= N; ++k) {
            std::uint64_t total = 1;
            for (std::size_t i = k + 1; i <= N; ++i) total *= q;
            const std::uint64_t step = (total + jobs - 1) / jobs;
            for (std::uint64_t b = 0; b < total; b += step) chunks.push_back({k, b, std::min(total, b + step), {}});
        }
        if (jobs == 1) {
            for (auto& c : chunks) detail::search_chunk(cs, m, S.size(), c);
        } else {
            std::vector<std::thread> workers;
            for (unsigned t = 0; t < jobs; ++t) {
                workers.emplace_back([&, t] {
                    for (std::size_t i = t; i < chunks.size(); i += jobs) detail::search_chunk(cs, m, S.size(), chunks[i]);
                });
            }
            for (auto& w : workers) w.join();
        }
        for (auto& c : chunks)
            for (auto& coords : c.found) result.points.push_back({m, ProjectivePoint(field, std::move(coords))});
        result.evaluated += count;
        result.searched_through = m;
    }
    return result;
}

}  // namespace strangeci
