#pragma once

// Strangeness decisions for complete intersections in characteristic p.
//
// Everything reduces to membership in a graded piece of the generated ideal:
//   h in (f^1, ..., f^r)_d  <=>  h in span{ m * f^k : deg m = d - e^k },
// a finite linear problem over the monomial basis of degree d.
//
// Cone test. Write f^k = sum_j z_0^j h^k_j with h^k_j free of z_0. If every slice
// h^k_j lies in the ideal then the slices generate it (each f^k is a combination
// of them), so the ideal has z_0-free generators. Conversely, if the ideal is
// generated by z_0-free g_i, then f^k = sum_i a_i g_i and collecting powers of z_0
// in the a_i expresses each slice h^k_j as sum_i (a_i)_j g_i, which is in the ideal.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "strangeci/errors.hpp"
#include "strangeci/exactla.hpp"
#include "strangeci/geometry.hpp"
#include "strangeci/gf.hpp"
#include "strangeci/hompoly.hpp"

namespace strangeci {

struct MembershipResult {
    bool member = false;
    /// On success h = sum_k multipliers[k] * f^k.
    std::vector<HomogeneousPolynomial> multipliers;
    std::size_t piece_dimension = 0;  // dim of the degree-d graded piece
};

namespace detail {

struct GradedPiece {
    std::vector<Monomial> basis;                 // monomials of degree d
    std::map<Monomial, std::size_t> index;       // position in basis
    std::vector<Vector> spanning;                // m * f^k as coefficient vectors
    std::vector<std::pair<std::size_t, Monomial>> origin;  // (k, m) per spanning vector
};

inline GradedPiece graded_piece(const PolynomialSystem& S, unsigned d) {
    GradedPiece gp;
    gp.basis = monomials_of_degree(S.n_vars(), d);
    for (std::size_t i = 0; i < gp.basis.size(); ++i) gp.index.emplace(gp.basis[i], i);
    for (std::size_t k = 0; k < S.size(); ++k) {
        const auto& f = S[k];
        if (f.degree() > d) continue;
        for (const auto& m : monomials_of_degree(S.n_vars(), d - f.degree())) {
            Vector v(gp.basis.size(), 0);
            for (const auto& [mono, c] : f.terms()) v[gp.index.at(mono * m)] = c;
            gp.spanning.push_back(std::move(v));
            gp.origin.emplace_back(k, m);
        }
    }
    return gp;
}

inline Vector coefficient_vector(const HomogeneousPolynomial& h, const GradedPiece& gp) {
    Vector v(gp.basis.size(), 0);
    for (const auto& [m, c] : h.terms()) v[gp.index.at(m)] = c;
    return v;
}

}  // namespace detail

/// Membership of h in the degree-deg(h) piece of the ideal generated by S.
inline MembershipResult graded_membership(const HomogeneousPolynomial& h, const PolynomialSystem& S) {
    if (h.n_vars() != S.n_vars()) throw InvalidInput("polynomial and system live in different rings");
    if (!same_field(*h.field(), *S.field())) throw InvalidInput("polynomial and system over different fields");
    const unsigned d = h.degree();
    MembershipResult res;
    auto gp = detail::graded_piece(S, d);
    res.piece_dimension = gp.spanning.empty() ? 0 : rank(Matrix::from_rows(S.field(), gp.spanning, gp.basis.size()));
    const auto target = detail::coefficient_vector(h, gp);
    auto sol = solve_in_span(S.field(), target, gp.spanning);
    if (!sol) return res;
    res.member = true;
    for (std::size_t k = 0; k < S.size(); ++k) {
        const unsigned md = d >= S[k].degree() ? d - S[k].degree() : 0;
        res.multipliers.emplace_back(S.field(), S.n_vars(), md);
    }
    for (std::size_t i = 0; i < sol->size(); ++i) {
        const auto& [k, m] = gp.origin[i];
        res.multipliers[k].add_term(m, (*sol)[i]);
    }
    return res;
}

/// Deterministic M with M e_0 proportional to v: swap the first nonzero
/// coordinate of v into slot 0, then shear column 0 onto v.
inline Matrix move_point_to_origin_chart(const ProjectivePoint& v) {
    const std::size_t n = v.n_vars();
    const std::size_t k = v.pivot();
    Matrix P = Matrix::identity(v.field(), n);
    if (k != 0) {
        P(0, 0) = 0;
        P(k, k) = 0;
        P(0, k) = 1;
        P(k, 0) = 1;
    }
    Vector w = P.apply(v.coords());  // P is its own inverse
    Matrix shear = Matrix::identity(v.field(), n);
    for (std::size_t i = 1; i < n; ++i) shear(i, 0) = w[i];
    return P * shear;
}

struct StrangeCertificate {
    std::size_t failing_index = 0;
    HomogeneousPolynomial residual;  // (f^k o M)_{z_0}, not in the ideal
    std::size_t piece_dimension = 0;
};

struct StrangeReport {
    PolynomialSystem system;
    ProjectivePoint vertex;
    bool verdict = false;
    Matrix chart;  // M moving vertex to e_0
    /// verdict true: normalized generators of S o M, all with zero z_0-partial.
    std::vector<HomogeneousPolynomial> witness_generators;
    bool witness_generates_same_ideal = false;
    std::optional<StrangeCertificate> certificate;
};

struct NormalizedSystem {
    /// normalize(f^k) in order; an entry may be the zero polynomial.
    std::vector<HomogeneousPolynomial> generators;
    bool same_ideal = false;
};

/// g + sum_{j=1}^{p-1} (-1)^j z_0^j / j! * d^j g / dz_0^j. The result has zero
/// z_0-partial and agrees with g modulo z_0.
inline HomogeneousPolynomial normalize(const HomogeneousPolynomial& g) {
    const auto& F = *g.field();
    const unsigned p = F.characteristic();
    HomogeneousPolynomial out = g;
    HomogeneousPolynomial deriv = g;
    Coeff factorial = 1;
    for (unsigned j = 1; j < p && j <= g.degree(); ++j) {
        deriv = partial_derivative(deriv, 0);
        if (deriv.is_zero()) break;
        factorial = F.mul(factorial, F.from_int(j));
        Coeff c = F.inv(factorial);
        if (j % 2 == 1) c = F.neg(c);
        std::vector<unsigned> e(g.n_vars(), 0);
        e[0] = j;
        out = out + deriv.times_monomial(Monomial(std::move(e)), c);
    }
    return out;
}

/// Generator-wise normalization; same_ideal checks both inclusions degree-wise.
inline NormalizedSystem normalize_system(const PolynomialSystem& S) {
    NormalizedSystem out;
    std::vector<HomogeneousPolynomial> nonzero;
    for (const auto& f : S.generators()) {
        out.generators.push_back(normalize(f));
        if (!out.generators.back().is_zero()) nonzero.push_back(out.generators.back());
    }
    if (nonzero.empty()) return out;
    const PolynomialSystem tilde(std::move(nonzero));
    out.same_ideal = true;
    for (std::size_t k = 0; k < S.size() && out.same_ideal; ++k) {
        out.same_ideal = graded_membership(S[k], tilde).member && graded_membership(out.generators[k], S).member;
    }
    return out;
}

namespace detail {

inline void require_rational_vertex(const PolynomialSystem& S, const ProjectivePoint& v) {
    if (v.n_vars() != S.n_vars()) throw InvalidInput("vertex and system live in different spaces");
    if (v.field()->characteristic() != S.characteristic()) throw InvalidInput("vertex over a different characteristic");
    if (!v.is_prime_rational()) {
        throw UnsupportedVertex("vertex " + v.to_string() + " is not rational over GF(" + S.field()->describe() + ")");
    }
}

inline ProjectivePoint to_prime(const ProjectivePoint& v, const FieldRef& prime) {
    return {prime, v.coord_vector()};
}

}  // namespace detail

/// Strangeness of S for v: move v to e_0 and require every (f^k o M)_{z_0} to
/// lie in the ideal of S o M. For one generator this is f_{z_0} = 0.
inline StrangeReport is_strange_for(const PolynomialSystem& S, const ProjectivePoint& vertex) {
    detail::require_rational_vertex(S, vertex);
    const auto v = detail::to_prime(vertex, S.field());
    const Matrix M = move_point_to_origin_chart(v);
    const PolynomialSystem T = S.transformed(M);
    StrangeReport rep{S, v, false, M, {}, false, std::nullopt};
    for (std::size_t k = 0; k < T.size(); ++k) {
        auto h = partial_derivative(T[k], 0);
        auto mem = graded_membership(h, T);
        if (!mem.member) {
            rep.certificate = StrangeCertificate{k, std::move(h), mem.piece_dimension};
            return rep;
        }
    }
    rep.verdict = true;
    auto norm = normalize_system(T);
    rep.witness_generators = norm.generators;
    rep.witness_generates_same_ideal = norm.same_ideal;
    return rep;
}

struct StrangeLocus {
    LinearSubspace subspace;
    std::size_t dimension() const { return subspace.dimension(); }
    bool contains(const ProjectivePoint& v) const { return subspace.contains(v); }
};

/// All lifts v with sum_i v_i f^k_{z_i} in the degree-(e^k - 1) piece for every k,
/// from one kernel computation: columns are v_0..v_N followed by one block of
/// multiplier coordinates per generator.
inline StrangeLocus strange_locus(const PolynomialSystem& S) {
    const std::size_t n = S.n_vars();
    const auto& F = *S.field();
    std::vector<detail::GradedPiece> pieces;
    std::size_t rows = 0, cols = n;
    for (const auto& f : S.generators()) {
        pieces.push_back(detail::graded_piece(S, f.degree() - 1));
        rows += pieces.back().basis.size();
        cols += pieces.back().spanning.size();
    }
    Matrix A(S.field(), rows, cols);
    std::size_t row0 = 0, col0 = n;
    for (std::size_t k = 0; k < S.size(); ++k) {
        const auto& gp = pieces[k];
        for (std::size_t i = 0; i < n; ++i) {
            const auto part = partial_derivative(S[k], i);
            for (const auto& [m, c] : part.terms()) A(row0 + gp.index.at(m), i) = c;
        }
        for (std::size_t j = 0; j < gp.spanning.size(); ++j)
            for (std::size_t r = 0; r < gp.basis.size(); ++r) A(row0 + r, col0 + j) = F.neg(gp.spanning[j][r]);
        row0 += gp.basis.size();
        col0 += gp.spanning.size();
    }
    auto rk = rank_and_kernel(A);
    std::vector<Vector> projected;
    for (const auto& kv : rk.kernel) projected.emplace_back(kv.begin(), kv.begin() + static_cast<std::ptrdiff_t>(n));
    return {LinearSubspace(S.field(), n, projected)};
}

/// Cone test via z_0-slices in the chart where v = e_0.
inline bool is_cone_with_vertex(const PolynomialSystem& S, const ProjectivePoint& vertex) {
    detail::require_rational_vertex(S, vertex);
    const auto v = detail::to_prime(vertex, S.field());
    const PolynomialSystem T = S.transformed(move_point_to_origin_chart(v));
    for (const auto& f : T.generators()) {
        std::map<unsigned, HomogeneousPolynomial> slices;
        for (const auto& [m, c] : f.terms()) {
            const unsigned j = m.exponents[0];
            auto it = slices.try_emplace(j, f.field(), f.n_vars(), f.degree() - j).first;
            Monomial rest = m;
            rest.exponents[0] = 0;
            it->second.add_term(rest, c);
        }
        for (const auto& [j, h] : slices)
            if (!graded_membership(h, T).member) return false;
    }
    return true;
}

/// If all e^k < p and S is strange for v, S is a cone with vertex v.
/// Returns the cone test; always true under the preconditions.
inline bool cone_corollary_check(const PolynomialSystem& S, const ProjectivePoint& v) {
    for (auto e : S.degrees()) {
        if (e >= S.characteristic()) {
            throw InvalidInput("cone corollary needs every degree below p = " + std::to_string(S.characteristic()));
        }
    }
    if (!is_strange_for(S, v).verdict) throw InvalidInput("system is not strange for " + v.to_string());
    return is_cone_with_vertex(S, v);
}

}  // namespace strangeci
