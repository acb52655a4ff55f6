#pragma once

// Constructors for the explicit strange examples: smooth quadric normal forms,
// singular strange hypersurfaces, cones, and the complete-intersection
// construction with a prescribed singular point off the vertex.

#include <string>
#include <vector>

#include "strangeci/errors.hpp"
#include "strangeci/exactla.hpp"
#include "strangeci/geometry.hpp"
#include "strangeci/gf.hpp"
#include "strangeci/hompoly.hpp"

namespace strangeci {

namespace detail {

inline Monomial mono(std::size_t n_vars, std::initializer_list<std::pair<std::size_t, unsigned>> factors) {
    std::vector<unsigned> e(n_vars, 0);
    for (auto [i, k] : factors) e.at(i) += k;
    return Monomial(std::move(e));
}

inline void require_prime(unsigned p) {
    if (!is_prime(p)) throw InvalidInput("characteristic " + std::to_string(p) + " is not prime");
}

}  // namespace detail

/// z0^2 + z1 z2 + ... + z_{N-1} z_N for N even, z0 z1 + z2 z3 + ... + z_{N-1} z_N for N odd.
inline PolynomialSystem quadric_normal_form(std::size_t N, unsigned p) {
    if (N < 2) throw InvalidInput("quadric normal form needs N >= 2");
    detail::require_prime(p);
    const auto F = make_field(p, 1);
    const std::size_t n = N + 1;
    HomogeneousPolynomial f(F, n, 2);
    std::size_t i = 0;
    if (N % 2 == 0) {
        f.add_term(detail::mono(n, {{0, 2}}), 1);
        i = 1;
    }
    for (; i + 1 <= N; i += 2) f.add_term(detail::mono(n, {{i, 1}, {i + 1, 1}}), 1);
    return PolynomialSystem({f});
}

/// z_N z_{N-1}^{e-1} + z_{N-1} z_{N-2}^{e-1} + ... + z_2 z_1^{e-1} + z_0^e, for p | e.
/// Singular exactly at (0:...:0:1).
inline PolynomialSystem strange_hypersurface_p_divides(std::size_t N, unsigned e, unsigned p) {
    detail::require_prime(p);
    if (N < 2) throw InvalidInput("need N >= 2");
    if (e < 3) throw InvalidInput("need e >= 3");
    if (e % p != 0) throw InvalidInput("need p | e");
    const auto F = make_field(p, 1);
    const std::size_t n = N + 1;
    HomogeneousPolynomial f(F, n, e);
    for (std::size_t j = N; j >= 2; --j) f.add_term(detail::mono(n, {{j, 1}, {j - 1, e - 1}}), 1);
    f.add_term(detail::mono(n, {{0, e}}), 1);
    return PolynomialSystem({f});
}

/// z_0^p z_1^{e-p} + z_2^e + ... + z_N^e, for e > p and p not dividing e.
inline PolynomialSystem strange_hypersurface_p_not_divides(std::size_t N, unsigned e, unsigned p) {
    detail::require_prime(p);
    if (N < 2) throw InvalidInput("need N >= 2");
    if (e <= p) throw InvalidInput("need e > p");
    if (e % p == 0) throw InvalidInput("need p not dividing e");
    const auto F = make_field(p, 1);
    const std::size_t n = N + 1;
    HomogeneousPolynomial f(F, n, e);
    f.add_term(detail::mono(n, {{0, p}, {1, e - p}}), 1);
    for (std::size_t j = 2; j <= N; ++j) f.add_term(detail::mono(n, {{j, e}}), 1);
    return PolynomialSystem({f});
}

/// Cone with vertex alpha over a z_0-free base: each generator is pulled back
/// along z_i -> z_i - alpha_i z_0 (i >= 1), which fixes z_0 = 0 and sends alpha to e_0.
inline PolynomialSystem cone_over(const PolynomialSystem& base, const ProjectivePoint& alpha) {
    if (alpha.n_vars() != base.n_vars()) throw InvalidInput("vertex and base live in different spaces");
    if (alpha.coords()[0] == 0) throw InvalidInput("cone vertex must lie off the hyperplane z0 = 0");
    if (!alpha.is_prime_rational()) throw UnsupportedVertex("cone vertex must be GF(p)-rational");
    for (const auto& g : base.generators())
        if (!g.is_free_of(0)) throw InvalidInput("base generators must not involve z0");
    const auto& F = *base.field();
    Matrix M = Matrix::identity(base.field(), base.n_vars());
    for (std::size_t i = 1; i < base.n_vars(); ++i) M(i, 0) = F.neg(alpha.coords()[i]);
    return base.transformed(M);
}

/// (g^1, f^2, ..., f^r) with g^1 = f^1 - f^1(beta) / beta_1^{e^1 - p} * z_0^p z_1^{e^1 - p}.
/// beta lies in P^{N-1} with coordinates (beta_1 : ... : beta_N); alpha = (1 : beta).
struct Prop31Construction {
    PolynomialSystem system;
    ProjectivePoint alpha;
};

inline Prop31Construction prop31_construct(const PolynomialSystem& base, const ProjectivePoint& beta) {
    const unsigned p = base.characteristic();
    const std::size_t n = base.n_vars();
    if (base.size() < 2) throw InvalidInput("construction needs r >= 2 generators");
    if (beta.n_vars() + 1 != n) throw InvalidInput("beta must have N coordinates (a point of P^{N-1})");
    if (!beta.is_prime_rational()) throw UnsupportedVertex("beta must be GF(p)-rational");
    for (const auto& g : base.generators())
        if (!g.is_free_of(0)) throw InvalidInput("generators must not involve z0");
    const auto& f1 = base[0];
    const unsigned e1 = f1.degree();
    if (e1 < p) throw InvalidInput("need e^1 >= p");
    const auto& F = *base.field();
    const Coeff b1 = beta.coords()[0];
    if (b1 == 0) throw InvalidInput("need beta_1 != 0");

    std::vector<Coeff> alpha_coords{1};
    for (auto c : beta.coords()) alpha_coords.push_back(c);
    const ProjectivePoint alpha(base.field(), alpha_coords);
    std::vector<Coeff> beta_lift(n, 0);
    for (std::size_t i = 1; i < n; ++i) beta_lift[i] = beta.coords()[i - 1];

    const Coeff f1_beta = evaluate_raw(f1, beta_lift, F);
    if (f1_beta == 0) throw InvalidInput("need f^1(beta) != 0");
    // beta singular on Z = (f^2 = ... = f^r = 0) in P^{N-1}
    std::vector<HomogeneousPolynomial> rest(base.generators().begin() + 1, base.generators().end());
    for (const auto& g : rest)
        if (evaluate_raw(g, beta_lift, F) != 0) throw InvalidInput("beta is not on Z");
    const PolynomialSystem Z(rest);
    const ProjectivePoint beta_in_PN(base.field(), beta_lift);
    const std::size_t drop[] = {0};
    if (rank(jacobian_full(Z, beta_in_PN).without_columns(drop)) >= Z.size()) {
        throw InvalidInput("beta is not a singular point of Z");
    }

    const Coeff c = F.div(f1_beta, F.pow(b1, e1 - p));
    HomogeneousPolynomial g1 = f1;
    g1.add_term(detail::mono(n, {{0, p}, {1, e1 - p}}), F.neg(c));
    std::vector<HomogeneousPolynomial> gens{g1};
    gens.insert(gens.end(), rest.begin(), rest.end());
    return {PolynomialSystem(std::move(gens)), alpha};
}

}  // namespace strangeci
