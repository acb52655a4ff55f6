#include <gtest/gtest.h>

#include <random>

#include "strangeci/families.hpp"
#include "strangeci/strangeness.hpp"

using namespace strangeci;

namespace {

HomogeneousPolynomial random_poly(std::mt19937_64& rng, const FieldRef& F, std::size_t n, unsigned d, std::size_t terms) {
    const auto basis = monomials_of_degree(n, d);
    for (;;) {
        HomogeneousPolynomial f(F, n, d);
        for (std::size_t t = 0; t < terms; ++t) f.add_term(basis[rng() % basis.size()], static_cast<Coeff>(rng() % F->order()));
        if (!f.is_zero()) return f;
    }
}

// Random system whose z0-partials vanish, then moved by a random GL change.
PolynomialSystem random_strange_system(std::mt19937_64& rng, unsigned p, std::size_t N, std::size_t r, Matrix* chart) {
    const auto F = make_field(p, 1);
    std::vector<HomogeneousPolynomial> gens;
    for (std::size_t k = 0; k < r; ++k) {
        const unsigned d = static_cast<unsigned>(2 + rng() % 3);
        HomogeneousPolynomial f(F, N + 1, d);
        for (const auto& m : monomials_of_degree(N + 1, d))
            if (m.exponents[0] % p == 0 && rng() % 3 == 0) f.add_term(m, static_cast<Coeff>(rng() % p));
        if (f.is_zero()) f.add_term(monomials_of_degree(N + 1, d).back(), 1);
        gens.push_back(f);
    }
    Matrix M(F, N + 1, N + 1);
    do {
        for (std::size_t i = 0; i <= N; ++i)
            for (std::size_t j = 0; j <= N; ++j) M(i, j) = static_cast<Coeff>(rng() % p);
    } while (!is_invertible(M));
    if (chart) *chart = M;
    return PolynomialSystem(std::move(gens)).transformed(M);
}

std::vector<ProjectivePoint> rational_points(const FieldRef& F, std::size_t n) {
    std::vector<ProjectivePoint> out;
    std::vector<Coeff> v(n, 0);
    for (;;) {
        std::size_t i = 0;
        while (i < n && ++v[i] == F->order()) v[i++] = 0;
        if (i == n) break;
        ProjectivePoint a(F, v);
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
    return out;
}

}  // namespace

TEST(Strangeness, QuadricExampleStrangeForFirstVertex) {
    const auto F = make_field(2, 1);
    const auto S = parse_system({"z0^2+z1*z2+z3*z4"}, F, 5);
    const auto rep = is_strange_for(S, parse_point("(1:0:0:0:0)", F, 5));
    EXPECT_TRUE(rep.verdict);
    EXPECT_FALSE(rep.certificate.has_value());
    EXPECT_TRUE(rep.witness_generates_same_ideal);
    for (const auto& g : rep.witness_generators) EXPECT_TRUE(partial_derivative(g, 0).is_zero());
    const auto no = is_strange_for(S, parse_point("(0:1:0:0:0)", F, 5));
    EXPECT_FALSE(no.verdict);
    ASSERT_TRUE(no.certificate.has_value());
    EXPECT_EQ(no.certificate->failing_index, 0U);
    EXPECT_FALSE(no.certificate->residual.is_zero());
}

TEST(Strangeness, ChartSendsE0ToVertex) {
    const auto F = make_field(3, 1);
    for (const auto& v : rational_points(F, 4)) {
        const auto M = move_point_to_origin_chart(v);
        EXPECT_TRUE(is_invertible(M));
        EXPECT_EQ(ProjectivePoint(F, M.column(0)), v);
    }
}

TEST(Strangeness, HypersurfaceLocusMatchesDirectDefinition) {
    // for one generator, v is strange iff sum_i v_i f_{z_i} is the zero polynomial
    std::mt19937_64 rng(31);
    for (unsigned p : {2U, 3U}) {
        const auto F = make_field(p, 1);
        for (int t = 0; t < 30; ++t) {
            const std::size_t n = 3 + rng() % 2;
            auto f = random_poly(rng, F, n, static_cast<unsigned>(2 + rng() % 3), 4);
            if (t % 3 == 0) {
                // bias toward strange examples: drop terms with z0-exponent not divisible by p
                HomogeneousPolynomial g(F, n, f.degree());
                for (const auto& [m, c] : f.terms())
                    if (m.exponents[0] % p == 0) g.add_term(m, c);
                if (!g.is_zero()) f = g;
            }
            const PolynomialSystem S({f});
            const auto locus = strange_locus(S);
            for (const auto& v : rational_points(F, n)) {
                HomogeneousPolynomial lin(F, n, f.degree() - 1);
                for (std::size_t i = 0; i < n; ++i) lin = lin + partial_derivative(f, i).scaled(v.coords()[i]);
                EXPECT_EQ(locus.contains(v), lin.is_zero()) << f.to_string() << " v=" << v.to_string();
                EXPECT_EQ(is_strange_for(S, v).verdict, lin.is_zero()) << f.to_string() << " v=" << v.to_string();
            }
        }
    }
}

TEST(Strangeness, LocusAgreesWithPerVertexDecision) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 30; ++t) {
        const unsigned p = t % 2 == 0 ? 2 : 3;
        Matrix M(make_field(p, 1), 1, 1);
        const auto S = random_strange_system(rng, p, 3, 1 + rng() % 2, &M);
        const auto locus = strange_locus(S);
        EXPECT_GE(locus.dimension(), 1U);
        // S = T o M with T strange for e_0, so S is strange for M^{-1} e_0
        EXPECT_TRUE(locus.contains(ProjectivePoint(S.field(), inverse(M).column(0))));
        for (const auto& v : rational_points(S.field(), 4)) EXPECT_EQ(locus.contains(v), is_strange_for(S, v).verdict);
    }
}

TEST(Strangeness, GradedMembershipWitness) {
    std::mt19937_64 rng(33);
    const auto F = make_field(3, 1);
    const auto S = parse_system({"z0*z1+z2^2", "z1^3+z0*z2^2"}, F, 3);
    for (int t = 0; t < 50; ++t) {
        // random combination a*f1 + b*f2 of degree 4 is a member
        const auto a = random_poly(rng, F, 3, 2, 3), b = random_poly(rng, F, 3, 1, 2);
        const auto h = a * S[0] + b * S[1];
        if (h.is_zero()) continue;
        const auto mem = graded_membership(h, S);
        ASSERT_TRUE(mem.member);
        EXPECT_EQ(mem.multipliers[0] * S[0] + mem.multipliers[1] * S[1], h);
    }
    EXPECT_FALSE(graded_membership(parse_polynomial("z0^2", F, 3), S).member);
    EXPECT_FALSE(graded_membership(parse_polynomial("z0", F, 3), S).member);  // below every degree
}

TEST(Strangeness, NormalizeProperties) {
    std::mt19937_64 rng(34);
    for (unsigned p : {2U, 3U, 5U, 7U}) {
        const auto F = make_field(p, 1);
        for (int t = 0; t < 60; ++t) {
            const std::size_t n = 1 + rng() % 4;
            const auto g = random_poly(rng, F, n, static_cast<unsigned>(rng() % 8), 5);
            const auto gt = normalize(g);
            EXPECT_TRUE(partial_derivative(gt, 0).is_zero()) << g.to_string();
            const auto diff = gt - g;
            for (const auto& [m, c] : diff.terms()) EXPECT_GT(m.exponents[0], 0U);
            if (partial_derivative(g, 0).is_zero()) EXPECT_EQ(gt, g);
        }
    }
    const auto F3 = make_field(3, 1);
    // g = z0 z1^2 + z2^3: g~ = g - z0 * z1^2 = z2^3
    EXPECT_EQ(normalize(parse_polynomial("z0*z1^2+z2^3", F3, 3)).to_string(), "z2^3");
    EXPECT_EQ(normalize(parse_polynomial("z0^2*z1", F3, 2)).to_string(), "0");
}

TEST(Strangeness, NormalizeSystemKeepsIdealWhenStrange) {
    std::mt19937_64 rng(35);
    const auto F = make_field(3, 1);
    for (int t = 0; t < 10; ++t) {
        // vertex taken from the strange locus
        const auto base = random_strange_system(rng, 3, 3, 2, nullptr);
        const auto v = strange_locus(base);
        if (v.dimension() == 0) continue;
        const ProjectivePoint vert(F, v.subspace.basis()[0]);
        const auto rep = is_strange_for(base, vert);
        EXPECT_TRUE(rep.verdict);
        EXPECT_TRUE(rep.witness_generates_same_ideal);
    }
}

TEST(Strangeness, ConeTest) {
    const auto F = make_field(2, 1);
    const auto base = parse_system({"z1^2+z2*z3"}, F, 4);
    const auto alpha = parse_point("(1:1:1:0)", F, 4);
    const auto cone = cone_over(base, alpha);
    EXPECT_TRUE(is_cone_with_vertex(cone, alpha));
    EXPECT_TRUE(is_cone_with_vertex(base, ProjectivePoint::unit(F, 4, 0)));
    EXPECT_FALSE(is_cone_with_vertex(cone, ProjectivePoint::unit(F, 4, 3)));
    // z0^2 + z1 z2 is strange for e_0 but not a cone: the z0-slices z0^2 and z1 z2 are not in the ideal
    const auto q = parse_system({"z0^2+z1*z2"}, F, 3);
    EXPECT_TRUE(is_strange_for(q, ProjectivePoint::unit(F, 3, 0)).verdict);
    EXPECT_FALSE(is_cone_with_vertex(q, ProjectivePoint::unit(F, 3, 0)));
}

TEST(Strangeness, ConeCorollaryPreconditions) {
    const auto F = make_field(5, 1);
    const auto S = parse_system({"z1^2+z2*z3", "z1*z2*z3+z3^3"}, F, 4);
    EXPECT_TRUE(cone_corollary_check(S, ProjectivePoint::unit(F, 4, 0)));
    EXPECT_THROW(cone_corollary_check(S, ProjectivePoint::unit(F, 4, 1)), InvalidInput);
    const auto big = parse_system({"z1^5+z2^5"}, F, 3);
    EXPECT_THROW(cone_corollary_check(big, ProjectivePoint::unit(F, 3, 0)), InvalidInput);
}

TEST(Strangeness, VertexMustBeRational) {
    const auto F = make_field(2, 1);
    const auto S = parse_system({"z0^2+z1*z2"}, F, 3);
    EXPECT_THROW(is_strange_for(S, parse_point("@GF(2^2)(1:t:0)", F, 3)), UnsupportedVertex);
    EXPECT_THROW(is_cone_with_vertex(S, parse_point("@GF(2^2)(1:t:0)", F, 3)), UnsupportedVertex);
    // a rational point written over an extension is accepted
    EXPECT_TRUE(is_strange_for(S, parse_point("@GF(2^2)(1:0:0)", F, 3)).verdict);
    EXPECT_THROW(is_strange_for(S, parse_point("(1:0:0:0)", F, 4)), InvalidInput);
}

TEST(Strangeness, Equivariance) {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 20; ++t) {
        const unsigned p = t % 2 ? 3 : 2;
        const auto F = make_field(p, 1);
        const auto S = random_strange_system(rng, p, 3, 1 + rng() % 2, nullptr);
        Matrix M(F, 4, 4);
        do {
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 4; ++j) M(i, j) = static_cast<Coeff>(rng() % p);
        } while (!is_invertible(M));
        const auto SM = S.transformed(M);
        const auto Minv = inverse(M);
        for (const auto& v : rational_points(F, 4)) {
            const ProjectivePoint w(F, Minv.apply(v.coords()));
            EXPECT_EQ(is_strange_for(SM, w).verdict, is_strange_for(S, v).verdict);
        }
    }
}
