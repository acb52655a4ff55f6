#pragma once

// Seeded self-check suites behind the `verify` command.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "strangeci/census.hpp"
#include "strangeci/families.hpp"
#include "strangeci/strangeness.hpp"

namespace strangeci {

struct SuiteResult {
    std::string name;
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::vector<std::string> failure_details;

    bool passed() const { return failures == 0; }
    void record(bool ok, const std::string& detail) {
        ++instances;
        if (!ok) {
            ++failures;
            if (failure_details.size() < 20) failure_details.push_back(detail);
        }
    }
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"euler", "lemma-rank", "phi-surjectivity", "quadric-table",
                                                "cone-corollary"};
    return names;
}

inline std::size_t suite_default_count(const std::string& name) {
    if (name == "euler") return 500;
    if (name == "lemma-rank") return 1000;
    if (name == "phi-surjectivity") return 200;
    if (name == "quadric-table") return 15;
    if (name == "cone-corollary") return 100;
    throw InvalidInput("unknown suite '" + name + "'");
}

namespace detail {

inline unsigned pick(std::mt19937_64& rng, std::initializer_list<unsigned> xs) {
    return *(xs.begin() + static_cast<std::ptrdiff_t>(rng() % xs.size()));
}

inline std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return lo + rng() % (hi - lo + 1);
}

/// Random nonzero form with up to `terms` monomials.
inline HomogeneousPolynomial random_form(std::mt19937_64& rng, const FieldRef& F, std::size_t n, unsigned d,
                                         std::size_t terms) {
    const auto basis = monomials_of_degree(n, d);
    for (;;) {
        HomogeneousPolynomial f(F, n, d);
        for (std::size_t t = 0; t < terms; ++t) f.add_term(basis[rng() % basis.size()], static_cast<Coeff>(rng() % F->order()));
        if (!f.is_zero()) return f;
    }
}

/// Affine points of the chart z_N = 1 on the zero set, over F.
inline std::vector<ProjectivePoint> zeros_in_last_chart(const PolynomialSystem& S, const FieldRef& F) {
    const std::size_t n = S.n_vars();
    const std::uint64_t q = F->order();
    std::vector<Coeff> c(n, 0);
    c[n - 1] = 1;
    std::vector<ProjectivePoint> out;
    for (;;) {
        ProjectivePoint a(F, c);
        if (on_zero_set(S, a)) out.push_back(std::move(a));
        std::size_t i = n - 1;
        while (i-- > 0) {
            if (++c[i] < q) break;
            c[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

}  // namespace detail

/// sum_j z_j f_{z_j} == (e mod p) f for random forms, p in {2,3,5}.
inline SuiteResult suite_euler(std::uint64_t seed, std::size_t count) {
    SuiteResult res{"euler"};
    std::mt19937_64 rng(detail::splitmix64(seed ^ 0xE0));
    for (std::size_t i = 0; i < count; ++i) {
        const auto F = make_field(detail::pick(rng, {2, 3, 5}), 1);
        const auto n = detail::uniform(rng, 2, 5);
        const auto d = static_cast<unsigned>(detail::uniform(rng, 1, 7));
        const auto f = detail::random_form(rng, F, n, d, detail::uniform(rng, 1, 8));
        res.record(euler_identity_check(f), f.to_string());
    }
    return res;
}

/// Members of H^v with a common zero a, a_N != 0, over GF(p^m), m <= 2.
inline SuiteResult suite_lemma_rank(std::uint64_t seed, std::size_t count) {
    SuiteResult res{"lemma-rank"};
    std::mt19937_64 rng(detail::splitmix64(seed ^ 0x1E));
    std::uint64_t draw = 0;
    while (res.instances < count) {
        CensusSpec spec;
        spec.p = detail::pick(rng, {2, 3});
        const unsigned m = detail::pick(rng, {1, 2});
        spec.N = detail::uniform(rng, 2, 3);
        spec.degrees.assign(detail::uniform(rng, 1, spec.N - 1), 0);
        for (auto& e : spec.degrees) e = static_cast<unsigned>(detail::uniform(rng, 2, 4));
        spec.seed = seed;
        const auto S = hv_member(spec, draw++);
        const auto zeros = detail::zeros_in_last_chart(S, make_field(spec.p, m));
        if (zeros.empty()) continue;
        const auto& a = zeros[rng() % zeros.size()];
        res.record(euler_rank_lemma_check(S, a), S.to_strings().front() + " at " + a.to_string());
    }
    return res;
}

/// Preimage formula of f -> (f_{z_1}(a), ..., f_{z_{N-1}}(a)) on H^v_e.
inline SuiteResult suite_phi_surjectivity(std::uint64_t seed, std::size_t count) {
    SuiteResult res{"phi-surjectivity"};
    std::mt19937_64 rng(detail::splitmix64(seed ^ 0xF1));
    for (std::size_t i = 0; i < count; ++i) {
        const unsigned p = detail::pick(rng, {2, 3, 5});
        const auto F = make_field(p, detail::pick(rng, {1, 2}));
        const std::size_t N = detail::uniform(rng, 2, 5);
        const auto e = static_cast<unsigned>(detail::uniform(rng, 2, 6));
        std::vector<Coeff> ac(N + 1), b(N - 1);
        for (auto& c : ac) c = static_cast<Coeff>(rng() % F->order());
        ac[N] = static_cast<Coeff>(detail::uniform(rng, 1, F->order() - 1));
        for (auto& c : b) c = static_cast<Coeff>(rng() % F->order());
        const ProjectivePoint a(F, ac);
        res.record(phi_surjectivity_check(a, e, b), a.to_string() + " e=" + std::to_string(e));
    }
    return res;
}

/// Quadric normal forms: nonzero strange locus iff p = 2 and N even.
inline SuiteResult suite_quadric_table() {
    SuiteResult res{"quadric-table"};
    for (unsigned p : {2U, 3U, 5U}) {
        for (std::size_t N = 2; N <= 6; ++N) {
            const auto dim = strange_locus(quadric_normal_form(N, p)).dimension();
            const bool expect = p == 2 && N % 2 == 0;
            res.record((dim > 0) == expect, "p=" + std::to_string(p) + " N=" + std::to_string(N) +
                                                " locus dim " + std::to_string(dim));
        }
    }
    return res;
}

/// p = 5, degrees (2,3), N = 4: members of H^v are cones with vertex e_0.
inline SuiteResult suite_cone_corollary(std::uint64_t seed, std::size_t count) {
    SuiteResult res{"cone-corollary"};
    CensusSpec spec;
    spec.p = 5;
    spec.N = 4;
    spec.degrees = {2, 3};
    spec.seed = seed;
    const auto e0 = ProjectivePoint::unit(make_field(5, 1), 5, 0);
    for (std::size_t i = 0; i < count; ++i) {
        const auto S = hv_member(spec, i);
        res.record(cone_corollary_check(S, e0), S.to_strings()[0] + ", " + S.to_strings()[1]);
    }
    return res;
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t count) {
    if (name == "euler") return suite_euler(seed, count);
    if (name == "lemma-rank") return suite_lemma_rank(seed, count);
    if (name == "phi-surjectivity") return suite_phi_surjectivity(seed, count);
    if (name == "quadric-table") return suite_quadric_table();
    if (name == "cone-corollary") return suite_cone_corollary(seed, count);
    throw InvalidInput("unknown suite '" + name + "'");
}

}  // namespace strangeci
