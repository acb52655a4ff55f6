#pragma once

// Sampling of the space of systems with vanishing z_0-partials, the
// singularity census over it, pointwise lemma checks, and JSONL persistence.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "strangeci/errors.hpp"
#include "strangeci/exactla.hpp"
#include "strangeci/geometry.hpp"
#include "strangeci/gf.hpp"
#include "strangeci/hompoly.hpp"
#include "strangeci/strangeness.hpp"

namespace strangeci {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Point-evaluation budget; STRANGECI_BUDGET overrides the default.
inline std::uint64_t default_budget() {
    if (const char* env = std::getenv("STRANGECI_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidInput(std::string("STRANGECI_BUDGET is not an integer: ") + env);
        }
    }
    return kDefaultBudget;
}

/// Degree-e monomials whose z_0-exponent is divisible by p: the kernel of
/// f -> f_{z_0} on the monomial basis. Descending term order.
inline std::vector<Monomial> hv_monomial_basis(unsigned p, std::size_t N, unsigned e) {
    std::vector<Monomial> out;
    for (auto& m : monomials_of_degree(N + 1, e))
        if (m.exponents[0] % p == 0) out.push_back(std::move(m));
    return out;
}

inline bool in_hv(const PolynomialSystem& S) {
    for (const auto& f : S.generators())
        if (!partial_derivative(f, 0).is_zero()) return false;
    return true;
}

enum class CensusMode { exhaustive, sample };

struct CensusSpec {
    unsigned p = 2;
    std::size_t N = 3;
    std::vector<unsigned> degrees{3};
    CensusMode mode = CensusMode::sample;
    std::size_t samples = 200;  // sample mode only
    std::uint64_t seed = 0;
    unsigned m_max = 4;
    std::uint64_t budget = kDefaultBudget;  // per singular search
    std::uint64_t exhaustive_limit = 1'000'000;
    unsigned jobs = 1;
    bool record_timing = true;

    void validate() const {
        if (!detail::is_prime(p)) throw InvalidInput("census characteristic must be prime");
        if (degrees.empty()) throw InvalidInput("census needs at least one degree");
        for (auto e : degrees)
            if (e < 2) throw InvalidInput("census degrees must all be >= 2");
        if (N < 2 || degrees.size() > N - 1) throw InvalidInput("census needs 1 <= r <= N - 1");
        if (m_max < 1) throw InvalidInput("m_max must be >= 1");
    }
    /// Quadric hypersurfaces of odd dimension in characteristic 2.
    bool excluded_case() const { return p == 2 && degrees.size() == 1 && degrees[0] == 2 && N % 2 == 0; }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Number of members emitted by sample_hv.
inline std::uint64_t hv_count(const CensusSpec& spec) {
    if (spec.mode == CensusMode::sample) return spec.samples;
    std::uint64_t total = 1;
    for (auto e : spec.degrees) {
        const auto dim = hv_monomial_basis(spec.p, spec.N, e).size();
        std::uint64_t q = 1;
        for (std::size_t i = 0; i < dim; ++i) {
            q *= spec.p;
            if (q > spec.exhaustive_limit + 1) throw ResourceError("exhaustive census exceeds its member budget");
        }
        total *= q - 1;
        if (total > spec.exhaustive_limit) throw ResourceError("exhaustive census exceeds its member budget");
    }
    return total;
}

/// Member number `index` of the stream: a pure function of (spec, index).
/// Exhaustive mode walks nonzero coefficient vectors in mixed radix (first
/// generator fastest); sample mode draws coefficients uniformly from a
/// mt19937_64 seeded per index, redrawing zero generators.
inline PolynomialSystem hv_member(const CensusSpec& spec, std::uint64_t index) {
    const auto F = make_field(spec.p, 1);
    const std::size_t n = spec.N + 1;
    std::vector<HomogeneousPolynomial> gens;
    if (spec.mode == CensusMode::exhaustive) {
        std::uint64_t rest = index;
        for (auto e : spec.degrees) {
            const auto basis = hv_monomial_basis(spec.p, spec.N, e);
            std::uint64_t q = 1;
            for (std::size_t i = 0; i < basis.size(); ++i) q *= spec.p;
            std::uint64_t v = rest % (q - 1) + 1;
            rest /= q - 1;
            HomogeneousPolynomial f(F, n, e);
            // last basis monomial is the least significant digit
            for (std::size_t i = basis.size(); i-- > 0;) {
                f.add_term(basis[i], static_cast<Coeff>(v % spec.p));
                v /= spec.p;
            }
            gens.push_back(std::move(f));
        }
        return PolynomialSystem(std::move(gens));
    }
    std::mt19937_64 rng(detail::splitmix64(spec.seed ^ detail::splitmix64(index + 1)));
    for (auto e : spec.degrees) {
        const auto basis = hv_monomial_basis(spec.p, spec.N, e);
        for (;;) {
            HomogeneousPolynomial f(F, n, e);
            for (const auto& m : basis) f.add_term(m, static_cast<Coeff>(rng() % spec.p));
            if (!f.is_zero()) {
                gens.push_back(std::move(f));
                break;
            }
        }
    }
    return PolynomialSystem(std::move(gens));
}

inline std::vector<PolynomialSystem> sample_hv(const CensusSpec& spec) {
    spec.validate();
    const auto count = hv_count(spec);
    std::vector<PolynomialSystem> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(hv_member(spec, i));
    return out;
}

enum class Resolution { found, unresolved };

struct CensusRecord {
    std::uint64_t index = 0;
    PolynomialSystem system;
    std::size_t strange_locus_dim = 0;
    std::vector<SingularPoint> singular_points;
    Resolution resolution = Resolution::unresolved;
    std::int64_t elapsed_ms = 0;

    bool operator==(const CensusRecord&) const = default;
};

struct CensusSummary {
    CensusSpec spec;
    std::vector<CensusRecord> records;
    std::size_t found = 0;
    std::size_t unresolved = 0;
    std::vector<std::uint64_t> unresolved_indices;
    std::size_t smooth_certified = 0;  // never nonzero: smoothness is not certified
    bool excluded_case = false;

    double found_fraction() const { return records.empty() ? 0.0 : static_cast<double>(found) / records.size(); }
};

/// Singular search up to m_max, then once more over m_max+1..2*m_max if nothing
/// turned up. Running out of budget leaves the member unresolved.
inline CensusRecord census_record(const CensusSpec& spec, std::uint64_t index, const PolynomialSystem& S) {
    const auto t0 = std::chrono::steady_clock::now();
    CensusRecord rec{index, S, strange_locus(S).dimension(), {}, Resolution::unresolved, 0};
    SearchOptions opt;
    opt.m_min = 1;
    opt.m_max = spec.m_max;
    opt.budget = spec.budget;
    auto run = [&](const SearchOptions& o) {
        try {
            auto res = singular_search(S, o);
            rec.singular_points.insert(rec.singular_points.end(), res.points.begin(), res.points.end());
            return true;
        } catch (const BudgetExceeded& ex) {
            const auto& part = ex.partial().points;
            rec.singular_points.insert(rec.singular_points.end(), part.begin(), part.end());
            return false;
        }
    };
    if (run(opt) && rec.singular_points.empty()) {
        opt.m_min = spec.m_max + 1;
        opt.m_max = 2 * spec.m_max;
        run(opt);
    }
    rec.resolution = rec.singular_points.empty() ? Resolution::unresolved : Resolution::found;
    if (spec.record_timing) {
        rec.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    }
    return rec;
}

/// Runs the census; records come back in sample-index order whatever the
/// number of workers.
inline CensusSummary verify_singularity_theorem(const CensusSpec& spec) {
    spec.validate();
    const auto count = hv_count(spec);
    CensusSummary sum;
    sum.spec = spec;
    sum.excluded_case = spec.excluded_case();
    std::vector<std::optional<CensusRecord>> slots(count);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i = next++; i < count; i = next++) slots[i] = census_record(spec, i, hv_member(spec, i));
    };
    const unsigned jobs = std::max(1U, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& s : slots) {
        if (s->resolution == Resolution::found) {
            ++sum.found;
        } else {
            ++sum.unresolved;
            sum.unresolved_indices.push_back(s->index);
        }
        sum.records.push_back(std::move(*s));
    }
    return sum;
}

/// Along a zero a with a_N != 0 of a member of H^v, Euler's formula makes the
/// z_N column of D equal to sum_{j=1}^{N-1} (-a_j / a_N) * (z_j column).
/// Checks that identity and rank D == rank D'. Always true; a self-test.
inline bool euler_rank_lemma_check(const PolynomialSystem& S, const ProjectivePoint& a) {
    if (!in_hv(S)) throw InvalidInput("system has a nonzero z0-partial");
    if (a.n_vars() != S.n_vars()) throw InvalidInput("point and system live in different spaces");
    const std::size_t N = S.ambient_dim();
    const auto& F = *a.field();
    const Coeff aN = a.coords()[N];
    if (aN == 0) throw InvalidInput("need a_N != 0");
    if (!on_zero_set(S, a)) throw InvalidInput("point is not a common zero");
    const Matrix D = jacobian_D(S, a);  // columns z_1..z_N
    for (std::size_t k = 0; k < S.size(); ++k) {
        Coeff combo = 0;
        for (std::size_t j = 1; j < N; ++j) {
            const Coeff coef = F.neg(F.div(a.coords()[j], aN));
            combo = F.add(combo, F.mul(coef, D(k, j - 1)));
        }
        if (combo != D(k, N - 1)) return false;
    }
    return rank(D) == rank(jacobian_Dprime(S, a));
}

/// sum_{j=1}^{N-1} b_j / a_N^{e-1} * z_j z_N^{e-1}: an element of H^v_e whose
/// partials z_1..z_{N-1} at a equal b.
inline HomogeneousPolynomial phi_preimage(const ProjectivePoint& a, unsigned e, std::span<const Coeff> b) {
    const std::size_t n = a.n_vars();
    if (n < 3) throw InvalidInput("need N >= 2");
    const std::size_t N = n - 1;
    if (e < 2) throw InvalidInput("need e >= 2");
    if (b.size() != N - 1) throw InvalidInput("b must have N - 1 entries");
    const auto& F = *a.field();
    const Coeff aN = a.coords()[N];
    if (aN == 0) throw InvalidInput("need a_N != 0");
    const Coeff scale = F.inv(F.pow(aN, e - 1));
    HomogeneousPolynomial f(a.field(), n, e);
    for (std::size_t j = 1; j < N; ++j) {
        std::vector<unsigned> ex(n, 0);
        ex[j] = 1;
        ex[N] = e - 1;
        f.add_term(Monomial(std::move(ex)), F.mul(b[j - 1], scale));
    }
    return f;
}

/// The preimage lies in H^v_e and maps to b. Always true; a self-test.
inline bool phi_surjectivity_check(const ProjectivePoint& a, unsigned e, std::span<const Coeff> b) {
    const auto f = phi_preimage(a, e, b);
    if (!partial_derivative(f, 0).is_zero()) return false;
    const std::size_t N = a.n_vars() - 1;
    for (std::size_t j = 1; j < N; ++j)
        if (evaluate_raw(partial_derivative(f, j), a.coords(), *a.field()) != b[j - 1]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// JSONL persistence

inline nlohmann::json spec_to_json(const CensusSpec& spec) {
    return {{"p", spec.p},
            {"N", spec.N},
            {"degrees", spec.degrees},
            {"mode", spec.mode == CensusMode::exhaustive ? "exhaustive" : "sample"},
            {"samples", spec.samples},
            {"m_max", spec.m_max}};
}

inline nlohmann::json record_to_json(const CensusRecord& rec) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& sp : rec.singular_points) pts.push_back({{"m", sp.m}, {"point", sp.point.to_string()}});
    return {{"index", rec.index},
            {"generators", rec.system.to_strings()},
            {"degrees", rec.system.degrees()},
            {"p", rec.system.characteristic()},
            {"N", rec.system.ambient_dim()},
            {"strange_locus_dim", rec.strange_locus_dim},
            {"singular_points", pts},
            {"resolution", rec.resolution == Resolution::found ? "found" : "unresolved"},
            {"elapsed_ms", rec.elapsed_ms}};
}

inline CensusRecord record_from_json(const nlohmann::json& j) {
    try {
        const unsigned p = j.at("p").get<unsigned>();
        const std::size_t N = j.at("N").get<std::size_t>();
        const auto F = make_field(p, 1);
        auto S = parse_system(j.at("generators").get<std::vector<std::string>>(), F, N + 1);
        if (S.degrees() != j.at("degrees").get<std::vector<unsigned>>()) throw InvalidInput("degrees do not match generators");
        CensusRecord rec{j.at("index").get<std::uint64_t>(), std::move(S), j.at("strange_locus_dim").get<std::size_t>(),
                         {}, Resolution::unresolved, j.at("elapsed_ms").get<std::int64_t>()};
        for (const auto& sp : j.at("singular_points")) {
            rec.singular_points.push_back({sp.at("m").get<unsigned>(), parse_point(sp.at("point").get<std::string>(), F, N + 1)});
        }
        const auto res = j.at("resolution").get<std::string>();
        if (res != "found" && res != "unresolved") throw InvalidInput("unknown resolution '" + res + "'");
        rec.resolution = res == "found" ? Resolution::found : Resolution::unresolved;
        return rec;
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput(std::string("malformed census record: ") + ex.what());
    }
}

/// Appends a run header line and one JSON object per record.
inline void persist(const std::vector<CensusRecord>& records, const std::string& path, const CensusSpec& spec) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    nlohmann::json header = {{"run", {{"spec", spec_to_json(spec)}, {"seed", spec.seed}, {"version", kVersion}}}};
    out << header.dump() << '\n';
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    if (!out) throw Error("write to '" + path + "' failed");
}

/// Reads every record line of a JSONL file, skipping run headers.
inline std::vector<CensusRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::vector<CensusRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& ex) {
            throw InvalidInput(std::string("malformed JSONL line: ") + ex.what());
        }
        if (j.contains("run")) continue;
        out.push_back(record_from_json(j));
    }
    return out;
}

}  // namespace strangeci
