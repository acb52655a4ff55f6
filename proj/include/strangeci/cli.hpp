#pragma once

// Command-line front end. run() is callable in-process so tests can compare
// CLI output with direct library calls.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "strangeci/strangeci.hpp"
#include "strangeci/suites.hpp"

namespace strangeci::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalidInput = 2, kBudgetExceeded = 3 };

struct Options {
    unsigned p = 0;
    unsigned ext = 1;
    std::optional<std::size_t> N;
    std::string degrees;
    std::vector<std::string> polys;
    std::string in_path;
    std::string vertex;
    std::string point;
    std::optional<unsigned> ext_bound;
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;
    std::string out_path;
    unsigned jobs = 1;
    bool pretty = false;
    std::string id;
    unsigned e = 0;
    std::string suite;
    bool exhaustive = false;
    bool timing = false;
};

/// Result of one command: JSON payload plus exit code.
struct Outcome {
    json body;
    int code = kOk;
};

// ---------------------------------------------------------------------------
// input helpers

inline std::vector<unsigned> parse_csv_degrees(const std::string& csv) {
    std::vector<unsigned> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const long v = std::stol(item, &used);
            if (used != item.size() || v < 1) throw std::invalid_argument(item);
            out.push_back(static_cast<unsigned>(v));
        } catch (const std::exception&) {
            throw InvalidInput("bad degree list '" + csv + "'");
        }
    }
    if (out.empty()) throw InvalidInput("empty degree list");
    return out;
}

struct SystemFile {
    unsigned p = 0;
    std::size_t N = 0;
    std::vector<unsigned> degrees;
    std::vector<std::string> generators;
};

/// Header "p N e1 e2 ...", then one generator per line. '#' starts a comment line.
inline SystemFile read_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    SystemFile sf;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
        if (!header) {
            std::istringstream hs(line);
            long long p = 0, N = 0;
            if (!(hs >> p >> N) || p < 2 || N < 1) throw InvalidInput("bad header line '" + line + "' in " + path);
            sf.p = static_cast<unsigned>(p);
            sf.N = static_cast<std::size_t>(N);
            long long e = 0;
            while (hs >> e) {
                if (e < 1) throw InvalidInput("bad degree in header of " + path);
                sf.degrees.push_back(static_cast<unsigned>(e));
            }
            if (!hs.eof()) throw InvalidInput("bad header line '" + line + "' in " + path);
            header = true;
            continue;
        }
        sf.generators.push_back(line);
    }
    if (!header) throw InvalidInput(path + " has no header line");
    if (sf.generators.size() != sf.degrees.size()) {
        throw InvalidInput(path + " declares " + std::to_string(sf.degrees.size()) + " degrees but has " +
                           std::to_string(sf.generators.size()) + " generators");
    }
    return sf;
}

inline void write_system_file(const std::string& path, const PolynomialSystem& S) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << S.characteristic() << ' ' << S.ambient_dim();
    for (auto e : S.degrees()) out << ' ' << e;
    out << '\n';
    for (const auto& g : S.to_strings()) out << g << '\n';
    if (!out) throw Error("write to '" + path + "' failed");
}

inline std::size_t infer_n_vars(const std::vector<std::string>& polys) {
    static const std::regex var(R"(z(\d+))");
    std::size_t top = 0;
    for (const auto& s : polys)
        for (std::sregex_iterator it(s.begin(), s.end(), var), end; it != end; ++it)
            top = std::max<std::size_t>(top, std::stoul((*it)[1].str()));
    return std::max<std::size_t>(top + 1, 2);
}

/// Field and ring size from --char/--ext/--n or the --in header.
struct Context {
    FieldRef field;
    std::size_t n_vars = 0;
    std::vector<std::string> polys;
    std::vector<unsigned> declared_degrees;
};

inline Context context(const Options& o, bool need_polys) {
    Context c;
    unsigned p = o.p;
    if (!o.in_path.empty()) {
        if (!o.polys.empty()) throw InvalidInput("give generators with either --poly or --in, not both");
        auto sf = read_system_file(o.in_path);
        if (p != 0 && p != sf.p) throw InvalidInput("--char disagrees with the header of " + o.in_path);
        if (o.N && *o.N != sf.N) throw InvalidInput("--n disagrees with the header of " + o.in_path);
        p = sf.p;
        c.n_vars = sf.N + 1;
        c.polys = std::move(sf.generators);
        c.declared_degrees = std::move(sf.degrees);
    } else {
        c.polys = o.polys;
        if (o.N) c.n_vars = *o.N + 1;
        else if (!c.polys.empty()) c.n_vars = infer_n_vars(c.polys);
    }
    if (p == 0) throw InvalidInput("--char is required");
    if (need_polys && c.polys.empty()) throw InvalidInput("no generators given (use --poly or --in)");
    if (!o.degrees.empty()) {
        auto d = parse_csv_degrees(o.degrees);
        if (!c.declared_degrees.empty() && d != c.declared_degrees) throw InvalidInput("--degrees disagrees with the input");
        c.declared_degrees = std::move(d);
    }
    c.field = make_field(p, o.ext);
    return c;
}

inline PolynomialSystem load_system(const Options& o) {
    auto c = context(o, true);
    auto S = parse_system(c.polys, c.field, c.n_vars);
    if (!c.declared_degrees.empty() && S.degrees() != c.declared_degrees) {
        throw HomogeneityError("generator degrees do not match the declared degrees");
    }
    return S;
}

inline ProjectivePoint load_point(const std::string& text, const char* flag, const FieldRef& field, std::size_t n_vars) {
    if (text.empty()) throw InvalidInput(std::string(flag) + " is required");
    return parse_point(text, field, n_vars);
}

inline FieldRef point_field(const Options& o, const PolynomialSystem& S) {
    return make_field(S.characteristic(), o.ext);
}

// ---------------------------------------------------------------------------
// output helpers

inline json vector_json(const FieldDescriptor& F, const Vector& v) {
    json a = json::array();
    for (auto c : v) a.push_back(F.format(c));
    return a;
}

inline json subspace_json(const LinearSubspace& L) {
    json basis = json::array();
    for (const auto& row : L.basis()) basis.push_back(vector_json(*L.field(), row));
    return {{"dimension", L.dimension()}, {"basis", basis}};
}

inline json points_json(const std::vector<SingularPoint>& pts) {
    json a = json::array();
    for (const auto& sp : pts) a.push_back({{"m", sp.m}, {"point", sp.point.to_string()}});
    return a;
}

inline json system_json(const PolynomialSystem& S) {
    return {{"p", S.characteristic()}, {"N", S.ambient_dim()}, {"degrees", S.degrees()}, {"generators", S.to_strings()}};
}

inline json strange_report_json(const StrangeReport& r) {
    json cert = nullptr;
    json failing = nullptr;
    if (r.certificate) {
        failing = r.certificate->failing_index;
        cert = {{"failing_index", r.certificate->failing_index},
                {"residual", r.certificate->residual.to_string()},
                {"piece_dimension", r.certificate->piece_dimension}};
    }
    json wit = json::array();
    for (const auto& g : r.witness_generators) wit.push_back(g.to_string());
    return {{"verdict", r.verdict},
            {"vertex", r.vertex.to_string()},
            {"witness_generators", wit},
            {"witness_generates_same_ideal", r.witness_generates_same_ideal},
            {"failing_index", failing},
            {"certificate", cert}};
}

inline json census_json(const CensusSummary& s) {
    json recs = json::array();
    for (const auto& r : s.records) recs.push_back(record_to_json(r));
    return {{"spec", spec_to_json(s.spec)},
            {"seed", s.spec.seed},
            {"found", s.found},
            {"unresolved", s.unresolved},
            {"unresolved_indices", s.unresolved_indices},
            {"smooth_certified", s.smooth_certified},
            {"found_fraction", s.found_fraction()},
            {"excluded_case", s.excluded_case},
            {"records", recs}};
}

inline void render_pretty(std::ostream& os, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_structured() && !it->empty()) {
                os << pad << it.key() << ":\n";
                render_pretty(os, *it, indent + 1);
            } else {
                os << pad << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
            }
        }
    } else if (j.is_array()) {
        for (const auto& x : j) {
            if (x.is_structured() && !x.empty()) {
                os << pad << "-\n";
                render_pretty(os, x, indent + 1);
            } else {
                os << pad << "- " << (x.is_string() ? x.get<std::string>() : x.dump()) << '\n';
            }
        }
    } else {
        os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

// ---------------------------------------------------------------------------
// commands

inline Outcome cmd_strange_check(const Options& o) {
    const auto S = load_system(o);
    const auto v = load_point(o.vertex, "--vertex", point_field(o, S), S.n_vars());
    return {strange_report_json(is_strange_for(S, v))};
}

inline Outcome cmd_strange_locus(const Options& o) {
    const auto S = load_system(o);
    return {{{"system", system_json(S)}, {"locus", subspace_json(strange_locus(S).subspace)}}};
}

inline Outcome cmd_normalize(const Options& o) {
    auto c = context(o, true);
    if (c.polys.size() != 1) throw InvalidInput("normalize takes exactly one polynomial");
    const auto g = parse_polynomial(c.polys[0], c.field, c.n_vars);
    const auto n = normalize(g);
    const auto diff = n - g;
    bool divisible = true;
    for (const auto& [m, coef] : diff.terms()) divisible = divisible && m.exponents[0] > 0;
    return {{{"input", g.to_string()},
             {"normalized", n.to_string()},
             {"zero_z0_partial", partial_derivative(n, 0).is_zero()},
             {"difference_divisible_by_z0", divisible}}};
}

inline Outcome cmd_normalize_system(const Options& o) {
    const auto S = load_system(o);
    const auto n = normalize_system(S);
    json gens = json::array();
    for (const auto& g : n.generators) gens.push_back(g.to_string());
    return {{{"generators", gens}, {"same_ideal", n.same_ideal}}};
}

inline Outcome cmd_cone_check(const Options& o) {
    const auto S = load_system(o);
    const auto v = load_point(o.vertex, "--vertex", point_field(o, S), S.n_vars());
    return {{{"vertex", v.to_string()}, {"cone", is_cone_with_vertex(S, v)}}};
}

inline Outcome cmd_singular_search(const Options& o) {
    const auto S = load_system(o);
    SearchOptions opt;
    opt.m_max = o.ext_bound.value_or(3);
    opt.budget = default_budget();
    opt.jobs = o.jobs;
    try {
        const auto r = singular_search(S, opt);
        return {{{"system", system_json(S)},
                 {"points", points_json(r.points)},
                 {"searched_through", r.searched_through},
                 {"evaluated", r.evaluated},
                 {"complete", true}}};
    } catch (const BudgetExceeded& ex) {
        const auto& r = ex.partial();
        return {{{"system", system_json(S)},
                 {"points", points_json(r.points)},
                 {"searched_through", r.searched_through},
                 {"evaluated", r.evaluated},
                 {"complete", false},
                 {"error", ex.what()}},
                kBudgetExceeded};
    }
}

inline Outcome cmd_tangent(const Options& o) {
    const auto S = load_system(o);
    const auto x = load_point(o.point, "--point", point_field(o, S), S.n_vars());
    return {{{"point", x.to_string()}, {"tangent_space", subspace_json(tangent_space(S, x))}}};
}

inline Outcome cmd_gauss(const Options& o) {
    const auto S = load_system(o);
    if (S.size() != 1) throw InvalidInput("gauss needs a hypersurface (one generator)");
    const auto x = load_point(o.point, "--point", point_field(o, S), S.n_vars());
    return {{{"point", x.to_string()}, {"hyperplane", gauss_map(S[0], x).to_string()}}};
}

inline Outcome cmd_family(const Options& o) {
    auto need_N = [&] {
        if (!o.N) throw InvalidInput("--n is required");
        return *o.N;
    };
    auto need_p = [&] {
        if (o.p == 0) throw InvalidInput("--char is required");
        return o.p;
    };
    json extra = json::object();
    std::optional<PolynomialSystem> S;
    if (o.id == "quadric") {
        S = quadric_normal_form(need_N(), need_p());
    } else if (o.id == "p-divides") {
        S = strange_hypersurface_p_divides(need_N(), o.e, need_p());
    } else if (o.id == "p-not-divides") {
        S = strange_hypersurface_p_not_divides(need_N(), o.e, need_p());
    } else if (o.id == "cone") {
        const auto base = load_system(o);
        const auto alpha = load_point(o.vertex, "--vertex", base.field(), base.n_vars());
        S = cone_over(base, alpha);
        extra["vertex"] = alpha.to_string();
    } else if (o.id == "prop31") {
        const auto base = load_system(o);
        const auto beta = load_point(o.point, "--point", base.field(), base.ambient_dim());
        auto c = prop31_construct(base, beta);
        S = std::move(c.system);
        extra["alpha"] = c.alpha.to_string();
    } else {
        throw InvalidInput("unknown family '" + o.id + "' (quadric, p-divides, p-not-divides, cone, prop31)");
    }
    if (!o.out_path.empty()) write_system_file(o.out_path, *S);
    json body = system_json(*S);
    body["family"] = o.id;
    body.update(extra);
    return {body};
}

inline Outcome cmd_census(const Options& o) {
    CensusSpec spec;
    if (o.p == 0) throw InvalidInput("--char is required");
    if (!o.N) throw InvalidInput("--n is required");
    if (o.degrees.empty()) throw InvalidInput("--degrees is required");
    spec.p = o.p;
    spec.N = *o.N;
    spec.degrees = parse_csv_degrees(o.degrees);
    spec.mode = o.exhaustive ? CensusMode::exhaustive : CensusMode::sample;
    spec.samples = o.samples.value_or(200);
    spec.seed = o.seed;
    spec.m_max = o.ext_bound.value_or(4);
    spec.budget = default_budget();
    spec.jobs = o.jobs;
    spec.record_timing = o.timing;
    const auto summary = verify_singularity_theorem(spec);
    if (!o.out_path.empty()) persist(summary.records, o.out_path, spec);
    return {census_json(summary)};
}

inline Outcome cmd_verify(const Options& o) {
    if (o.suite.empty()) throw InvalidInput("verify needs a suite: euler, lemma-rank, phi-surjectivity, quadric-table, cone-corollary");
    const auto count = o.samples.value_or(suite_default_count(o.suite));
    const auto r = run_suite(o.suite, o.seed, count);
    return {{{"suite", r.name},
             {"seed", o.seed},
             {"instances", r.instances},
             {"failures", r.failures},
             {"passed", r.passed()},
             {"failure_details", r.failure_details}},
            r.passed() ? kOk : kCheckFailed};
}

// ---------------------------------------------------------------------------

/// Parses args (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strangeness, cone and singularity checks for complete intersections over finite fields", "strangeci"};
    app.require_subcommand(1);
    Options o;

    enum Flag : unsigned {
        kSystem = 1, kVertex = 2, kPoint = 4, kBound = 8, kJobs = 16, kSamples = 32, kSeed = 64, kOut = 128, kFamily = 256
    };
    auto add = [&](const std::string& name, const std::string& help, unsigned flags) {
        auto* sc = app.add_subcommand(name, help);
        sc->add_option("--char", o.p, "characteristic p");
        sc->add_option("--ext", o.ext, "extension degree m of the input field GF(p^m)")->check(CLI::PositiveNumber);
        sc->add_option("--n", o.N, "ambient dimension N (variables z0..zN)");
        sc->add_flag("--pretty", o.pretty, "human-readable output");
        if (flags & kSystem) {
            sc->add_option("--poly", o.polys, "generator (repeatable)");
            sc->add_option("--in", o.in_path, "generator file: header 'p N e1 e2 ...' then one generator per line");
            sc->add_option("--degrees", o.degrees, "comma-separated degrees");
        }
        if (flags & kVertex) sc->add_option("--vertex", o.vertex, "vertex, e.g. (1:0:0)");
        if (flags & kPoint) sc->add_option("--point", o.point, "point, e.g. (0:1:1) or @GF(4)(1:t:0)");
        if (flags & kBound) sc->add_option("--ext-bound", o.ext_bound, "largest extension degree searched");
        if (flags & kJobs) sc->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
        if (flags & kSamples) sc->add_option("--samples", o.samples, "number of samples or instances");
        if (flags & kSeed) sc->add_option("--seed", o.seed, "random seed");
        if (flags & kOut) sc->add_option("--out", o.out_path, "output file");
        if (flags & kFamily) {
            sc->add_option("--id", o.id, "quadric | p-divides | p-not-divides | cone | prop31")->required();
            sc->add_option("--e", o.e, "degree");
        }
        return sc;
    };

    add("strange-check", "decide strangeness for a vertex", kSystem | kVertex);
    add("strange-locus", "all vertices the system is strange for", kSystem);
    add("normalize", "normalize one polynomial so its z0-partial vanishes", kSystem);
    add("normalize-system", "normalize every generator and compare ideals", kSystem);
    add("cone-check", "decide whether the system defines a cone with the given vertex", kSystem | kVertex);
    add("singular-search", "singular points over GF(p^m), m <= ext-bound", kSystem | kBound | kJobs);
    add("tangent", "embedded tangent space at a smooth point", kSystem | kPoint);
    add("gauss", "Gauss map of a hypersurface at a smooth point", kSystem | kPoint);
    add("family", "generate an example family", kSystem | kVertex | kPoint | kOut | kFamily);
    auto* census = add("census", "singularity census over systems with vanishing z0-partials",
                       kSystem | kBound | kJobs | kSamples | kSeed | kOut);
    census->add_flag("--exhaustive", o.exhaustive, "enumerate every member instead of sampling");
    census->add_flag("--timing", o.timing, "record elapsed_ms per sample");
    auto* verify = add("verify", "run a named self-check suite", kSamples | kSeed);
    verify->add_option("suite,--suite", o.suite, "euler | lemma-rank | phi-surjectivity | quadric-table | cone-corollary");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInvalidInput;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Outcome res;
    try {
        if (name == "strange-check") res = cmd_strange_check(o);
        else if (name == "strange-locus") res = cmd_strange_locus(o);
        else if (name == "normalize") res = cmd_normalize(o);
        else if (name == "normalize-system") res = cmd_normalize_system(o);
        else if (name == "cone-check") res = cmd_cone_check(o);
        else if (name == "singular-search") res = cmd_singular_search(o);
        else if (name == "tangent") res = cmd_tangent(o);
        else if (name == "gauss") res = cmd_gauss(o);
        else if (name == "family") res = cmd_family(o);
        else if (name == "census") res = cmd_census(o);
        else res = cmd_verify(o);
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInvalidInput;
    }
    if (o.pretty) render_pretty(out, res.body, 0);
    else out << res.body.dump() << '\n';
    if (res.code == kBudgetExceeded) err << "error: point-evaluation budget exceeded; partial result printed\n";
    return res.code;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace strangeci::cli
