#include "cli.hpp"

#include "report.hpp"

#include "romanov/admissible.hpp"
#include "romanov/beatty.hpp"
#include "romanov/covering.hpp"
#include "romanov/distribution.hpp"
#include "romanov/errors.hpp"
#include "romanov/parallel.hpp"
#include "romanov/primes.hpp"
#include "romanov/representation.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace romanov::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string out_path;
    std::string format;
    int threads = 0;
    std::string cache_dir;
    std::string cache;

    std::string file;
    u64 n = 0;
    u64 lo = 0;
    u64 hi = 0;
    u64 limit = 0;
    std::vector<u64> checkpoints;
    u64 x = 0;
    double x_real = 0.0;
    double alpha = 0.0;
    u64 threshold = 0;
    std::optional<u64> threshold_opt;
    std::size_t cap = kWitnessCap;

    std::string beta = "sqrt:2";
    std::string gamma = "0";
    std::size_t terms = 10;
    u64 Q = 0;
    std::vector<u64> moduli;
    u64 d_max = 0;
    u64 N = 0;
    u64 q1 = 1, a1 = 0, q2 = 1, a2 = 1;
    u64 k_max = 0;

    std::string theta = "1/3";
    u64 B = 1;
    u64 q = 1;
    u64 a = 1;
    u64 y = 0;
};

std::ifstream open_input(const std::string& path, const char* flag) {
    std::ifstream in(path);
    if (!in) throw DomainError(std::string(flag) + ": cannot open '" + path + "'");
    return in;
}

std::vector<LinearFunction> functions_from(const Options& o) {
    auto in = open_input(o.file, "--file");
    return load_functions(in);
}

SequencePair sequence_from(const Options& o) {
    if (o.file.empty()) return SequencePair::powers_of_two();
    auto in = open_input(o.file, "--file");
    return load_sequence_pair(in);
}

CoveringSystem covering_from(const Options& o) {
    if (o.file.empty()) return CoveringSystem::reference();
    auto in = open_input(o.file, "--file");
    return load_covering_system(in);
}

Json functions_json(std::span<const LinearFunction> fns) {
    Json arr = Json::array();
    for (const auto& f : fns) arr.push_back({{"u", big(f.u())}, {"v", big(f.v())}});
    return arr;
}

std::string fn_text(const LinearFunction& f) {
    return std::to_string(f.u()) + "n+" + std::to_string(f.v());
}

std::string u(u64 v) { return std::to_string(v); }

fs::path default_cache(const Options& o) {
    if (!o.cache.empty()) return o.cache;
    if (o.cache_dir.empty())
        throw DomainError("--cache: no cache path given and neither --cache-dir nor ROMANOV_CACHE_DIR is set");
    return fs::path(o.cache_dir) / ("primes-" + u(o.lo) + "-" + u(o.hi) + ".ptb");
}

// ---------------------------------------------------------------------------
// sieve

Report sieve_build(const Options& o) {
    if (o.hi <= o.lo) throw DomainError("--hi must exceed --lo");
    const PrimeTable table = PrimeTable::build(o.lo, o.hi);
    Report r;
    r.doc["command"] = "sieve build";
    r.doc["lo"] = big(o.lo);
    r.doc["hi"] = big(o.hi);
    r.doc["count"] = big(table.count());
    std::string where;
    if (!o.cache.empty() || !o.cache_dir.empty()) {
        const fs::path path = default_cache(o);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ostringstream bytes;
        table.write(bytes);
        write_atomic(path, bytes.str());
        where = path.string();
        r.doc["cache"] = where;
    } else {
        r.doc["cache"] = nullptr;
    }
    r.table.columns = {"lo", "hi", "count", "cache"};
    r.table.add({u(o.lo), u(o.hi), u(table.count()), where});
    r.summary.push_back(u(table.count()) + " primes in [" + u(o.lo) + ", " + u(o.hi) + ")");
    if (!where.empty()) r.summary.push_back("cache written to " + where);
    return r;
}

Report sieve_verify(const Options& o) {
    const fs::path path = default_cache(o);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("--cache: cannot open '" + path.string() + "'");
    const PrimeTable cached = PrimeTable::read(in);
    const PrimeTable fresh = PrimeTable::build(cached.lo(), cached.hi());
    if (!(cached == fresh)) {
        u64 bad = cached.lo();
        for (u64 n = cached.lo(); n < cached.hi(); ++n)
            if (cached.test(n) != fresh.test(n)) {
                bad = n;
                break;
            }
        throw FormatError(0, "cache '" + path.string() + "' disagrees with a fresh sieve at n = " + u(bad));
    }
    // independent spot check against Miller-Rabin
    const u64 span = cached.hi() - cached.lo();
    const u64 samples = std::min<u64>(span, 4096);
    for (u64 i = 0; i < samples; ++i) {
        const u64 n = cached.lo() + static_cast<u64>((static_cast<u128>(span) * i) / samples);
        if (cached.test(n) != is_prime(n))
            throw InvariantError("sieve verify: table and Miller-Rabin disagree at n = " + u(n));
    }
    Report r;
    r.doc["command"] = "sieve verify";
    r.doc["cache"] = path.string();
    r.doc["lo"] = big(cached.lo());
    r.doc["hi"] = big(cached.hi());
    r.doc["count"] = big(cached.count());
    r.doc["matches_fresh_sieve"] = true;
    r.doc["spot_checks"] = big(samples);
    r.table.columns = {"lo", "hi", "count", "matches"};
    r.table.add({u(cached.lo()), u(cached.hi()), u(cached.count()), "true"});
    r.summary.push_back("cache ok: " + u(cached.count()) + " primes in [" + u(cached.lo()) + ", " +
                        u(cached.hi()) + ")");
    return r;
}

// ---------------------------------------------------------------------------
// repr

Report repr_f(const Options& o) {
    if (o.n == 0) throw DomainError("--n must be >= 1");
    const u64 f = f_pow2(o.n);
    Report r;
    r.doc["command"] = "repr f";
    r.doc["n"] = big(o.n);
    r.doc["f"] = f;
    r.table.columns = {"n", "f"};
    r.table.add({u(o.n), u(f)});
    r.summary.push_back(u(f));
    return r;
}

Report repr_general(const Options& o) {
    if (o.n == 0) throw DomainError("--n must be >= 1");
    const auto seq = sequence_from(o);
    const u64 f = f_general(seq, o.n);
    Report r;
    r.doc["command"] = "repr general";
    r.doc["n"] = big(o.n);
    r.doc["terms_used"] = seq.prefix_count(o.n);
    r.doc["f"] = f;
    r.table.columns = {"n", "terms_used", "f"};
    r.table.add({u(o.n), u(seq.prefix_count(o.n)), u(f)});
    r.summary.push_back(u(f));
    return r;
}

Report repr_exceptional(const Options& o) {
    const auto xs = exceptional_integers(o.limit);
    Report r;
    r.doc["command"] = "repr exceptional";
    r.doc["limit"] = big(o.limit);
    r.doc["count"] = xs.size();
    r.doc["max"] = xs.empty() ? Json(nullptr) : big(xs.back());
    r.doc["integers"] = Json::array();
    r.table.columns = {"n"};
    for (u64 v : xs) {
        r.doc["integers"].push_back(big(v));
        r.table.add({u(v)});
    }
    std::string line;
    for (u64 v : xs) line += (line.empty() ? "" : " ") + u(v);
    r.summary.push_back(line.empty() ? "none" : line);
    r.summary.push_back("max " + (xs.empty() ? std::string("none") : u(xs.back())));
    return r;
}

Report repr_density(const Options& o) {
    std::vector<u64> cps = o.checkpoints;
    if (cps.empty()) {
        for (u64 p = 10000; p <= o.limit; p *= 10) {
            cps.push_back(p);
            if (p > o.limit / 10) break;
        }
        if (cps.empty() || cps.back() != o.limit) cps.push_back(o.limit);
    }
    const auto rep = density_scan(o.limit, cps);
    Report r;
    r.doc["command"] = "repr density";
    r.doc["limit"] = big(o.limit);
    r.doc["checkpoints"] = Json::array();
    r.table.columns = {"x", "odd_total", "representable", "ratio", "per_integer"};
    for (const auto& cp : rep.checkpoints) {
        const double per_integer = cp.x ? static_cast<double>(cp.representable) / static_cast<double>(cp.x) : 0.0;
        r.doc["checkpoints"].push_back({{"x", big(cp.x)},
                                        {"odd_total", big(cp.odd_total)},
                                        {"representable", big(cp.representable)},
                                        {"ratio", cp.ratio},
                                        {"per_integer", per_integer}});
        r.table.add({u(cp.x), u(cp.odd_total), u(cp.representable), fmt_double(cp.ratio), fmt_double(per_integer)});
        r.summary.push_back("x=" + u(cp.x) + " representable " + u(cp.representable) + "/" + u(cp.odd_total) +
                            " ratio " + fmt_double(cp.ratio));
    }
    r.doc["known_bounds"] = {{"lower", 0.0868}, {"lower_improved", 0.110114}, {"upper", 0.49095}};
    return r;
}

Report repr_champions(const Options& o) {
    const auto ch = champions(o.limit);
    Report r;
    r.doc["command"] = "repr champions";
    r.doc["limit"] = big(o.limit);
    r.doc["champions"] = Json::array();
    r.table.columns = {"n", "f"};
    for (const auto& c : ch) {
        r.doc["champions"].push_back({{"n", big(c.n)}, {"f", c.f}});
        r.table.add({u(c.n), u(c.f)});
        r.summary.push_back(u(c.n) + " " + u(c.f));
    }
    return r;
}

// ---------------------------------------------------------------------------
// admissible

Json certificate_json(const AdmissibilityCertificate& cert) {
    Json w = Json::array(), s = Json::array();
    for (const auto& x : cert.witnesses) w.push_back({{"p", big(x.p)}, {"m", big(x.m)}});
    for (const auto& x : cert.spot_checks) s.push_back({{"p", big(x.p)}, {"m", big(x.m)}});
    return {{"covers_up_to", big(cert.covers_up_to)}, {"witnesses", w}, {"spot_checks", s}};
}

Report admissible_check(const Options& o) {
    const auto fns = functions_from(o);
    const auto res = is_admissible(fns);
    if (res.admissible && !certificate_holds(fns, res.certificate))
        throw InvariantError("admissible check: certificate fails re-evaluation");
    Report r;
    r.doc["command"] = "admissible check";
    r.doc["functions"] = functions_json(fns);
    r.doc["admissible"] = res.admissible;
    r.doc["failing_prime"] = res.failing_prime ? big(*res.failing_prime) : Json(nullptr);
    r.doc["certificate"] = certificate_json(res.certificate);
    r.table.columns = {"p", "m"};
    for (const auto& w : res.certificate.witnesses) r.table.add({u(w.p), u(w.m)});
    r.summary.push_back(res.admissible ? "admissible"
                                       : "not admissible: every residue mod " + u(*res.failing_prime) +
                                             " is covered");
    return r;
}

Report admissible_extract(const Options& o) {
    const auto fns = functions_from(o);
    const auto res = cd1_extract(fns);
    Report r;
    r.doc["command"] = "admissible extract";
    r.doc["s"] = fns.size();
    Json surv = Json::array();
    r.table.columns = {"index", "u", "v"};
    for (std::size_t i : res.survivors) {
        surv.push_back({{"index", i}, {"u", big(fns[i].u())}, {"v", big(fns[i].v())}});
        r.table.add({u(i), u(fns[i].u()), u(fns[i].v())});
    }
    r.doc["survivors"] = surv;
    r.doc["kept"] = res.survivors.size();
    r.doc["bound"] = {{"sequence", res.trace.bound_sequence},
                      {"p_t", big(res.trace.bound_prime)},
                      {"s_t", big(res.trace.s_t())}};
    Json steps = Json::array();
    for (const auto& st : res.trace.steps) {
        Json sizes = Json::array();
        for (const auto& [res_class, cnt] : st.class_sizes) sizes.push_back({{"residue", res_class}, {"count", cnt}});
        steps.push_back({{"p", st.p},
                         {"dropped_residue", st.dropped_residue},
                         {"dropped_count", st.dropped_count},
                         {"kept_count", st.kept_count},
                         {"class_sizes", sizes}});
    }
    r.doc["steps"] = steps;
    r.doc["certificate"] = certificate_json(res.certificate);
    r.summary.push_back("kept " + u(res.survivors.size()) + " of " + u(fns.size()) + " (bound s_t = " +
                        u(res.trace.s_t()) + ", p_t = " + u(res.trace.bound_prime) + ")");
    for (std::size_t i : res.survivors) r.summary.push_back(fn_text(fns[i]));
    return r;
}

Report admissible_shift(const Options& o) {
    const auto seq = sequence_from(o);
    const auto sys = shifted_system(seq, o.x_real, o.alpha);
    Report r;
    r.doc["command"] = "admissible shift";
    r.doc["x"] = o.x_real;
    r.doc["alpha"] = o.alpha;
    r.doc["X"] = std::isfinite(sys.X) ? Json(sys.X) : Json("inf");
    r.doc["log_X"] = sys.log_X;
    r.doc["k_real"] = sys.k_real;
    r.doc["k"] = sys.k;
    r.doc["functions"] = functions_json(sys.funcs);
    r.table.columns = {"u", "v"};
    for (const auto& f : sys.funcs) r.table.add({u(f.u()), u(f.v())});
    r.summary.push_back("k = " + u(sys.k) + ", " + u(sys.funcs.size()) + " shifted functions");
    for (const auto& f : sys.funcs) r.summary.push_back(fn_text(f));
    return r;
}

Report admissible_scan(const Options& o) {
    const auto fns = functions_from(o);
    const auto res = cluster_scan(fns, o.x, o.threshold, o.cap);
    Report r;
    r.doc["command"] = "admissible scan";
    r.doc["functions"] = functions_json(fns);
    r.doc["x"] = big(res.x);
    r.doc["threshold"] = big(res.threshold);
    r.doc["count"] = big(res.count);
    r.doc["witnesses"] = Json::array();
    r.table.columns = {"n"};
    for (u64 w : res.witnesses) {
        r.doc["witnesses"].push_back(big(w));
        r.table.add({u(w)});
    }
    r.summary.push_back(u(res.count) + " n in [" + u(o.x) + ", " + u(2 * o.x) + ") with at least " +
                        u(o.threshold) + " prime values");
    return r;
}

// ---------------------------------------------------------------------------
// covering

Json entries_json(const CoveringSystem& sys) {
    Json arr = Json::array();
    for (const auto& e : sys.entries()) arr.push_back({{"r", e.r}, {"m", e.m}, {"p", e.p}});
    return arr;
}

Report covering_verify(const Options& o) {
    const auto sys = covering_from(o);
    const auto check = verify_covering(sys);
    Report r;
    r.doc["command"] = "covering verify";
    r.doc["entries"] = entries_json(sys);
    r.doc["lcm"] = big(check.lcm);
    r.doc["covered"] = check.covered;
    r.doc["first_uncovered"] = check.first_uncovered ? big(*check.first_uncovered) : Json(nullptr);
    Json orders = Json::array();
    bool all_orders = true;
    r.table.columns = {"r", "m", "p", "order_divides"};
    for (const auto& e : sys.entries()) {
        const bool d = order_divides(e.p, e.m);
        all_orders = all_orders && d;
        orders.push_back({{"p", e.p}, {"m", e.m}, {"divides", d}});
        r.table.add({u(e.r), u(e.m), u(e.p), d ? "true" : "false"});
    }
    r.doc["order_checks"] = orders;
    r.doc["orders_ok"] = all_orders;
    r.summary.push_back(check.covered ? "covers every residue mod " + u(check.lcm)
                                      : "residue " + u(*check.first_uncovered) + " mod " + u(check.lcm) +
                                            " is not covered");
    r.summary.push_back(all_orders ? "every p_i divides 2^{m_i} - 1" : "some p_i does not divide 2^{m_i} - 1");
    return r;
}

Report covering_class(const Options& o) {
    const auto cls = build_class(covering_from(o));
    Report r;
    r.doc["command"] = "covering class";
    r.doc["r"] = big(cls.r);
    r.doc["M"] = big(cls.M);
    r.table.columns = {"r", "M"};
    r.table.add({u(cls.r), u(cls.M)});
    r.summary.push_back("n == " + u(cls.r) + " (mod " + u(cls.M) + ")");
    return r;
}

Report covering_scan(const Options& o) {
    const auto cls = build_class(covering_from(o));
    const auto scan = verify_class(cls, o.limit);
    auto members = [](const std::vector<ClassMember>& v) {
        Json arr = Json::array();
        for (const auto& m : v) arr.push_back({{"n", big(m.n)}, {"f", m.f}});
        return arr;
    };
    Report r;
    r.doc["command"] = "covering scan";
    r.doc["r"] = big(cls.r);
    r.doc["M"] = big(cls.M);
    r.doc["limit"] = big(scan.limit);
    r.doc["holds"] = scan.holds;
    r.doc["members_checked"] = big(scan.members_checked);
    r.doc["members_above_modulus"] = big(scan.members_above_modulus);
    r.doc["exceptions"] = members(scan.exceptions);
    r.doc["small_members"] = members(scan.small_members);
    r.table.columns = {"n", "f", "above_modulus"};
    for (const auto& m : scan.small_members) r.table.add({u(m.n), u(m.f), "false"});
    for (const auto& m : scan.exceptions) r.table.add({u(m.n), u(m.f), "true"});
    r.summary.push_back(u(scan.members_checked) + " members <= " + u(scan.limit) + ", " +
                        u(scan.exceptions.size()) + " exceptions above M");
    return r;
}

// ---------------------------------------------------------------------------
// beatty

BeattyParams beatty_from(const Options& o) { return {parse_quadratic(o.beta), parse_rational(o.gamma)}; }

Report beatty_cf(const Options& o) {
    const auto beta = parse_quadratic(o.beta);
    const auto cf = cf_expand(beta, o.terms);
    const auto best = best_approx_check(cf, beta);
    Report r;
    r.doc["command"] = "beatty cf";
    r.doc["beta"] = to_string(beta);
    r.doc["partial_quotients"] = Json::array();
    for (i64 a : cf.partial_quotients) r.doc["partial_quotients"].push_back(big(a));
    Json conv = Json::array();
    r.table.columns = {"n", "a_n", "p_n", "q_n", "distance"};
    for (std::size_t i = 0; i < cf.convergents.size(); ++i) {
        const auto& c = cf.convergents[i];
        const double d = nearest_int_dist(beta, static_cast<u64>(c.q)).distance.to_double();
        conv.push_back({{"p", big(c.p)}, {"q", big(c.q)}, {"distance", d}});
        r.table.add({u(i), std::to_string(cf.partial_quotients[i]), std::to_string(c.p), std::to_string(c.q),
                     fmt_double(d)});
        r.summary.push_back(std::to_string(c.p) + "/" + std::to_string(c.q));
    }
    r.doc["convergents"] = conv;
    r.doc["best_approximation"] = best.holds;
    if (best.violation)
        r.doc["violation"] = {{"index", best.violation->first}, {"q", big(best.violation->second)}};
    r.summary.push_back(best.holds ? "best approximation property holds" : "best approximation property fails");
    return r;
}

Report beatty_type(const Options& o) {
    const auto beta = parse_quadratic(o.beta);
    const auto tb = type_bound_check(beta, o.Q);
    Report r;
    r.doc["command"] = "beatty type";
    r.doc["beta"] = to_string(beta);
    r.doc["Q"] = big(o.Q);
    r.doc["min_value"] = tb.min_value.to_double();
    r.doc["argmin"] = big(tb.argmin);
    r.doc["K"] = big(tb.K);
    r.doc["bound"] = to_string(tb.bound);
    r.doc["holds"] = tb.holds;
    r.table.columns = {"Q", "min_value", "argmin", "K", "bound", "holds"};
    r.table.add({u(o.Q), fmt_double(tb.min_value.to_double()), u(tb.argmin), std::to_string(tb.K),
                 to_string(tb.bound), tb.holds ? "true" : "false"});
    r.summary.push_back("min q||q beta|| = " + fmt_double(tb.min_value.to_double()) + " at q = " + u(tb.argmin) +
                        ", bound " + to_string(tb.bound) + (tb.holds ? " holds" : " fails"));
    return r;
}

Report beatty_count_ap_cmd(const Options& o) {
    const auto params = beatty_from(o);
    std::vector<u64> moduli = o.moduli;
    if (moduli.empty()) {
        if (o.d_max < 2) throw DomainError("--moduli or --d-max (>= 2) is required");
        for (u64 d = 2; d <= o.d_max; ++d) moduli.push_back(d);
    }
    const auto all = beatty_count_ap_all(params, o.x, moduli);
    Report r;
    r.doc["command"] = "beatty count-ap";
    r.doc["beta"] = to_string(params.beta());
    r.doc["gamma"] = to_string(params.gamma());
    r.doc["x"] = big(o.x);
    double worst = 0.0;
    Json counts = Json::array();
    r.table.columns = {"d", "a", "count", "main_term", "normalized_error"};
    for (std::size_t i = 0; i < moduli.size(); ++i)
        for (const auto& c : all[i]) {
            worst = std::max(worst, c.normalized_error);
            counts.push_back({{"d", big(moduli[i])},
                              {"a", big(c.a)},
                              {"count", big(c.count)},
                              {"main_term", c.main_term},
                              {"normalized_error", c.normalized_error}});
            r.table.add({u(moduli[i]), u(c.a), u(c.count), fmt_double(c.main_term), fmt_double(c.normalized_error)});
        }
    r.doc["max_normalized_error"] = worst;
    r.doc["counts"] = counts;
    r.summary.push_back("max normalized error " + fmt_double(worst) + " over " + u(moduli.size()) + " moduli");
    return r;
}

Report beatty_lambda_sum(const Options& o) {
    const auto params = beatty_from(o);
    const auto res = lambda_sum_beatty(params, o.N, o.q1, o.a1, o.q2, o.a2);
    Report r;
    r.doc["command"] = "beatty lambda-sum";
    r.doc["beta"] = to_string(params.beta());
    r.doc["gamma"] = to_string(params.gamma());
    r.doc["N"] = big(o.N);
    r.doc["q1"] = big(o.q1);
    r.doc["a1"] = big(o.a1);
    r.doc["q2"] = big(o.q2);
    r.doc["a2"] = big(o.a2);
    r.doc["M"] = big(res.M);
    r.doc["S"] = res.S;
    r.doc["T"] = res.T;
    r.doc["deviation"] = res.deviation;
    r.table.columns = {"N", "M", "S", "T", "deviation"};
    r.table.add({u(o.N), std::to_string(res.M), fmt_double(res.S), fmt_double(res.T), fmt_double(res.deviation)});
    r.summary.push_back("S = " + fmt_double(res.S) + ", T = " + fmt_double(res.T) + ", deviation " +
                        fmt_double(res.deviation));
    return r;
}

Report beatty_record(const Options& o) {
    const auto params = beatty_from(o);
    const auto seq = sequence_from(o);
    const auto rec = beatty_record_search(seq, params, o.k_max);
    Report r;
    r.doc["command"] = "beatty record";
    r.doc["beta"] = to_string(params.beta());
    r.doc["gamma"] = to_string(params.gamma());
    r.doc["k_max"] = big(o.k_max);
    r.doc["k"] = big(rec.k);
    r.doc["n"] = big(rec.n);
    r.doc["f"] = rec.f;
    r.table.columns = {"k", "n", "f"};
    r.table.add({u(rec.k), u(rec.n), u(rec.f)});
    r.summary.push_back("max f = " + u(rec.f) + " at k = " + u(rec.k) + " (n = " + u(rec.n) + ")");
    return r;
}

// ---------------------------------------------------------------------------
// dist

Report dist_hyp1(const Options& o) {
    const Rational theta = parse_rational(o.theta);
    std::vector<LinearFunction> fns;
    if (o.file.empty())
        fns.emplace_back(1, 0);
    else
        fns = functions_from(o);
    const auto rep = hyp1_evaluate(o.x, theta, fns, o.B);
    double worst_term = 0.0;
    for (double t : rep.cond1_terms) worst_term = std::max(worst_term, t);
    Report r;
    r.doc["command"] = "dist hyp1";
    r.doc["x"] = big(rep.x);
    r.doc["theta"] = to_string(rep.theta);
    r.doc["B"] = big(rep.B);
    r.doc["q_max"] = big(rep.q_max);
    r.doc["cond1"] = rep.cond1;
    r.doc["cond1_max_term"] = worst_term;
    r.doc["cond3"] = rep.cond3;
    Json per = Json::array();
    r.table.columns = {"u", "v", "cond2", "P_LA_total", "cond2_reference"};
    for (const auto& f : rep.per_function) {
        per.push_back({{"u", big(f.fn.u())},
                       {"v", big(f.fn.v())},
                       {"cond2", f.cond2},
                       {"P_LA_total", big(f.P_LA_total)},
                       {"cond2_reference", f.cond2_reference}});
        r.table.add({u(f.fn.u()), u(f.fn.v()), fmt_double(f.cond2), u(f.P_LA_total), fmt_double(f.cond2_reference)});
    }
    r.doc["per_function"] = per;
    r.summary.push_back("q <= " + u(rep.q_max) + ": cond1 = " + fmt_double(rep.cond1) + " (max term " +
                        fmt_double(worst_term) + "), cond3 = " + fmt_double(rep.cond3));
    for (const auto& f : rep.per_function)
        r.summary.push_back(fn_text(f.fn) + ": cond2 = " + fmt_double(f.cond2) + ", primes = " + u(f.P_LA_total));
    return r;
}

Report dist_window(const Options& o) {
    const u64 threshold = o.threshold_opt ? *o.threshold_opt
                                          : static_cast<u64>(std::ceil(std::log(static_cast<double>(std::max<u64>(o.y, 1)))));
    const auto rep = window_counts(o.q, o.a, o.x, o.y, threshold);
    Report r;
    r.doc["command"] = "dist window";
    r.doc["q"] = big(rep.q);
    r.doc["a"] = big(rep.a);
    r.doc["x"] = big(rep.x);
    r.doc["y"] = big(rep.y);
    r.doc["threshold"] = big(rep.threshold);
    r.doc["threshold_hits"] = big(rep.threshold_hits);
    Json hist = Json::array();
    r.table.columns = {"count", "frequency"};
    for (const auto& [c, f] : rep.histogram) {
        hist.push_back({{"count", big(c)}, {"frequency", big(f)}});
        r.table.add({u(c), u(f)});
    }
    r.doc["histogram"] = hist;
    r.summary.push_back(u(rep.threshold_hits) + " of " + u(rep.x) + " windows hold at least " + u(threshold) +
                        " primes");
    return r;
}

Report dist_identity(const Options& o) {
    const auto id = window_identity_check(o.q, o.a, o.x, o.y);
    Report r;
    r.doc["command"] = "dist identity";
    r.doc["q"] = big(o.q);
    r.doc["a"] = big(o.a);
    r.doc["x"] = big(o.x);
    r.doc["y"] = big(o.y);
    r.doc["by_window"] = big(id.by_window);
    r.doc["by_prime"] = big(id.by_prime);
    r.doc["holds"] = id.holds();
    r.table.columns = {"by_window", "by_prime", "holds"};
    r.table.add({u(id.by_window), u(id.by_prime), id.holds() ? "true" : "false"});
    r.summary.push_back(u(id.by_window) + (id.holds() ? " == " : " != ") + u(id.by_prime));
    return r;
}

// ---------------------------------------------------------------------------

struct Leaf {
    CLI::App* app;
    std::function<Report(const Options&)> action;
    bool must_hold = false;  // identity checks: failure is an invariant violation
};

int emit(const Report& r, const Options& o, std::ostream& out) {
    const std::string format = o.format.empty() ? "json" : o.format;
    const std::string bytes = format == "csv" ? render_csv(r) : render_json(r);
    if (!o.out_path.empty()) {
        write_atomic(o.out_path, bytes);
        for (const auto& line : r.summary) out << line << "\n";
    } else if (!o.format.empty()) {
        out << bytes;
    } else {
        for (const auto& line : r.summary) out << line << "\n";
    }
    return kOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    if (const char* env = std::getenv("ROMANOV_CACHE_DIR")) o.cache_dir = env;

    CLI::App app{"Prime representation, admissibility, covering and Beatty experiments"};
    app.name("romanov");
    app.require_subcommand(1);
    app.add_option("--out", o.out_path, "Write the report here (atomically)");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", o.threads, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--cache-dir", o.cache_dir, "Directory for sieve caches (env ROMANOV_CACHE_DIR)");
    app.fallthrough();

    std::vector<Leaf> leaves;
    auto group = [&](const char* name, const char* help) {
        auto* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        g->fallthrough();
        return g;
    };
    auto leaf = [&](CLI::App* g, const char* name, const char* help, Report (*fn)(const Options&),
                    bool must_hold = false) {
        auto* s = g->add_subcommand(name, help);
        leaves.push_back({s, fn, must_hold});
        return s;
    };

    auto* sieve = group("sieve", "Segmented prime tables and their cache files");
    {
        auto* b = leaf(sieve, "build", "Sieve [lo, hi) and optionally write a cache", sieve_build);
        b->add_option("--lo", o.lo, "Range start");
        b->add_option("--hi", o.hi, "Range end (exclusive)")->required();
        b->add_option("--cache", o.cache, "Cache file path");
        auto* v = leaf(sieve, "verify", "Check a cache file against a fresh sieve", sieve_verify);
        v->add_option("--cache", o.cache, "Cache file path");
        v->add_option("--lo", o.lo, "Range start, to locate the cache in --cache-dir");
        v->add_option("--hi", o.hi, "Range end, to locate the cache in --cache-dir");
    }

    auto* repr = group("repr", "Representations n = p + 2^k");
    {
        leaf(repr, "f", "f(n) for n = p + 2^k", repr_f)->add_option("--n", o.n, "n >= 1")->required();
        auto* g = leaf(repr, "general", "f for l_i n = p + a_i", repr_general);
        g->add_option("--n", o.n, "n >= 1")->required();
        g->add_option("--file", o.file, "Sequence file ('a l' per line); default powers of two");
        leaf(repr, "exceptional", "Integers whose every n - 2^k is prime", repr_exceptional)
            ->add_option("--limit", o.limit, "Upper limit")
            ->required();
        auto* d = leaf(repr, "density", "Share of representable odd numbers", repr_density);
        d->add_option("--limit", o.limit, "Upper limit")->required();
        d->add_option("--checkpoints", o.checkpoints, "Ascending checkpoints (comma separated)")->delimiter(',');
        leaf(repr, "champions", "Record values of f over odd n", repr_champions)
            ->add_option("--limit", o.limit, "Upper limit (>= 5)")
            ->required();
    }

    auto* adm = group("admissible", "Admissible sets of linear functions");
    {
        leaf(adm, "check", "Admissibility with a witness certificate", admissible_check)
            ->add_option("--file", o.file, "Function file ('u v' per line)")
            ->required();
        leaf(adm, "extract", "Greedy extraction of an admissible subset (s >= 5)", admissible_extract)
            ->add_option("--file", o.file, "Function file ('u v' per line)")
            ->required();
        auto* s = leaf(adm, "shift", "Shifted system l_i n + (l_i a_t - a_i)", admissible_shift);
        s->add_option("--file", o.file, "Sequence file; default powers of two");
        s->add_option("--x", o.x_real, "x > e")->required();
        s->add_option("--alpha", o.alpha, "alpha in (0, 1/4)")->required();
        auto* c = leaf(adm, "scan", "Count n in [x, 2x) with many prime values", admissible_scan);
        c->add_option("--file", o.file, "Function file ('u v' per line)")->required();
        c->add_option("--x", o.x, "x >= 1")->required();
        c->add_option("--threshold", o.threshold, "Minimum number of prime values")->required();
        c->add_option("--cap", o.cap, "Maximum witnesses reported");
    }

    auto* cov = group("covering", "Covering congruences and the class they kill");
    {
        leaf(cov, "verify", "Exhaustive covering and order checks", covering_verify)
            ->add_option("--file", o.file, "Covering file ('r m p' per line); default the six-entry system");
        leaf(cov, "class", "CRT class of non-representable odd numbers", covering_class)
            ->add_option("--file", o.file, "Covering file; default the six-entry system");
        auto* s = leaf(cov, "scan", "Check f(n) = 0 along the class", covering_scan);
        s->add_option("--file", o.file, "Covering file; default the six-entry system");
        s->add_option("--limit", o.limit, "Upper limit")->required();
    }

    auto* bt = group("beatty", "Beatty sequences floor(beta k + gamma)");
    {
        auto beta_opt = [&](CLI::App* s) {
            s->add_option("--beta", o.beta, "sqrt:D, quad:P,D,Q or golden")->capture_default_str();
        };
        auto gamma_opt = [&](CLI::App* s) {
            s->add_option("--gamma", o.gamma, "Offset as num/den")->capture_default_str();
        };
        auto* cf = leaf(bt, "cf", "Continued fraction and convergents", beatty_cf);
        beta_opt(cf);
        cf->add_option("--terms", o.terms, "Number of partial quotients")->capture_default_str();
        auto* ty = leaf(bt, "type", "min q||q beta|| against 1/((K+1)(K+2))", beatty_type);
        beta_opt(ty);
        ty->add_option("--Q", o.Q, "Largest q")->required();
        auto* ap = leaf(bt, "count-ap", "Beatty terms in residue classes", beatty_count_ap_cmd);
        beta_opt(ap);
        gamma_opt(ap);
        ap->add_option("--x", o.x, "Number of terms")->required();
        ap->add_option("--moduli", o.moduli, "Moduli (comma separated)")->delimiter(',');
        ap->add_option("--d-max", o.d_max, "All moduli 2..d-max");
        auto* ls = leaf(bt, "lambda-sum", "von Mangoldt sum along the sequence", beatty_lambda_sum);
        beta_opt(ls);
        gamma_opt(ls);
        ls->add_option("--N", o.N, "Number of terms")->required();
        ls->add_option("--q1", o.q1)->required();
        ls->add_option("--a1", o.a1)->required();
        ls->add_option("--q2", o.q2)->required();
        ls->add_option("--a2", o.a2)->required();
        auto* rc = leaf(bt, "record", "Largest f_general along the sequence", beatty_record);
        beta_opt(rc);
        gamma_opt(rc);
        rc->add_option("--file", o.file, "Sequence file; default powers of two");
        rc->add_option("--k-max", o.k_max, "Largest index k")->required();
    }

    auto* dist = group("dist", "Distribution in progressions and prime windows");
    {
        auto* h = leaf(dist, "hyp1", "Well-distribution sums over q <= x^theta", dist_hyp1);
        h->add_option("--x", o.x, "x >= 2")->required();
        h->add_option("--theta", o.theta, "Level as num/den in (0, 1)")->capture_default_str();
        h->add_option("--file", o.file, "Function file; default L(n) = n");
        h->add_option("--B", o.B, "Excluded-modulus guard")->capture_default_str();
        auto window_opts = [&](CLI::App* s) {
            s->add_option("--q", o.q, "Modulus q >= 1")->required();
            s->add_option("--a", o.a, "Residue, 1 <= a <= q, gcd(a, q) = 1")->required();
            s->add_option("--x", o.x, "n ranges over [x, 2x)")->required();
            s->add_option("--y", o.y, "Window length")->required();
        };
        auto* w = leaf(dist, "window", "Histogram of primes in (qn, qn + y]", dist_window);
        window_opts(w);
        w->add_option("--threshold", o.threshold_opt, "Hit threshold (default ceil(log y))");
        auto* id = leaf(dist, "identity", "Exchange identity for the window sums", dist_identity, true);
        window_opts(id);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "romanov: " << e.what() << "\n";
        return kUsage;
    }

    const Leaf* chosen = nullptr;
    for (const auto& l : leaves)
        if (l.app->parsed()) chosen = &l;
    if (!chosen) {
        err << "romanov: no subcommand given\n";
        return kUsage;
    }
    if (o.threads > 0) set_threads(o.threads);

    const std::string where = chosen->app->get_parent()->get_name() + " " + chosen->app->get_name();
    try {
        const Report r = chosen->action(o);
        emit(r, o, out);
        if (chosen->must_hold && r.doc.contains("holds") && !r.doc["holds"].get<bool>()) {
            err << "romanov " << where << ": identity does not hold\n";
            return kInvariant;
        }
        return kOk;
    } catch (const FormatError& e) {
        err << "romanov " << where << ": " << e.what() << "\n";
        return kFormat;
    } catch (const DomainError& e) {
        err << "romanov " << where << ": " << e.what() << "\n";
        return kUsage;
    } catch (const CapacityError& e) {
        err << "romanov " << where << ": " << e.what() << "\n";
        return kCapacity;
    } catch (const OverflowError& e) {
        err << "romanov " << where << ": " << e.what() << "\n";
        return kCapacity;
    } catch (const PrecisionError& e) {
        err << "romanov " << where << ": " << e.what() << "\n";
        return kCapacity;
    } catch (const InvariantError& e) {
        err << "romanov " << where << ": internal check failed: " << e.what() << "\n";
        return kInvariant;
    } catch (const std::exception& e) {
        err << "romanov " << where << ": " << e.what() << "\n";
        return kInvariant;
    }
}

} // namespace romanov::cli
