// Command-line front end: exact measures, overlap moments, window reduction,
// residue counting, shift-construction certificates, Monte Carlo hit scans,
// mixing profiles, orbit counting, and finite-space limsup verdicts.
//
// Exit codes: 0 success, 1 error, 2 inconclusive verdict.

#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bclab/bclab.hpp"

#include "CLI11.hpp"

using namespace bclab;

namespace {

// ---------------------------------------------------------------------------
// Small parsing helpers
// ---------------------------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

// "lo..hi" or a comma-separated list of indices
std::vector<u64> parse_window(const std::string& s) {
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        u64 lo = std::stoull(s.substr(0, dots));
        u64 hi = std::stoull(s.substr(dots + 2));
        if (lo > hi) throw std::invalid_argument("window: lo > hi");
        std::vector<u64> out(hi - lo + 1);
        std::iota(out.begin(), out.end(), lo);
        return out;
    }
    std::vector<u64> out;
    for (const auto& tok : split(s, ',')) out.push_back(std::stoull(tok));
    return out;
}

// "1=2,3=5" -> {1: 2, 3: 5}
std::map<size_t, Int> parse_fixed(const std::string& s) {
    std::map<size_t, Int> out;
    if (s.empty()) return out;
    for (const auto& tok : split(s, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("fixed pattern entry needs k=a: " + tok);
        out[std::stoul(tok.substr(0, eq))] = Int(tok.substr(eq + 1));
    }
    return out;
}

// events separated by ';', atoms inside an event by ','; "-" is the empty event
std::vector<std::vector<size_t>> parse_events(const std::string& s) {
    std::vector<std::vector<size_t>> out;
    if (s.empty()) return out;
    for (const auto& ev : split(s, ';')) {
        std::vector<size_t> atoms;
        if (ev != "-")
            for (const auto& tok : split(ev, ',')) atoms.push_back(std::stoul(tok));
        out.push_back(std::move(atoms));
    }
    return out;
}

ApproxFn table_from_expr(const std::string& expr, u64 horizon) {
    auto fn = parse_psi_expr(expr);
    std::map<u64, Rat> t;
    for (u64 q = 1; q <= horizon; ++q) {
        Rat v = fn(q);
        if (v > 0) t[q] = v;
    }
    return ApproxFn(std::move(t));
}

std::function<CircleSet(u64)> make_builder(const std::string& set, const Rat& gamma,
                                           i64 A, u64 B, const ApproxFn& psi) {
    if (set == "eq") return [=](u64 q) { return build_Eq(q, gamma, psi); };
    if (set == "eq-prime") return [=](u64 q) { return build_Eq_prime(q, gamma, psi); };
    if (set == "eq-i")
        return [=](u64 q) { return build_Eq_I(q, gamma, psi, enumerate_Iq(q, A, B)); };
    if (set == "eq-star") return [=](u64 q) { return build_Eq_star(q, A, B, psi); };
    throw std::invalid_argument("unknown set family: " + set);
}

// Config file values fill in options the user did not pass on the command line.
json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

template <typename T>
void fill(const CLI::App& cmd, const std::string& flag, const json& cfg,
          const std::string& key, T& var) {
    if (cmd.count(flag) == 0 && cfg.contains(key)) var = cfg.at(key).get<T>();
}

void write_report(const std::string& path, const json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

json rat_json(const Rat& r) { return to_string(r); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification laboratory for shifted rational approximation"};
    app.require_subcommand(1);

    // Shared option storage. Each subcommand registers only what it uses.
    std::string cfg_path, out_path, csv_path;
    std::string set_family = "eq", psi_expr, gamma_s = "0/1", gamma2_s = "0/1";
    std::string window_s, weight_s = "unit", fixed_s, cert_path, table_path;
    std::string mode_s = "all", weights_s, preperiod_s, period_s, radius_expr;
    std::string checkpoints_s;
    u64 q = 1, r = 2, B = 1, Q = 1000, m = 1, samples = 100, seed = 0, N = 1000;
    u64 steps = 1, horizon = 0, t = 1, u = 1, b = 2, npairs = 100, stop_after = 0;
    i64 A = 0, rr = 0, ss = 0;
    long h = 0;
    unsigned P = 256, threads = 1;
    double K = 10.0, eps_d = 0.1;
    std::string eps_s = "1/100", cprime_s = "1", c_s, delta_s = "1/100", C_s = "2";
    bool prime_den = false, fast = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", cfg_path, "JSON config; flags take precedence");
        cmd->add_option("--out", out_path, "write a JSON report here");
    };

    auto* measure = app.add_subcommand("measure", "exact measure of one target set");
    measure->add_option("--set", set_family, "eq | eq-prime | eq-i | eq-star");
    measure->add_option("--q", q, "denominator")->required();
    measure->add_option("--gamma", gamma_s, "shift, as p/q");
    measure->add_option("--psi", psi_expr, "approximation function expression")->required();
    measure->add_option("--A", A, "residue numerator");
    measure->add_option("--B", B, "residue modulus");
    add_common(measure);

    auto* numth = app.add_subcommand("numth", "residue-set counts and pair counts");
    numth->add_option("--q", q)->required();
    numth->add_option("--A", A);
    numth->add_option("--B", B);
    numth->add_option("--offset", h, "report the pair-coprimality count F(offset)");
    add_common(numth);

    auto* overlap = app.add_subcommand("overlap", "two-denominator overlap diagnostics");
    overlap->add_option("--q", q)->required();
    overlap->add_option("--r", r)->required();
    overlap->add_option("--A", A);
    overlap->add_option("--B", B);
    overlap->add_option("--psi", psi_expr)->required();
    add_common(overlap);

    auto* moments = app.add_subcommand("moments", "second moments over an index window");
    moments->add_option("--window", window_s, "lo..hi or comma list")->required();
    moments->add_option("--set", set_family);
    moments->add_option("--gamma", gamma_s);
    moments->add_option("--A", A);
    moments->add_option("--B", B);
    moments->add_option("--psi", psi_expr)->required();
    add_common(moments);

    auto* reduce = app.add_subcommand("reduce", "shrink a window to a mass band");
    reduce->add_option("--window", window_s)->required();
    reduce->add_option("--set", set_family);
    reduce->add_option("--gamma", gamma_s);
    reduce->add_option("--A", A);
    reduce->add_option("--B", B);
    reduce->add_option("--psi", psi_expr)->required();
    reduce->add_option("--weight", weight_s, "unit | phi/q | I/q");
    reduce->add_option("--eps", eps_s, "band width");
    reduce->add_option("--cprime", cprime_s, "second-moment constant");
    reduce->add_option("--c", c_s, "optional explicit band cap");
    add_common(reduce);

    auto* forge = app.add_subcommand("gamma-forge", "construct a shift certificate");
    forge->add_option("--psi", psi_expr, "psi expression (with --horizon)");
    forge->add_option("--horizon", horizon, "tabulate psi on 1..horizon");
    forge->add_option("--f-table", table_path, "JSON [[q,f],...] for the f variant");
    forge->add_option("--steps", steps);
    forge->add_option("--fixed", fixed_s, "fixed quotients, e.g. 1=2,3=5");
    forge->add_flag("--prime", prime_den, "force prime convergent denominators");
    add_common(forge);

    auto* gverify = app.add_subcommand("gamma-verify", "revalidate a certificate");
    gverify->add_option("cert", cert_path, "certificate JSON file")->required();

    auto* tail = app.add_subcommand("tail-union", "exact measure of a tail union");
    tail->add_option("--m", m)->required();
    tail->add_option("--Q", Q)->required();
    tail->add_option("--set", set_family);
    tail->add_option("--gamma", gamma_s);
    tail->add_option("--A", A);
    tail->add_option("--B", B);
    tail->add_option("--psi", psi_expr)->required();
    tail->add_flag("--fast", fast, "residue sweep (requires gamma = A/B)");
    add_common(tail);

    auto* hits = app.add_subcommand("hits", "Monte Carlo hit scan over samples");
    hits->add_option("--gamma", gamma_s)->required();
    hits->add_option("--psi", psi_expr)->required();
    hits->add_option("--Q", Q);
    hits->add_option("--samples", samples);
    hits->add_option("--seed", seed);
    hits->add_option("--P", P, "sample precision in bits");
    hits->add_option("--mode", mode_s, "all | coprime | residue | congruence");
    hits->add_option("--A", A);
    hits->add_option("--B", B);
    hits->add_option("--r", rr, "witness residue (congruence mode)");
    hits->add_option("--t", t, "witness modulus (congruence mode)");
    hits->add_option("--s", ss, "denominator residue (congruence mode)");
    hits->add_option("--u", u, "denominator modulus (congruence mode)");
    hits->add_option("--stop-after", stop_after, "stop a sample after this many hits");
    hits->add_option("--checkpoints", checkpoints_s, "comma list of q checkpoints");
    hits->add_option("--threads", threads);
    hits->add_option("--csv", csv_path, "rows: sample,q,a,ambiguous");
    add_common(hits);

    auto* dich = app.add_subcommand("dichotomy", "shift-invariance probe");
    dich->add_option("--gamma", gamma_s)->required();
    dich->add_option("--gamma2", gamma2_s)->required();
    dich->add_option("--psi", psi_expr)->required();
    dich->add_option("--delta", delta_s)->required();
    dich->add_option("--Q", Q);
    dich->add_option("--samples", samples);
    dich->add_option("--seed", seed);
    dich->add_option("--P", P);
    dich->add_option("--threads", threads);
    add_common(dich);

    auto* mixing = app.add_subcommand("mixing", "correlation-gap envelope for x b");
    mixing->add_option("--b", b);
    mixing->add_option("--N", N, "number of iterates");
    mixing->add_option("--pairs", npairs, "random interval pairs");
    mixing->add_option("--seed", seed);
    add_common(mixing);

    auto* count = app.add_subcommand("count", "orbit hit-count residuals");
    count->add_option("--b", b);
    count->add_option("--radius", radius_expr, "target radius expression")->required();
    count->add_option("--N", N);
    count->add_option("--samples", samples);
    count->add_option("--seed", seed);
    count->add_option("--K", K);
    count->add_option("--eps", eps_d);
    count->add_option("--threads", threads);
    count->add_option("--csv", csv_path,
                      "rows: sample,N,hits,phi_num,phi_den,residual,bound,pass");
    add_common(count);

    auto* finspace = app.add_subcommand("finspace", "finite-space limsup verdict");
    finspace->add_option("--weights", weights_s, "atom weights, e.g. 1/2,1/2")->required();
    finspace->add_option("--preperiod", preperiod_s, "events: atoms ',' events ';'");
    finspace->add_option("--period", period_s, "periodic events")->required();
    finspace->add_option("--C", C_s, "quasi-independence constant");
    finspace->add_option("--horizon", horizon, "search horizon");
    add_common(finspace);

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = load_config(cfg_path);
        json rep;
        rep["config"] = cfg;

        if (*measure) {
            fill(*measure, "--set", cfg, "set", set_family);
            fill(*measure, "--gamma", cfg, "gamma", gamma_s);
            Rat gamma = parse_rat(gamma_s);
            ApproxFn psi = table_from_expr(psi_expr, q);
            Rat mu = make_builder(set_family, gamma, A, B, psi)(q).measure();
            std::cout << to_string(mu) << "\n";
            rep["command"] = "measure";
            rep["measure"] = rat_json(mu);
            write_report(out_path, rep);
        } else if (*numth) {
            u64 out;
            if (numth->count("--offset"))
                out = F_hq(h, q, A, B);
            else if (numth->count("--B"))
                out = count_Iq(q, A, B);
            else
                out = euler_phi(q);
            std::cout << out << "\n";
            rep["command"] = "numth";
            rep["count"] = out;
            write_report(out_path, rep);
        } else if (*overlap) {
            ApproxFn psi = table_from_expr(psi_expr, std::max(q, r));
            Rat X = X_qr(q, r, psi(q), psi(r), B);
            Rat mu = intersect(build_Eq_star(q, A, B, psi), build_Eq_star(r, A, B, psi))
                         .measure();
            HTable tab = H_table(q, r, A, B);
            std::cout << "scale X = " << to_string(X) << "\n"
                      << "intersection measure = " << to_string(mu) << "\n"
                      << "coprime pairs = " << tab.total_pairs << "\n";
            rep["command"] = "overlap";
            rep["X"] = rat_json(X);
            rep["intersection"] = rat_json(mu);
            rep["pairs"] = tab.total_pairs;
            write_report(out_path, rep);
        } else if (*moments) {
            std::vector<u64> w = parse_window(window_s);
            u64 hi = *std::max_element(w.begin(), w.end());
            ApproxFn psi = table_from_expr(psi_expr, hi);
            Rat gamma = parse_rat(gamma_s);
            MomentReport mr = overlap_moments(
                IndexWindow(w), make_builder(set_family, gamma, A, B, psi));
            std::cout << "Psi = " << to_string(mr.Psi) << "\n"
                      << "offdiag = " << to_string(mr.overlap_offdiag) << "\n"
                      << "full = " << to_string(mr.overlap_full) << "\n";
            if (mr.C_prime) std::cout << "C' = " << to_string(*mr.C_prime) << "\n";
            if (mr.C_full) std::cout << "C = " << to_string(*mr.C_full) << "\n";
            rep["command"] = "moments";
            rep["Psi"] = rat_json(mr.Psi);
            rep["offdiag"] = rat_json(mr.overlap_offdiag);
            rep["full"] = rat_json(mr.overlap_full);
            if (mr.C_full) rep["C"] = rat_json(*mr.C_full);
            write_report(out_path, rep);
        } else if (*reduce) {
            std::vector<u64> w = parse_window(window_s);
            u64 hi = *std::max_element(w.begin(), w.end());
            ApproxFn psi = table_from_expr(psi_expr, hi);
            Rat gamma = parse_rat(gamma_s);
            MomentReport mr = overlap_moments(
                IndexWindow(w), make_builder(set_family, gamma, A, B, psi));
            Weight wt;
            if (weight_s == "unit") wt = {WeightKind::unit};
            else if (weight_s == "phi/q") wt = {WeightKind::phi_over_q};
            else if (weight_s == "I/q") wt = {WeightKind::I_over_q, A, B};
            else throw std::invalid_argument("unknown weight: " + weight_s);
            std::optional<Rat> c;
            if (!c_s.empty()) c = parse_rat(c_s);
            IndexWindow band = reduce_to_band(IndexWindow(w), psi, wt, mr.pair_measures,
                                              parse_rat(eps_s), parse_rat(cprime_s), c);
            for (size_t i = 0; i < band.members.size(); ++i)
                std::cout << band.members[i] << (i + 1 < band.members.size() ? "," : "\n");
            rep["command"] = "reduce";
            rep["window"] = band.members;
            write_report(out_path, rep);
        } else if (*forge) {
            fill(*forge, "--steps", cfg, "steps", steps);
            std::map<size_t, Int> fixed = parse_fixed(fixed_s);
            std::pair<CFExpansion, GammaCertificate> built = [&] {
                if (!table_path.empty()) {
                    std::ifstream in(table_path);
                    if (!in) throw std::runtime_error("cannot open " + table_path);
                    json tj;
                    in >> tj;
                    std::vector<std::pair<Int, Int>> ftab;
                    for (const auto& row : tj)
                        ftab.emplace_back(Int(row.at(0).get<std::string>()),
                                          Int(row.at(1).get<std::string>()));
                    return construct_gamma_for_f(ftab, fixed, steps, prime_den);
                }
                if (psi_expr.empty() || horizon == 0)
                    throw std::invalid_argument(
                        "gamma-forge needs --psi with --horizon, or --f-table");
                ApproxFn psi = table_from_expr(psi_expr, horizon);
                return construct_gamma_for_psi(psi.values(), fixed, steps, prime_den);
            }();
            const auto& [cf, cert] = built;
            for (const GammaStep& s : cert.steps)
                std::cout << "step k=" << s.k << " window [" << to_string(s.window_lo)
                          << "," << to_string(s.window_hi) << "] sum "
                          << to_string(s.sum) << " a_k " << to_string(s.a_k) << " q_k "
                          << to_string(s.q_k) << "\n";
            std::cout << "gamma = " << to_string(cf.value()) << "\n";
            json cj = certificate_to_json(cert);
            rep["command"] = "gamma-forge";
            rep["gamma"] = rat_json(cf.value());
            rep["certificate"] = cj;
            if (!out_path.empty())
                write_report(out_path, rep);
            else
                std::cout << cj.dump(2) << "\n";
        } else if (*gverify) {
            std::ifstream in(cert_path);
            if (!in) throw std::runtime_error("cannot open " + cert_path);
            json cj;
            in >> cj;
            // accept either a bare certificate or a gamma-forge report
            if (cj.contains("certificate")) cj = cj.at("certificate");
            std::string why;
            if (verify_certificate(certificate_from_json(cj), &why)) {
                std::cout << "valid\n";
            } else {
                std::cout << "invalid: " << why << "\n";
                return 1;
            }
        } else if (*tail) {
            ApproxFn psi = table_from_expr(psi_expr, Q);
            auto psi_fn = parse_psi_expr(psi_expr);
            Rat mu = fast ? tail_union_measure_residue(m, Q, A, B, psi_fn)
                          : tail_union_measure(
                                make_builder(set_family, parse_rat(gamma_s), A, B, psi),
                                m, Q);
            std::cout << to_string(mu) << "\n"
                      << "decimal " << mu.get_d() << "\n";
            rep["command"] = "tail-union";
            rep["measure"] = rat_json(mu);
            write_report(out_path, rep);
        } else if (*hits) {
            HitModeSpec mode;
            if (mode_s == "all") mode.mode = HitMode::all_a;
            else if (mode_s == "coprime") mode.mode = HitMode::coprime;
            else if (mode_s == "residue") mode.mode = HitMode::residue;
            else if (mode_s == "congruence") mode.mode = HitMode::congruence;
            else throw std::invalid_argument("unknown mode: " + mode_s);
            mode.A = A;
            mode.B = B;
            mode.r = rr;
            mode.t = t;
            mode.s = ss;
            mode.u = u;
            std::vector<u64> cps;
            if (!checkpoints_s.empty())
                for (const auto& tok : split(checkpoints_s, ',')) cps.push_back(std::stoull(tok));
            auto recs = montecarlo_hits(parse_rat(gamma_s), parse_psi_expr(psi_expr), Q,
                                        samples, seed, mode, P, stop_after, threads, cps);
            u64 total = 0, ambig = 0, mn = ~0ull, mx = 0;
            for (const auto& rec : recs) {
                total += rec.hits.size();
                ambig += rec.ambiguous.size();
                mn = std::min<u64>(mn, rec.hits.size());
                mx = std::max<u64>(mx, rec.hits.size());
            }
            std::cout << "samples " << recs.size() << " mean hits "
                      << static_cast<double>(total) / recs.size() << " min " << mn
                      << " max " << mx << " ambiguous " << ambig << "\n"
                      << "rng " << kRngAlgorithm << " seed " << seed << "\n";
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                csv << "sample,q,a,ambiguous\n";
                for (const auto& rec : recs) {
                    for (const auto& [hq, ha] : rec.hits)
                        csv << rec.sample << "," << hq << "," << ha << ",0\n";
                    for (const auto& [hq, ha] : rec.ambiguous)
                        csv << rec.sample << "," << hq << "," << ha << ",1\n";
                }
            }
            rep["command"] = "hits";
            rep["rng"] = kRngAlgorithm;
            rep["seed"] = seed;
            rep["mean_hits"] = static_cast<double>(total) / recs.size();
            rep["ambiguous"] = ambig;
            write_report(out_path, rep);
        } else if (*dich) {
            DichotomyReport dr =
                dichotomy_probe(parse_rat(gamma_s), parse_rat(gamma2_s),
                                parse_psi_expr(psi_expr), parse_rat(delta_s), Q, samples,
                                seed, P, threads);
            std::cout << "C = " << to_string(dr.C) << "\n"
                      << "first exceeds second: " << dr.samples_first_exceeds << "\n"
                      << "containment violations: " << dr.containment_violations << "\n";
            rep["command"] = "dichotomy";
            rep["C"] = rat_json(dr.C);
            rep["containment_violations"] = dr.containment_violations;
            rep["rng"] = kRngAlgorithm;
            rep["seed"] = seed;
            write_report(out_path, rep);
            return dr.containment_violations == 0 ? 0 : 1;
        } else if (*mixing) {
            DynSystem sys = DynSystem::times(b);
            CounterRng rng(seed, 0);
            std::vector<std::pair<CircleSet, CircleSet>> ps;
            auto seg = [&]() {
                long den = 2 + static_cast<long>(rng.next_below(1000));
                long lo = static_cast<long>(rng.next_below(static_cast<u64>(den)));
                long len = 1 + static_cast<long>(rng.next_below(static_cast<u64>(den - lo)));
                return CircleSet::from_intervals({{rat(lo, den), rat(lo + len, den)}});
            };
            for (u64 i = 0; i < npairs; ++i) ps.emplace_back(seg(), seg());
            MixingProfile prof = sigma_mixing_envelope(sys, ps, N);
            std::cout << "pairs " << npairs << " iterates " << N << " violations "
                      << prof.violations.size() << " within envelope: "
                      << (prof.within_envelope ? "yes" : "no") << "\n"
                      << "rng " << kRngAlgorithm << " seed " << seed << "\n";
            rep["command"] = "mixing";
            rep["within_envelope"] = prof.within_envelope;
            rep["violations"] = prof.violations.size();
            rep["rng"] = kRngAlgorithm;
            rep["seed"] = seed;
            write_report(out_path, rep);
            return prof.within_envelope ? 0 : 1;
        } else if (*count) {
            DynSystem sys = DynSystem::times(b);
            auto rad = parse_psi_expr(radius_expr);
            TargetSequence targets = TargetSequence::random_centers(seed + 1, rad);
            CountReport cr = counting_experiment(sys, targets, N, samples, eps_d, seed,
                                                 K, threads);
            std::cout << "pass fraction " << cr.pass_fraction << " Phi "
                      << to_string(cr.phi) << " precision " << cr.precision << "\n"
                      << "rng " << cr.rng << " seed " << seed << "\n";
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                csv << "sample,N,hits,phi_num,phi_den,residual,bound,pass\n";
                for (const auto& row : cr.rows)
                    csv << row.sample << "," << row.N << "," << row.hits << ","
                        << to_string(row.phi.get_num()) << ","
                        << to_string(row.phi.get_den()) << "," << row.residual.get_d()
                        << "," << row.bound << "," << (row.pass ? 1 : 0) << "\n";
            }
            rep["command"] = "count";
            rep["pass_fraction"] = cr.pass_fraction;
            rep["phi"] = rat_json(cr.phi);
            rep["precision"] = cr.precision;
            rep["rng"] = cr.rng;
            rep["seed"] = seed;
            write_report(out_path, rep);
        } else if (*finspace) {
            fill(*finspace, "--C", cfg, "C", C_s);
            fill(*finspace, "--horizon", cfg, "horizon", horizon);
            FinSpace space;
            for (const auto& tok : split(weights_s, ',')) space.atom_weights.push_back(parse_rat(tok));
            space.preperiod = parse_events(preperiod_s);
            space.period = parse_events(period_s);
            DbcReport dr = verify_dbc(space, parse_rat(C_s), horizon ? horizon : 16);
            std::cout << "verdict " << to_string(dr.verdict) << "\n"
                      << "limsup measure " << to_string(dr.limsup_measure) << "\n"
                      << "lower bound 1/C = " << to_string(dr.lower_bound) << "\n";
            rep["command"] = "finspace";
            rep["verdict"] = to_string(dr.verdict);
            rep["limsup"] = rat_json(dr.limsup_measure);
            write_report(out_path, rep);
            if (dr.verdict == Verdict::inconclusive) return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
