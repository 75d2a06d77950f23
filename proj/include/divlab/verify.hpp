#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "divlab/bestapprox.hpp"
#include "divlab/corpus.hpp"
#include "divlab/divdiff.hpp"
#include "divlab/errors.hpp"
#include "divlab/knots.hpp"
#include "divlab/lambda.hpp"
#include "divlab/parallel.hpp"
#include "divlab/report.hpp"
#include "divlab/rng.hpp"
#include "divlab/smoothness.hpp"

namespace divlab {

enum class MultiplicityPolicy { random_le, all_simple, full };
enum class KnotPreset { uniform, geometric, near_pair, mixed };

inline MultiplicityPolicy parse_multiplicity_policy(const std::string& s) {
    if (s == "random") return MultiplicityPolicy::random_le;
    if (s == "all-simple") return MultiplicityPolicy::all_simple;
    if (s == "full") return MultiplicityPolicy::full;
    throw config_error("unknown multiplicity_policy '" + s + "'");
}

inline KnotPreset parse_knot_preset(const std::string& s) {
    if (s == "uniform") return KnotPreset::uniform;
    if (s == "geometric") return KnotPreset::geometric;
    if (s == "near-pair") return KnotPreset::near_pair;
    if (s == "mixed") return KnotPreset::mixed;
    throw config_error("unknown knot_preset '" + s + "'");
}

/// Shared configuration for the randomized suites.
struct TrialConfig {
    int m = 2;
    int r = 0;
    long trials = 100;
    std::uint64_t seed = 1;
    double min_gap = 1e-3; // minimal distinct-knot gap as a fraction of the span
    MultiplicityPolicy multiplicity_policy = MultiplicityPolicy::random_le;
    KnotPreset knot_preset = KnotPreset::mixed;
    std::vector<std::string> functions; // empty -> default pool
    std::vector<std::string> phis;      // empty -> default pool (lemma suites)
    int grid_x = 128; // estimator grids used inside trials
    int grid_u = 48;
    double lhs_zero_tol = 1e-9;
    QuadratureSpec quad;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["m"] = m;
        j["r"] = r;
        j["trials"] = trials;
        j["seed"] = seed;
        j["min_gap"] = min_gap;
        j["multiplicity_policy"] = multiplicity_policy == MultiplicityPolicy::random_le
                                       ? "random"
                                       : (multiplicity_policy == MultiplicityPolicy::all_simple
                                              ? "all-simple"
                                              : "full");
        j["knot_preset"] = knot_preset == KnotPreset::uniform
                               ? "uniform"
                               : (knot_preset == KnotPreset::geometric
                                      ? "geometric"
                                      : (knot_preset == KnotPreset::near_pair ? "near-pair"
                                                                              : "mixed"));
        j["functions"] = functions;
        j["phis"] = phis;
        j["grid_x"] = grid_x;
        j["grid_u"] = grid_u;
        j["lhs_zero_tol"] = lhs_zero_tol;
        j["quad_rel_tol"] = quad.rel_tol;
        j["quad_max_depth"] = quad.max_depth;
        return j;
    }
};

/// Parse a TrialConfig object; unknown keys are rejected unless listed.
inline TrialConfig trial_config_from_json(const nlohmann::json& j,
                                          const std::vector<std::string>& extra_allowed = {}) {
    if (!j.is_object()) throw config_error("config: expected a JSON object");
    static const std::vector<std::string> known = {
        "m",       "r",      "trials",       "seed",         "min_gap",
        "multiplicity_policy", "knot_preset", "functions",    "phis",
        "grid_x",  "grid_u", "lhs_zero_tol", "quad_rel_tol", "quad_max_depth"};
    for (const auto& item : j.items()) {
        const std::string& key = item.key();
        bool ok = std::find(known.begin(), known.end(), key) != known.end() ||
                  std::find(extra_allowed.begin(), extra_allowed.end(), key) !=
                      extra_allowed.end();
        if (!ok) throw config_error("config: unknown field '" + key + "'");
    }
    TrialConfig cfg;
    try {
        if (j.contains("m")) cfg.m = j.at("m").get<int>();
        if (j.contains("r")) cfg.r = j.at("r").get<int>();
        if (j.contains("trials")) cfg.trials = j.at("trials").get<long>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("min_gap")) cfg.min_gap = j.at("min_gap").get<double>();
        if (j.contains("multiplicity_policy"))
            cfg.multiplicity_policy =
                parse_multiplicity_policy(j.at("multiplicity_policy").get<std::string>());
        if (j.contains("knot_preset"))
            cfg.knot_preset = parse_knot_preset(j.at("knot_preset").get<std::string>());
        if (j.contains("functions"))
            cfg.functions = j.at("functions").get<std::vector<std::string>>();
        if (j.contains("phis")) cfg.phis = j.at("phis").get<std::vector<std::string>>();
        if (j.contains("grid_x")) cfg.grid_x = j.at("grid_x").get<int>();
        if (j.contains("grid_u")) cfg.grid_u = j.at("grid_u").get<int>();
        if (j.contains("lhs_zero_tol")) cfg.lhs_zero_tol = j.at("lhs_zero_tol").get<double>();
        if (j.contains("quad_rel_tol")) cfg.quad.rel_tol = j.at("quad_rel_tol").get<double>();
        if (j.contains("quad_max_depth"))
            cfg.quad.max_depth = j.at("quad_max_depth").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    if (cfg.trials < 1) throw config_error("config: trials >= 1 required");
    if (cfg.r < 0 || cfg.m < 0) throw config_error("config: m, r must be nonnegative");
    if (!(cfg.min_gap > 0.0) || cfg.min_gap >= 1.0)
        throw config_error("config: min_gap must be in (0, 1)");
    if (cfg.grid_x < 2 || cfg.grid_u < 2) throw config_error("config: grids too small");
    return cfg;
}

/// Draw a knot multiset with `entries` expanded knots in [0,1], multiplicities
/// bounded by r+1 and distinct gaps at least min_gap * span.
inline KnotSet sample_knotset(Rng& rng, int entries, int r, double min_gap,
                              MultiplicityPolicy policy, KnotPreset preset) {
    if (entries < 2) throw config_error("sample_knotset: needs at least two entries");

    std::vector<int> mults;
    int rem = entries;
    switch (policy) {
        case MultiplicityPolicy::all_simple:
            mults.assign(static_cast<std::size_t>(entries), 1);
            break;
        case MultiplicityPolicy::full: {
            if (entries % (r + 1) != 0)
                throw config_error("sample_knotset: entries not divisible by r+1");
            mults.assign(static_cast<std::size_t>(entries / (r + 1)), r + 1);
            break;
        }
        case MultiplicityPolicy::random_le:
            while (rem > 0) {
                int cap = std::min(r + 1, rem);
                int mult = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(cap)));
                mults.push_back(mult);
                rem -= mult;
            }
            break;
    }
    // keep high multiplicities off a fixed position
    for (std::size_t i = mults.size(); i > 1; --i) {
        std::size_t pick = rng.index(i);
        std::swap(mults[i - 1], mults[pick]);
    }
    const int groups = static_cast<int>(mults.size());
    if (groups < 2) throw config_error("sample_knotset: degenerate draw (single distinct knot)");

    KnotPreset effective = preset;
    if (preset == KnotPreset::mixed) {
        double roll = rng.uniform01();
        effective = roll < 0.03 ? KnotPreset::geometric
                                : (roll < 0.06 ? KnotPreset::near_pair : KnotPreset::uniform);
    }
    if (groups == 2 && effective == KnotPreset::geometric) effective = KnotPreset::uniform;

    std::vector<double> values(static_cast<std::size_t>(groups));
    if (effective == KnotPreset::geometric) {
        // consecutive gaps 2^{-i}, scaled into [0,1], random orientation
        double pos = 0.0;
        values[0] = 0.0;
        for (int i = 1; i < groups; ++i) {
            pos += std::pow(2.0, -(i - 1));
            values[static_cast<std::size_t>(i)] = pos;
        }
        for (auto& v : values) v /= pos;
        if (rng.next() & 1u) {
            std::vector<double> flipped;
            for (auto it = values.rbegin(); it != values.rend(); ++it)
                flipped.push_back(1.0 - *it);
            values = std::move(flipped);
        }
    } else {
        bool accepted = false;
        for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
            for (auto& v : values) v = rng.uniform01();
            std::sort(values.begin(), values.end());
            double span = values.back() - values.front();
            if (!(span > 0.0)) continue;
            accepted = true;
            for (std::size_t i = 1; i < values.size(); ++i)
                if (values[i] - values[i - 1] < min_gap * span) {
                    accepted = false;
                    break;
                }
        }
        if (!accepted)
            throw config_error("sample_knotset: could not satisfy min_gap after 1000 draws");
        if (effective == KnotPreset::near_pair) {
            // squeeze one adjacent pair to exactly the floor
            double span = values.back() - values.front();
            std::size_t j = rng.index(static_cast<std::uint64_t>(groups - 1));
            values[j + 1] = values[j] + min_gap * span;
        }
    }

    std::vector<double> expanded;
    expanded.reserve(static_cast<std::size_t>(entries));
    for (int g = 0; g < groups; ++g)
        for (int c = 0; c < mults[static_cast<std::size_t>(g)]; ++c)
            expanded.push_back(values[static_cast<std::size_t>(g)]);
    return KnotSet(std::span<const double>(expanded.data(), expanded.size()));
}

inline std::vector<std::string> default_function_pool() {
    return {"exp",         "sin",          "x^6",
            "abspow(0.4,2.5)", "tpow(0.3,3)", "poly(1,-0.5,0.25,-2,1.5)"};
}

inline std::vector<std::string> default_interp_pool(int r) {
    return {"exp",
            "sin",
            "x^5",
            "abspow(0.41,3.5)",
            "tpow(0.37," + std::to_string(r + 2) + ")",
            "scaled(sin,2,-0.3)"};
}

inline std::vector<std::string> default_phi_pool(int k) {
    return {"pow(0.5)",     "pow(1)",      "pow(" + std::to_string(k) + ")",
            "cappow(1,0.5)", "cappow(2,1)", "plin(0:0,0.3:0.2,1:0.4,2:0.8)"};
}

namespace detail {

inline std::vector<SmoothFunction> resolve_pool(const std::vector<std::string>& ids, int r,
                                                const std::vector<std::string>& fallback) {
    const auto& names = ids.empty() ? fallback : ids;
    std::vector<SmoothFunction> pool;
    for (const auto& name : names) {
        SmoothFunction f = corpus_lookup(name);
        if (f.max_derivative_order() < r)
            throw config_error("function '" + name + "' lacks derivative order " +
                               std::to_string(r));
        pool.push_back(std::move(f));
    }
    if (pool.empty()) throw config_error("empty function pool");
    return pool;
}

inline std::vector<ModulusFunction> resolve_phi_pool(const std::vector<std::string>& ids,
                                                     int k) {
    const auto& names = ids.empty() ? default_phi_pool(k) : ids;
    std::vector<ModulusFunction> pool;
    for (const auto& name : names) pool.push_back(phi_lookup(name));
    if (pool.empty()) throw config_error("empty phi pool");
    return pool;
}

/// ratio row with the rhs=0 conventions: (0,0) scores 0; (lhs>tol, 0) fails.
inline TrialRow ratio_row(long id, int m, int r, std::string knots, std::string fn, double lhs,
                          double rhs, double zero_tol, std::string note) {
    TrialRow row;
    row.trial_id = id;
    row.m = m;
    row.r = r;
    row.knots = std::move(knots);
    row.fn = std::move(fn);
    row.lhs = lhs;
    row.rhs = rhs;
    if (rhs > 0.0) {
        row.ratio = lhs / rhs;
    } else {
        row.ratio = 0.0;
        row.failure = lhs > zero_tol;
    }
    row.note = std::move(note);
    return row;
}

} // namespace detail

/// Theorem 2.2 pipeline: |[x_0..x_m; f]| against Lambda_r(X; est. omega_{m-r}).
inline VerificationReport check_main_theorem(const TrialConfig& cfg,
                                             std::optional<double> baseline = std::nullopt,
                                             const std::string& check_name = "main") {
    if (cfg.m < cfg.r + 1)
        throw config_error(check_name + ": requires m >= r+1");
    auto pool = detail::resolve_pool(cfg.functions, cfg.r, default_function_pool());
    const int k = cfg.m - cfg.r;

    VerificationReport rep;
    rep.check = check_name;
    rep.config = cfg.to_json();
    rep.seed = cfg.seed;
    rep.rows.resize(static_cast<std::size_t>(cfg.trials));

    parallel_for(cfg.trials, [&](long i) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(i));
        KnotSet X = sample_knotset(rng, cfg.m + 1, cfg.r, cfg.min_gap, cfg.multiplicity_policy,
                                   cfg.knot_preset);
        const SmoothFunction& f = pool[rng.index(pool.size())];
        double lhs = std::abs(divided_difference(X, f));
        auto curve = modulus_curve(f.view(cfg.r), k, X.hull(), cfg.grid_x, cfg.grid_u,
                                   2.0 * X.span());
        auto lam = lambda_r(X, cfg.r, curve, cfg.quad);
        std::string note = "pair=(" + std::to_string(lam.argmax_pair.p) + "," +
                           std::to_string(lam.argmax_pair.q) + ")";
        rep.rows[static_cast<std::size_t>(i)] =
            detail::ratio_row(i, cfg.m, cfg.r, to_string(X), f.id(), lhs, lam.value,
                              cfg.lhs_zero_tol, std::move(note));
    });
    rep.finalize(baseline);
    return rep;
}

/// Base case m = r+1 of the main estimate (single pair (0, m)).
inline VerificationReport check_lemma_k1(const TrialConfig& cfg,
                                         std::optional<double> baseline = std::nullopt) {
    if (cfg.m != cfg.r + 1) throw config_error("lemma_k1: requires m = r+1");
    return check_main_theorem(cfg, baseline, "lemma_k1");
}

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

/// Lemma on chained index pairs: Lambda_{p,q,r}(X; phi) <= 2^{k^2} Lambda_r(X; omega)
/// for phi(t) = t^{k-1} Integral_t^d u^{-k} omega(u) du.
inline BoundCheck check_lemma3(const KnotSet& X, int r, IndexPair pair,
                               const ModulusFunction& omega, QuadratureSpec quad = {}) {
    const int m = X.order();
    if (pair.q - pair.p < r + 1 || pair.p < 0 || pair.q > m)
        throw std::domain_error("check_lemma3: pair outside Q_{m,r}");
    if (pair.q - pair.p + 2 > m)
        throw std::domain_error("check_lemma3: hypothesis q-p+2 <= m violated");
    if (!omega.is_phi()) throw validation_error("check_lemma3: omega not in Phi");
    const int k = m - r;
    const double d = 2.0 * X.span();
    auto phi = phi_from_omega(omega, k, d, quad);
    BoundCheck out;
    out.lhs = lambda_pqr(X, r, pair, phi, quad);
    out.rhs = std::pow(2.0, k * k) * lambda_r(X, r, omega, quad).value;
    out.pass = out.lhs <= out.rhs + 1e-9 * std::max(1.0, out.rhs);
    return out;
}

/// Randomized Lemma 3.2-style suite. For k = 2 the admissible pair set is
/// empty (q-p+2 <= m cannot meet q-p >= r+1) and the report is vacuous.
inline VerificationReport check_lemma3_suite(const TrialConfig& cfg) {
    const int k = cfg.m - cfg.r;
    if (k < 1) throw config_error("lemma3: requires m >= r+1");
    auto phis = detail::resolve_phi_pool(cfg.phis, k);

    std::vector<IndexPair> admissible;
    for (const auto& pair : q_set(cfg.m, cfg.r))
        if (pair.q - pair.p + 2 <= cfg.m) admissible.push_back(pair);

    VerificationReport rep;
    rep.check = "lemma3";
    rep.config = cfg.to_json();
    rep.config["admissible_pairs"] = admissible.size();
    rep.seed = cfg.seed;
    if (admissible.empty()) {
        rep.finalize();
        return rep;
    }

    rep.rows.resize(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, [&](long i) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(i));
        KnotSet X = sample_knotset(rng, cfg.m + 1, cfg.r, cfg.min_gap, cfg.multiplicity_policy,
                                   cfg.knot_preset);
        const ModulusFunction& omega = phis[rng.index(phis.size())];
        IndexPair pair = admissible[rng.index(admissible.size())];
        auto res = check_lemma3(X, cfg.r, pair, omega, cfg.quad);
        TrialRow row = detail::ratio_row(i, cfg.m, cfg.r, to_string(X), omega.id(), res.lhs,
                                         res.rhs, cfg.lhs_zero_tol,
                                         "pair=(" + std::to_string(pair.p) + "," +
                                             std::to_string(pair.q) + ")");
        if (!res.pass) row.failure = true;
        rep.rows[static_cast<std::size_t>(i)] = std::move(row);
    });
    rep.finalize();
    return rep;
}

struct Lemma4Result {
    double lhs_head = 0.0; // Lambda_r(x_0..x_{m-1}; phi)
    double lhs_tail = 0.0; // Lambda_r(x_1..x_m; phi)
    double rhs_base = 0.0; // (x_m - x_0) * Lambda_r(x_0..x_m; omega)
};

/// Both displayed bounds of the two-sided lemma, sharing one phi.
inline Lemma4Result check_lemma4(const KnotSet& X, int r, const ModulusFunction& omega,
                                 QuadratureSpec quad = {}) {
    const int m = X.order();
    const int k = m - r;
    if (k < 2) throw std::domain_error("check_lemma4: requires k = m-r >= 2");
    if (!omega.is_phi()) throw validation_error("check_lemma4: omega not in Phi");
    const double d = 2.0 * X.span();
    auto phi = phi_from_omega(omega, k, d, quad);
    Lemma4Result out;
    out.lhs_head = lambda_r(X.slice(0, m - 1), r, phi, quad).value;
    out.lhs_tail = lambda_r(X.slice(1, m), r, phi, quad).value;
    out.rhs_base = X.span() * lambda_r(X, r, omega, quad).value;
    return out;
}

inline VerificationReport check_lemma4_suite(const TrialConfig& cfg,
                                             std::optional<double> baseline = std::nullopt) {
    const int k = cfg.m - cfg.r;
    if (k < 2) throw config_error("lemma4: requires k = m-r >= 2");
    auto phis = detail::resolve_phi_pool(cfg.phis, k);

    VerificationReport rep;
    rep.check = "lemma4";
    rep.config = cfg.to_json();
    rep.seed = cfg.seed;
    rep.rows.resize(static_cast<std::size_t>(2 * cfg.trials));

    parallel_for(cfg.trials, [&](long i) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(i));
        KnotSet X = sample_knotset(rng, cfg.m + 1, cfg.r, cfg.min_gap, cfg.multiplicity_policy,
                                   cfg.knot_preset);
        const ModulusFunction& omega = phis[rng.index(phis.size())];
        auto res = check_lemma4(X, cfg.r, omega, cfg.quad);
        rep.rows[static_cast<std::size_t>(2 * i)] =
            detail::ratio_row(i, cfg.m, cfg.r, to_string(X), omega.id(), res.lhs_head,
                              res.rhs_base, cfg.lhs_zero_tol, "eq3");
        rep.rows[static_cast<std::size_t>(2 * i) + 1] =
            detail::ratio_row(i, cfg.m, cfg.r, to_string(X), omega.id(), res.lhs_tail,
                              res.rhs_base, cfg.lhs_zero_tol, "eq4");
    });
    rep.finalize(baseline);
    return rep;
}

/// Whitney/Marchaud chain on one corpus function: after removing the best
/// degree k-1 approximation P from f^(r), check
///   nr0:  ||f^(r) - P||              <= C * omega_k(f^(r), span)
///   nr:   omega_{k-1}(g, t)          <= C * t^{k-1} Integral_t^{2 span} omega_k(u)/u^k du
///   nr1:  omega_{k-1}(g, t)          <= C * omega_k(f^(r), t),  t in [span, 2 span].
inline VerificationReport check_section4_chain(const std::string& fn_id, int r, int k,
                                               Interval I,
                                               std::optional<double> baseline = std::nullopt,
                                               int grid_x = 512, int grid_u = 128,
                                               int remez_grid = 4096, QuadratureSpec quad = {},
                                               double lhs_zero_tol = 1e-9) {
    if (k < 2) throw config_error("section4: requires k >= 2");
    SmoothFunction f = corpus_lookup(fn_id);
    if (f.max_derivative_order() < r)
        throw config_error("section4: function lacks derivative order " + std::to_string(r));
    const double span = I.length();

    auto fr = f.view(r);
    MinimaxResult best = remez_discrete(fr, k - 1, I, remez_grid);
    const MonomialPoly& P = best.polynomial;
    auto g = [&fr, &P](double x) { return fr(x) - P(x); };

    auto curve_f = modulus_curve(fr, k, I, grid_x, grid_u, 2.0 * span);
    auto curve_g = modulus_curve(g, k - 1, I, grid_x, grid_u, 2.0 * span);
    const PiecewiseLinear& nodes_f = *curve_f.piecewise_nodes();

    VerificationReport rep;
    rep.check = "section4";
    rep.config = {{"fn", fn_id}, {"r", r}, {"k", k}, {"interval", {I.a, I.b}},
                  {"grid_x", grid_x}, {"grid_u", grid_u}, {"remez_grid", remez_grid}};
    long id = 0;
    const std::string knots;

    rep.rows.push_back(detail::ratio_row(id++, 0, r, knots, fn_id, best.error, curve_f(span),
                                         lhs_zero_tol, "nr0"));

    for (int jstep = 0; jstep < 24; ++jstep) {
        double t = span * std::pow(2.0, -jstep / 3.0);
        double lhs = curve_g(t);
        double rhs = std::pow(t, k - 1) *
                     integral_power_piecewise(nodes_f, -static_cast<double>(k), t, 2.0 * span);
        rep.rows.push_back(detail::ratio_row(id++, 0, r, knots, fn_id, lhs, rhs, lhs_zero_tol,
                                             "nr:t=" + to_shortest(t)));
    }

    for (double factor : {1.0, 1.25, 1.5, 1.75, 2.0}) {
        double t = factor * span;
        rep.rows.push_back(detail::ratio_row(id++, 0, r, knots, fn_id, curve_g(t), curve_f(t),
                                             lhs_zero_tol, "nr1:t=" + to_shortest(t)));
    }
    rep.finalize(baseline);
    return rep;
}

enum class InterpVariant { whitney, pointwise, modulus_form, full_multiplicity };

inline InterpVariant parse_interp_variant(const std::string& s) {
    if (s == "whitney") return InterpVariant::whitney;
    if (s == "pointwise") return InterpVariant::pointwise;
    if (s == "modulus") return InterpVariant::modulus_form;
    if (s == "full") return InterpVariant::full_multiplicity;
    throw config_error("unknown interp variant '" + s + "'");
}

inline std::string interp_variant_name(InterpVariant v) {
    switch (v) {
        case InterpVariant::whitney: return "whitney";
        case InterpVariant::pointwise: return "pointwise";
        case InterpVariant::modulus_form: return "modulus";
        default: return "full";
    }
}

/// Z expanded to full multiplicity r+1 at every point.
inline KnotSet make_full_multiplicity(std::span<const double> Z, int r) {
    std::vector<double> expanded;
    for (double z : Z)
        for (int c = 0; c <= r; ++c) expanded.push_back(z);
    return KnotSet(std::span<const double>(expanded.data(), expanded.size()));
}

/// Separation ratio lambda = min_j (x_{j+r+1} - x_j) / |I|; throws naming the
/// first failing j when the knots coalesce beyond multiplicity r+1.
inline double interp_separation_lambda(const KnotSet& X, int r) {
    const int n = X.size();
    const double len = X.span();
    double lam = 1.0;
    for (int j = 0; j + r + 1 < n; ++j) {
        double gap = X.x(j + r + 1) - X.x(j);
        if (!(gap > 0.0))
            throw std::domain_error("interp: separation violated at j=" + std::to_string(j));
        lam = std::min(lam, gap / len);
    }
    return lam;
}

/// |f(x) - L_{m-1}(x; f; X)| at one point.
inline double interp_lhs(const KnotSet& X, const SmoothFunction& f, double x) {
    return std::abs(f.eval(x, 0) - eval_newton(newton_hermite(X, f), x));
}

struct InterpCheck {
    KnotSet X{0.0, 1.0};
    std::vector<double> Z; // distinct centers; required for the full variant
    SmoothFunction f;
    int r = 0;
    InterpVariant variant = InterpVariant::whitney;
    int xgrid = 257;
    int grid_x = 128;
    int grid_u = 48;
    double lhs_zero_tol = 1e-8;
    QuadratureSpec quad;
};

/// One knot configuration against a 257-point grid (plus knots and gap
/// midpoints); rhs per variant as in the interpolation theorems.
inline VerificationReport check_interp_error(const InterpCheck& chk, long trial_id = 0) {
    const KnotSet& X = chk.X;
    const int n = X.size();
    const int r = chk.r;
    if (n < r + 2) throw std::domain_error("interp: needs at least r+2 knots");
    if (chk.variant == InterpVariant::full_multiplicity && chk.Z.empty())
        throw std::domain_error("interp: full variant needs the distinct center list");
    const double lambda_sep = interp_separation_lambda(X, r);
    const Interval I = X.hull();
    const double len = I.length();
    const int k = n - r;

    SmoothFunction f = chk.f;
    MonomialPoly L = newton_hermite(X, f).to_monomial();
    auto curve = modulus_curve(f.view(r), k, I, chk.grid_x, chk.grid_u, 2.0 * len);
    const PiecewiseLinear& nodes = *curve.piecewise_nodes();

    std::vector<double> xs;
    for (int s = 0; s < chk.xgrid; ++s)
        xs.push_back(I.a + len * s / (chk.xgrid - 1));
    for (int d = 0; d < X.distinct_count(); ++d) {
        xs.push_back(X.distinct_value(d));
        if (d + 1 < X.distinct_count())
            xs.push_back(0.5 * (X.distinct_value(d) + X.distinct_value(d + 1)));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    VerificationReport rep;
    rep.check = "interp";
    rep.config = {{"variant", interp_variant_name(chk.variant)},
                  {"fn", f.id()},
                  {"m", n},
                  {"r", r},
                  {"lambda", lambda_sep},
                  {"knots", to_string(X)}};
    rep.rows.reserve(xs.size());

    for (double x : xs) {
        double lhs = std::abs(f.eval(x, 0) - L(x));
        double rhs = 0.0;
        switch (chk.variant) {
            case InterpVariant::whitney:
                rhs = detail::ipow(len, r) * curve(len);
                break;
            case InterpVariant::pointwise: {
                auto sigma = sigma_order(X, x);
                double sr = std::abs(x - X.x(sigma[static_cast<std::size_t>(r)]));
                if (sr > 0.0) {
                    double dr = capital_d(X, x, r);
                    rhs = dr * integral_power_piecewise(nodes, -2.0, sr, 2.0 * len);
                }
                break;
            }
            case InterpVariant::modulus_form: {
                auto sigma = sigma_order(X, x);
                double sr = std::abs(x - X.x(sigma[static_cast<std::size_t>(r)]));
                double omega_star = len * std::pow(sr / len, 1.0 / k);
                double dprev = r == 0 ? 1.0 : capital_d(X, x, r - 1);
                rhs = dprev * curve(omega_star);
                break;
            }
            case InterpVariant::full_multiplicity: {
                double s = dist_to_set(x, std::span<const double>(chk.Z));
                if (s > 0.0)
                    rhs = detail::ipow(s, r + 1) *
                          integral_power_piecewise(nodes, -2.0, s, 2.0 * len);
                break;
            }
        }
        rep.rows.push_back(detail::ratio_row(trial_id, n, r, to_string(X), f.id(), lhs, rhs,
                                             chk.lhs_zero_tol, "x=" + to_shortest(x)));
    }
    rep.finalize();
    return rep;
}

struct InterpSuiteConfig {
    InterpVariant variant = InterpVariant::whitney;
    int r = 0;
    long configs = 34;
    std::uint64_t seed = 1;
    double min_gap = 1e-3;
    std::vector<std::string> functions; // empty -> default_interp_pool(r)
    int xgrid = 257;
    int grid_x = 128;
    int grid_u = 48;
    int m_max = 8;
    double lhs_zero_tol = 1e-8;
    QuadratureSpec quad;
};

/// Randomized interpolation-error suite: `configs` knot draws, each checked
/// for every pool function over the full x grid.
inline VerificationReport check_interp_suite(const InterpSuiteConfig& cfg,
                                             std::optional<double> baseline = std::nullopt) {
    if (cfg.r < 0) throw config_error("interp: r >= 0 required");
    auto pool = detail::resolve_pool(cfg.functions, cfg.r, default_interp_pool(cfg.r));

    VerificationReport rep;
    rep.check = "interp";
    rep.config = {{"variant", interp_variant_name(cfg.variant)}, {"r", cfg.r},
                  {"configs", cfg.configs}, {"seed", cfg.seed},
                  {"min_gap", cfg.min_gap}, {"xgrid", cfg.xgrid},
                  {"grid_x", cfg.grid_x}, {"grid_u", cfg.grid_u}};
    rep.seed = cfg.seed;

    std::vector<std::vector<TrialRow>> blocks(static_cast<std::size_t>(cfg.configs));
    parallel_for(cfg.configs, [&](long i) {
        Rng rng = Rng::for_trial(cfg.seed, static_cast<std::uint64_t>(i));
        InterpCheck chk;
        chk.variant = cfg.variant;
        chk.r = cfg.r;
        chk.xgrid = cfg.xgrid;
        chk.grid_x = cfg.grid_x;
        chk.grid_u = cfg.grid_u;
        chk.lhs_zero_tol = cfg.lhs_zero_tol;
        chk.quad = cfg.quad;

        if (cfg.variant == InterpVariant::full_multiplicity) {
            int mu = 1 + static_cast<int>(rng.index(3));
            KnotSet Zset = sample_knotset(rng, mu + 1, 0, cfg.min_gap,
                                          MultiplicityPolicy::all_simple, KnotPreset::uniform);
            chk.Z = Zset.expanded_values();
            chk.X = make_full_multiplicity(std::span<const double>(chk.Z), cfg.r);
        } else {
            int m_lo = cfg.r + 2;
            int m_hi = std::max(cfg.m_max, m_lo);
            int m = m_lo + static_cast<int>(rng.index(
                               static_cast<std::uint64_t>(m_hi - m_lo + 1)));
            chk.X = sample_knotset(rng, m, cfg.r, cfg.min_gap, MultiplicityPolicy::random_le,
                                   KnotPreset::uniform);
        }

        auto& block = blocks[static_cast<std::size_t>(i)];
        for (const auto& f : pool) {
            chk.f = f;
            auto sub = check_interp_error(chk, i);
            for (auto& row : sub.rows) block.push_back(std::move(row));
        }
    });
    for (auto& block : blocks)
        for (auto& row : block) rep.rows.push_back(std::move(row));
    rep.finalize(baseline);
    return rep;
}

struct SuiteOutcome {
    std::vector<VerificationReport> reports;
    bool pass = true;
};

namespace detail {

inline std::string mr_key(int m, int r) {
    return "m=" + std::to_string(m) + ",r=" + std::to_string(r);
}

inline std::optional<double> baseline_for(const Baselines* b, const std::string& check,
                                          const std::string& key) {
    if (!b) return std::nullopt;
    return b->get(check, key);
}

} // namespace detail

/// Execute a suite document: { "checks": [ {"check": "main", ...}, ... ] }.
/// An empty check list is an empty, passing run.
inline SuiteOutcome run_suite(const nlohmann::json& suite, const Baselines* baselines = nullptr) {
    if (!suite.is_object()) throw config_error("suite: expected a JSON object");
    for (const auto& item : suite.items())
        if (item.key() != "checks")
            throw config_error("suite: unknown field '" + item.key() + "'");
    SuiteOutcome out;
    if (!suite.contains("checks")) return out;
    const auto& checks = suite.at("checks");
    if (!checks.is_array()) throw config_error("suite: 'checks' must be an array");

    for (const auto& entry : checks) {
        if (!entry.is_object() || !entry.contains("check"))
            throw config_error("suite: each entry needs a 'check' name");
        const std::string name = entry.at("check").get<std::string>();
        nlohmann::json body = entry;
        body.erase("check");

        if (name == "main" || name == "lemma_k1") {
            TrialConfig cfg = trial_config_from_json(body);
            auto base = detail::baseline_for(baselines, name, detail::mr_key(cfg.m, cfg.r));
            out.reports.push_back(name == "main" ? check_main_theorem(cfg, base)
                                                 : check_lemma_k1(cfg, base));
        } else if (name == "lemma3" || name == "lemma4") {
            TrialConfig cfg = trial_config_from_json(body, {"k"});
            if (body.contains("k")) {
                int k = body.at("k").get<int>();
                if (body.contains("m") && body.at("m").get<int>() != cfg.r + k)
                    throw config_error(name + ": inconsistent m and k");
                cfg.m = cfg.r + k;
            }
            if (name == "lemma3") {
                out.reports.push_back(check_lemma3_suite(cfg));
            } else {
                auto base = detail::baseline_for(baselines, "lemma4",
                                                 "k=" + std::to_string(cfg.m - cfg.r));
                out.reports.push_back(check_lemma4_suite(cfg, base));
            }
        } else if (name == "section4") {
            static const std::vector<std::string> known = {"fn",     "functions", "r",
                                                           "k",      "interval",  "grid_x",
                                                           "grid_u", "remez_grid"};
            for (const auto& item : body.items())
                if (std::find(known.begin(), known.end(), item.key()) == known.end())
                    throw config_error("section4: unknown field '" + item.key() + "'");
            std::vector<std::string> fns;
            if (body.contains("fn")) fns.push_back(body.at("fn").get<std::string>());
            if (body.contains("functions"))
                for (const auto& f : body.at("functions"))
                    fns.push_back(f.get<std::string>());
            if (fns.empty()) throw config_error("section4: needs 'fn' or 'functions'");
            int r = body.value("r", 0);
            int k = body.value("k", 2);
            Interval I(-1.0, 1.0);
            if (body.contains("interval")) {
                auto arr = body.at("interval");
                if (!arr.is_array() || arr.size() != 2)
                    throw config_error("section4: interval must be [a,b]");
                I = Interval(arr[0].get<double>(), arr[1].get<double>());
            }
            for (const auto& fn : fns) {
                std::string key = "fn=" + fn + ",r=" + std::to_string(r) +
                                  ",k=" + std::to_string(k);
                auto base = detail::baseline_for(baselines, "section4", key);
                out.reports.push_back(check_section4_chain(
                    fn, r, k, I, base, body.value("grid_x", 512), body.value("grid_u", 128),
                    body.value("remez_grid", 4096)));
            }
        } else if (name == "interp") {
            static const std::vector<std::string> known = {
                "variant", "r",      "configs", "seed", "min_gap",
                "functions", "xgrid", "grid_x",  "grid_u", "m_max"};
            for (const auto& item : body.items())
                if (std::find(known.begin(), known.end(), item.key()) == known.end())
                    throw config_error("interp: unknown field '" + item.key() + "'");
            InterpSuiteConfig cfg;
            cfg.variant = parse_interp_variant(body.value("variant", "whitney"));
            cfg.r = body.value("r", 0);
            cfg.configs = body.value("configs", 34L);
            cfg.seed = body.value("seed", std::uint64_t{1});
            cfg.min_gap = body.value("min_gap", 1e-3);
            if (body.contains("functions"))
                cfg.functions = body.at("functions").get<std::vector<std::string>>();
            cfg.xgrid = body.value("xgrid", 257);
            cfg.grid_x = body.value("grid_x", 128);
            cfg.grid_u = body.value("grid_u", 48);
            cfg.m_max = body.value("m_max", 8);
            std::string key = "variant=" + interp_variant_name(cfg.variant) +
                              ",r=" + std::to_string(cfg.r);
            auto base = detail::baseline_for(baselines, "interp", key);
            out.reports.push_back(check_interp_suite(cfg, base));
        } else {
            throw config_error("suite: unknown check '" + name + "'");
        }
    }
    for (const auto& rep : out.reports)
        if (!rep.pass) out.pass = false;
    return out;
}

} // namespace divlab
