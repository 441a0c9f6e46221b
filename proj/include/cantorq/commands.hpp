#ifndef CANTORQ_COMMANDS_HPP
#define CANTORQ_COMMANDS_HPP

#include "cantorq/codebook.hpp"
#include "cantorq/distortion.hpp"
#include "cantorq/engine.hpp"
#include "cantorq/json_io.hpp"
#include "cantorq/oracle.hpp"
#include "cantorq/rational.hpp"
#include "cantorq/word_measure.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cantorq::cli {

enum class Format { text, json, csv, dot };

enum ExitCode : int { kOk = 0, kInputError = 2, kInvariantViolation = 3, kResourceLimit = 4 };

struct Options {
    Format format = Format::text;
    std::size_t enumerate_limit = kDefaultEnumerationLimit;
    Rational gap{1, 1000000000000LL};
    unsigned depth = kMaxExactDepth;
    OracleMode mode = OracleMode::exact;
    std::optional<std::uint64_t> n;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> range;
    std::optional<std::uint64_t> from;
    std::optional<std::uint64_t> to;
    std::string codebook_file;
    /// Non-standard system for the heuristic oracle, as p1, r1, r2.
    std::optional<Ifs> ifs;
};

struct Output {
    std::string out;
    std::string err;
    int exit_code = kOk;
};

/// "a..b" with 1 <= a <= b.
inline std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    auto bad = [&] { return std::invalid_argument("malformed range '" + text + "', expected A..B"); };
    if (dots == std::string::npos) throw bad();
    auto num = [&](const std::string& s) {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw bad();
        return std::stoull(s);
    };
    const std::uint64_t a = num(text.substr(0, dots));
    const std::uint64_t b = num(text.substr(dots + 2));
    if (a < 1 || a > b) throw bad();
    return {a, b};
}

inline Format parse_format(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "dot") return Format::dot;
    throw std::invalid_argument("unknown format '" + s + "'");
}

inline const char* format_name(Format f) {
    switch (f) {
        case Format::text: return "text";
        case Format::json: return "json";
        case Format::csv: return "csv";
        case Format::dot: return "dot";
    }
    return "text";
}

/// "p1,r1,r2" for the heuristic oracle.
inline Ifs parse_ifs(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3) throw std::invalid_argument("--ifs expects p1,r1,r2");
    Ifs ifs{parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2])};
    ifs.validate();
    return ifs;
}

namespace detail {

inline std::string approx(const Rational& q) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", to_double(q));
    return buf;
}

inline std::string approx(long double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.18Lg", v);
    return buf;
}

inline std::string exact_and_approx(const Rational& q) { return to_string(q) + " (" + approx(q) + ")"; }

inline std::string csv_pair(const Rational& q) { return to_string(q) + "," + approx(q); }

inline std::string join_words(const WordSet& words, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) s += sep;
        s += words[i].str();
    }
    return s;
}

inline Json envelope(const std::string& command, Json parameters, Json results, bool exact = true) {
    Json j;
    j["command"] = command;
    j["parameters"] = std::move(parameters);
    j["results"] = std::move(results);
    j["exact"] = exact;
    return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void reject_dot(const Options& o, const char* command) {
    if (o.format == Format::dot) throw std::invalid_argument(std::string("--format dot is only valid for genealogy, not ") + command);
}

inline std::vector<std::uint64_t> stages(const Options& o, const char* command) {
    if (o.n && o.range) throw std::invalid_argument(std::string(command) + ": give --n or --range, not both");
    if (o.n) {
        if (*o.n < 1) throw std::invalid_argument("n must be at least 1");
        return {*o.n};
    }
    if (o.range) {
        std::vector<std::uint64_t> out;
        for (std::uint64_t k = o.range->first; k <= o.range->second; ++k) out.push_back(k);
        return out;
    }
    throw std::invalid_argument(std::string(command) + ": --n or --range is required");
}

/// alpha_{n,i} with i 1-based; a stage holding a single set drops the index.
inline std::string set_label(std::uint64_t n, std::size_t index, std::size_t stage_size) {
    if (stage_size == 1) return "α_{" + std::to_string(n) + "}";
    return "α_{" + std::to_string(n) + "," + std::to_string(index + 1) + "}";
}

inline std::string node_id(std::uint64_t n, std::size_t index) {
    return "a" + std::to_string(n) + "_" + std::to_string(index + 1);
}

}  // namespace detail

inline Output cmd_moments(const Options& o) {
    detail::reject_dot(o, "moments");
    const Moments& m = moments();
    Output r;
    switch (o.format) {
        case Format::json: {
            Json res;
            res["mean"] = rational_to_json(m.mean);
            res["variance"] = rational_to_json(m.variance);
            res["second_moment"] = rational_to_json(m.second_moment);
            r.out = detail::dump(detail::envelope("moments", Json::object(), std::move(res)));
            break;
        }
        case Format::csv:
            r.out = "mean,mean_approx,variance,variance_approx,second_moment,second_moment_approx\n" +
                    detail::csv_pair(m.mean) + "," + detail::csv_pair(m.variance) + "," +
                    detail::csv_pair(m.second_moment) + "\n";
            break;
        default:
            r.out = "mean           " + detail::exact_and_approx(m.mean) + "\n" +
                    "variance       " + detail::exact_and_approx(m.variance) + "\n" +
                    "second moment  " + detail::exact_and_approx(m.second_moment) + "\n";
    }
    return r;
}

inline Json stage_parameters(const Options& o) {
    Json p;
    if (o.n) p["n"] = *o.n;
    if (o.range) p["range"] = std::to_string(o.range->first) + ".." + std::to_string(o.range->second);
    return p;
}

inline Output cmd_vn(const Options& o) {
    detail::reject_dot(o, "vn");
    const auto ns = detail::stages(o, "vn");
    Output r;
    if (o.format == Format::json) {
        Json values = Json::array();
        for (auto n : ns) {
            Json row;
            row["n"] = n;
            row["error"] = rational_to_json(optimal_error(n));
            values.push_back(std::move(row));
        }
        Json res;
        res["values"] = std::move(values);
        r.out = detail::dump(detail::envelope("vn", stage_parameters(o), std::move(res)));
    } else if (o.format == Format::csv) {
        r.out = "n,error,error_approx\n";
        for (auto n : ns) r.out += std::to_string(n) + "," + detail::csv_pair(optimal_error(n)) + "\n";
    } else {
        for (auto n : ns) r.out += "V_" + std::to_string(n) + " = " + detail::exact_and_approx(optimal_error(n)) + "\n";
    }
    return r;
}

inline Output cmd_sets(const Options& o) {
    detail::reject_dot(o, "sets");
    if (!o.n) throw std::invalid_argument("sets: --n is required");
    const std::uint64_t n = *o.n;
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    const WordSet canon = canonical_optimal_words(n);
    const Codebook cb = codebook_from_words(canon);
    const Rational err = distortion_of_words(canon);
    const OptimalSetFamily fam = enumerate_optimal_sets(n, o.enumerate_limit);
    Output r;
    if (o.format == Format::json) {
        Json params;
        params["n"] = n;
        params["enumerate_limit"] = o.enumerate_limit;
        Json res;
        res["n"] = n;
        res["count"] = bigint_to_json(fam.count);
        res["error"] = rational_to_json(err);
        Json canonical;
        canonical["words"] = words_to_json(canon);
        canonical["codebook"] = points_to_json(cb.points());
        res["canonical"] = std::move(canonical);
        res["enumerated"] = fam.sets.has_value();
        if (fam.sets) {
            Json sets = Json::array();
            for (const WordSet& s : *fam.sets) sets.push_back(words_to_json(s));
            res["sets"] = std::move(sets);
        }
        r.out = detail::dump(detail::envelope("sets", std::move(params), std::move(res)));
    } else if (o.format == Format::csv) {
        r.out = "set,word,point,point_approx\n";
        const std::vector<WordSet> all = fam.sets ? *fam.sets : std::vector<WordSet>{canon};
        for (std::size_t i = 0; i < all.size(); ++i) {
            std::vector<std::pair<Rational, Word>> pts;
            for (const Word& w : all[i]) pts.emplace_back(centroid(w), w);
            std::sort(pts.begin(), pts.end());
            for (const auto& [p, w] : pts) r.out += std::to_string(i + 1) + "," + w.str() + "," + detail::csv_pair(p) + "\n";
        }
    } else {
        r.out = "n = " + std::to_string(n) + "\n";
        r.out += "V_n = " + detail::exact_and_approx(err) + "\n";
        r.out += "number of optimal sets = " + fam.count.str() + "\n";
        r.out += "canonical words: " + detail::join_words(canon) + "\n";
        r.out += "canonical codebook:";
        for (const Rational& p : cb.points()) r.out += " " + to_string(p);
        r.out += "\n";
        if (fam.sets) {
            for (std::size_t i = 0; i < fam.sets->size(); ++i)
                r.out += detail::set_label(n, i, fam.sets->size()) + " = {" + detail::join_words((*fam.sets)[i], ", ") + "}\n";
        } else {
            r.out += "(enumeration skipped: count exceeds --enumerate-limit " + std::to_string(o.enumerate_limit) + ")\n";
        }
    }
    return r;
}

inline Output cmd_count(const Options& o) {
    detail::reject_dot(o, "count");
    const auto ns = detail::stages(o, "count");
    Output r;
    if (o.format == Format::json) {
        Json counts = Json::array();
        for (auto n : ns) {
            Json row;
            row["n"] = n;
            row["count"] = bigint_to_json(count_optimal_sets(n));
            counts.push_back(std::move(row));
        }
        Json res;
        res["counts"] = std::move(counts);
        r.out = detail::dump(detail::envelope("count", stage_parameters(o), std::move(res)));
    } else if (o.format == Format::csv) {
        r.out = "n,count\n";
        for (auto n : ns) r.out += std::to_string(n) + "," + count_optimal_sets(n).str() + "\n";
    } else {
        for (auto n : ns) r.out += "card(C_" + std::to_string(n) + ") = " + count_optimal_sets(n).str() + "\n";
    }
    return r;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read codebook file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Output render_estimate(const Options& o, const Codebook& cb, const DistortionEstimate& est, bool partial) {
    Output r;
    if (o.format == Format::json) {
        Json params;
        params["codebook_file"] = o.codebook_file;
        params["gap"] = rational_to_json(o.gap);
        Json res;
        res["codebook"] = points_to_json(cb.points());
        res["lower"] = rational_to_json(est.lower);
        res["upper"] = rational_to_json(est.upper);
        res["width"] = rational_to_json(est.upper - est.lower);
        res["cylinders_expanded"] = est.cylinders_expanded;
        res["closed_form"] = est.exact();
        res["converged"] = !partial;
        r.out = detail::dump(detail::envelope("evaluate", std::move(params), std::move(res)));
    } else if (o.format == Format::csv) {
        r.out = "lower,lower_approx,upper,upper_approx,cylinders_expanded\n" + detail::csv_pair(est.lower) + "," +
                detail::csv_pair(est.upper) + "," + std::to_string(est.cylinders_expanded) + "\n";
    } else {
        r.out = "codebook:";
        for (const Rational& p : cb.points()) r.out += " " + to_string(p);
        r.out += "\n";
        if (est.exact()) {
            r.out += "distortion = " + detail::exact_and_approx(est.lower) + " (exact)\n";
        } else {
            r.out += "lower = " + detail::exact_and_approx(est.lower) + "\n";
            r.out += "upper = " + detail::exact_and_approx(est.upper) + "\n";
        }
        r.out += "cylinders expanded = " + std::to_string(est.cylinders_expanded) + "\n";
    }
    return r;
}

inline Output cmd_evaluate(const Options& o, const std::string& codebook_text) {
    detail::reject_dot(o, "evaluate");
    if (o.gap <= 0) throw std::invalid_argument("--gap must be positive");
    const Codebook cb = parse_codebook(codebook_text);
    try {
        return render_estimate(o, cb, evaluate_codebook(cb, o.gap), false);
    } catch (const BudgetExhausted& e) {
        Output r = render_estimate(o, cb, e.partial(), true);
        r.err = std::string("error: ") + e.what() + "\n";
        r.exit_code = kResourceLimit;
        return r;
    }
}

inline Output cmd_evaluate(const Options& o) {
    if (o.codebook_file.empty()) throw std::invalid_argument("evaluate: a codebook file is required");
    return cmd_evaluate(o, read_file(o.codebook_file));
}

inline Output cmd_genealogy(const Options& o) {
    if (!o.from || !o.to) throw std::invalid_argument("genealogy: --from and --to are required");
    const GenealogyGraph g = genealogy(*o.from, *o.to, o.enumerate_limit);
    Output r;
    auto label = [&](std::uint64_t n, std::size_t i) { return detail::set_label(n, i, g.stages.at(n).size()); };
    if (o.format == Format::dot) {
        r.out = "digraph genealogy {\n  rankdir=LR;\n  node [shape=box];\n";
        for (const auto& [n, sets] : g.stages)
            for (std::size_t i = 0; i < sets.size(); ++i)
                r.out += "  " + detail::node_id(n, i) + " [label=\"" + label(n, i) + "\", tooltip=\"" +
                         detail::join_words(sets[i]) + "\"];\n";
        for (const GenealogyEdge& e : g.edges)
            r.out += "  " + detail::node_id(e.stage, e.parent) + " -> " + detail::node_id(e.stage + 1, e.child) +
                     " [label=\"" + e.split.str() + "\"];\n";
        r.out += "}\n";
    } else if (o.format == Format::json) {
        Json params;
        params["from"] = *o.from;
        params["to"] = *o.to;
        params["enumerate_limit"] = o.enumerate_limit;
        Json stages = Json::array();
        for (const auto& [n, sets] : g.stages) {
            Json st;
            st["n"] = n;
            Json arr = Json::array();
            for (std::size_t i = 0; i < sets.size(); ++i) {
                Json s;
                s["id"] = detail::node_id(n, i);
                s["label"] = label(n, i);
                s["words"] = words_to_json(sets[i]);
                arr.push_back(std::move(s));
            }
            st["sets"] = std::move(arr);
            stages.push_back(std::move(st));
        }
        Json edges = Json::array();
        for (const GenealogyEdge& e : g.edges) {
            Json ej;
            ej["from"] = detail::node_id(e.stage, e.parent);
            ej["to"] = detail::node_id(e.stage + 1, e.child);
            ej["split"] = e.split.str();
            edges.push_back(std::move(ej));
        }
        Json res;
        res["stages"] = std::move(stages);
        res["edges"] = std::move(edges);
        r.out = detail::dump(detail::envelope("genealogy", std::move(params), std::move(res)));
    } else if (o.format == Format::csv) {
        r.out = "from,to,split\n";
        for (const GenealogyEdge& e : g.edges)
            r.out += label(e.stage, e.parent) + "," + label(e.stage + 1, e.child) + "," + e.split.str() + "\n";
    } else {
        for (const auto& [n, sets] : g.stages)
            for (std::size_t i = 0; i < sets.size(); ++i)
                r.out += label(n, i) + " = {" + detail::join_words(sets[i], ", ") + "}\n";
        for (const GenealogyEdge& e : g.edges)
            r.out += label(e.stage, e.parent) + " -> " + label(e.stage + 1, e.child) + "  (split " + e.split.str() + ")\n";
    }
    return r;
}

inline Output render_heuristic(const Options& o, const HeuristicResult& h) {
    Output r;
    if (o.format == Format::json) {
        Json params;
        params["n"] = h.n;
        params["depth"] = h.depth;
        params["p1"] = rational_to_json(h.ifs.p1);
        params["r1"] = rational_to_json(h.ifs.r1);
        params["r2"] = rational_to_json(h.ifs.r2);
        Json res;
        res["label"] = "HEURISTIC";
        res["greedy_words"] = words_to_json(h.greedy_words);
        res["greedy_error"] = rational_to_json(h.greedy_error);
        res["discrete_error"] = rational_to_json(h.discrete_error);
        res["discrete_codebook"] = points_to_json(h.discrete_codebook);
        res["bound"] = rational_to_json(h.bound);
        r.out = detail::dump(detail::envelope("oracle", std::move(params), std::move(res)));
    } else if (o.format == Format::csv) {
        r.out = "label,n,depth,greedy_error,greedy_error_approx,discrete_error,discrete_error_approx,bound,bound_approx\n";
        r.out += "HEURISTIC," + std::to_string(h.n) + "," + std::to_string(h.depth) + "," + detail::csv_pair(h.greedy_error) +
                 "," + detail::csv_pair(h.discrete_error) + "," + detail::csv_pair(h.bound) + "\n";
    } else {
        r.out = "HEURISTIC: non-standard system; the greedy error is not a certified optimum\n";
        r.out += "greedy words   " + detail::join_words(h.greedy_words) + "\n";
        r.out += "greedy error   " + detail::exact_and_approx(h.greedy_error) + "\n";
        r.out += "discrete error " + detail::exact_and_approx(h.discrete_error) + "\n";
        r.out += "bound          " + detail::exact_and_approx(h.bound) + "\n";
    }
    return r;
}

inline Output cmd_oracle(const Options& o) {
    detail::reject_dot(o, "oracle");
    if (!o.n) throw std::invalid_argument("oracle: --n is required");
    if (o.depth < 1 || o.depth > kMaxDepth) throw std::out_of_range("--depth must be in [1, 16]");
    if (*o.n < 1 || *o.n > (std::uint64_t{1} << o.depth)) throw std::invalid_argument("oracle: need 1 <= n <= 2^depth");
    if (o.ifs && !o.ifs->is_standard()) return render_heuristic(o, heuristic_check(*o.ifs, *o.n, o.depth));

    const OracleResult res = oracle_check(*o.n, o.depth, o.mode);
    const bool exact = o.mode == OracleMode::exact;
    Output r;
    if (o.format == Format::json) {
        Json params;
        params["n"] = *o.n;
        params["depth"] = o.depth;
        params["mode"] = exact ? "exact" : "fast";
        Json j;
        j["status"] = res.passed() ? "PASS" : "FAIL";
        if (exact) {
            j["discrete_error"] = rational_to_json(*res.discrete_error);
            j["codebook"] = points_to_json(res.codebook);
            j["engine_minus_discrete"] = rational_to_json(res.engine_error - *res.discrete_error);
        } else {
            j["discrete_error_approx"] = detail::approx(res.discrete_error_approx);
            Json cb = Json::array();
            for (long double c : res.codebook_approx) cb.push_back(detail::approx(c));
            j["codebook_approx"] = std::move(cb);
            j["tolerance"] = detail::approx(res.tolerance);
        }
        j["engine_error"] = rational_to_json(res.engine_error);
        j["bound"] = rational_to_json(res.bound);
        j["bracket_ok"] = res.bracket_ok;
        j["cells_match"] = res.cells_match;
        j["engine_words"] = res.engine_words;
        j["diagnostics"] = res.diagnostics;
        r.out = detail::dump(detail::envelope("oracle", std::move(params), std::move(j), exact));
    } else if (o.format == Format::csv) {
        r.out = "n,depth,mode,status,discrete_error,discrete_error_approx,engine_error,engine_error_approx,bound,bound_approx\n";
        r.out += std::to_string(res.n) + "," + std::to_string(res.depth) + "," + (exact ? "exact," : "fast,") +
                 (res.passed() ? "PASS," : "FAIL,") + (exact ? to_string(*res.discrete_error) : std::string("")) + "," +
                 detail::approx(res.discrete_error_approx) + "," + detail::csv_pair(res.engine_error) + "," +
                 detail::csv_pair(res.bound) + "\n";
    } else {
        r.out = std::string(res.passed() ? "PASS" : "FAIL") + "  n=" + std::to_string(res.n) +
                " depth=" + std::to_string(res.depth) + (exact ? " (exact)" : " (fast)") + "\n";
        if (exact) r.out += "discrete error      " + detail::exact_and_approx(*res.discrete_error) + "\n";
        else r.out += "discrete error      " + detail::approx(res.discrete_error_approx) + " +/- " + detail::approx(res.tolerance) + "\n";
        r.out += "engine V_n          " + detail::exact_and_approx(res.engine_error) + "\n";
        if (exact) r.out += "V_n - discrete      " + detail::exact_and_approx(res.engine_error - *res.discrete_error) + "\n";
        r.out += "bound               " + detail::exact_and_approx(res.bound) + "\n";
        r.out += "codebook:";
        if (exact) for (const Rational& c : res.codebook) r.out += " " + to_string(c);
        else for (long double c : res.codebook_approx) r.out += " " + detail::approx(c);
        r.out += "\n";
        if (!res.engine_words.empty()) {
            r.out += "cells:";
            for (const auto& w : res.engine_words) r.out += " " + w;
            r.out += "\n";
        }
        for (const auto& d : res.diagnostics) r.out += "diagnostic: " + d + "\n";
    }
    if (!res.passed()) {
        r.exit_code = kInvariantViolation;
        for (const auto& d : res.diagnostics) r.err += "oracle violation: " + d + "\n";
    }
    return r;
}

/// Runs a subcommand, mapping exceptions onto exit codes.
inline Output run(const std::string& command, const Options& o) {
    try {
        if (command == "moments") return cmd_moments(o);
        if (command == "vn") return cmd_vn(o);
        if (command == "sets") return cmd_sets(o);
        if (command == "count") return cmd_count(o);
        if (command == "evaluate") return cmd_evaluate(o);
        if (command == "genealogy") return cmd_genealogy(o);
        if (command == "oracle") return cmd_oracle(o);
        return {"", "error: unknown command '" + command + "'\n", kInputError};
    } catch (const EnumerationLimitExceeded& e) {
        return {"", std::string("error: ") + e.what() + "\n", kResourceLimit};
    } catch (const BudgetExhausted& e) {
        return {"", std::string("error: ") + e.what() + "\n", kResourceLimit};
    } catch (const InvariantViolation& e) {
        return {"", std::string("invariant violation: ") + e.what() + "\n", kInvariantViolation};
    } catch (const std::invalid_argument& e) {
        return {"", std::string("error: ") + e.what() + "\n", kInputError};
    } catch (const std::out_of_range& e) {
        return {"", std::string("error: ") + e.what() + "\n", kInputError};
    } catch (const std::length_error& e) {
        return {"", std::string("error: ") + e.what() + "\n", kResourceLimit};
    }
}

}  // namespace cantorq::cli

#endif  // CANTORQ_COMMANDS_HPP
