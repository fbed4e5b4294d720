#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weft/collatz.hpp"
#include "weft/dyadic.hpp"
#include "weft/errors.hpp"
#include "weft/mealy.hpp"
#include "weft/specfile.hpp"
#include "weft/stream.hpp"
#include "weft/verify.hpp"

namespace weft::cli {

namespace cdetail {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw error("cannot open spec file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline CausalFn spec_function(const std::string& path) {
    SpecFile spec = parse_spec_file(slurp(path));
    if (!spec.function)
        throw parse_error("spec file \"" + path + "\" declares no function");
    return *spec.function;
}

inline std::string bits_of(const Stream& s, std::size_t depth) {
    return prefix(s, depth).str();
}

} // namespace cdetail

/// Dispatches one invocation. Returns 0 on verified/success, 1 on a falsified
/// claim or violated property, 2 on usage, parse, or budget problems
/// (including inconclusive checks, which refuse to certify either way).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"streams, causal functions, and 2-adic Collatz dynamics"};
    app.require_subcommand(1);
    std::string format = "human";
    app.add_option("--format", format, "output style: human or record")
        ->check(CLI::IsMember({"human", "record"}));
    bool record = false;

    // collatz trace / parity / unparity
    auto* collatz_cmd = app.add_subcommand("collatz", "integer trajectories and parity vectors");
    collatz_cmd->require_subcommand(1);
    auto* trace = collatz_cmd->add_subcommand("trace", "iterate C from an integer");
    std::string trace_n;
    std::size_t max_steps = 10000;
    trace->add_option("n", trace_n, "starting integer (>= 1)")->required();
    trace->add_option("--max-steps", max_steps, "step limit");
    auto* parity = collatz_cmd->add_subcommand("parity", "parity vector Q(x) prefix");
    std::string parity_x;
    std::size_t parity_depth = 16;
    parity->add_option("x", parity_x, "dyadic literal")->required();
    parity->add_option("--depth", parity_depth, "prefix length")->required();
    auto* unparity = collatz_cmd->add_subcommand("unparity", "invert a parity vector");
    std::string unparity_sigma;
    std::size_t unparity_depth = 64;
    unparity->add_option("sigma", unparity_sigma, "parity vector stream literal")->required();
    unparity->add_option("--depth", unparity_depth, "residue precision")->required();

    // stream distance
    auto* stream_cmd = app.add_subcommand("stream", "stream operations");
    stream_cmd->require_subcommand(1);
    auto* dist = stream_cmd->add_subcommand("distance", "ultrametric distance");
    std::string dist_s, dist_t;
    int dist_depth = -1;
    dist->add_option("sigma", dist_s, "stream literal")->required();
    dist->add_option("tau", dist_t, "stream literal")->required();
    dist->add_option("--depth", dist_depth, "inspection depth (omit for exact)");

    // check causal / bicausal
    auto* check_cmd = app.add_subcommand("check", "causality checks over a spec file");
    check_cmd->require_subcommand(1);
    auto* causal = check_cmd->add_subcommand("causal", "depth-bounded k-causality check");
    auto* bicausal = check_cmd->add_subcommand("bicausal", "bicausality check");
    std::string causal_spec, bicausal_spec;
    int causal_k = 0;
    int causal_depth = 12, bicausal_depth = 12;
    std::uint64_t seed = 0, budget = kDefaultBudget;
    causal->add_option("--spec", causal_spec, "spec file")->required();
    causal->add_option("--k", causal_k, "claimed index")->required();
    causal->add_option("--depth", causal_depth, "check depth")->required();
    causal->add_option("--seed", seed, "sampler seed");
    causal->add_option("--budget", budget, "enumeration budget");
    bicausal->add_option("--spec", bicausal_spec, "spec file")->required();
    bicausal->add_option("--depth", bicausal_depth, "check depth")->required();
    bicausal->add_option("--seed", seed, "sampler seed");
    bicausal->add_option("--budget", budget, "enumeration budget");

    // weave summary
    auto* weave_cmd = app.add_subcommand("weave", "woven-function certificate summary");
    std::string weave_spec;
    weave_cmd->add_option("--spec", weave_spec, "spec file")->required();

    // coinduce
    auto* coinduce_cmd = app.add_subcommand("coinduce", "run a finite coalgebra into streams");
    std::string coinduce_spec, coinduce_state;
    std::size_t coinduce_depth = 16;
    coinduce_cmd->add_option("--spec", coinduce_spec, "spec file")->required();
    coinduce_cmd->add_option("--state", coinduce_state, "start state")->required();
    coinduce_cmd->add_option("--depth", coinduce_depth, "prefix length")->required();

    // mealy behavior
    auto* mealy_cmd = app.add_subcommand("mealy", "Mealy machine operations");
    mealy_cmd->require_subcommand(1);
    auto* behavior = mealy_cmd->add_subcommand("behavior", "run a machine over an input stream");
    std::string mealy_spec, mealy_state, mealy_input;
    std::size_t mealy_depth = 16;
    behavior->add_option("--spec", mealy_spec, "spec file")->required();
    behavior->add_option("--state", mealy_state, "start state")->required();
    behavior->add_option("--input", mealy_input, "input stream literal")->required();
    behavior->add_option("--depth", mealy_depth, "output prefix length")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("weft");
    for (const std::string& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
        record = format == "record";

        if (trace->parsed()) {
            Trajectory t = trajectory(BigInt(trace_n), max_steps);
            if (record) {
                out << "start=" << t.start.str() << " reached_one=" << (t.reached_one ? "yes" : "no");
                if (t.stopping_index)
                    out << " stopping_index=" << *t.stopping_index;
                out << " orbit=";
                for (std::size_t i = 0; i < t.steps.size(); ++i)
                    out << (i ? "," : "") << t.steps[i].str();
                out << "\n";
            } else {
                for (std::size_t i = 0; i < t.steps.size(); ++i)
                    out << (i ? " -> " : "") << t.steps[i].str();
                out << "\n";
                if (t.reached_one)
                    out << "reached 1 at step " << *t.stopping_index << "\n";
                else
                    out << "did not reach 1 within " << max_steps << " steps\n";
            }
            return t.reached_one ? 0 : 1;
        }
        if (parity->parsed()) {
            Dyadic x = parse_dyadic(parity_x);
            std::string bits = cdetail::bits_of(parity_vector_q(x), parity_depth);
            if (record)
                out << "x=" << parity_x << " depth=" << parity_depth << " parity=" << bits << "\n";
            else
                out << bits << "\n";
            return 0;
        }
        if (unparity->parsed()) {
            EpStream sigma = parse_stream(unparity_sigma, Alphabet::binary());
            Dyadic x = inverse_q_exact(sigma);
            BigInt res = inverse_q_residue(sigma, unparity_depth);
            if (record)
                out << "sigma=" << format_stream(normalize(sigma)) << " depth=" << unparity_depth
                    << " value=" << format_dyadic(x) << " residue=" << res.str() << "\n";
            else
                out << format_dyadic(x) << "\n";
            return 0;
        }
        if (dist->parsed()) {
            // Digits 0–9 are accepted so every single-digit alphabet parses.
            Alphabet digits(10);
            EpStream s = parse_stream(dist_s, digits), t = parse_stream(dist_t, digits);
            DepthBoundedDistance d = dist_depth < 0
                                         ? distance_exact(s, t)
                                         : distance(s, t, std::size_t(dist_depth));
            if (record)
                out << "sigma=" << dist_s << " tau=" << dist_t << " distance=" << d.str() << "\n";
            else
                out << d.str() << "\n";
            return 0;
        }
        if (causal->parsed() || bicausal->parsed()) {
            bool is_causal = causal->parsed();
            CausalFn f = cdetail::spec_function(is_causal ? causal_spec : bicausal_spec);
            CheckOptions opts;
            opts.seed = seed;
            opts.budget = budget;
            CausalityReport rep =
                is_causal ? check_k_causal(f, causal_k, causal_depth, opts)
                          : check_bicausal(f, bicausal_depth, opts);
            if (record) {
                out << rep.record() << "\n";
            } else {
                if (rep.verified())
                    out << "verified: no violation at index " << rep.claimed_k << " to depth "
                        << rep.depth << " (" << (rep.exhaustive ? "exhaustive" : "sampled")
                        << ", " << rep.cases << " cases)\n";
                else if (rep.falsified())
                    out << "falsified: inputs " << rep.witness_sigma << " and " << rep.witness_tau
                        << " agree to " << rep.agree_len << " but the claim breaks at output index "
                        << rep.disagree_at << (rep.note.empty() ? "" : " (" + rep.note + ")")
                        << "\n";
                else
                    out << "inconclusive: " << rep.note << "\n";
            }
            if (!is_causal && rep.verified()) {
                out << (record ? "level_sizes=" : "level sizes checked: ");
                for (int j = 1; j <= bicausal_depth; ++j)
                    out << (j > 1 ? "," : "")
                        << word_count(f.domain(), std::size_t(j));
                out << "\n";
            }
            return rep.verified() ? 0 : rep.falsified() ? 1 : 2;
        }
        if (weave_cmd->parsed()) {
            CausalFn f = cdetail::spec_function(weave_spec);
            if (!f.woven_info())
                throw error("spec function is not a weave");
            const WovenInfo& info = *f.woven_info();
            std::string k = f.claim() ? std::to_string(f.claim()->k) : "(none)";
            std::string cert = f.claim() ? f.claim()->cert.str() : "(none)";
            if (record)
                out << "k=" << k << " members_causal=" << (info.members_causal ? "yes" : "no")
                    << " members_bicausal=" << (info.members_bicausal ? "yes" : "no") << " cert=\""
                    << cert << "\"\n";
            else
                out << "woven function: index claim k=" << k << "\n"
                    << "members certified 0-causal: " << (info.members_causal ? "yes" : "no")
                    << "\nmembers certified bicausal: " << (info.members_bicausal ? "yes" : "no")
                    << "\ncertificate: " << cert << "\n";
            return 0;
        }
        if (coinduce_cmd->parsed()) {
            SpecFile spec = parse_spec_file(cdetail::slurp(coinduce_spec));
            if (!spec.coalgebra)
                throw parse_error("spec file declares no coalgebra block");
            const FiniteCoalgebra& fc = *spec.coalgebra;
            StreamCoalgebra<std::size_t> c = fc.coalgebra();
            std::size_t x = fc.state_index(coinduce_state);
            Stream phi = coinduce(c, x);
            std::string bits = cdetail::bits_of(phi, coinduce_depth);
            bool head_ok = head(coinduce(c, x)) == c.observe(x);
            bool tail_ok = coinduce_depth == 0 ||
                           prefix_equiv(tail(coinduce(c, x)), coinduce(c, c.step(x)),
                                        coinduce_depth - 1);
            if (record)
                out << "state=" << coinduce_state << " prefix=" << bits
                    << " head_ok=" << (head_ok ? "yes" : "no")
                    << " tail_ok=" << (tail_ok ? "yes" : "no") << "\n";
            else
                out << "phi(" << coinduce_state << ") prefix: " << bits << "\n"
                    << "finality square: head " << (head_ok ? "ok" : "VIOLATED") << ", tail "
                    << (tail_ok ? "ok" : "VIOLATED") << "\n";
            return head_ok && tail_ok ? 0 : 1;
        }
        if (behavior->parsed()) {
            SpecFile spec = parse_spec_file(cdetail::slurp(mealy_spec));
            if (!spec.mealy)
                throw parse_error("spec file declares no mealy block");
            const MealyMachine& m = *spec.mealy;
            CausalFn f = mealy_behavior(m, m.state_index(mealy_state));
            EpStream input = parse_stream(mealy_input, m.input());
            std::string bits = cdetail::bits_of(f(input), mealy_depth);
            if (record)
                out << "state=" << mealy_state << " input=" << mealy_input << " output=" << bits
                    << "\n";
            else
                out << bits << "\n";
            return 0;
        }
        err << "error: no subcommand dispatched\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace weft::cli
