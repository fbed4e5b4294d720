#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/coalgebra.hpp"
#include "weft/collatz.hpp"
#include "weft/dyadic.hpp"
#include "weft/errors.hpp"
#include "weft/mealy.hpp"
#include "weft/verify.hpp"
#include "weft/woven.hpp"

namespace weft {

/// A finite-carrier stream coalgebra read from a spec file: states are
/// indices, observation and step are dense tables.
struct FiniteCoalgebra {
    std::vector<std::string> states;
    Alphabet output = Alphabet::binary();
    std::vector<Symbol> observe;
    std::vector<std::size_t> step;

    std::size_t state_index(const std::string& name) const {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == name)
                return i;
        throw error("unknown state \"" + name + "\"");
    }

    StreamCoalgebra<std::size_t> coalgebra() const {
        return StreamCoalgebra<std::size_t>{
            output, [obs = observe](const std::size_t& x) { return obs.at(x); },
            [st = step](const std::size_t& x) { return st.at(x); }};
    }
};

struct SpecFile {
    Alphabet alphabet = Alphabet::binary();
    std::optional<CausalFn> function;
    std::optional<MealyMachine> mealy;
    std::optional<FiniteCoalgebra> coalgebra;
};

namespace specdetail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] inline void fail(std::size_t line, const std::string& what) {
    throw parse_error("line " + std::to_string(line) + ": " + what);
}

// splits "a, b, c" at top-level commas (parentheses nest)
inline std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(')
            ++depth;
        if (c == ')')
            --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !parts.empty())
        parts.push_back(trim(cur));
    return parts;
}

inline CausalFn parse_function_expr(const std::string& text, const Alphabet& alphabet,
                                    std::size_t line) {
    std::string expr = trim(text);
    if (expr.empty())
        fail(line, "empty function expression");
    std::size_t open = expr.find('(');
    std::string name = open == std::string::npos ? expr : trim(expr.substr(0, open));
    std::vector<std::string> args;
    if (open != std::string::npos) {
        if (expr.back() != ')')
            fail(line, "unbalanced parentheses in \"" + expr + "\"");
        args = split_args(expr.substr(open + 1, expr.size() - open - 2));
    }
    auto want_args = [&](std::size_t n) {
        if (args.size() != n)
            fail(line, "\"" + name + "\" takes " + std::to_string(n) + " argument(s), got " +
                           std::to_string(args.size()));
    };
    auto want_binary = [&]() {
        if (alphabet.size() != 2)
            fail(line, "\"" + name + "\" works on the binary alphabet (spec says alphabet " +
                           std::to_string(alphabet.size()) + ")");
    };
    if (name == "identity") {
        want_args(0);
        return identity_fn(alphabet);
    }
    if (name == "tail") {
        want_args(0);
        return tail_fn(alphabet);
    }
    if (name == "prepend") {
        want_args(1);
        try {
            return prepend_fn(detail::parse_word(args[0], alphabet, args[0]));
        } catch (const parse_error& e) {
            fail(line, e.what());
        }
    }
    if (name == "affine") {
        want_args(2);
        want_binary();
        try {
            return affine_fn(parse_dyadic(args[0]), parse_dyadic(args[1]));
        } catch (const error& e) {
            fail(line, e.what());
        }
    }
    if (name == "collatz-t") {
        want_args(0);
        want_binary();
        return collatz_t_fn();
    }
    if (name == "q") {
        want_args(0);
        want_binary();
        return q_fn();
    }
    if (name == "q-inverse") {
        want_binary();
        std::size_t depth = 14;
        if (args.size() == 1) {
            try {
                depth = std::size_t(std::stoul(args[0]));
            } catch (...) {
                fail(line, "bad depth \"" + args[0] + "\"");
            }
        } else if (!args.empty()) {
            fail(line, "\"q-inverse\" takes at most one argument");
        }
        return invert_bicausal(q_fn(), int(depth));
    }
    if (name == "compose") {
        want_args(2);
        CausalFn f = parse_function_expr(args[0], alphabet, line);
        CausalFn g = parse_function_expr(args[1], alphabet, line);
        return compose(f, g);
    }
    if (name == "weave") {
        if (args.size() != std::size_t(alphabet.size()))
            fail(line, "weave needs one member per symbol (" + std::to_string(alphabet.size()) +
                           "), got " + std::to_string(args.size()));
        std::vector<CausalFn> members;
        for (const std::string& arg : args)
            members.push_back(parse_function_expr(arg, alphabet, line));
        return weave(FunctionFamily(alphabet, std::move(members)));
    }
    fail(line, "unknown function \"" + name + "\"");
}

} // namespace specdetail

/// Structured text with sections `alphabet N`, `function EXPR`, and
/// `mealy`/`coalgebra` blocks closed by `end`. `#` starts a comment.
inline SpecFile parse_spec_file(const std::string& text) {
    using specdetail::fail;
    using specdetail::trim;
    SpecFile spec;
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            std::size_t hash = line.find('#');
            if (hash != std::string::npos)
                line = line.substr(0, hash);
            lines.push_back(line);
        }
    }
    std::string pending_function;
    std::size_t pending_function_line = 0;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        std::size_t lineno = i + 1;
        if (line.empty())
            continue;
        std::istringstream words(line);
        std::string keyword;
        words >> keyword;

        if (keyword == "alphabet") {
            int n = 0;
            if (!(words >> n) || n < 1)
                fail(lineno, "alphabet needs a positive size");
            spec.alphabet = Alphabet(n);
        } else if (keyword == "function") {
            // defer until the alphabet is final
            pending_function = trim(line.substr(std::string("function").size()));
            pending_function_line = lineno;
        } else if (keyword == "mealy") {
            std::vector<std::string> names;
            Alphabet in_alpha = Alphabet::binary(), out_alpha = Alphabet::binary();
            std::optional<std::string> initial;
            std::vector<std::tuple<std::string, Symbol, Symbol, std::string, std::size_t>> rows;
            ++i;
            for (; i < lines.size(); ++i) {
                std::string row = trim(lines[i]);
                std::size_t rowno = i + 1;
                if (row.empty())
                    continue;
                if (row == "end")
                    break;
                std::istringstream rw(row);
                std::string kw;
                rw >> kw;
                if (kw == "states") {
                    std::string s;
                    while (rw >> s)
                        names.push_back(s);
                } else if (kw == "inputs") {
                    int n;
                    if (!(rw >> n) || n < 1)
                        fail(rowno, "inputs needs a positive size");
                    in_alpha = Alphabet(n);
                } else if (kw == "outputs") {
                    int n;
                    if (!(rw >> n) || n < 1)
                        fail(rowno, "outputs needs a positive size");
                    out_alpha = Alphabet(n);
                } else if (kw == "initial") {
                    std::string s;
                    if (!(rw >> s))
                        fail(rowno, "initial needs a state name");
                    initial = s;
                } else if (kw[0] == '(') {
                    // (state, in) -> (out, state)
                    std::string flat;
                    for (char c : row)
                        if (c != ' ' && c != '\t')
                            flat += c;
                    std::size_t arrow = flat.find(")->(");
                    if (flat.front() != '(' || flat.back() != ')' || arrow == std::string::npos)
                        fail(rowno, "transition row must look like (state, in) -> (out, state)");
                    std::string lhs = flat.substr(1, arrow - 1);
                    std::string rhs = flat.substr(arrow + 4, flat.size() - arrow - 5);
                    std::size_t c1 = lhs.find(','), c2 = rhs.find(',');
                    if (c1 == std::string::npos || c2 == std::string::npos)
                        fail(rowno, "transition row must look like (state, in) -> (out, state)");
                    try {
                        rows.emplace_back(lhs.substr(0, c1), Symbol(std::stoi(lhs.substr(c1 + 1))),
                                          Symbol(std::stoi(rhs.substr(0, c2))),
                                          rhs.substr(c2 + 1), rowno);
                    } catch (...) {
                        fail(rowno, "bad symbol in transition row");
                    }
                } else {
                    fail(rowno, "unknown mealy row \"" + row + "\"");
                }
            }
            if (i >= lines.size())
                fail(lines.size(), "mealy block never closed with \"end\"");
            if (names.empty())
                fail(lineno, "mealy block needs states");
            auto index_of = [&](const std::string& s, std::size_t rowno) {
                for (std::size_t j = 0; j < names.size(); ++j)
                    if (names[j] == s)
                        return j;
                fail(rowno, "unknown state \"" + s + "\"");
            };
            std::vector<MealyMachine::Arrow> arrows(names.size() * std::size_t(in_alpha.size()),
                                                    MealyMachine::Arrow{-1, 0});
            for (auto& [from, in_sym, out_sym, to, rowno] : rows) {
                if (!in_alpha.contains(in_sym))
                    fail(rowno, "input symbol out of range");
                if (!out_alpha.contains(out_sym))
                    fail(rowno, "output symbol out of range");
                arrows[index_of(from, rowno) * std::size_t(in_alpha.size()) +
                       std::size_t(in_sym)] = {out_sym, index_of(to, rowno)};
            }
            for (std::size_t j = 0; j < arrows.size(); ++j)
                if (arrows[j].out < 0)
                    fail(lineno, "transition table is not total: missing row for (" +
                                     names[j / std::size_t(in_alpha.size())] + ", " +
                                     std::to_string(j % std::size_t(in_alpha.size())) + ")");
            if (!initial)
                fail(lineno, "mealy block needs an initial state");
            std::size_t init = index_of(*initial, lineno);
            spec.mealy = MealyMachine(names, in_alpha, out_alpha, std::move(arrows), init);
        } else if (keyword == "coalgebra") {
            FiniteCoalgebra co;
            std::vector<std::pair<std::string, std::string>> observe_rows, step_rows;
            ++i;
            for (; i < lines.size(); ++i) {
                std::string row = trim(lines[i]);
                std::size_t rowno = i + 1;
                if (row.empty())
                    continue;
                if (row == "end")
                    break;
                std::istringstream rw(row);
                std::string kw;
                rw >> kw;
                if (kw == "states") {
                    std::string s;
                    while (rw >> s)
                        co.states.push_back(s);
                } else if (kw == "output") {
                    int n;
                    if (!(rw >> n) || n < 1)
                        fail(rowno, "output needs a positive size");
                    co.output = Alphabet(n);
                } else if (kw == "observe" || kw == "step") {
                    std::string from, arrow, to;
                    if (!(rw >> from >> arrow >> to) || arrow != "->")
                        fail(rowno, "row must look like \"" + kw + " state -> value\"");
                    (kw == "observe" ? observe_rows : step_rows).emplace_back(from, to);
                } else {
                    fail(rowno, "unknown coalgebra row \"" + row + "\"");
                }
            }
            if (i >= lines.size())
                fail(lines.size(), "coalgebra block never closed with \"end\"");
            if (co.states.empty())
                fail(lineno, "coalgebra block needs states");
            co.observe.assign(co.states.size(), -1);
            co.step.assign(co.states.size(), std::size_t(-1));
            for (auto& [from, to] : observe_rows) {
                std::size_t j = co.state_index(from);
                try {
                    co.observe[j] = Symbol(std::stoi(to));
                } catch (...) {
                    fail(lineno, "bad observation \"" + to + "\"");
                }
                if (!co.output.contains(co.observe[j]))
                    fail(lineno, "observation out of range for state \"" + from + "\"");
            }
            for (auto& [from, to] : step_rows)
                co.step[co.state_index(from)] = co.state_index(to);
            for (std::size_t j = 0; j < co.states.size(); ++j)
                if (co.observe[j] < 0 || co.step[j] == std::size_t(-1))
                    fail(lineno, "state \"" + co.states[j] +
                                     "\" is missing an observe or step row");
            spec.coalgebra = std::move(co);
        } else {
            fail(lineno, "unknown section \"" + keyword + "\"");
        }
    }
    if (!pending_function.empty())
        spec.function = specdetail::parse_function_expr(pending_function, spec.alphabet,
                                                        pending_function_line);
    return spec;
}

} // namespace weft
