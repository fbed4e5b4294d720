#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "weft/alphabet.hpp"
#include "weft/causal.hpp"
#include "weft/coalgebra.hpp"
#include "weft/errors.hpp"
#include "weft/stream.hpp"

namespace weft {

/// Finite deterministic transducer: transition (state, input) → (output, state).
class MealyMachine {
public:
    struct Arrow {
        Symbol out;
        std::size_t next;
    };

    MealyMachine(std::vector<std::string> state_names, Alphabet input, Alphabet output,
                 std::vector<Arrow> transitions, std::size_t initial)
        : names_(std::move(state_names)), input_(input), output_(output),
          transitions_(std::move(transitions)), initial_(initial) {
        if (names_.empty())
            throw error("machine needs at least one state");
        if (transitions_.size() != names_.size() * std::size_t(input_.size()))
            throw error("transition table must be total on states x inputs");
        for (const Arrow& t : transitions_) {
            output_.require(t.out);
            if (t.next >= names_.size())
                throw error("transition targets unknown state index " + std::to_string(t.next));
        }
        if (initial_ >= names_.size())
            throw error("initial state index out of range");
    }

    std::size_t state_count() const { return names_.size(); }
    const std::string& state_name(std::size_t i) const { return names_.at(i); }
    const Alphabet& input() const { return input_; }
    const Alphabet& output() const { return output_; }
    std::size_t initial() const { return initial_; }

    std::size_t state_index(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name)
                return i;
        throw error("unknown state \"" + name + "\"");
    }

    const Arrow& arrow(std::size_t state, Symbol in) const {
        input_.require(in);
        return transitions_[state * std::size_t(input_.size()) + std::size_t(in)];
    }

private:
    std::vector<std::string> names_;
    Alphabet input_;
    Alphabet output_;
    std::vector<Arrow> transitions_;
    std::size_t initial_;
};

/// The 0-causal function a state denotes: run the machine over the input
/// stream, one output symbol per input symbol. The producer's in-order
/// contract carries the current state between symbols.
inline CausalFn mealy_behavior(const MealyMachine& m, std::size_t state) {
    if (state >= m.state_count())
        throw error("behavior of unknown state index " + std::to_string(state));
    CausalFn f(m.input(), m.output(), [m, state](const Stream& in) {
        auto cur = std::make_shared<std::size_t>(state);
        return [m, cur, in](std::size_t n) {
            const MealyMachine::Arrow& t = m.arrow(*cur, in.at(n));
            *cur = t.next;
            return t.out;
        };
    });
    return f.with_claim(0, Certificate::by_construction(
                               "machine run from state \"" + m.state_name(state) +
                               "\": one output per input symbol"));
}

/// Rutten's γ on 0-causal functions: γ(f)(a) = (first output on a:…,
/// derivative t∘f∘c_a). The final Mealy coalgebra lives on these functions.
inline std::pair<Symbol, CausalFn> mealy_gamma(const CausalFn& f, Symbol a) {
    if (!f.claims_at_least(0))
        throw certificate_error("gamma needs a 0-causal certificate");
    f.domain().require(a);
    Word wa(f.domain(), {a});
    Symbol out = head(f(prepend(wa, EpStream::zeros(f.domain()))));
    CausalFn derivative = compose(compose(prepend_fn(wa), f), tail_fn(f.codomain()));
    return {out, derivative};
}

} // namespace weft
