#include "petribench/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <random>
#include <unordered_map>
#include <utility>

namespace petribench {

namespace {

std::string locate(const std::string& message, int line, int column) {
    return "line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": " + message;
}

}  // namespace

formula_error::formula_error(const std::string& message, int line_in,
                             int column_in)
    : std::runtime_error(locate(message, line_in, column_in)),
      line(line_in),
      column(column_in) {}

bool compare(TokenCount lhs, Cmp cmp, TokenCount rhs) {
    switch (cmp) {
        case Cmp::Le: return lhs <= rhs;
        case Cmp::Lt: return lhs < rhs;
        case Cmp::Eq: return lhs == rhs;
        case Cmp::Ge: return lhs >= rhs;
        case Cmp::Gt: return lhs > rhs;
        case Cmp::Ne: return lhs != rhs;
    }
    return false;
}

namespace {

// ---------------------------------------------------------------- lexer

struct Token {
    enum class Kind { Ident, Int, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    std::uint64_t value = 0;
    int line = 1;
    int column = 1;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = column;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) ||
                    text[j] == '_'))
                ++j;
            tok.kind = Token::Kind::Ident;
            tok.text = text.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            tok.kind = Token::Kind::Int;
            tok.text = text.substr(i, j - i);
            auto [ptr, ec] = std::from_chars(
                text.data() + i, text.data() + j, tok.value);
            if (ec != std::errc() || ptr != text.data() + j)
                throw formula_error("integer constant out of range", line,
                                    column);
            advance(j - i);
        } else {
            static const char* two[] = {"<=", ">=", "!="};
            std::string sym(1, c);
            if (i + 1 < text.size()) {
                std::string pair = text.substr(i, 2);
                for (const char* t : two)
                    if (pair == t) sym = pair;
            }
            static const std::string singles = ":;()|&!<=>";
            if (sym.size() == 1 && singles.find(c) == std::string::npos)
                throw formula_error(
                    std::string("unexpected character '") + c + "'", line,
                    column);
            tok.kind = Token::Kind::Sym;
            tok.text = sym;
            advance(sym.size());
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.column = column;
    out.push_back(end);
    return out;
}

// --------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    FormulaSet parse() {
        FormulaSet set;
        set.items.push_back(parse_item());
        while (peek().kind == Token::Kind::Sym && peek().text == ";") {
            next();
            set.items.push_back(parse_item());
        }
        expect_end();
        std::unordered_map<std::string, int> seen;
        for (const FormulaItem& item : set.items) {
            auto [it, fresh] = seen.emplace(item.id, 0);
            (void)it;
            if (!fresh)
                throw formula_error("duplicate identifier \"" + item.id + "\"",
                                    id_lines_[item.id].first,
                                    id_lines_[item.id].second);
        }
        std::sort(set.items.begin(), set.items.end(),
                  [](const FormulaItem& a, const FormulaItem& b) {
                      return a.id < b.id;
                  });
        return set;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& message, const Token& at) {
        throw formula_error(message, at.line, at.column);
    }

    void expect_sym(const std::string& sym) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Sym || t.text != sym)
            fail("expected \"" + sym + "\"", t);
        next();
    }

    void expect_end() {
        if (peek().kind != Token::Kind::End)
            fail("expected \";\" or end of input", peek());
    }

    std::string expect_ident(const char* what) {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident)
            fail(std::string("expected ") + what, t);
        return next().text;
    }

    FormulaItem parse_item() {
        FormulaItem item;
        const Token& id_tok = peek();
        item.id = expect_ident("a formula identifier");
        id_lines_.emplace(item.id,
                          std::make_pair(id_tok.line, id_tok.column));
        expect_sym(":");
        item.formula = parse_formula();
        return item;
    }

    std::string parse_paren_name() {
        expect_sym("(");
        std::string name = expect_ident("a place or transition name");
        expect_sym(")");
        return name;
    }

    Cmp parse_cmp() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Sym) {
            if (t.text == "<=") return next(), Cmp::Le;
            if (t.text == "<") return next(), Cmp::Lt;
            if (t.text == "=") return next(), Cmp::Eq;
            if (t.text == ">=") return next(), Cmp::Ge;
            if (t.text == ">") return next(), Cmp::Gt;
            if (t.text == "!=") return next(), Cmp::Ne;
        }
        fail("expected a comparison operator", t);
    }

    Formula parse_formula() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident) fail("expected a formula keyword", t);
        Formula f;
        const std::string& kw = t.text;
        if (kw == "DEADLOCK") {
            next();
            f.kind = Formula::Kind::Deadlock;
        } else if (kw == "SAFE") {
            next();
            f.kind = Formula::Kind::Safe;
        } else if (kw == "BOUND") {
            next();
            f.kind = Formula::Kind::Bound;
            f.name = parse_paren_name();
            f.cmp = parse_cmp();
            const Token& k = peek();
            if (k.kind != Token::Kind::Int)
                fail("expected an integer bound", k);
            f.bound = next().value;
        } else if (kw == "DEAD" || kw == "QUASILIVE" || kw == "LIVE") {
            next();
            f.kind = kw == "DEAD" ? Formula::Kind::Dead
                     : kw == "QUASILIVE" ? Formula::Kind::Quasilive
                                         : Formula::Kind::Live;
            f.name = parse_paren_name();
        } else if (kw == "EF" || kw == "AG") {
            next();
            f.kind = kw == "EF" ? Formula::Kind::EF : Formula::Kind::AG;
            f.pred = parse_or(1);
        } else {
            fail("expected a formula keyword", t);
        }
        return f;
    }

    void check_depth(int depth, const Token& at) {
        if (depth > kMaxPredDepth) fail("predicate nesting too deep", at);
    }

    Pred parse_or(int depth) {
        check_depth(depth, peek());
        Pred lhs = parse_and(depth);
        while (peek().kind == Token::Kind::Sym && peek().text == "|") {
            next();
            Pred node;
            node.kind = Pred::Kind::Or;
            node.children.push_back(std::move(lhs));
            node.children.push_back(parse_and(depth));
            lhs = std::move(node);
        }
        return lhs;
    }

    Pred parse_and(int depth) {
        Pred lhs = parse_unary(depth);
        while (peek().kind == Token::Kind::Sym && peek().text == "&") {
            next();
            Pred node;
            node.kind = Pred::Kind::And;
            node.children.push_back(std::move(lhs));
            node.children.push_back(parse_unary(depth));
            lhs = std::move(node);
        }
        return lhs;
    }

    Pred parse_unary(int depth) {
        const Token& t = peek();
        if (t.kind == Token::Kind::Sym && t.text == "!") {
            next();
            check_depth(depth + 1, peek());
            Pred node;
            node.kind = Pred::Kind::Not;
            node.children.push_back(parse_unary(depth + 1));
            return node;
        }
        if (t.kind == Token::Kind::Sym && t.text == "(") {
            next();
            Pred inner = parse_or(depth + 1);
            expect_sym(")");
            return inner;
        }
        return parse_atom();
    }

    Pred parse_atom() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident)
            fail("expected \"tokens\" or \"fireable\"", t);
        Pred atom;
        if (t.text == "tokens") {
            next();
            atom.kind = Pred::Kind::TokensCmp;
            atom.place = parse_paren_name();
            atom.cmp = parse_cmp();
            const Token& rhs = peek();
            if (rhs.kind == Token::Kind::Int) {
                atom.rhs_is_place = false;
                atom.rhs_value = next().value;
            } else if (rhs.kind == Token::Kind::Ident &&
                       rhs.text == "tokens") {
                next();
                atom.rhs_is_place = true;
                atom.rhs_place = parse_paren_name();
            } else {
                fail("expected an integer or \"tokens\"", rhs);
            }
        } else if (t.text == "fireable") {
            next();
            atom.kind = Pred::Kind::Fireable;
            atom.transition = parse_paren_name();
        } else {
            fail("expected \"tokens\" or \"fireable\"", t);
        }
        return atom;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::unordered_map<std::string, std::pair<int, int>> id_lines_;
};

// ------------------------------------------------------------ evaluator

// A name in the formula that the target net lacks; maps to Unknown plus
// a recorded diagnostic, mirroring the partial vectors of the contest.
struct unresolved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

PlaceId need_place(const PetriNet& net, const std::string& name) {
    if (auto p = net.find_place(name)) return *p;
    throw unresolved("unknown place \"" + name + "\"");
}

TransitionId need_transition(const PetriNet& net, const std::string& name) {
    if (auto t = net.find_transition(name)) return *t;
    throw unresolved("unknown transition \"" + name + "\"");
}

// Pred with names resolved to indices, evaluable against a Marking.
struct RPred {
    Pred::Kind kind = Pred::Kind::Fireable;
    std::vector<RPred> children;
    PlaceId place = 0;
    Cmp cmp = Cmp::Eq;
    bool rhs_is_place = false;
    PlaceId rhs_place = 0;
    TokenCount rhs_value = 0;
    TransitionId transition = 0;
};

RPred resolve(const PetriNet& net, const Pred& p) {
    RPred r;
    r.kind = p.kind;
    switch (p.kind) {
        case Pred::Kind::And:
        case Pred::Kind::Or:
        case Pred::Kind::Not:
            for (const Pred& child : p.children)
                r.children.push_back(resolve(net, child));
            break;
        case Pred::Kind::TokensCmp:
            r.place = need_place(net, p.place);
            r.cmp = p.cmp;
            r.rhs_is_place = p.rhs_is_place;
            if (p.rhs_is_place)
                r.rhs_place = need_place(net, p.rhs_place);
            else
                r.rhs_value = p.rhs_value;
            break;
        case Pred::Kind::Fireable:
            r.transition = need_transition(net, p.transition);
            break;
    }
    return r;
}

bool eval_pred(const PetriNet& net, const RPred& p, const Marking& m) {
    switch (p.kind) {
        case Pred::Kind::And:
            return eval_pred(net, p.children[0], m) &&
                   eval_pred(net, p.children[1], m);
        case Pred::Kind::Or:
            return eval_pred(net, p.children[0], m) ||
                   eval_pred(net, p.children[1], m);
        case Pred::Kind::Not:
            return !eval_pred(net, p.children[0], m);
        case Pred::Kind::TokensCmp: {
            TokenCount rhs =
                p.rhs_is_place ? m[p.rhs_place] : TokenCount(p.rhs_value);
            return compare(m[p.place], p.cmp, rhs);
        }
        case Pred::Kind::Fireable:
            return enabled(net, m, p.transition);
    }
    return false;
}

// Early-exit exploration: the visitor flips `decided` at a witness.
Outcome explore_decide(const PetriNet& net, const ExploreOptions& opts,
                       const std::function<Outcome(const Marking&)>& judge,
                       Outcome on_exhausted) {
    Outcome decided = Outcome::Unknown;
    StateSpaceResult res =
        explore(net, opts, [&](const Marking& m) {
            Outcome o = judge(m);
            if (o == Outcome::Unknown) return true;
            decided = o;
            return false;
        });
    if (res.stopped_by_visitor) return decided;
    if (res.exhausted) return on_exhausted;
    return Outcome::Unknown;
}

Outcome eval_bound(const PetriNet& net, const Formula& f,
                   const ExploreOptions& opts) {
    PlaceId p = need_place(net, f.name);
    const TokenCount k = f.bound;
    // Observed tokens only ever raise the eventual bound, so one-sided
    // comparisons can settle before exhaustion.
    auto judge = [&](const Marking& m) -> Outcome {
        TokenCount v = m[p];
        switch (f.cmp) {
            case Cmp::Le: return v > k ? Outcome::False : Outcome::Unknown;
            case Cmp::Lt: return v >= k ? Outcome::False : Outcome::Unknown;
            case Cmp::Eq: return v > k ? Outcome::False : Outcome::Unknown;
            case Cmp::Ge: return v >= k ? Outcome::True : Outcome::Unknown;
            case Cmp::Gt: return v > k ? Outcome::True : Outcome::Unknown;
            case Cmp::Ne: return v > k ? Outcome::True : Outcome::Unknown;
        }
        return Outcome::Unknown;
    };
    Outcome decided = Outcome::Unknown;
    StateSpaceResult res = explore(net, opts, [&](const Marking& m) {
        Outcome o = judge(m);
        if (o == Outcome::Unknown) return true;
        decided = o;
        return false;
    });
    if (res.stopped_by_visitor) return decided;
    if (!res.exhausted) return Outcome::Unknown;
    return compare(res.place_bounds[p], f.cmp, k) ? Outcome::True
                                                  : Outcome::False;
}

Outcome eval_one(const PetriNet& net, const Formula& f,
                 const ExploreOptions& opts) {
    switch (f.kind) {
        case Formula::Kind::Deadlock:
            try {
                return find_deadlock(net, opts) ? Outcome::True
                                                : Outcome::False;
            } catch (const incomplete_error&) {
                return Outcome::Unknown;
            }
        case Formula::Kind::Safe:
            return explore_decide(
                net, opts,
                [](const Marking& m) {
                    for (TokenCount v : m.tokens)
                        if (v > 1) return Outcome::False;
                    return Outcome::Unknown;
                },
                Outcome::True);
        case Formula::Kind::Bound:
            return eval_bound(net, f, opts);
        case Formula::Kind::Dead: {
            TransitionId t = need_transition(net, f.name);
            return explore_decide(
                net, opts,
                [&](const Marking& m) {
                    return enabled(net, m, t) ? Outcome::False
                                              : Outcome::Unknown;
                },
                Outcome::True);
        }
        case Formula::Kind::Quasilive: {
            TransitionId t = need_transition(net, f.name);
            return explore_decide(
                net, opts,
                [&](const Marking& m) {
                    return enabled(net, m, t) ? Outcome::True
                                              : Outcome::Unknown;
                },
                Outcome::False);
        }
        case Formula::Kind::Live: {
            TransitionId t = need_transition(net, f.name);
            ExploreOptions graph_opts = opts;
            graph_opts.store_graph = true;
            try {
                return transition_liveness(net, t, LivenessLevel::L4,
                                           graph_opts)
                           ? Outcome::True
                           : Outcome::False;
            } catch (const incomplete_error&) {
                return Outcome::Unknown;
            }
        }
        case Formula::Kind::EF: {
            RPred pred = resolve(net, f.pred);
            return explore_decide(
                net, opts,
                [&](const Marking& m) {
                    return eval_pred(net, pred, m) ? Outcome::True
                                                   : Outcome::Unknown;
                },
                Outcome::False);
        }
        case Formula::Kind::AG: {
            RPred pred = resolve(net, f.pred);
            return explore_decide(
                net, opts,
                [&](const Marking& m) {
                    return eval_pred(net, pred, m) ? Outcome::Unknown
                                                   : Outcome::False;
                },
                Outcome::True);
        }
    }
    return Outcome::Unknown;
}

}  // namespace

FormulaSet parse_formulae(const std::string& text) {
    return Parser(lex(text)).parse();
}

ResultVector evaluate(const PetriNet& net, const FormulaSet& set,
                      const ExploreOptions& opts) {
    ResultVector out;
    for (const FormulaItem& item : set.items) {
        out.identifiers.push_back(item.id);
        Outcome outcome = Outcome::Unknown;
        try {
            outcome = eval_one(net, item.formula, opts);
        } catch (const unresolved& miss) {
            out.diagnostics.push_back(item.id + ": " + miss.what());
        } catch (const incomplete_error&) {
            outcome = Outcome::Unknown;
        }
        out.outcomes.push_back(outcome);
    }
    return out;
}

std::string format_vector(const ResultVector& v) {
    std::string s;
    s.reserve(v.outcomes.size());
    for (Outcome o : v.outcomes)
        s += o == Outcome::True ? 'T' : o == Outcome::False ? 'F' : '.';
    return s;
}

namespace {

const char* cmp_text(Cmp cmp) {
    switch (cmp) {
        case Cmp::Le: return "<=";
        case Cmp::Lt: return "<";
        case Cmp::Eq: return "=";
        case Cmp::Ge: return ">=";
        case Cmp::Gt: return ">";
        case Cmp::Ne: return "!=";
    }
    return "=";
}

void print_pred(const Pred& p, std::string& out) {
    switch (p.kind) {
        case Pred::Kind::And:
        case Pred::Kind::Or:
            out += '(';
            print_pred(p.children[0], out);
            out += p.kind == Pred::Kind::And ? " & " : " | ";
            print_pred(p.children[1], out);
            out += ')';
            break;
        case Pred::Kind::Not:
            out += "!";
            print_pred(p.children[0], out);
            break;
        case Pred::Kind::TokensCmp:
            out += "tokens(" + p.place + ") ";
            out += cmp_text(p.cmp);
            out += ' ';
            if (p.rhs_is_place)
                out += "tokens(" + p.rhs_place + ")";
            else
                out += std::to_string(p.rhs_value);
            break;
        case Pred::Kind::Fireable:
            out += "fireable(" + p.transition + ")";
            break;
    }
}

}  // namespace

std::string format_formulae(const FormulaSet& set) {
    std::string out;
    bool first = true;
    for (const FormulaItem& item : set.items) {
        if (!first) out += ";\n";
        first = false;
        out += item.id + ": ";
        const Formula& f = item.formula;
        switch (f.kind) {
            case Formula::Kind::Deadlock: out += "DEADLOCK"; break;
            case Formula::Kind::Safe: out += "SAFE"; break;
            case Formula::Kind::Bound:
                out += "BOUND(" + f.name + ") ";
                out += cmp_text(f.cmp);
                out += ' ' + std::to_string(f.bound);
                break;
            case Formula::Kind::Dead: out += "DEAD(" + f.name + ")"; break;
            case Formula::Kind::Quasilive:
                out += "QUASILIVE(" + f.name + ")";
                break;
            case Formula::Kind::Live: out += "LIVE(" + f.name + ")"; break;
            case Formula::Kind::EF:
            case Formula::Kind::AG:
                out += f.kind == Formula::Kind::EF ? "EF " : "AG ";
                print_pred(f.pred, out);
                break;
        }
    }
    out += '\n';
    return out;
}

namespace {

// Deterministic helpers over the raw generator; avoids the
// implementation-defined behaviour of <random> distributions.
std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

const std::string& random_place(const PetriNet& net, std::mt19937_64& rng) {
    return net.place_name(
        static_cast<PlaceId>(pick(rng, net.place_count())));
}

const std::string& random_transition(const PetriNet& net,
                                     std::mt19937_64& rng) {
    return net.transition_name(
        static_cast<TransitionId>(pick(rng, net.transition_count())));
}

Cmp random_cmp(std::mt19937_64& rng) {
    static constexpr Cmp all[] = {Cmp::Le, Cmp::Lt, Cmp::Eq,
                                  Cmp::Ge, Cmp::Gt, Cmp::Ne};
    return all[pick(rng, 6)];
}

Pred random_atom(const PetriNet& net, std::mt19937_64& rng) {
    Pred p;
    std::uint64_t roll = pick(rng, 10);
    if (roll < 6) {
        p.kind = Pred::Kind::TokensCmp;
        p.place = random_place(net, rng);
        p.cmp = random_cmp(rng);
        p.rhs_is_place = false;
        p.rhs_value = pick(rng, 4);
    } else if (roll < 8) {
        p.kind = Pred::Kind::TokensCmp;
        p.place = random_place(net, rng);
        p.cmp = random_cmp(rng);
        p.rhs_is_place = true;
        p.rhs_place = random_place(net, rng);
    } else {
        p.kind = Pred::Kind::Fireable;
        p.transition = random_transition(net, rng);
    }
    return p;
}

Pred random_pred(const PetriNet& net, std::mt19937_64& rng, int depth) {
    if (depth <= 0 || pick(rng, 10) < 5) return random_atom(net, rng);
    std::uint64_t roll = pick(rng, 3);
    Pred p;
    if (roll == 2) {
        p.kind = Pred::Kind::Not;
        p.children.push_back(random_pred(net, rng, depth - 1));
        return p;
    }
    p.kind = roll == 0 ? Pred::Kind::And : Pred::Kind::Or;
    p.children.push_back(random_pred(net, rng, depth - 1));
    p.children.push_back(random_pred(net, rng, depth - 1));
    return p;
}

}  // namespace

FormulaSet sample_formulae(const PetriNet& net, FormulaCategory category,
                           std::uint64_t seed, int count) {
    if (count < 1) count = 1;
    if (net.place_count() == 0 || net.transition_count() == 0)
        throw net_error("formula sampling needs a non-empty net");
    std::mt19937_64 rng(seed);
    FormulaSet set;
    int width = static_cast<int>(std::to_string(count).size());
    for (int k = 1; k <= count; ++k) {
        FormulaItem item;
        std::string number = std::to_string(k);
        item.id = (category == FormulaCategory::Structural ? "s" : "r") +
                  std::string(width - static_cast<int>(number.size()), '0') +
                  number;
        Formula& f = item.formula;
        if (category == FormulaCategory::Structural) {
            std::uint64_t roll = pick(rng, 16);
            if (roll < 2) {
                f.kind = Formula::Kind::Deadlock;
            } else if (roll < 4) {
                f.kind = Formula::Kind::Safe;
            } else if (roll < 9) {
                f.kind = Formula::Kind::Bound;
                f.name = random_place(net, rng);
                f.cmp = random_cmp(rng);
                f.bound = pick(rng, 5);
            } else if (roll < 12) {
                f.kind = Formula::Kind::Dead;
                f.name = random_transition(net, rng);
            } else if (roll < 15) {
                f.kind = Formula::Kind::Quasilive;
                f.name = random_transition(net, rng);
            } else {
                f.kind = Formula::Kind::Live;
                f.name = random_transition(net, rng);
            }
        } else {
            f.kind = pick(rng, 2) == 0 ? Formula::Kind::EF
                                       : Formula::Kind::AG;
            f.pred = random_pred(net, rng, 3);
        }
        set.items.push_back(std::move(item));
    }
    std::sort(set.items.begin(), set.items.end(),
              [](const FormulaItem& a, const FormulaItem& b) {
                  return a.id < b.id;
              });
    return set;
}
