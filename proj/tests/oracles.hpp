#pragma once

// Reference answers computed directly on strings and plain matrices. Nothing
// here touches the RASP engine.

#include <algorithm>
#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rasp/graph.hpp"
#include "rasp/sequence.hpp"

namespace oracle {

using BoolMatrix = std::vector<std::vector<bool>>;

inline std::vector<int> row_popcounts(const BoolMatrix& m, bool skip_first_column) {
    std::vector<int> out;
    for (const auto& row : m) {
        int c = 0;
        for (std::size_t k = skip_first_column ? 1 : 0; k < row.size(); ++k) c += row[k] ? 1 : 0;
        out.push_back(c);
    }
    return out;
}

/// Per-prefix balanced (T) / open (P) / failed (F) with one bracket pair.
inline std::string dyck1(const std::string& s, char open = '(', char close = ')') {
    std::string out;
    int balance = 0;
    bool failed = false;
    for (char c : s) {
        if (c == open) ++balance;
        if (c == close) --balance;
        failed = failed || balance < 0;
        out += failed ? 'F' : (balance == 0 ? 'T' : 'P');
    }
    return out;
}

/// Pushdown recogniser for several bracket pairs given as "()" strings.
inline std::string dyck_n(const std::string& s, const std::vector<std::string>& pairs) {
    std::string out;
    std::vector<char> stack;
    bool failed = false;
    for (char c : s) {
        for (const auto& p : pairs) {
            if (failed) break;
            if (c == p[0]) stack.push_back(c);
            if (c == p[1]) {
                if (stack.empty() || stack.back() != p[0]) failed = true;
                else stack.pop_back();
            }
        }
        out += failed ? 'F' : (stack.empty() ? 'T' : 'P');
    }
    return out;
}

/// Both pairs balanced independently and never negative.
inline bool shuffle_dyck2(const std::string& s) {
    int a = 0, b = 0;
    for (char c : s) {
        a += c == '(' ? 1 : c == ')' ? -1 : 0;
        b += c == '{' ? 1 : c == '}' ? -1 : 0;
        if (a < 0 || b < 0) return false;
    }
    return a == 0 && b == 0;
}

/// Values ordered by key, ties by position.
inline std::string stable_sorted(const std::string& s) {
    std::vector<std::pair<char, std::size_t>> v;
    for (std::size_t i = 0; i < s.size(); ++i) v.emplace_back(s[i], i);
    std::sort(v.begin(), v.end());
    std::string out;
    for (auto& [c, _] : v) out += c;
    return out;
}

/// Distinct tokens by descending frequency, first occurrence breaking ties,
/// padded with `pad` to the input length.
inline std::vector<std::string> by_frequency(const std::string& s, const std::string& pad) {
    std::map<char, int> freq;
    std::map<char, std::size_t> first;
    for (std::size_t i = 0; i < s.size(); ++i) {
        ++freq[s[i]];
        first.try_emplace(s[i], i);
    }
    std::vector<char> uniq;
    for (auto& [c, _] : freq) uniq.push_back(c);
    std::sort(uniq.begin(), uniq.end(), [&](char a, char b) {
        if (freq[a] != freq[b]) return freq[a] > freq[b];
        return first[a] < first[b];
    });
    std::vector<std::string> out;
    for (char c : uniq) out.emplace_back(1, c);
    while (out.size() < s.size()) out.push_back(pad);
    return out;
}

/// Per row, the selected column with the highest score (lowest index on ties).
inline BoolMatrix select_best(const BoolMatrix& sel, const std::vector<std::vector<double>>& score) {
    BoolMatrix out(sel.size(), std::vector<bool>(sel.size(), false));
    for (std::size_t q = 0; q < sel.size(); ++q) {
        long best = -1;
        for (std::size_t k = 0; k < sel.size(); ++k) {
            if (sel[q][k] && (best < 0 || score[q][k] > score[q][static_cast<std::size_t>(best)])) {
                best = static_cast<long>(k);
            }
        }
        if (best >= 0) out[q][static_cast<std::size_t>(best)] = true;
    }
    return out;
}

inline BoolMatrix to_bools(const rasp::SelectionMatrix& m) {
    BoolMatrix out(m.size(), std::vector<bool>(m.size()));
    for (std::size_t q = 0; q < m.size(); ++q) {
        for (std::size_t k = 0; k < m.size(); ++k) out[q][k] = m.at(q, k);
    }
    return out;
}

/// A random selector built through the engine together with a direct
/// computation of its matrix on one input string.
struct RandomSelector {
    rasp::Selector node;
    BoolMatrix bits;
};

namespace detail {

// Leaf sequences whose values the oracle knows directly. Numeric leaves use
// ints; token leaves use single characters.
struct Leaf {
    rasp::Operand operand;
    std::vector<long> ints;
    std::string chars;
    bool numeric = true;
};

inline Leaf random_leaf(std::mt19937& rng, const std::string& input, bool numeric) {
    const std::size_t n = input.size();
    std::uniform_int_distribution<int> pick(0, 3);
    Leaf l;
    l.numeric = numeric;
    if (numeric) {
        const int c = std::uniform_int_distribution<int>(1, 3)(rng);
        switch (pick(rng)) {
            case 0:
                l.operand = rasp::build::indices();
                for (std::size_t i = 0; i < n; ++i) l.ints.push_back(static_cast<long>(i));
                break;
            case 1:
                l.operand = rasp::build::elementwise(rasp::OpCode::Add, rasp::build::indices(), rasp::Atom::number(c));
                for (std::size_t i = 0; i < n; ++i) l.ints.push_back(static_cast<long>(i) + c);
                break;
            case 2:
                l.operand = rasp::build::elementwise(rasp::OpCode::Mod, rasp::build::indices(), rasp::Atom::number(c + 1));
                for (std::size_t i = 0; i < n; ++i) l.ints.push_back(static_cast<long>(i) % (c + 1));
                break;
            default:
                l.operand = rasp::Atom::number(c);
                l.ints.assign(n, c);
                break;
        }
    } else {
        if (pick(rng) < 3) {
            l.operand = rasp::build::tokens();
            l.chars = input;
        } else {
            const char c = static_cast<char>('a' + std::uniform_int_distribution<int>(0, 2)(rng));
            l.operand = rasp::Atom::token(std::string(1, c));
            l.chars.assign(n, c);
        }
    }
    return l;
}

template <class T>
bool compare(rasp::Predicate p, const T& key, const T& query) {
    switch (p) {
        case rasp::Predicate::Eq: return key == query;
        case rasp::Predicate::Ne: return key != query;
        case rasp::Predicate::Lt: return key < query;
        case rasp::Predicate::Le: return key <= query;
        case rasp::Predicate::Gt: return key > query;
        case rasp::Predicate::Ge: return key >= query;
    }
    return false;
}

}  // namespace detail

/// Random select / and / or / not tree of bounded depth over `input`.
inline RandomSelector random_selector(std::mt19937& rng, const std::string& input, int depth = 2) {
    const std::size_t n = input.size();
    std::uniform_int_distribution<int> shape(0, depth > 0 ? 4 : 0);
    const int s = shape(rng);
    if (s <= 1) {
        const bool numeric = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
        auto keys = detail::random_leaf(rng, input, numeric);
        auto queries = detail::random_leaf(rng, input, numeric);
        if (!numeric && std::holds_alternative<rasp::Atom>(keys.operand) &&
            std::holds_alternative<rasp::Atom>(queries.operand)) {
            keys.operand = rasp::build::tokens();
            keys.chars = input;
        }
        const auto p = static_cast<rasp::Predicate>(std::uniform_int_distribution<int>(0, 5)(rng));
        RandomSelector r{rasp::build::select(keys.operand, queries.operand, p), BoolMatrix(n, std::vector<bool>(n))};
        for (std::size_t q = 0; q < n; ++q) {
            for (std::size_t k = 0; k < n; ++k) {
                r.bits[q][k] = numeric ? detail::compare(p, keys.ints[k], queries.ints[q])
                                       : detail::compare(p, keys.chars[k], queries.chars[q]);
            }
        }
        return r;
    }
    auto a = random_selector(rng, input, depth - 1);
    if (s == 4) {
        RandomSelector r{rasp::build::select_not(a.node), a.bits};
        for (auto& row : r.bits) row.flip();
        return r;
    }
    auto b = random_selector(rng, input, depth - 1);
    const bool is_and = s == 2;
    RandomSelector r{is_and ? rasp::build::select_and(a.node, b.node) : rasp::build::select_or(a.node, b.node), a.bits};
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t k = 0; k < n; ++k) r.bits[q][k] = is_and ? (a.bits[q][k] && b.bits[q][k]) : (a.bits[q][k] || b.bits[q][k]);
    }
    return r;
}

inline std::string random_string(std::mt19937& rng, const std::string& alphabet, std::size_t min_len,
                                 std::size_t max_len) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(min_len, max_len)(rng);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += alphabet[pick(rng)];
    return s;
}

/// Bracket strings biased towards well-nested prefixes: openers are pushed
/// and usually closed with their own partner.
inline std::string biased_brackets(std::mt19937& rng, const std::vector<std::string>& pairs, std::size_t max_len) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, max_len)(rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    std::vector<std::size_t> stack;
    std::string s;
    while (s.size() < len) {
        const double r = u(rng);
        if (!stack.empty() && r < 0.45) {
            const std::size_t p = u(rng) < 0.9 ? stack.back() : pick(rng);
            s += pairs[p][1];
            stack.pop_back();
        } else if (r < 0.95) {
            const std::size_t p = pick(rng);
            s += pairs[p][0];
            stack.push_back(p);
        } else {
            s += pairs[pick(rng)][1];
        }
    }
    return s;
}

/// Each position's token display as a vector.
inline std::vector<std::string> displays(const rasp::Sequence& s) {
    std::vector<std::string> out;
    for (const auto& a : s) out.push_back(rasp::to_display(a));
    return out;
}

}  // namespace oracle
