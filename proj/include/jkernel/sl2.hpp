#pragma once

// Integer matrices of determinant one and words in named generators.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace jkernel
{

class SL2Mat
{
public:
    SL2Mat() : a_(1), b_(0), c_(0), d_(1) {}
    SL2Mat(Integer a, Integer b, Integer c, Integer d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d))
    {
        if (a_ * d_ - b_ * c_ != 1) {
            throw error("matrix does not have determinant 1");
        }
    }

    static SL2Mat S()
    {
        return {0, -1, 1, 0};
    }
    static SL2Mat T(long p = 1)
    {
        return {1, p, 0, 1};
    }
    static SL2Mat minus_identity()
    {
        return {-1, 0, 0, -1};
    }

    const Integer &a() const noexcept
    {
        return a_;
    }
    const Integer &b() const noexcept
    {
        return b_;
    }
    const Integer &c() const noexcept
    {
        return c_;
    }
    const Integer &d() const noexcept
    {
        return d_;
    }

    SL2Mat inverse() const
    {
        return {d_, -b_, -c_, a_};
    }

    friend SL2Mat operator*(const SL2Mat &x, const SL2Mat &y)
    {
        SL2Mat r;
        r.a_ = x.a_ * y.a_ + x.b_ * y.c_;
        r.b_ = x.a_ * y.b_ + x.b_ * y.d_;
        r.c_ = x.c_ * y.a_ + x.d_ * y.c_;
        r.d_ = x.c_ * y.b_ + x.d_ * y.d_;
        return r;
    }

    friend bool operator==(const SL2Mat &x, const SL2Mat &y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }

    std::string to_string() const
    {
        return "[[" + a_.get_str() + "," + b_.get_str() + "],[" + c_.get_str() + "," + d_.get_str() + "]]";
    }

private:
    Integer a_, b_, c_, d_;
};

// gamma_m = [[a, b m], [c/m, d]] for gamma in Gamma_0(m).
inline SL2Mat gamma_m(const SL2Mat &g, long m)
{
    if (m <= 0) {
        throw error("gamma_m needs m > 0");
    }
    if (g.c() % m != 0) {
        throw not_in_group(g.to_string() + " is not in Gamma_0(" + std::to_string(m) + ")");
    }
    return {g.a(), g.b() * m, g.c() / m, g.d()};
}

enum class Gen { S, T, minus_identity };

struct Letter {
    Gen gen;
    long power = 1;

    friend bool operator==(const Letter &, const Letter &) = default;
};

class GroupWord
{
public:
    GroupWord() = default;
    GroupWord(std::initializer_list<Letter> l) : letters_(l) {}
    explicit GroupWord(std::vector<Letter> l) : letters_(std::move(l)) {}

    const std::vector<Letter> &letters() const noexcept
    {
        return letters_;
    }
    bool empty() const noexcept
    {
        return letters_.empty();
    }

    GroupWord &append(Letter l)
    {
        if (l.power == 0) {
            return *this;
        }
        if (!letters_.empty() && letters_.back().gen == l.gen) {
            letters_.back().power += l.power;
            if (letters_.back().power == 0) {
                letters_.pop_back();
            }
            return *this;
        }
        letters_.push_back(l);
        return *this;
    }

    GroupWord &append(const GroupWord &w)
    {
        for (const auto &l : w.letters_) {
            append(l);
        }
        return *this;
    }

    friend GroupWord operator*(GroupWord x, const GroupWord &y)
    {
        x.append(y);
        return x;
    }

    SL2Mat eval() const
    {
        SL2Mat g;
        for (const auto &l : letters_) {
            g = g * letter_matrix(l);
        }
        return g;
    }

    static SL2Mat letter_matrix(const Letter &l)
    {
        switch (l.gen) {
            case Gen::T:
                return SL2Mat::T(l.power);
            case Gen::S: {
                const long p = ((l.power % 4) + 4) % 4;
                SL2Mat g;
                for (long k = 0; k < p; ++k) {
                    g = g * SL2Mat::S();
                }
                return g;
            }
            case Gen::minus_identity:
                return (l.power % 2 == 0) ? SL2Mat() : SL2Mat::minus_identity();
        }
        return SL2Mat();
    }

    // "S T^2 -I T^-1"
    std::string to_string() const
    {
        std::string s;
        for (const auto &l : letters_) {
            if (!s.empty()) {
                s += " ";
            }
            s += l.gen == Gen::S ? "S" : (l.gen == Gen::T ? "T" : "-I");
            if (l.power != 1) {
                s += "^" + std::to_string(l.power);
            }
        }
        return s;
    }

    friend bool operator==(const GroupWord &, const GroupWord &) = default;

private:
    std::vector<Letter> letters_;
};

// Tokens separated by blanks: S, T, -I (or N), optionally ^p with p an integer.
inline GroupWord parse_word(const std::string &text)
{
    std::istringstream in(text);
    std::string tok;
    GroupWord w;
    while (in >> tok) {
        std::string base = tok;
        long power = 1;
        const auto caret = tok.find('^');
        if (caret != std::string::npos) {
            base = tok.substr(0, caret);
            try {
                std::size_t used = 0;
                power = std::stol(tok.substr(caret + 1), &used);
                if (used != tok.size() - caret - 1) {
                    throw parse_error("bad exponent");
                }
            } catch (const std::exception &) {
                throw parse_error("bad exponent in word token '" + tok + "'");
            }
        }
        Gen g;
        if (base == "S") {
            g = Gen::S;
        } else if (base == "T") {
            g = Gen::T;
        } else if (base == "-I" || base == "N") {
            g = Gen::minus_identity;
        } else {
            throw parse_error("unknown generator '" + base + "' in word");
        }
        w.append(Letter{g, power});
    }
    return w;
}

namespace detail
{

// nearest integer to a/c, ties toward -infinity
inline Integer nearest_quotient(const Integer &a, const Integer &c)
{
    Integer twice = 2 * a + c;
    Integer den = 2 * c;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), den.get_mpz_t());
    return q;
}

} // namespace detail

// Continued-fraction decomposition: gamma = T^q1 S T^q2 S ... over {S, T}.
inline GroupWord sl2_word(const SL2Mat &g)
{
    GroupWord w;
    Integer a = g.a(), b = g.b(), c = g.c(), d = g.d();
    while (c != 0) {
        const Integer q = detail::nearest_quotient(a, c);
        // M = T^q S M', M' = S^-1 T^-q M = [[c, d], [-(a - qc), -(b - qd)]]
        w.append(Letter{Gen::T, to_long(q)});
        w.append(Letter{Gen::S, 1});
        Integer na = c, nb = d, nc = -(a - q * c), nd = -(b - q * d);
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
    if (a == 1) {
        w.append(Letter{Gen::T, to_long(b)});
    } else {
        // [[-1, b], [0, -1]] = S^2 T^-b
        w.append(Letter{Gen::S, 2});
        w.append(Letter{Gen::T, to_long(-b)});
    }
    // fold S powers into 0..3
    std::vector<Letter> out;
    for (auto l : w.letters()) {
        if (l.gen == Gen::S) {
            l.power = ((l.power % 4) + 4) % 4;
            if (l.power == 0) {
                continue;
            }
        }
        if (!out.empty() && out.back().gen == l.gen) {
            out.back().power += l.power;
            if (l.gen == Gen::S) {
                out.back().power %= 4;
            }
            if (out.back().power == 0) {
                out.pop_back();
            }
            continue;
        }
        out.push_back(l);
    }
    return GroupWord(std::move(out));
}

// Random word in Gamma_0(m) built from blocks T^e, S T^(m a) S, -I with
// `blocks` blocks, e in {-2..2} \ {0}, a in {-1, 1}.
template <class Rng>
GroupWord random_gamma0_word(Rng &rng, long m, int blocks)
{
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_int_distribution<int> sign(0, 1);
    GroupWord w;
    for (int i = 0; i < blocks; ++i) {
        const int p = pick(rng);
        if (p == 0) {
            w.append(Letter{Gen::minus_identity, 1});
        } else if (p <= 2) {
            const long e = (sign(rng) ? 1 : -1) * (1 + static_cast<long>(sign(rng)));
            w.append(Letter{Gen::T, e});
        } else {
            const long a = sign(rng) ? 1 : -1;
            w.append(Letter{Gen::S, 1});
            w.append(Letter{Gen::T, m * a});
            w.append(Letter{Gen::S, 1});
        }
    }
    return w;
}

// Random word in Gamma_0(m) with between 1 and max_letters letters, built
// from the same blocks as random_gamma0_word.
template <class Rng>
GroupWord random_gamma0_word_bounded(Rng &rng, long m, std::size_t max_letters)
{
    std::uniform_int_distribution<std::size_t> len(1, max_letters);
    const std::size_t target = len(rng);
    GroupWord w;
    for (int guard = 0; guard < 64 && w.letters().size() < target; ++guard) {
        GroupWord next = w * random_gamma0_word(rng, m, 1);
        if (next.letters().size() > max_letters) {
            break;
        }
        w = std::move(next);
    }
    return w;
}

// Random word over {S, T^e} with `length` letters, |e| <= max_t.
template <class Rng>
GroupWord random_sl2_word(Rng &rng, int length, long max_t = 3)
{
    std::uniform_int_distribution<long> texp(-max_t, max_t);
    std::uniform_int_distribution<int> coin(0, 1);
    GroupWord w;
    for (int i = 0; i < length; ++i) {
        if (coin(rng)) {
            w.append(Letter{Gen::S, 1});
        } else {
            long e = texp(rng);
            if (e == 0) {
                e = 1;
            }
            w.append(Letter{Gen::T, e});
        }
    }
    return w;
}

} // namespace jkernel
