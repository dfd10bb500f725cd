#include "rbm/words.hpp"

#include <stdexcept>

#include "rbm/errors.hpp"

namespace rbm {

int Word::ell() const {
    int total = 0;
    for (Letter l : letters) total += l == Letter::I ? 1 : 2;
    return total;
}

bool Word::vanishing() const {
    return letters.empty() || letters.back() == Letter::I;
}

std::string Word::str() const {
    std::string s;
    s.reserve(letters.size());
    for (Letter l : letters) s.push_back(l == Letter::I ? 'I' : 'J');
    return s;
}

Word Word::parse(const std::string& s) {
    Word w;
    for (char c : s) {
        if (c == 'I') {
            w.letters.push_back(Letter::I);
        } else if (c == 'J') {
            w.letters.push_back(Letter::J);
        } else {
            throw std::invalid_argument("word letters must be I or J");
        }
    }
    return w;
}

std::vector<Word> enumerate_words(int N) {
    if (N < 0) throw std::invalid_argument("word length must be nonnegative");
    if (N > 8) throw ConfigError("moment order capped at 8: term count grows combinatorially");
    std::vector<Word> out;
    if (N == 0) return out;
    // shortlex: sizes ascending, I < J lexicographically within a size
    for (int m = 1; m <= N; ++m) {
        for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
            Word w;
            w.letters.resize(m);
            // bit 0 is the leftmost letter so that counting order is lexicographic
            for (int i = 0; i < m; ++i) {
                w.letters[i] = (bits >> (m - 1 - i)) & 1u ? Letter::J : Letter::I;
            }
            if (w.ell() == N && !w.vanishing()) out.push_back(w);
        }
    }
    return out;
}

std::vector<MomentTerm> expand_word(const Word& word, int N, const Sigmas& sigmas) {
    if (word.ell() != N) {
        throw std::invalid_argument("word length ell(w) must equal the moment order");
    }
    std::vector<MomentTerm> terms;
    if (word.vanishing()) return terms;

    terms.push_back(MomentTerm{});
    int power = N;
    const int m = word.size();
    for (int pos = m - 1; pos >= 0; --pos) {
        const Letter letter = word.letters[pos];
        if (letter == Letter::J) {
            const double factor =
                sigmas.sigma_p * sigmas.sigma_p * 0.5 * power * (power - 1);
            for (MomentTerm& term : terms) {
                term.coefficient *= factor;
                term.exponents.push_back(2);
                term.alpha.push_back(0);
            }
            power -= 2;
        } else {
            const double base = sigmas.rho * sigmas.sigma_p * sigmas.sigma_v * power;
            std::vector<MomentTerm> next;
            for (const MomentTerm& term : terms) {
                const int vars = static_cast<int>(term.exponents.size());
                for (int target = 1; target <= vars; ++target) {
                    MomentTerm branched = term;
                    branched.coefficient *= base * term.exponents[target - 1];
                    branched.exponents.push_back(1);
                    branched.alpha.push_back(target);
                    next.push_back(std::move(branched));
                }
            }
            terms = std::move(next);
            power -= 1;
        }
        if (terms.empty()) return terms;  // leading I on the empty state
    }
    return terms;
}

} // namespace rbm
