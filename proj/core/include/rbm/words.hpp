#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rbm {

// The moment recursion reduces the price power by one per leverage step and
// by two per variance step; words over {I, J} encode the order in which the
// two reductions are applied.
enum class Letter : std::uint8_t { I, J };

struct Word {
    std::vector<Letter> letters;

    int size() const { return static_cast<int>(letters.size()); }

    // Inhomogeneous length: ell(I) = 1, ell(J) = 2.
    int ell() const;

    // Words whose final (first-applied) letter is I annihilate the constant
    // and contribute nothing.
    bool vanishing() const;

    std::string str() const;

    static Word parse(const std::string& s);
};

// All non-vanishing words with ell(w) = N, in shortlex order (size first,
// then lexicographic with I < J).  N up to 8; the term count explodes
// combinatorially beyond that.
std::vector<Word> enumerate_words(int N);

struct Sigmas {
    double sigma_p = 1.0;
    double sigma_v = 1.0;
    double rho = 0.0;
};

// One summand of the moment representation: scalar coefficient, exponent
// vector of the exponential functional psi = exp(sum a_i x_i), and the map
// alpha assigning each leverage-created variable the earlier variable whose
// kernel factor phi(t_alpha(i) - t_i) it carries (0 for variance-created
// variables, which carry no factor).
struct MomentTerm {
    double coefficient = 1.0;
    std::vector<int> exponents;  // a_i in {1, 2}
    std::vector<int> alpha;      // 1-based target, 0 = none
};

// Expands a word by applying the two operators right to left, starting from
// the constant 1 at power N.  ell(w) must equal N.
std::vector<MomentTerm> expand_word(const Word& word, int N, const Sigmas& sigmas);

} // namespace rbm
