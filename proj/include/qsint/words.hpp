#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsint/rational.hpp"

namespace qsint {

// A letter indexes one driving process: the time process, a Wiener process,
// or a compensated power bracket of a jump process. Jump(i,1) is the base
// compensated jump letter.
struct Letter {
    enum class Kind : uint8_t { Time = 0, Wiener = 1, Jump = 2 };

    Kind kind = Kind::Time;
    int index = 0;  // Wiener/Jump process index (>= 1); unused for Time
    int power = 0;  // Jump power bracket (>= 1); unused otherwise

    static Letter time() { return Letter{Kind::Time, 0, 0}; }
    static Letter wiener(int i) { return Letter{Kind::Wiener, i, 0}; }
    static Letter jump(int i, int p = 1) { return Letter{Kind::Jump, i, p}; }

    bool is_time() const { return kind == Kind::Time; }
    bool is_wiener() const { return kind == Kind::Wiener; }
    bool is_jump() const { return kind == Kind::Jump; }

    auto operator<=>(const Letter&) const = default;
};

std::string letter_str(const Letter& a);

// A word over the extended alphabet; the empty word is valid and acts as
// the unit of the quasi-shuffle product.
struct Word {
    std::vector<Letter> letters;

    Word() = default;
    explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}
    Word(std::initializer_list<Letter> ls) : letters(ls) {}

    int size() const { return static_cast<int>(letters.size()); }
    bool empty() const { return letters.empty(); }

    Word prefix(int n) const;          // first n letters
    Word suffix_from(int n) const;     // letters n..end
    Word append(const Letter& a) const;
    Word concat(const Word& v) const;
    Word reversed() const;

    auto operator<=>(const Word&) const = default;
};

std::string word_str(const Word& w);

enum class Grading { WordLength, MeanSquare };

// WordLength counts letters; MeanSquare counts time letters twice, matching
// the L2 scaling of the associated iterated integrals.
int grade(const Word& w, Grading g);

// Deletes time letters and maps every power bracket to its base jump letter.
Word reduce_word(const Word& w);

// One finite-support jump-size law: intensity per unit time plus weighted
// sizes. Weights must sum to one and all sizes be distinct and non-zero.
struct JumpSpec {
    int index = 1;
    Rat intensity = 1;
    std::vector<std::pair<Rat, Rat>> sizes;  // (size, weight)
};

struct LetterTerm {
    Letter letter;
    Rat coeff;
};

// The alphabet: d Wiener letters, jump letters closed under power brackets,
// and the time letter. Powers beyond the linearly independent range collapse
// onto the stored basis; the collapse is decided by an exact rank test on the
// process-coefficient vectors over (t, N_1, ..., N_R).
class Alphabet {
  public:
    Alphabet(int wiener_count, std::vector<JumpSpec> jumps, int max_grade);

    int wiener_count() const { return wiener_count_; }
    int max_grade() const { return max_grade_; }
    const std::vector<JumpSpec>& jump_specs() const { return jumps_; }
    const JumpSpec& jump_spec(int index) const;

    // All stored letters in canonical order (Time first).
    const std::vector<Letter>& letters() const { return letters_; }
    bool contains(const Letter& a) const;

    // Lévy-measure moment: intensity * sum_r weight_r * size_r^p.
    Rat moment_rate(int jump_index, int p) const;

    // Independent power brackets stored as letters for the given jump index.
    const std::vector<int>& stored_powers(int jump_index) const;

    // Expresses the p-th compensated power bracket over the stored letters.
    // The result is a combination of single jump letters (the time component
    // is always zero because all power brackets are martingales).
    std::vector<LetterTerm> collapse_power(int jump_index, int p) const;

    std::string render_word(const Word& w) const;
    Word parse_word(const std::string& s) const;

  private:
    struct JumpTable {
        JumpSpec spec;
        std::vector<int> stored;                       // independent powers
        mutable std::map<int, std::vector<LetterTerm>> collapse_cache;
    };

    const JumpTable& table(int index) const;
    std::vector<LetterTerm> solve_collapse(const JumpTable& jt, int p) const;

    int wiener_count_ = 0;
    int max_grade_ = 1;
    std::vector<JumpSpec> jumps_;
    std::vector<JumpTable> tables_;
    std::vector<Letter> letters_;
};

}  // namespace qsint
