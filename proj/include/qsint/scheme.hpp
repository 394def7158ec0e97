#pragma once

#include <set>
#include <string>
#include <vector>

#include "qsint/wordpoly.hpp"

namespace qsint {

// Sum of rational multiples of products of iterated integrals I_u. Factor
// multisets are kept sorted; the integral values commute as reals.
struct IntegralTerm {
    Rat coeff;
    std::vector<Word> factors;  // sorted
};

class IntegralExpr {
  public:
    IntegralExpr() = default;

    void add(Rat coeff, std::vector<Word> factors);
    IntegralExpr& operator+=(const IntegralExpr& e);
    IntegralExpr& operator*=(const Rat& c);

    bool is_zero() const { return terms_.empty(); }
    const std::vector<IntegralTerm>& terms() const { return terms_; }
    bool operator==(const IntegralExpr&) const = default;

    // I over a word polynomial: one single-factor term per monomial.
    static IntegralExpr from_poly(const WordPoly& p);
    static IntegralExpr single(const Word& w) { return from_poly(WordPoly(w)); }

  private:
    void normalize();
    std::vector<IntegralTerm> terms_;
};

enum class SchemeKind { TaylorWl, TaylorMs, Asri, Masri };

std::string scheme_kind_str(SchemeKind k);

struct SchemeRow {
    Word operator_word;
    IntegralExpr expr;
};

// Executable integration scheme: per operator word, the integral expression
// multiplying the corresponding operator value.
struct SchemeTable {
    SchemeKind kind;
    int order;
    std::vector<SchemeRow> rows;
    std::set<Word> required_integral_words;

    const SchemeRow* find(const Word& w) const;
};

// Stochastic Taylor truncation by word length: every word of length <= n.
SchemeTable taylor_wl(int n, const Alphabet& alphabet);

// Truncation by mean-square grade <= n, plus, for odd n, the deterministic
// augmentation row 0^(n*) with n* = (n+1)/2 that restores the global order.
SchemeTable taylor_ms(int n, const Alphabet& alphabet);

// Antisymmetric sign reverse integrator in direct form: Taylor rows of
// length <= n plus, at length n+1, correction rows built from products of
// shorter integrals and bracket words. Rows for single-letter powers a^(n+1)
// vanish identically when n is even and are emitted empty.
SchemeTable asri_direct(int n, const Alphabet& alphabet);

// For even n, restores the a^(n+1) rows through the exact expansion of
// I_(a^(n+1)) in products of strictly shorter integrals.
SchemeTable asri_modified(int n, const Alphabet& alphabet);

// I_(a^k) written over integrals of words shorter than k:
//   k I_(a^k) = sum_(m=1..k) (-1)^(m-1) I_(gamma_m) I_(a^(k-m)),
// gamma_m the m-fold bracket of a with itself (gamma_1 = a).
IntegralExpr reduce_repeated(const Letter& a, int k, const Alphabet& alphabet);

std::string serialize(const SchemeTable& table);
SchemeTable parse_scheme(const std::string& text, const Alphabet& alphabet);

}  // namespace qsint
