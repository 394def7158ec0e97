#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qsint/wordpoly.hpp"

namespace qsint {

enum class Product { QuasiShuffle, Shuffle };

// The finite graded word basis: all words of word-length <= max_grade over
// the alphabet's letters, in (length, lexicographic) order.
class WordBasis {
  public:
    WordBasis(std::shared_ptr<const Alphabet> alphabet, int max_grade);

    const Alphabet& alphabet() const { return *alphabet_; }
    std::shared_ptr<const Alphabet> alphabet_ptr() const { return alphabet_; }
    int max_grade() const { return max_grade_; }
    int size() const { return static_cast<int>(words_.size()); }
    const std::vector<Word>& words() const { return words_; }
    const Word& word(int i) const { return words_[i]; }
    int index(const Word& w) const;  // -1 when absent

  private:
    std::shared_ptr<const Alphabet> alphabet_;
    int max_grade_;
    std::vector<Word> words_;
    std::map<Word, int> index_;
};

// Linear map on the span of the basis words, stored extensionally. Images
// are truncated to the basis; dropping a non-zero contribution sets the
// truncated flag, and grade-(n+1) norm computations refuse flagged input.
class GradedEndo {
  public:
    explicit GradedEndo(std::shared_ptr<const WordBasis> basis);

    const WordBasis& basis() const { return *basis_; }
    std::shared_ptr<const WordBasis> basis_ptr() const { return basis_; }
    bool truncated() const { return truncated_; }

    const WordPoly& image(int i) const { return images_[i]; }
    const WordPoly& image(const Word& w) const;
    void set_image(const Word& w, WordPoly p);

    WordPoly apply(const WordPoly& p) const;

    GradedEndo& operator+=(const GradedEndo& g);
    GradedEndo& operator-=(const GradedEndo& g);
    GradedEndo& operator*=(const Rat& c);
    friend GradedEndo operator+(GradedEndo a, const GradedEndo& b) { return a += b; }
    friend GradedEndo operator-(GradedEndo a, const GradedEndo& b) { return a -= b; }
    friend GradedEndo operator*(GradedEndo a, const Rat& c) { return a *= c; }
    friend GradedEndo operator*(const Rat& c, GradedEndo a) { return a *= c; }
    bool operator==(const GradedEndo& g) const { return images_ == g.images_; }

    std::string dump() const;  // one "w -> polynomial" line per basis word

  private:
    friend GradedEndo convolve(const GradedEndo&, const GradedEndo&, Product);
    std::shared_ptr<const WordBasis> basis_;
    std::vector<WordPoly> images_;
    bool truncated_ = false;
};

GradedEndo make_nu(std::shared_ptr<const WordBasis> basis);
GradedEndo make_identity(std::shared_ptr<const WordBasis> basis);
GradedEndo make_aug_ideal(std::shared_ptr<const WordBasis> basis);
GradedEndo make_reversal(std::shared_ptr<const WordBasis> basis);       // |S|
GradedEndo make_sign_reversal(std::shared_ptr<const WordBasis> basis);  // S
// Quasi-shuffle antipode: signed sum over all factorizations of the reversed
// word into non-empty blocks, each block replaced by its iterated bracket.
// For the shuffle product the antipode coincides with the sign reversal.
GradedEndo make_antipode(std::shared_ptr<const WordBasis> basis, Product product);

// (F * G)(w) = sum over deconcatenations uv = w of F(u) * G(v).
GradedEndo convolve(const GradedEndo& F, const GradedEndo& G, Product product);

// Composition (F o G)(w) = F(G(w)).
GradedEndo compose(const GradedEndo& F, const GradedEndo& G);

// sum_k coeffs[k] Y^(*k) with Y = X when X kills the empty word and
// Y = X - nu when X fixes it (series around the convolution unit). The
// nilpotency of Y on the graded space makes the sum finite and exact.
GradedEndo conv_series(const std::vector<Rat>& coeffs, const GradedEndo& X, Product product);

// Power series coefficients c_0..c_n of standard maps of 1+x.
std::vector<Rat> coshlog_coeffs(int n);  // 1, 0, 1/2, -1/2, 1/2, ...
std::vector<Rat> sinhlog_coeffs(int n);  // 0, 1, -1/2, 1/2, -1/2, ...
std::vector<Rat> log_coeffs(int n);      // 0, 1, -1/2, 1/3, ...

enum class ProjMode { Eq, Le, Ge };

// Input-side projection: zeroes F on basis words whose grade is outside the
// selected set. set output_side to project the image polynomials instead.
GradedEndo project(const GradedEndo& F, Grading grading, ProjMode mode, int n,
                   bool output_side = false);

// Indeterminate vectors indexed by words; (u,v) is the Euclidean pairing, so
// the induced Gram matrix is symmetric positive semidefinite.
class GramSpec {
  public:
    GramSpec(std::shared_ptr<const WordBasis> basis, int dim,
             std::vector<std::vector<Rat>> vectors);

    // dim = basis size, entries uniform over {-range..range}, seeded.
    static GramSpec random(std::shared_ptr<const WordBasis> basis, uint64_t seed,
                           int range = 9);
    static GramSpec zero(std::shared_ptr<const WordBasis> basis, int dim = 1);

    const WordBasis& basis() const { return *basis_; }
    std::shared_ptr<const WordBasis> basis_ptr() const { return basis_; }
    int dim() const { return dim_; }
    Rat pairing(int u, int v) const;

  private:
    std::shared_ptr<const WordBasis> basis_;
    int dim_;
    std::vector<std::vector<Rat>> vectors_;
    mutable std::map<std::pair<int, int>, Rat> cache_;
};

// <F, G> = sum over basis pairs (u, v) of E(F(u) * G(v)) (u, v).
TimePoly inner_product(const GradedEndo& F, const GradedEndo& G, const GramSpec& gram);

// Expectation matrix E(F(u) * G(v)); reusable across Gram specs.
class InnerProductKernel {
  public:
    InnerProductKernel(const GradedEndo& F, const GradedEndo& G);
    TimePoly apply(const GramSpec& gram) const;

  private:
    std::shared_ptr<const WordBasis> basis_;
    std::vector<std::pair<std::pair<int, int>, TimePoly>> entries_;
};

// Squared norms at word length n+1 of the flowmap identity and of the two
// halves (id -+ S)/2; the first equals the sum of the other two exactly.
struct LeadingGap {
    TimePoly taylor_sq;
    TimePoly asri_sq;
    TimePoly cross_part_sq;
};
LeadingGap leading_gap(int n, const GramSpec& gram);

// <pi_(wl=n+1) (id-S)/2, pi_(wl=n+1) Z> for odd n and a perturbation Z with
// |S| o Z = Z on words of length n+1 (checked).
TimePoly perturbation_cross_term(int n, const GradedEndo& Z, const GramSpec& gram);

}  // namespace qsint
