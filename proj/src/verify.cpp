#include "qsint/verify.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace qsint {

std::shared_ptr<const Alphabet> verify_alphabet(int max_grade) {
    std::vector<JumpSpec> jumps(1);
    jumps[0].index = 1;
    jumps[0].intensity = 2;
    jumps[0].sizes = {{Rat(1), Rat(1)}};
    return std::make_shared<Alphabet>(1, std::move(jumps), max_grade);
}

std::vector<std::string> verify_suite_names() {
    return {"hopf", "orthogonality", "expectation", "efficiency-gap", "perturbation",
            "wl-vs-ms"};
}

namespace {

using Results = std::vector<CheckResult>;

void check(Results& out, const std::string& name, bool pass, std::string detail = "") {
    out.push_back({name, pass, std::move(detail)});
}

GradedEndo random_endo(std::shared_ptr<const WordBasis> basis, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, basis->size() - 1);
    std::uniform_int_distribution<int> coeff(-3, 3);
    GradedEndo e(basis);
    for (int i = 0; i < basis->size(); ++i) {
        WordPoly img;
        for (int t = 0; t < 2; ++t) {
            int c = coeff(rng);
            if (c != 0) img.add(basis->word(pick(rng)), Rat(c));
        }
        e.set_image(basis->word(i), std::move(img));
    }
    return e;
}

GradedEndo shuffle_conv_power(std::shared_ptr<const WordBasis> basis, int k) {
    GradedEndo J = make_aug_ideal(basis);
    GradedEndo acc = J;
    for (int i = 1; i < k; ++i) acc = convolve(acc, J, Product::Shuffle);
    return acc;
}

Results suite_hopf(const VerifyOptions& opts) {
    Results out;
    auto basis = std::make_shared<const WordBasis>(verify_alphabet(opts.max_grade),
                                                   opts.max_grade);
    GradedEndo id = make_identity(basis);
    GradedEndo antipode = make_antipode(basis, Product::QuasiShuffle);
    GradedEndo nu = make_nu(basis);
    check(out, "id (*) antipode = nu",
          convolve(id, antipode, Product::QuasiShuffle) == nu,
          std::to_string(basis->size()) + " basis words");
    check(out, "antipode (*) id = nu",
          convolve(antipode, id, Product::QuasiShuffle) == nu);
    GradedEndo S = make_sign_reversal(basis);
    check(out, "shuffle antipode = sign reversal",
          make_antipode(basis, Product::Shuffle) == S);
    return out;
}

Results suite_orthogonality(const VerifyOptions& opts) {
    Results out;
    auto alphabet = verify_alphabet(opts.max_grade);
    auto basis = std::make_shared<const WordBasis>(alphabet, opts.max_grade);
    GradedEndo id = make_identity(basis);
    GradedEndo S = make_sign_reversal(basis);
    GradedEndo R = make_reversal(basis);

    bool ok = true;
    for (int i = 0; i < basis->size(); ++i)
        ok = ok && (expectation(R.image(i)) == expectation(basis->word(i)));
    check(out, "(i) expectation after reversal = expectation", ok);

    ok = true;
    for (int i = 0; i < basis->size() && ok; ++i)
        for (int j = 0; j < basis->size() && ok; ++j) {
            const Word& u = basis->word(i);
            const Word& v = basis->word(j);
            if (u.size() + v.size() > opts.max_grade) continue;
            WordPoly lhs = R.apply(quasi_shuffle(u, v, *alphabet));
            WordPoly rhs = quasi_shuffle(WordPoly(u.reversed()), WordPoly(v.reversed()),
                                         *alphabet);
            ok = lhs == rhs;
        }
    check(out, "(ii) reversal is a quasi-shuffle automorphism", ok);

    bool ok3 = true, ok4 = true;
    for (int g = 0; g < opts.gram_count; ++g) {
        GramSpec gram = GramSpec::random(basis, opts.gram_seed + g);
        GradedEndo X = random_endo(basis, opts.gram_seed * 31 + 2 * g);
        GradedEndo Y = random_endo(basis, opts.gram_seed * 31 + 2 * g + 1);
        GradedEndo RX = compose(R, X), RY = compose(R, Y);
        ok3 = ok3 && (inner_product(RX, Y, gram) == inner_product(X, RY, gram));
        ok4 = ok4 && (inner_product(X, Y, gram) == inner_product(RX, RY, gram));
    }
    check(out, "(iii) reversal is self-adjoint", ok3,
          std::to_string(opts.gram_count) + " random Gram specs");
    check(out, "(iv) reversal is an isometry", ok4);

    bool ok5 = true, ok6 = true;
    for (int n : opts.grades) {
        for (int g = 0; g < opts.gram_count; ++g) {
            GramSpec gram = GramSpec::random(basis, opts.gram_seed + 97 * n + g);
            GradedEndo pid = project(id, Grading::WordLength, ProjMode::Eq, n);
            GradedEndo pS = project(S, Grading::WordLength, ProjMode::Eq, n);
            ok5 = ok5 && (inner_product(pS, pS, gram) == inner_product(pid, pid, gram));
            GradedEndo minus = project((id - S) * Rat(1, 2), Grading::WordLength,
                                       ProjMode::Eq, n);
            GradedEndo plus = project((id + S) * Rat(1, 2), Grading::WordLength,
                                      ProjMode::Eq, n);
            ok6 = ok6 && inner_product(minus, plus, gram).is_zero();
        }
    }
    check(out, "(v) sign reversal preserves the graded norm", ok5, "n = 1,2,3");
    check(out, "(vi) antisymmetric and symmetric halves are orthogonal", ok6, "n = 1,2,3");
    return out;
}

Results suite_expectation(const VerifyOptions& opts) {
    Results out;
    auto alphabet = verify_alphabet(opts.max_grade);
    auto basis = std::make_shared<const WordBasis>(alphabet, 3);
    bool dichotomy = true, cross = true, degree = true;
    for (int i = 0; i < basis->size(); ++i) {
        for (int j = 0; j < basis->size(); ++j) {
            const Word& u = basis->word(i);
            const Word& v = basis->word(j);
            TimePoly fast = expectation_product(u, v, *alphabet);
            TimePoly full = expectation(quasi_shuffle(u, v, *alphabet));
            cross = cross && (fast == full);
            bool same_red = reduce_word(u) == reduce_word(v);
            if (!same_red) {
                dichotomy = dichotomy && fast.is_zero();
            } else {
                dichotomy = dichotomy && !fast.is_zero();
                int want = (grade(u, Grading::MeanSquare) + grade(v, Grading::MeanSquare)) / 2;
                degree = degree && (fast.terms().size() == 1) &&
                         (fast.terms().begin()->first == want) &&
                         (fast.terms().begin()->second != 0);
            }
        }
    }
    check(out, "expectation of products matches the expanded quasi-shuffle", cross,
          "all pairs up to length 3");
    check(out, "zero exactly when the reduced words differ", dichotomy);
    check(out, "otherwise one monomial of mean-square half-degree", degree);
    return out;
}

Results suite_efficiency_gap(const VerifyOptions& opts) {
    Results out;
    auto basis = std::make_shared<const WordBasis>(verify_alphabet(opts.max_grade),
                                                   opts.max_grade);
    for (int n : opts.grades) {
        if (n + 1 > opts.max_grade) continue;
        bool ok = true;
        std::string detail;
        for (int g = 0; g < opts.gram_count && ok; ++g) {
            GramSpec gram = GramSpec::random(basis, opts.gram_seed + 131 * n + g);
            LeadingGap gap = leading_gap(n, gram);
            ok = (gap.taylor_sq == gap.asri_sq + gap.cross_part_sq);
            // norms are squares, so every coefficient is non-negative
            for (const auto& [k, c] : gap.asri_sq.terms()) ok = ok && c >= 0;
            for (const auto& [k, c] : gap.cross_part_sq.terms()) ok = ok && c >= 0;
            if (g == 0)
                detail = "taylor " + gap.taylor_sq.str() + "; asri " + gap.asri_sq.str() +
                         "; gap " + gap.cross_part_sq.str();
        }
        check(out, "leading error splits exactly at n = " + std::to_string(n), ok, detail);
    }
    return out;
}

Results suite_perturbation(const VerifyOptions& opts) {
    Results out;
    auto basis = std::make_shared<const WordBasis>(verify_alphabet(opts.max_grade),
                                                   opts.max_grade);
    GradedEndo id = make_identity(basis);
    GradedEndo R = make_reversal(basis);
    for (int n : {1, 3}) {
        if (n + 1 > opts.max_grade) continue;
        GradedEndo Z1 = shuffle_conv_power(basis, n + 1);
        GradedEndo Z2 = (id + R) * Rat(1, 2);
        bool ok = true;
        for (int g = 0; g < opts.gram_count && ok; ++g) {
            GramSpec gram = GramSpec::random(basis, opts.gram_seed + 57 * n + g);
            ok = perturbation_cross_term(n, Z1, gram).is_zero() &&
                 perturbation_cross_term(n, Z2, gram).is_zero();
        }
        check(out, "perturbation cross term vanishes at odd n = " + std::to_string(n), ok,
              "Z in {shuffle power, (id+|S|)/2}");
    }
    return out;
}

Results suite_wl_vs_ms(const VerifyOptions& opts) {
    Results out;
    auto basis = std::make_shared<const WordBasis>(verify_alphabet(opts.max_grade),
                                                   opts.max_grade);
    GradedEndo id = make_identity(basis);
    for (int n : opts.grades) {
        if (n + 1 > opts.max_grade) continue;
        // leading-grade slices of the two truncation remainders
        GradedEndo ms_lead = project(id, Grading::MeanSquare, ProjMode::Eq, n + 1);
        GradedEndo wl_lead = project(ms_lead, Grading::WordLength, ProjMode::Eq, n + 1);
        GradedEndo diff_lead = project(ms_lead, Grading::WordLength, ProjMode::Le, n);
        bool ok = true;
        for (int g = 0; g < opts.gram_count && ok; ++g) {
            GramSpec gram = GramSpec::random(basis, opts.gram_seed + 17 * n + g);
            TimePoly cross = inner_product(wl_lead, diff_lead, gram);
            ok = cross.is_zero();
            TimePoly ms_sq = inner_product(ms_lead, ms_lead, gram);
            TimePoly wl_sq = inner_product(wl_lead, wl_lead, gram);
            TimePoly diff_sq = inner_product(diff_lead, diff_lead, gram);
            ok = ok && (ms_sq - wl_sq == diff_sq);
            for (const auto& [k, c] : diff_sq.terms()) ok = ok && c >= 0;
        }
        check(out, "wl remainder beats ms remainder at leading grade, n = " +
                       std::to_string(n),
              ok);
    }
    return out;
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& opts) {
    if (suite == "hopf") return suite_hopf(opts);
    if (suite == "orthogonality") return suite_orthogonality(opts);
    if (suite == "expectation") return suite_expectation(opts);
    if (suite == "efficiency-gap") return suite_efficiency_gap(opts);
    if (suite == "perturbation") return suite_perturbation(opts);
    if (suite == "wl-vs-ms") return suite_wl_vs_ms(opts);
    throw std::invalid_argument("unknown verify suite: " + suite);
}

}  // namespace qsint
