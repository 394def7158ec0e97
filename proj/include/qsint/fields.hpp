#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsint/drivers.hpp"
#include "qsint/jets.hpp"
#include "qsint/words.hpp"

namespace qsint {

// One autonomous vector field. Smooth fields must evaluate on jets exactly
// (the built-ins are analytic); linear fields expose their matrix so the
// operator engine can take the exact matrix-product route.
class VectorField {
  public:
    virtual ~VectorField() = default;
    virtual int dimension() const = 0;
    virtual void eval(const double* x, double* out) const = 0;
    virtual void eval(const TJet* x, TJet* out) const = 0;
    // row-major matrix when the field is linear
    virtual const std::vector<double>* matrix() const { return nullptr; }
};

std::shared_ptr<VectorField> make_linear_field(int dim, std::vector<double> row_major);
// (sin x1, cos x2, x4, -sin x3); dimension 4
std::shared_ptr<VectorField> make_trig4_field();
std::shared_ptr<VectorField> make_constant_field(std::vector<double> value);
std::shared_ptr<VectorField> make_zero_field(int dim);

// Registry for config-file field types. Builders receive the field's JSON
// fragment serialized as a string of row-major numbers where applicable.
using FieldBuilder =
    std::function<std::shared_ptr<VectorField>(int dim, const std::vector<double>& params)>;
void register_field(const std::string& name, FieldBuilder builder);
std::shared_ptr<VectorField> build_field(const std::string& name, int dim,
                                         const std::vector<double>& params);

struct JumpField {
    int index = 1;  // jump letter index
    std::shared_ptr<VectorField> field;
    JumpLaw law;
};

// Drift/diffusion/jump fields with the jump-size laws needed by the
// time-letter operator's compensator.
struct VectorFieldSet {
    int dimension = 0;
    std::shared_ptr<VectorField> drift;          // paired with the time letter
    std::vector<std::shared_ptr<VectorField>> wiener;  // index i -> wiener[i-1]
    std::vector<JumpField> jumps;
    int max_derivative_order = 4;

    const VectorField& wiener_field(int index) const;
    const JumpField& jump_field(int index) const;
};

// Composite operator value at a point: the word's letters act right to left,
// Wiener letters as first-order directional derivatives, unit-size jump
// letters as shifts, power letters as Taylor coefficients of the shift, and
// the time letter as drift + half the second-order diffusion part + the
// jump compensator. Words whose letters all carry linear fields reduce to an
// exact reversed matrix product.
std::vector<double> apply_word(const Word& w, const std::vector<double>& y,
                               const VectorFieldSet& fields);

// Reversed product matrix for all-linear words, when available.
std::optional<std::vector<double>> word_matrix(const Word& w, const VectorFieldSet& fields);

struct JetValidationReport {
    bool pass = true;
    // per derivative order 1..4: best relative error over the step sequence
    std::vector<double> best_error;
    // measured error decay exponents between successive steps (orders 3, 4)
    std::vector<double> slopes;
};

// Compares jet directional derivatives against central finite differences
// at steps {1e-3, 1e-4, 1e-5}: orders <= 2 must hit the tolerance, orders
// 3..order need only show the expected decay before roundoff.
JetValidationReport jet_validate(const VectorField& field, const std::vector<double>& y,
                                 int order = 4, double tolerance = 1e-6);

}  // namespace qsint
