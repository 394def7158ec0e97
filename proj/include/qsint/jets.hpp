#pragma once

#include <vector>

namespace qsint {

// Truncated Taylor polynomial in an ordered stack of nilpotent variables,
// each with its own truncation order. The operator engine pushes one fresh
// variable per directional derivative it needs, so shapes stay tiny (a few
// axes of order <= 2). Coefficients are stored densely in mixed radix with
// the first axis fastest.
class TJet {
  public:
    TJet() : ord_{}, c_{0.0} {}
    explicit TJet(double v) : ord_{}, c_{v} {}

    // jet representing the new innermost variable itself, given the shape
    // of the enclosing context plus the new axis
    static TJet variable(const std::vector<int>& shape);

    const std::vector<int>& shape() const { return ord_; }
    double value() const { return c_[0]; }
    int axes() const { return static_cast<int>(ord_.size()); }

    // broadcast to a larger shape of which the current one is a prefix
    TJet extended(const std::vector<int>& shape) const;
    // coefficient of (innermost variable)^k, one axis shorter
    TJet extract(int k) const;

    TJet operator-() const;
    TJet& operator+=(const TJet& o);
    TJet& operator-=(const TJet& o);
    TJet& operator*=(double s);
    friend TJet operator+(TJet a, const TJet& b) { return a += b; }
    friend TJet operator-(TJet a, const TJet& b) { return a -= b; }
    friend TJet operator*(TJet a, double s) { return a *= s; }
    friend TJet operator*(double s, TJet a) { return a *= s; }
    friend TJet operator*(const TJet& a, const TJet& b);

    friend TJet sin(const TJet& a);
    friend TJet cos(const TJet& a);
    friend TJet exp(const TJet& a);

  private:
    static std::vector<int> strides_of(const std::vector<int>& ord);
    void align(TJet& other) const;
    int total_order() const;
    // splits off the constant part: nilpotent remainder
    TJet nilpotent_part() const;

    std::vector<int> ord_;
    std::vector<double> c_;
};

using JetVec = std::vector<TJet>;

}  // namespace qsint
