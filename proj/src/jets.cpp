#include "qsint/jets.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsint {

std::vector<int> TJet::strides_of(const std::vector<int>& ord) {
    std::vector<int> s(ord.size() + 1);
    s[0] = 1;
    for (size_t k = 0; k < ord.size(); ++k) s[k + 1] = s[k] * (ord[k] + 1);
    return s;
}

TJet TJet::variable(const std::vector<int>& shape) {
    if (shape.empty() || shape.back() < 1)
        throw std::invalid_argument("variable needs a final axis of order >= 1");
    TJet j;
    j.ord_ = shape;
    auto strides = strides_of(shape);
    j.c_.assign(strides.back(), 0.0);
    j.c_[strides[shape.size() - 1]] = 1.0;  // exponent 1 on the innermost axis
    return j;
}

TJet TJet::extended(const std::vector<int>& shape) const {
    for (size_t k = 0; k < ord_.size(); ++k)
        if (k >= shape.size() || shape[k] != ord_[k])
            throw std::invalid_argument("jet shape is not a prefix of the target");
    TJet j;
    j.ord_ = shape;
    auto strides = strides_of(shape);
    j.c_.assign(strides.back(), 0.0);
    std::copy(c_.begin(), c_.end(), j.c_.begin());
    return j;
}

TJet TJet::extract(int k) const {
    if (ord_.empty()) {
        if (k == 0) return *this;
        return TJet(0.0);
    }
    if (k > ord_.back()) return TJet(0.0);
    TJet j;
    j.ord_ = std::vector<int>(ord_.begin(), ord_.end() - 1);
    auto strides = strides_of(ord_);
    int block = strides[ord_.size() - 1];
    j.c_.assign(c_.begin() + static_cast<long>(k) * block,
                c_.begin() + static_cast<long>(k + 1) * block);
    return j;
}

void TJet::align(TJet& other) const {
    if (other.ord_.size() < ord_.size()) other = other.extended(ord_);
}

TJet TJet::operator-() const {
    TJet j = *this;
    for (auto& x : j.c_) x = -x;
    return j;
}

TJet& TJet::operator+=(const TJet& o) {
    if (o.ord_.size() > ord_.size()) {
        *this = extended(o.ord_);
    }
    TJet rhs = o;
    align(rhs);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
    return *this;
}

TJet& TJet::operator-=(const TJet& o) {
    if (o.ord_.size() > ord_.size()) {
        *this = extended(o.ord_);
    }
    TJet rhs = o;
    align(rhs);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
    return *this;
}

TJet& TJet::operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
}

TJet operator*(const TJet& a, const TJet& b) {
    const TJet* pa = &a;
    const TJet* pb = &b;
    TJet ea, eb;
    if (a.ord_.size() < b.ord_.size()) {
        ea = a.extended(b.ord_);
        pa = &ea;
    } else if (b.ord_.size() < a.ord_.size()) {
        eb = b.extended(a.ord_);
        pb = &eb;
    }
    const auto& ord = pa->ord_;
    TJet out;
    out.ord_ = ord;
    out.c_.assign(pa->c_.size(), 0.0);
    const int n = static_cast<int>(ord.size());
    auto strides = TJet::strides_of(ord);
    // multi-index convolution with per-axis caps
    std::vector<int> ia(n, 0);
    for (size_t lin_a = 0; lin_a < pa->c_.size(); ++lin_a) {
        if (pa->c_[lin_a] != 0.0) {
            std::vector<int> ib(n, 0);
            for (size_t lin_b = 0; lin_b < pb->c_.size(); ++lin_b) {
                if (pb->c_[lin_b] != 0.0) {
                    bool ok = true;
                    size_t lin_o = 0;
                    for (int k = 0; k < n; ++k) {
                        int s = ia[k] + ib[k];
                        if (s > ord[k]) {
                            ok = false;
                            break;
                        }
                        lin_o += static_cast<size_t>(s) * strides[k];
                    }
                    if (ok) out.c_[lin_o] += pa->c_[lin_a] * pb->c_[lin_b];
                }
                // increment ib
                for (int k = 0; k < n; ++k) {
                    if (++ib[k] <= ord[k]) break;
                    ib[k] = 0;
                }
            }
        }
        for (int k = 0; k < n; ++k) {
            if (++ia[k] <= ord[k]) break;
            ia[k] = 0;
        }
    }
    return out;
}

int TJet::total_order() const {
    return std::accumulate(ord_.begin(), ord_.end(), 0);
}

TJet TJet::nilpotent_part() const {
    TJet j = *this;
    j.c_[0] = 0.0;
    return j;
}

// f(a0 + n) expands through the finite series in the nilpotent part n,
// truncated at the total order of the shape.

TJet sin(const TJet& a) {
    double a0 = a.value();
    TJet n = a;
    n -= TJet(a0);
    int P = 0;
    for (int o : a.shape()) P += o;
    TJet out(std::sin(a0));
    TJet npow(1.0);
    double fact = 1.0;
    static const auto cyc = [](int k, double s, double c) {
        switch (k % 4) {
            case 0: return s;
            case 1: return c;
            case 2: return -s;
            default: return -c;
        }
    };
    double s0 = std::sin(a0), c0 = std::cos(a0);
    for (int k = 1; k <= P; ++k) {
        npow = npow * n;
        fact *= k;
        out += npow * (cyc(k, s0, c0) / fact);
    }
    return out;
}

TJet cos(const TJet& a) {
    double a0 = a.value();
    TJet n = a;
    n -= TJet(a0);
    int P = 0;
    for (int o : a.shape()) P += o;
    TJet out(std::cos(a0));
    TJet npow(1.0);
    double fact = 1.0;
    double s0 = std::sin(a0), c0 = std::cos(a0);
    auto dcos = [&](int k) {
        switch (k % 4) {
            case 0: return c0;
            case 1: return -s0;
            case 2: return -c0;
            default: return s0;
        }
    };
    for (int k = 1; k <= P; ++k) {
        npow = npow * n;
        fact *= k;
        out += npow * (dcos(k) / fact);
    }
    return out;
}

TJet exp(const TJet& a) {
    double a0 = a.value();
    TJet n = a;
    n -= TJet(a0);
    int P = 0;
    for (int o : a.shape()) P += o;
    double e0 = std::exp(a0);
    TJet out(e0);
    TJet npow(1.0);
    double fact = 1.0;
    for (int k = 1; k <= P; ++k) {
        npow = npow * n;
        fact *= k;
        out += npow * (e0 / fact);
    }
    return out;
}

}  // namespace qsint
