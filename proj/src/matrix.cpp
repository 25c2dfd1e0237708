#include "meln/matrix.hpp"

namespace meln {

QMat QMat::identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMat QMat::operator+(const QMat& o) const {
    QMat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
    return m;
}

QMat QMat::operator-(const QMat& o) const {
    QMat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
    return m;
}

QMat QMat::operator*(const QMat& o) const {
    QMat m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            const Rat& aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < o.c_; ++j) m.at(i, j) += aik * o.at(k, j);
        }
    return m;
}

QMat QMat::scaled(const Rat& s) const {
    QMat m(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
    return m;
}

QMat QMat::transpose() const {
    QMat m(c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) m.at(j, i) = at(i, j);
    return m;
}

namespace {

// Reduced row echelon form in place; returns pivot columns in order.
std::vector<int> rref(QMat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int p = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m.at(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.cols(); ++j) swap(m.at(p, j), m.at(row, j));
        Rat inv = Rat(1) / m.at(row, col);
        for (int j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            Rat f = m.at(i, col);
            for (int j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

int QMat::rank() const {
    QMat m = *this;
    return static_cast<int>(rref(m).size());
}

QMat QMat::inverse() const {
    if (r_ != c_) throw SingularMatrix("inverse of non-square matrix");
    QMat aug(r_, 2 * c_);
    for (int i = 0; i < r_; ++i) {
        for (int j = 0; j < c_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, c_ + i) = 1;
    }
    auto pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != r_ || pivots.back() >= c_)
        throw SingularMatrix("matrix is singular");
    QMat inv(r_, c_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) inv.at(i, j) = aug.at(i, c_ + j);
    return inv;
}

std::vector<std::vector<Rat>> QMat::nullspace() const {
    QMat m = *this;
    auto pivots = rref(m);
    std::vector<bool> is_pivot(static_cast<size_t>(c_), false);
    for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;

    std::vector<std::vector<Rat>> basis;
    for (int f = 0; f < c_; ++f) {
        if (is_pivot[static_cast<size_t>(f)]) continue;
        std::vector<Rat> v(static_cast<size_t>(c_), Rat(0));
        v[static_cast<size_t>(f)] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[static_cast<size_t>(pivots[r])] = -m.at(static_cast<int>(r), f);
        // primitive integer normalization, first nonzero entry positive
        mpz_class lcm = 1;
        for (const auto& x : v)
            if (x != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
        Rat g(0);
        for (auto& x : v) {
            x *= Rat(lcm);
            g = rat_gcd(g, x);
        }
        if (g != 0 && g != 1)
            for (auto& x : v) x /= g;
        for (const auto& x : v) {
            if (x == 0) continue;
            if (x < 0)
                for (auto& y : v) y = -y;
            break;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace meln
