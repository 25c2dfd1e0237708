#pragma once

#include <vector>

#include "meln/rational.hpp"

namespace meln {

// Dense exact rational matrix.
class QMat {
  public:
    QMat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, Rat(0)) {}
    static QMat identity(int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Rat& at(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const Rat& at(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    QMat operator+(const QMat& o) const;
    QMat operator-(const QMat& o) const;
    QMat operator*(const QMat& o) const;
    QMat scaled(const Rat& s) const;
    bool operator==(const QMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    QMat transpose() const;
    int rank() const;
    QMat inverse() const;  // SingularMatrix if not invertible

    // Exact right-nullspace basis, deterministic: free columns are taken left to
    // right, each basis vector normalized to primitive integers with its first
    // nonzero entry positive. Empty when the kernel is trivial.
    std::vector<std::vector<Rat>> nullspace() const;

  private:
    int r_, c_;
    std::vector<Rat> a_;
};

}  // namespace meln
