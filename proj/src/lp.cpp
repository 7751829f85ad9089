#include "glerg/lp.hpp"

#include <vector>

namespace glerg::lp {

namespace {

constexpr double kTol = 1e-11;

void pivot(Eigen::MatrixXd& T, int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i < T.rows(); ++i)
        if (i != r && T(i, c) != 0.0) T.row(i) -= T(i, c) * T.row(r);
}

// minimise with the last row as reduced costs; columns >= allowed never enter
void run(Eigen::MatrixXd& T, std::vector<int>& basis, int allowed) {
    const int m = static_cast<int>(T.rows()) - 1;
    const int rhs = static_cast<int>(T.cols()) - 1;
    for (int iter = 0; iter < 10000; ++iter) {
        int enter = -1;
        for (int j = 0; j < allowed; ++j)
            if (T(m, j) < -kTol) {
                enter = j;
                break;
            }
        if (enter < 0) return;
        int leave = -1;
        double best = 0.0;
        for (int i = 0; i < m; ++i) {
            if (T(i, enter) <= kTol) continue;
            double ratio = T(i, rhs) / T(i, enter);
            if (leave < 0 || ratio < best - kTol || (ratio < best + kTol && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) return; // unbounded; cannot happen inside the box
        pivot(T, leave, enter);
        basis[leave] = enter;
    }
}

} // namespace

Result maximize(const Eigen::MatrixXd& N, const Eigen::VectorXd& off, const Eigen::VectorXd& obj, double relax) {
    const int d = static_cast<int>(N.cols());
    const int rows = static_cast<int>(N.rows()) + d;
    // A x <= b rows: -N x <= off + relax, and x_j <= 1
    Eigen::MatrixXd A(rows, d);
    Eigen::VectorXd b(rows);
    A.topRows(N.rows()) = -N;
    b.head(N.rows()) = off.array() + relax;
    A.bottomRows(d).setIdentity();
    b.tail(d).setOnes();

    std::vector<int> neg;
    for (int i = 0; i < rows; ++i)
        if (b(i) < 0) neg.push_back(i);
    const int na = static_cast<int>(neg.size());
    const int cols = d + rows + na;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(rows + 1, cols + 1);
    std::vector<int> basis(rows);
    int k = 0;
    for (int i = 0; i < rows; ++i) {
        double s = b(i) < 0 ? -1.0 : 1.0;
        T.block(i, 0, 1, d) = s * A.row(i);
        T(i, d + i) = s;
        T(i, cols) = s * b(i);
        if (s < 0) {
            T(i, d + rows + k) = 1.0;
            basis[i] = d + rows + k;
            ++k;
        } else {
            basis[i] = d + i;
        }
    }
    if (na > 0) {
        // phase 1: minimise the sum of artificials
        for (int i = 0; i < rows; ++i)
            if (basis[i] >= d + rows) T.row(rows) -= T.row(i);
        for (int j = d + rows; j < cols; ++j) T(rows, j) = 0.0;
        run(T, basis, cols);
        if (-T(rows, cols) > 1e-9) return Result{};
        for (int i = 0; i < rows; ++i) {
            if (basis[i] < d + rows) continue;
            for (int j = 0; j < d + rows; ++j)
                if (std::abs(T(i, j)) > 1e-9) {
                    pivot(T, i, j);
                    basis[i] = j;
                    break;
                }
        }
    }
    // phase 2: minimise -obj·x
    T.row(rows).setZero();
    for (int j = 0; j < d; ++j) T(rows, j) = -obj(j);
    for (int i = 0; i < rows; ++i)
        if (basis[i] < d && obj(basis[i]) != 0.0) T.row(rows) += obj(basis[i]) * T.row(i);
    run(T, basis, d + rows);

    Result r;
    r.feasible = true;
    r.x = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < rows; ++i)
        if (basis[i] < d) r.x(basis[i]) = T(i, cols);
    r.value = obj.dot(r.x);
    return r;
}

} // namespace glerg::lp
