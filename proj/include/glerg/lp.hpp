#pragma once

#include <Eigen/Dense>

namespace glerg::lp {

struct Result {
    bool feasible = false;
    double value = 0.0;
    Eigen::VectorXd x;
};

// Over the box [0,1]^d with rows N.row(i)·x + off(i) >= -relax, maximise obj·x.
// Dense two-phase simplex with Bland's rule; meant for d and row counts in the tens.
Result maximize(const Eigen::MatrixXd& N, const Eigen::VectorXd& off, const Eigen::VectorXd& obj,
                double relax = 1e-9);

inline bool feasible(const Eigen::MatrixXd& N, const Eigen::VectorXd& off, double relax = 1e-9) {
    return maximize(N, off, Eigen::VectorXd::Zero(N.cols()), relax).feasible;
}

} // namespace glerg::lp
