#pragma once

// Uncertainty relations written with the characteristic function
//   D(al) = < exp(al_i (x^i - <x^i>)) >,  al real.

#include "momentflow/moment_algebra.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace momentflow {

struct CharacteristicProvider {
    std::string kind;  // "gaussian" or "oracle"
    int dof = 1;
    std::function<double(const Eigen::VectorXd&)> D;
};

// Closed form exp(1/2 al^T G al) from the order-2 moments of a state. Throws
// DomainError (unsupported provider) if the state carries order-4 moments
// that are not those of a Gaussian.
CharacteristicProvider gaussian_provider(const SemiclassicalState& s, double tol = 1e-12);

// Covariance matrix G^{ij} in x = (q_1, p_1, ...) ordering.
Eigen::MatrixXd covariance(const SemiclassicalState& s);

// al_j be_k eps^{jk}
double symplectic_product(const Eigen::VectorXd& al, const Eigen::VectorXd& be);

// LHS - RHS of
//   (D(2a) - D(a)^2)(D(2b) - D(b)^2)
//     >= D(a+b)^2 - 2 cos(hbar/2 a x b) D(a+b) D(a) D(b) + D(a)^2 D(b)^2.
double check_uncertainty_generating(const CharacteristicProvider& prov, const Eigen::VectorXd& al,
                                    const Eigen::VectorXd& be, double hbar);

}  // namespace momentflow
