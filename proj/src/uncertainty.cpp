#include "momentflow/uncertainty.hpp"

#include "momentflow/errors.hpp"

#include <cmath>

namespace momentflow {

Eigen::MatrixXd covariance(const SemiclassicalState& s) {
    const int N = s.dof();
    Eigen::MatrixXd G(2 * N, 2 * N);
    for (int i = 0; i < 2 * N; ++i)
        for (int j = 0; j < 2 * N; ++j) {
            std::vector<int> q(N, 0), p(N, 0);
            (i % 2 == 0 ? q : p)[i / 2] += 1;
            (j % 2 == 0 ? q : p)[j / 2] += 1;
            G(i, j) = s.get(MomentIndex(q, p));
        }
    return G;
}

CharacteristicProvider gaussian_provider(const SemiclassicalState& s, double tol) {
    const Eigen::MatrixXd G = covariance(s);
    const int N = s.dof();
    // Any order-4 moment present must factorize like a Gaussian: the
    // coefficient of al^A in exp(al G al / 2) times A!.
    for (auto& [idx, val] : s.moments) {
        if (idx.order() != 4 && idx.order() != 3) continue;
        double expect = 0.0;
        if (idx.order() == 4) {
            std::vector<int> slots;
            for (int f = 0; f < N; ++f) {
                for (int k = 0; k < idx.q[f]; ++k) slots.push_back(2 * f);
                for (int k = 0; k < idx.p[f]; ++k) slots.push_back(2 * f + 1);
            }
            expect = G(slots[0], slots[1]) * G(slots[2], slots[3]) +
                     G(slots[0], slots[2]) * G(slots[1], slots[3]) +
                     G(slots[0], slots[3]) * G(slots[1], slots[2]);
        }
        if (std::abs(val - expect) > tol * (1.0 + std::abs(expect)))
            throw DomainError("unsupported provider: state is not Gaussian at " + idx.str());
    }
    CharacteristicProvider prov;
    prov.kind = "gaussian";
    prov.dof = N;
    prov.D = [G](const Eigen::VectorXd& al) { return std::exp(0.5 * al.dot(G * al)); };
    return prov;
}

double symplectic_product(const Eigen::VectorXd& al, const Eigen::VectorXd& be) {
    double w = 0.0;
    for (Eigen::Index f = 0; 2 * f + 1 < al.size(); ++f)
        w += al(2 * f) * be(2 * f + 1) - al(2 * f + 1) * be(2 * f);
    return w;
}

double check_uncertainty_generating(const CharacteristicProvider& prov, const Eigen::VectorXd& al,
                                    const Eigen::VectorXd& be, double hbar) {
    if (!prov.D) throw DomainError("unsupported provider: no characteristic function");
    const double Da = prov.D(al), Db = prov.D(be), Dab = prov.D(al + be);
    const double D2a = prov.D(2.0 * al), D2b = prov.D(2.0 * be);
    const double c = std::cos(0.5 * hbar * symplectic_product(al, be));
    const double lhs = (D2a - Da * Da) * (D2b - Db * Db);
    const double rhs = Dab * Dab - 2.0 * c * Dab * Da * Db + Da * Da * Db * Db;
    return lhs - rhs;
}

}  // namespace momentflow
