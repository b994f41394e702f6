// Cross-checks of the dense kernel against Eigen's decompositions.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "conric/matrix.hpp"
#include "support/oracles.hpp"

using namespace conric;

namespace {

using EMatrix = Eigen::MatrixXcd;

EMatrix to_eigen(const CMatrix& a) {
    EMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m(i, j) = a(i, j);
        }
    }
    return m;
}

double eigen_rho(const CMatrix& a) {
    const Eigen::ComplexEigenSolver<EMatrix> es(to_eigen(a), false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST(KernelOracle, HermitianEigenvalues) {
    oracle::Random rng(211);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = rng.index(1, 10);
        const CMatrix h = hermitian_part(rng.gaussian(n, n));
        const auto ours = hermitian_eigen(h).values;
        const Eigen::SelfAdjointEigenSolver<EMatrix> es(to_eigen(h));
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(ours[i], es.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-10);
        }
    }
}

TEST(KernelOracle, SingularValues) {
    oracle::Random rng(223);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = rng.index(1, 10);
        const CMatrix a = rng.gaussian(n, n);
        const Eigen::JacobiSVD<EMatrix> svd(to_eigen(a));
        const auto& s = svd.singularValues();
        EXPECT_NEAR(op_norm_2(a), s(0), 1e-10 * s(0));
        EXPECT_NEAR(smallest_singular_value(a), s(s.size() - 1), 1e-9 * s(0));
    }
}

TEST(KernelOracle, SpectralRadius) {
    oracle::Random rng(227);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = rng.index(1, 10);
        const CMatrix a = rng.gaussian(n, n, t % 3 == 0);
        const double want = eigen_rho(a);
        EXPECT_NEAR(spectral_radius(a), want, 1e-10 * std::max(1.0, want)) << "n=" << n;
        const CMatrix aa = a * conj(a);
        const double want_aa = eigen_rho(aa);
        EXPECT_NEAR(spectral_radius(aa), want_aa, 1e-10 * std::max(1.0, want_aa));
    }
}

TEST(KernelOracle, SpectralRadiusOfJordanBlocks) {
    for (std::size_t n = 2; n <= 10; ++n) {
        CMatrix j = CMatrix::identity(n);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            j(i, i + 1) = 1.0;
        }
        EXPECT_NEAR(spectral_radius(j), 1.0, 1e-10) << "n=" << n;
    }
}

TEST(KernelOracle, InverseAndSquareRoot) {
    oracle::Random rng(229);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = rng.index(1, 8);
        const CMatrix a = rng.gaussian(n, n);
        const EMatrix inv = to_eigen(a).inverse();
        const double scale = std::max(1.0, inv.cwiseAbs().maxCoeff());
        EXPECT_LE((to_eigen(mat_inverse(a)) - inv).cwiseAbs().maxCoeff(), 1e-9 * scale);

        const CMatrix h = hermitian_part(a * adjoint(a));
        const Eigen::SelfAdjointEigenSolver<EMatrix> es(to_eigen(h));
        const EMatrix root = es.operatorSqrt();
        EXPECT_LE((to_eigen(psd_sqrt(h)) - root).cwiseAbs().maxCoeff(),
                  1e-9 * std::max(1.0, root.cwiseAbs().maxCoeff()));
    }
}
