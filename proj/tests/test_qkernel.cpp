#include <catch2/catch.hpp>

#include "test_helpers.hpp"

using namespace gme;

TEST_CASE("spin_projection on the coordinate axes") {
    const Eigen::Matrix2cd z = spin_projection({0, 0, 1});
    CHECK(z(0, 0) == Complex(1, 0));
    CHECK(z(0, 1) == Complex(0, 0));
    CHECK(z(1, 0) == Complex(0, 0));
    CHECK(z(1, 1) == Complex(-1, 0));

    const Eigen::Matrix2cd x = spin_projection({1, 0, 0});
    CHECK(x(0, 0) == Complex(0, 0));
    CHECK(x(0, 1) == Complex(1, 0));
    CHECK(x(1, 0) == Complex(1, 0));
    CHECK(x(1, 1) == Complex(0, 0));
}

TEST_CASE("spin_projection of a tilted direction has eigenvalues +-1") {
    const Vec3 n = {std::sin(M_PI / 4), 0.0, std::cos(M_PI / 4)};
    const Eigen::Matrix2cd m = spin_projection(n);
    const double inv_s2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(m(0, 0) - Complex(inv_s2, 0)) < 1e-15);
    CHECK(std::abs(m(0, 1) - Complex(inv_s2, 0)) < 1e-15);

    // direct 2x2 eigendecomposition as the oracle
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
    CHECK(es.eigenvalues()[0] == Approx(-1.0).margin(1e-12));
    CHECK(es.eigenvalues()[1] == Approx(1.0).margin(1e-12));
    CHECK(std::abs(m.trace()) < 1e-12);
    CHECK(std::abs(m.determinant() - Complex(-1, 0)) < 1e-12);
}

TEST_CASE("spin_projection rejects non-unit directions") {
    CHECK_THROWS_AS(spin_projection({0, 0, 1.001}), InvalidInput);
    CHECK_THROWS_AS(spin_projection({1, 1, 1}), InvalidInput);
    CHECK_NOTHROW(spin_projection({0, 0, 1.0 + 5e-10}));
}

TEST_CASE("spin_projection squares to the identity") {
    for (int i = 0; i < 50; ++i) {
        const Vec3 n = test::random_unit(100 + static_cast<std::uint64_t>(i));
        const Eigen::Matrix2cd m = spin_projection(n);
        CHECK((m * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("expectation_product basics") {
    const QuantumState zero3 = QuantumState::basis_state(3, 0);
    const std::vector<Eigen::Matrix2cd> zzz = {pauli::z(), pauli::z(), pauli::z()};
    CHECK(expectation_product(zero3, zzz) == Approx(1.0).margin(1e-14));

    const QuantumState ghz = QuantumState::ghz(3);
    const std::vector<Eigen::Matrix2cd> xxx = {pauli::x(), pauli::x(), pauli::x()};
    CHECK(expectation_product(ghz, xxx) == Approx(test::dense_expectation(ghz, xxx)).margin(1e-13));
    CHECK(expectation_product(ghz, xxx) == Approx(1.0).margin(1e-13));
    CHECK(expectation_product(ghz, zzz) == Approx(test::dense_expectation(ghz, zzz)).margin(1e-13));
    CHECK(expectation_product(ghz, zzz) == Approx(0.0).margin(1e-13));
}

TEST_CASE("expectation_product agrees with the dense product on random inputs") {
    for (int i = 0; i < 20; ++i) {
        const QuantumState psi = test::random_state(3, 7000 + static_cast<std::uint64_t>(i));
        std::vector<Eigen::Matrix2cd> ops;
        for (int j = 0; j < 3; ++j) {
            ops.push_back(spin_projection(
                test::random_unit(7100 + static_cast<std::uint64_t>(3 * i + j))));
        }
        CHECK(expectation_product(psi, ops) ==
              Approx(test::dense_expectation(psi, ops)).margin(1e-12));
    }
}

TEST_CASE("expectation_product input validation") {
    const QuantumState ghz = QuantumState::ghz(3);
    std::vector<Eigen::Matrix2cd> two = {pauli::z(), pauli::z()};
    CHECK_THROWS_AS(expectation_product(ghz, two), InvalidInput);

    Eigen::Matrix2cd bad;
    bad << 0, 1, 0, 0; // not Hermitian
    std::vector<Eigen::Matrix2cd> ops = {bad, pauli::z(), pauli::z()};
    CHECK_THROWS_AS(expectation_product(ghz, ops), InvalidInput);
}

TEST_CASE("expectation_product is multilinear in each slot") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 10; ++i) {
        const QuantumState psi = test::random_state(3, 7300 + static_cast<std::uint64_t>(i));
        const double alpha = 2.0 * detail::uniform01(rng) - 1.0;
        const double beta = 2.0 * detail::uniform01(rng) - 1.0;
        const Eigen::Matrix2cd mixed = alpha * pauli::x() + beta * pauli::y();
        const std::vector<Eigen::Matrix2cd> rest = {pauli::z(), pauli::x()};
        const std::vector<Eigen::Matrix2cd> with_mixed = {mixed, rest[0], rest[1]};
        const std::vector<Eigen::Matrix2cd> with_x = {pauli::x(), rest[0], rest[1]};
        const std::vector<Eigen::Matrix2cd> with_y = {pauli::y(), rest[0], rest[1]};
        const double lhs = expectation_product(psi, with_mixed);
        const double rhs = alpha * expectation_product(psi, with_x) +
                           beta * expectation_product(psi, with_y);
        CHECK(lhs == Approx(rhs).margin(1e-10));
    }
}

TEST_CASE("expectation_product with identities is 1 on any normalized state") {
    for (int i = 0; i < 10; ++i) {
        const QuantumState psi = test::random_state(4, 7600 + static_cast<std::uint64_t>(i));
        const std::vector<Eigen::Matrix2cd> ids(4, pauli::id());
        CHECK(expectation_product(psi, ids) == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("apply_local moves amplitudes as expected") {
    const QuantumState zero3 = QuantumState::basis_state(3, 0);
    const Eigen::VectorXcd flipped = apply_local(zero3, pauli::x(), 1);
    CHECK(std::abs(flipped[0b100] - Complex(1, 0)) < 1e-15);
    CHECK(flipped.norm() == Approx(1.0).margin(1e-15));

    const Eigen::VectorXcd same = apply_local(zero3, pauli::id(), 2);
    CHECK((same - zero3.amplitudes).norm() < 1e-15);

    QuantumState plus2;
    plus2.n_qubits = 3;
    plus2.amplitudes = Eigen::VectorXcd::Zero(8);
    plus2.amplitudes[0b000] = 1.0 / std::sqrt(2.0);
    plus2.amplitudes[0b010] = 1.0 / std::sqrt(2.0);
    const Eigen::VectorXcd signed_out = apply_local(plus2, pauli::z(), 2);
    CHECK(std::abs(signed_out[0b000] - Complex(1.0 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(signed_out[0b010] - Complex(-1.0 / std::sqrt(2.0), 0)) < 1e-15);

    CHECK_THROWS_AS(apply_local(zero3, pauli::x(), 0), InvalidInput);
    CHECK_THROWS_AS(apply_local(zero3, pauli::x(), 4), InvalidInput);
}

TEST_CASE("permute_qubits reorders tensor factors") {
    const QuantumState s = QuantumState::basis_state(3, 0b100);
    const std::vector<int> sigma = {2, 3, 1}; // new qubit k holds old qubit sigma[k-1]
    const QuantumState p = permute_qubits(s, sigma);
    // old qubit 1 carried the 1-bit; it lands on new qubit 3
    CHECK(std::abs(p.amplitudes[0b001] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("ground_eigenpair on simple matrices") {
    HermitianOperator diag;
    diag.entries = Eigen::MatrixXcd::Zero(2, 2);
    diag.entries(0, 0) = -1.0;
    diag.entries(1, 1) = 1.0;
    const GroundEigenpair g = ground_eigenpair(diag, 1e-9);
    CHECK(g.energy == Approx(-1.0).margin(1e-14));
    CHECK(g.gap == Approx(2.0).margin(1e-14));
    CHECK(std::abs(g.state.amplitudes[0] - Complex(1, 0)) < 1e-12);

    HermitianOperator sx;
    sx.entries = pauli::x();
    const GroundEigenpair gx = ground_eigenpair(sx, 1e-9);
    CHECK(gx.energy == Approx(-1.0).margin(1e-14));
    CHECK(gx.gap == Approx(2.0).margin(1e-14));
    // phase convention: leading amplitude real positive
    CHECK(gx.state.amplitudes[0].real() == Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
    CHECK(gx.state.amplitudes[1].real() == Approx(-1.0 / std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("ground_eigenpair flags degeneracy") {
    HermitianOperator H;
    H.entries = Eigen::MatrixXcd::Identity(4, 4);
    CHECK_THROWS_AS(ground_eigenpair(H, 1e-9), DegenerateGroundState);
}

TEST_CASE("ground_eigenpair satisfies the residual and Rayleigh contracts") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        const int dim = 16;
        Eigen::MatrixXcd A(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                A(r, c) = Complex(2.0 * detail::uniform01(rng) - 1.0,
                                  2.0 * detail::uniform01(rng) - 1.0);
            }
        }
        HermitianOperator H;
        H.entries = 0.5 * (A + A.adjoint());
        const GroundEigenpair g = ground_eigenpair(H, 0.0);

        const Eigen::VectorXcd& v = g.state.amplitudes;
        const double residual = (H.entries * v - g.energy * v).norm();
        CHECK(residual <= 1e-10 * H.entries.norm());

        const double rayleigh = (v.adjoint() * H.entries * v)(0, 0).real();
        CHECK(rayleigh == Approx(g.energy).margin(1e-10));

        for (int i = 0; i < 100; ++i) {
            Eigen::VectorXcd u(dim);
            for (int k = 0; k < dim; ++k) {
                u[k] = Complex(2.0 * detail::uniform01(rng) - 1.0,
                               2.0 * detail::uniform01(rng) - 1.0);
            }
            u.normalize();
            const double q = (u.adjoint() * H.entries * u)(0, 0).real();
            CHECK(g.energy <= q + 1e-12);
        }
    }
}

TEST_CASE("ground_eigenpair matches the closed-form 3-spin ground energy at h=1") {
    const HermitianOperator H = build_hamiltonian({3, 1.0});
    const GroundEigenpair g = ground_eigenpair(H, 1e-9);
    const QuantumState analytic = analytic_ground_state_3(1.0);
    const double rayleigh =
        (analytic.amplitudes.adjoint() * H.entries * analytic.amplitudes)(0, 0).real();
    CHECK(g.energy == Approx(rayleigh).margin(1e-10));
}
