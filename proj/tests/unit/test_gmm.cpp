// SPDX-License-Identifier: Apache-2.0
//
// urasim: uncoupled compressive-sensing unsourced random access simulator
// Copyright (C) 2026 The urasim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "doctest.h"

#include <cmath>

#include "ura/gmm.hpp"

using namespace ura;

namespace
{
    Eigen::MatrixXd gaussian_points(Eigen::Index n, Eigen::Index d, Rng &rng)
    {
        std::normal_distribution<double> N;
        Eigen::MatrixXd X(n, d);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                X(i, j) = N(rng);
        return X;
    }
}

TEST_CASE("single component is the sample mean and covariance")
{
    Rng rng(1);
    Eigen::MatrixXd X = gaussian_points(50, 3, rng);
    X.col(1) *= 3.0;
    X.col(2) += 0.5 * X.col(0);
    const auto m = gmm_em(X, 1, GmmConfig{}, rng);
    const Eigen::VectorXd mean = X.colwise().mean();
    const Eigen::MatrixXd C = X.rowwise() - mean.transpose();
    Eigen::MatrixXd cov = C.transpose() * C / 50.0;
    cov.diagonal().array() += m.cov_floor;
    CHECK(m.weights[0] == 1.0);
    CHECK((m.means[0] - mean).norm() < 1e-12);
    CHECK((m.covariances[0] - cov).norm() < 1e-10);
    // average per-dimension variance times the relative floor
    CHECK(m.cov_floor == doctest::Approx(1e-6 * cov.diagonal().sum() / 3.0).epsilon(1e-4));
    for (Eigen::Index i = 0; i < 50; ++i)
        CHECK(m.membership(i, 0) == 1.0);
}

TEST_CASE("well-separated clusters are assigned with certainty")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        Rng rng(seed);
        Eigen::MatrixXd X = gaussian_points(10, 4, rng);
        X.topRows(5).array() += 10.0;
        X.bottomRows(5).array() -= 10.0;
        const auto m = gmm_em(X, 2, GmmConfig{}, rng);
        const Eigen::Index a = m.means[0].sum() > 0.0 ? 0 : 1;
        for (Eigen::Index i = 0; i < 10; ++i)
            CHECK(m.membership(i, i < 5 ? a : 1 - a) >= 0.999);
    }
}

TEST_CASE("EM objective never decreases")
{
    std::uniform_int_distribution<int> K(2, 6);
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        Rng rng(100 + seed);
        const int k = K(rng);
        Eigen::MatrixXd X = gaussian_points(8 * k, 5, rng);
        std::normal_distribution<double> N(0.0, 3.0);
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            X.row(i).array() += N(rng) * double(i % k);
        GmmConfig cfg;
        cfg.diagonal = seed % 2 == 1;
        const auto m = gmm_em(X, std::size_t(k), cfg, rng);
        CHECK(m.reseeds == 0);
        for (std::size_t t = 1; t < m.objective.size(); ++t)
            CHECK(m.objective[t] >= m.objective[t - 1] - 1e-9 * std::abs(m.objective[t - 1]));
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            CHECK(std::abs(m.membership.row(i).sum() - 1.0) < 1e-9);
        double w = 0.0;
        for (double v : m.weights)
            w += v;
        CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("diagonal mode keeps covariances diagonal")
{
    Rng rng(3);
    const Eigen::MatrixXd X = gaussian_points(40, 3, rng);
    GmmConfig cfg;
    cfg.diagonal = true;
    const auto m = gmm_em(X, 3, cfg, rng);
    for (const auto &C : m.covariances)
    {
        Eigen::MatrixXd off = C;
        off.diagonal().setZero();
        CHECK(off.norm() == 0.0);
        CHECK(C.diagonal().minCoeff() >= m.cov_floor);
    }
}

TEST_CASE("k-means++ seeding picks distinct points and follows the distance weighting")
{
    Rng rng(9);
    Eigen::MatrixXd X(3, 1);
    X << 0.0, 0.0, 100.0;
    int far = 0;
    for (int i = 0; i < 200; ++i)
    {
        const auto s = kmeans_pp_seeds(X, 2, rng);
        CHECK(s.size() == 2);
        CHECK(s[0] != s[1]);
        far += s[0] == 2 || s[1] == 2;
    }
    CHECK(far == 200);
}

TEST_CASE("duplicate points do not break EM")
{
    Rng rng(4);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(6, 2);
    X.row(5) << 1.0, 1.0;
    const auto m = gmm_em(X, 3, GmmConfig{}, rng);
    for (Eigen::Index i = 0; i < 6; ++i)
        CHECK(std::abs(m.membership.row(i).sum() - 1.0) < 1e-9);
    CHECK(std::isfinite(m.log_likelihood));
}

TEST_CASE("invalid arguments")
{
    Rng rng(1);
    const Eigen::MatrixXd X = gaussian_points(3, 2, rng);
    CHECK_THROWS_AS(gmm_em(X, 4, GmmConfig{}, rng), std::invalid_argument);
    CHECK_THROWS_AS(gmm_em(X, 0, GmmConfig{}, rng), std::invalid_argument);
    GmmConfig bad;
    bad.tol = -1.0;
    CHECK_THROWS_AS(gmm_em(X, 2, bad, rng), std::invalid_argument);
}
