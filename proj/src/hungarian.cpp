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

#include "ura/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ura
{
    namespace
    {
        void check_cost(const Eigen::MatrixXd &cost)
        {
            if (cost.rows() != cost.cols())
                throw std::invalid_argument("hungarian: cost matrix must be square");
            if (!cost.allFinite())
                throw std::invalid_argument("hungarian: cost matrix must be finite");
        }

        // Alternating-path search over tight edges. Tries to give `row` a column other
        // than its current one, never touching rows marked in `locked`.
        bool rematch(std::size_t row, const std::vector<std::vector<std::size_t>> &adj,
                     std::vector<std::size_t> &row_to_col, std::vector<std::size_t> &col_to_row,
                     const std::vector<char> &locked, std::vector<char> &seen, std::size_t target)
        {
            for (std::size_t c : adj[row])
            {
                if (seen[c] || c == row_to_col[row])
                    continue;
                seen[c] = 1;
                const std::size_t other = col_to_row[c];
                if (c == target || (!locked[other] && rematch(other, adj, row_to_col, col_to_row, locked, seen, target)))
                {
                    row_to_col[row] = c;
                    col_to_row[c] = row;
                    return true;
                }
            }
            return false;
        }
    }

    Assignment hungarian(const Eigen::MatrixXd &cost)
    {
        check_cost(cost);
        const std::size_t n = static_cast<std::size_t>(cost.rows());
        Assignment out;
        if (n == 0)
            return out;

        // Shortest augmenting path with potentials (1-based, column 0 is a sentinel).
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
        std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
        for (std::size_t i = 1; i <= n; ++i)
        {
            p[0] = i;
            std::size_t j0 = 0;
            std::vector<double> minv(n + 1, inf);
            std::vector<char> used(n + 1, 0);
            do
            {
                used[j0] = 1;
                const std::size_t i0 = p[j0];
                double delta = inf;
                std::size_t j1 = 0;
                for (std::size_t j = 1; j <= n; ++j)
                {
                    if (used[j])
                        continue;
                    const double cur = cost(Eigen::Index(i0 - 1), Eigen::Index(j - 1)) - u[i0] - v[j];
                    if (cur < minv[j])
                    {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta)
                    {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for (std::size_t j = 0; j <= n; ++j)
                {
                    if (used[j])
                    {
                        u[p[j]] += delta;
                        v[j] -= delta;
                    }
                    else
                        minv[j] -= delta;
                }
                j0 = j1;
            } while (p[j0] != 0);
            do
            {
                const std::size_t j1 = way[j0];
                p[j0] = p[j1];
                j0 = j1;
            } while (j0 != 0);
        }

        std::vector<std::size_t> row_to_col(n), col_to_row(n);
        for (std::size_t j = 1; j <= n; ++j)
        {
            row_to_col[p[j] - 1] = j - 1;
            col_to_row[j - 1] = p[j] - 1;
        }

        // Optimal assignments are exactly the perfect matchings on edges with zero
        // reduced cost under the optimal duals. Fix rows in order to the smallest column
        // that still admits a completion.
        const double tol = 1e-9 * (1.0 + cost.cwiseAbs().maxCoeff());
        std::vector<std::vector<std::size_t>> adj(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (cost(Eigen::Index(i), Eigen::Index(j)) - u[i + 1] - v[j + 1] <= tol)
                    adj[i].push_back(j);

        std::vector<char> locked(n, 0), seen(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t c : adj[i])
            {
                if (c >= row_to_col[i])
                    break;
                const std::size_t other = col_to_row[c];
                if (locked[other])
                    continue;
                // Give `other` a new column via an alternating path that ends by taking
                // over row i's current column.
                auto r2c = row_to_col;
                auto c2r = col_to_row;
                std::fill(seen.begin(), seen.end(), 0);
                std::vector<char> lk = locked;
                lk[i] = 1;
                seen[c] = 1;
                const std::size_t freed = row_to_col[i];
                if (rematch(other, adj, r2c, c2r, lk, seen, freed))
                {
                    r2c[i] = c;
                    c2r[c] = i;
                    row_to_col = std::move(r2c);
                    col_to_row = std::move(c2r);
                    break;
                }
            }
            locked[i] = 1;
        }

        out.perm = row_to_col;
        for (std::size_t i = 0; i < n; ++i)
            out.cost += cost(Eigen::Index(i), Eigen::Index(row_to_col[i]));
        return out;
    }

    Assignment brute_force_assignment(const Eigen::MatrixXd &cost)
    {
        check_cost(cost);
        const std::size_t n = static_cast<std::size_t>(cost.rows());
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        Assignment best;
        best.cost = std::numeric_limits<double>::infinity();
        do
        {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                c += cost(Eigen::Index(i), Eigen::Index(perm[i]));
            // next_permutation walks in lexicographic order, so strict improvement keeps
            // the smallest optimal permutation
            if (c < best.cost)
            {
                best.cost = c;
                best.perm = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
}
