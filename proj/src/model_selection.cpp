// SPDX-License-Identifier: Apache-2.0
//
// mpsr - multipath sparse recovery of radar waveforms and directions of arrival
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

#include "mpsr/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace mpsr
{

LossCurve loss_curve(const GompState &state)
{
    LossCurve c;
    for (const auto &rec : state.trajectory)
        c.points.push_back({rec.groups(), rec.loss});
    return c;
}

Kink find_kink(const LossCurve &curve)
{
    const auto &pts = curve.points;
    Kink out;
    if (pts.empty())
        throw std::invalid_argument("empty loss curve");
    out.k = pts.back().k;
    if (pts.size() < 3)
    {
        out.low_confidence = true;
        return out;
    }
    const double x0 = static_cast<double>(pts.front().k);
    const double xs = static_cast<double>(pts.back().k) - x0;
    double lo = pts.front().loss, hi = pts.front().loss;
    for (const auto &p : pts)
    {
        lo = std::min(lo, p.loss);
        hi = std::max(hi, p.loss);
    }
    if (!(xs > 0.0) || !(hi > lo))
    {
        out.degenerate = true;
        return out;
    }
    std::vector<double> x, y;
    for (const auto &p : pts)
    {
        x.push_back((static_cast<double>(p.k) - x0) / xs);
        y.push_back((p.loss - lo) / (hi - lo));
    }

    // lower hull, monotone chain over increasing x
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        while (hull.size() >= 2)
        {
            const auto a = hull[hull.size() - 2], b = hull.back();
            const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
            if (cross > 0.0)
                break;
            hull.pop_back();
        }
        hull.push_back(i);
    }

    std::vector<double> seg;
    for (std::size_t i = 1; i < hull.size(); ++i)
        seg.push_back(std::hypot(x[hull[i]] - x[hull[i - 1]], y[hull[i]] - y[hull[i - 1]]));
    std::vector<double> sorted = seg;
    std::sort(sorted.rbegin(), sorted.rend());
    out.confidence = sorted.size() > 1 && sorted[1] > 0.0 ? sorted[0] / sorted[1]
                                                          : std::numeric_limits<double>::infinity();

    const std::size_t last = x.size() - 1;
    const double dx = x[last] - x[0], dy = y[last] - y[0];
    const double len = std::hypot(dx, dy);
    double best = 1e-12;
    bool found = false;
    for (std::size_t i = 1; i + 1 < hull.size(); ++i)
    {
        const auto v = hull[i];
        const double below = ((x[v] - x[0]) * dy - (y[v] - y[0]) * dx) / len;
        if (below > best)
        {
            best = below;
            out.k = pts[v].k;
            found = true;
        }
    }
    out.degenerate = !found;
    return out;
}

Selection select_solution(const GompState &state, std::size_t k)
{
    if (state.trajectory.empty())
        throw std::invalid_argument("empty trajectory");
    std::size_t idx = 0;
    bool exact = false;
    for (std::size_t i = 0; i < state.trajectory.size(); ++i)
    {
        const auto g = state.trajectory[i].groups();
        if (g <= k)
            idx = i;
        if (g == k)
            exact = true;
    }
    const auto &rec = state.trajectory[idx];
    Selection s;
    s.record = idx;
    s.active_beta.assign(state.active_beta.begin(), state.active_beta.begin() + static_cast<long>(rec.n_beta));
    s.active_alpha.assign(state.active_alpha.begin(), state.active_alpha.begin() + static_cast<long>(rec.n_alpha));
    s.coeffs = rec.coeffs;
    s.loss = rec.loss;
    s.exact = exact;
    return s;
}

void write_loss_curve_csv(const LossCurve &curve, const std::filesystem::path &path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << "k,loss\n";
    char buf[64];
    for (const auto &p : curve.points)
    {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", p.k, p.loss);
        out << buf;
    }
}

} // namespace mpsr
