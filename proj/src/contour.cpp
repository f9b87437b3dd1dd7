#include <algorithm>
#include <cmath>

#include "llspec/phasespace.hpp"

namespace llspec {

ContourSet level_set(const WeylSymbol& symbol, double E) {
    const Grid& g = symbol.grid;
    const int n = g.N;
    ContourSet out;
    out.level = E;
    if (!std::isfinite(E)) return out;

    // Edge ids: horizontal (x, r)-(x+1, r) -> 2(rN + x); vertical (x, r)-(x, r+1) -> 2(rN + x) + 1.
    const size_t nedges = 2 * static_cast<size_t>(n) * n;
    std::vector<int> adj(2 * nedges, -1);
    auto hid = [n](int x, int r) { return 2 * (r * n + (x % n)); };
    auto vid = [n](int x, int r) { return 2 * (r * n + (x % n)) + 1; };
    auto link1 = [&](int e, int f) {
        int* slot = &adj[2 * static_cast<size_t>(e)];
        if (slot[0] < 0)
            slot[0] = f;
        else
            slot[1] = f;
    };
    auto link = [&](int e, int f) {
        link1(e, f);
        link1(f, e);
    };

    for (int r = 0; r + 1 < n; ++r) {
        for (int x = 0; x < n; ++x) {
            const int x1 = (x + 1) % n;
            const double f0 = symbol.at(x, r), f1 = symbol.at(x1, r), f2 = symbol.at(x1, r + 1), f3 = symbol.at(x, r + 1);
            const int idx = (f0 >= E) | (f1 >= E) << 1 | (f2 >= E) << 2 | (f3 >= E) << 3;
            if (idx == 0 || idx == 15) continue;
            const int bottom = hid(x, r), right = vid(x + 1, r), top = hid(x, r + 1), left = vid(x, r);
            if (idx == 5 || idx == 10) {
                const bool center_above = 0.25 * (f0 + f1 + f2 + f3) >= E;
                if ((idx == 5) == center_above) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(left, bottom);
                    link(right, top);
                }
                continue;
            }
            int e[4], k = 0;
            const bool b0 = f0 >= E, b1 = f1 >= E, b2 = f2 >= E, b3 = f3 >= E;
            if (b0 != b1) e[k++] = bottom;
            if (b1 != b2) e[k++] = right;
            if (b2 != b3) e[k++] = top;
            if (b3 != b0) e[k++] = left;
            link(e[0], e[1]);
        }
    }

    auto point = [&](int id) -> std::pair<double, double> {
        const int cell = id / 2, r = cell / n, x = cell % n;
        if (id % 2 == 0) {
            const double fa = symbol.at(x, r), fb = symbol.at((x + 1) % n, r);
            const double t = fb != fa ? (E - fa) / (fb - fa) : 0.5;
            return {(x + t) * g.dx, g.k_row(r)};
        }
        const double fa = symbol.at(x, r), fb = symbol.at(x, r + 1);
        const double t = fb != fa ? (E - fa) / (fb - fa) : 0.5;
        return {x * g.dx, g.k_row(r) + t * g.dk()};
    };

    std::vector<char> seen(nedges, 0);
    auto walk = [&](int start, bool closed) {
        Polyline pl;
        pl.closed = closed;
        int prev = -1, cur = start;
        double offset = 0.0;
        while (cur >= 0 && !seen[cur]) {
            seen[cur] = 1;
            auto p = point(cur);
            p.first += offset;
            if (!pl.points.empty()) {
                const double dxp = p.first - pl.points.back().first;
                if (dxp > 0.5 * g.L) {
                    offset -= g.L;
                    p.first -= g.L;
                } else if (dxp < -0.5 * g.L) {
                    offset += g.L;
                    p.first += g.L;
                }
            }
            pl.points.push_back(p);
            const int* s = &adj[2 * static_cast<size_t>(cur)];
            const int next = s[0] != prev ? s[0] : s[1];
            prev = cur;
            cur = next;
        }
        out.lines.push_back(std::move(pl));
    };
    // Open chains first (ends have one neighbor), then cycles.
    for (size_t id = 0; id < nedges; ++id)
        if (!seen[id] && adj[2 * id] >= 0 && adj[2 * id + 1] < 0) walk(static_cast<int>(id), false);
    for (size_t id = 0; id < nedges; ++id)
        if (!seen[id] && adj[2 * id] >= 0) walk(static_cast<int>(id), true);
    return out;
}

}  // namespace llspec
