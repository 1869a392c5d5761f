#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mcbp/io.hpp"
#include "mcbp/lp.hpp"
#include "mcbp/model.hpp"
#include "mcbp/oracle.hpp"

namespace mcbp::testing {

// Small hand-built instance: depot at origin, clients on a line, one vehicle
// with two equal compartments. Times in hours, loads in units, milli-scaled.
inline Instance tiny_instance(int n, Milli demand = 1000 * kMilliScale) {
    Instance inst;
    inst.depot_x = 0.0;
    inst.depot_y = 0.0;
    const int nodes = n + 2;
    inst.cost = Matrix(nodes);
    inst.time = Matrix(nodes);
    inst.distance = Matrix(nodes);
    auto pos = [&](int node) -> double {
        if (node == 0 || node == nodes - 1) return 0.0;
        return static_cast<double>(node) * 10.0;
    };
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) {
            Milli d = to_milli(std::abs(pos(i) - pos(j)));
            inst.distance.at(i, j) = d;
            inst.cost.at(i, j) = d;
            inst.time.at(i, j) = d / 50;
        }
    for (int i = 1; i <= n; ++i) {
        Client c;
        c.id = i;
        c.x = pos(i);
        c.y = 0.0;
        c.demand = demand;
        c.service_time = 500;  // half an hour
        c.category = 1;
        c.windows.push_back({0, 48 * kMilliScale, 0});
        inst.clients.push_back(normalize_time_windows(c));
    }
    inst.vehicle.total_capacity = 40000 * kMilliScale;
    inst.vehicle.fixed_cost = 0;
    inst.vehicle.compartments = {{20000 * kMilliScale, -1}, {20000 * kMilliScale, -1}};
    inst.vehicle.item_compartment.assign(n, {1, 1});
    inst.rules.max_daily_work = 12 * kMilliScale;
    inst.rules.max_daily_distance = 580 * kMilliScale;
    inst.rules.break_length = 10 * kMilliScale;
    inst.rules.horizon_days = 3;
    inst.item_item.assign(n, std::vector<std::uint8_t>(n, 1));
    return inst;
}

inline Instance small_random(int n, int compartments, std::uint64_t seed, int horizon = 2,
                             int active_days = 2) {
    GeneratorConfig g;
    g.n_clients = n;
    g.n_compartments = compartments;
    g.seed = seed;
    g.horizon_days = horizon;
    g.active_days = active_days;
    return generate(g);
}

// ---- exact rational arithmetic for the LP oracle ----

struct Frac {
    long long num = 0, den = 1;

    Frac() = default;
    Frac(long long n) : num(n), den(1) {}
    Frac(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
    static Frac make(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n, b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Frac f;
        f.num = static_cast<long long>(n);
        f.den = static_cast<long long>(d);
        return f;
    }
    Frac operator+(const Frac& o) const {
        return make(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                    static_cast<__int128>(den) * o.den);
    }
    Frac operator-(const Frac& o) const {
        return make(static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den,
                    static_cast<__int128>(den) * o.den);
    }
    Frac operator*(const Frac& o) const {
        return make(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
    }
    Frac operator/(const Frac& o) const {
        return make(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
    }
    bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
    bool operator<(const Frac& o) const {
        return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
    }
    bool operator<=(const Frac& o) const { return *this < o || *this == o; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Exhaustive vertex enumeration of min c'y, A y = 1 (or >= 1 via surplus
// columns), y >= 0, in exact rationals. Columns carry 0/1 incidence masks.
// Artificial identity columns at `artificial_cost` keep the system feasible,
// mirroring the production master problem.
struct RationalLp {
    int n_rows;
    std::vector<std::vector<Frac>> cols;  // column-major, n_rows entries each
    std::vector<Frac> costs;

    void add(const std::vector<Frac>& col, Frac cost) {
        cols.push_back(col);
        costs.push_back(cost);
    }
};

inline bool solve_basis(const RationalLp& lp, const std::vector<int>& basis,
                        std::vector<Frac>* y) {
    const int m = lp.n_rows;
    std::vector<std::vector<Frac>> a(m, std::vector<Frac>(m + 1));
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) a[i][k] = lp.cols[basis[k]][i];
        a[i][m] = Frac(1);
    }
    for (int col = 0; col < m; ++col) {
        int piv = -1;
        for (int r = col; r < m; ++r)
            if (!(a[r][col] == Frac(0))) { piv = r; break; }
        if (piv < 0) return false;
        std::swap(a[col], a[piv]);
        Frac d = a[col][col];
        for (int k = col; k <= m; ++k) a[col][k] = a[col][k] / d;
        for (int r = 0; r < m; ++r) {
            if (r == col || a[r][col] == Frac(0)) continue;
            Frac f = a[r][col];
            for (int k = col; k <= m; ++k) a[r][k] = a[r][k] - f * a[col][k];
        }
    }
    y->assign(m, Frac(0));
    for (int i = 0; i < m; ++i) (*y)[i] = a[i][m];
    return true;
}

// Returns the exact LP optimum. Throws if more than ~24 columns (combinatorial
// guard; the oracle is meant for tiny pools).
inline Frac rational_lp_optimum(int n_rows, const std::vector<std::uint64_t>& incidences,
                                const std::vector<long long>& costs_milli, bool covering,
                                long long artificial_cost_milli) {
    RationalLp lp;
    lp.n_rows = n_rows;
    for (int i = 0; i < n_rows; ++i) {
        std::vector<Frac> col(n_rows, Frac(0));
        col[i] = Frac(1);
        lp.add(col, Frac(artificial_cost_milli));
    }
    if (covering) {
        for (int i = 0; i < n_rows; ++i) {
            std::vector<Frac> col(n_rows, Frac(0));
            col[i] = Frac(-1);
            lp.add(col, Frac(0));
        }
    }
    for (size_t c = 0; c < incidences.size(); ++c) {
        std::vector<Frac> col(n_rows, Frac(0));
        for (int i = 0; i < n_rows; ++i)
            if ((incidences[c] >> i) & 1ULL) col[i] = Frac(1);
        lp.add(col, Frac(costs_milli[c]));
    }
    const int total = static_cast<int>(lp.cols.size());
    if (total > 26) throw std::invalid_argument("rational oracle limited to tiny pools");

    Frac best(0);
    bool found = false;
    std::vector<int> basis(n_rows);
    std::vector<int> choose(n_rows, 0);
    // enumerate all n_rows-subsets of columns
    std::vector<int> idx(n_rows);
    for (int i = 0; i < n_rows; ++i) idx[i] = i;
    while (true) {
        std::vector<Frac> y;
        if (solve_basis(lp, idx, &y)) {
            bool feas = true;
            for (const Frac& v : y)
                if (v < Frac(0)) { feas = false; break; }
            if (feas) {
                Frac obj(0);
                for (int i = 0; i < n_rows; ++i) obj = obj + lp.costs[idx[i]] * y[i];
                if (!found || obj < best) { best = obj; found = true; }
            }
        }
        // next combination
        int k = n_rows - 1;
        while (k >= 0 && idx[k] == total - n_rows + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < n_rows; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) throw std::logic_error("artificial basis must be feasible");
    return best;
}

// Exact rational primal simplex with Bland's rule; handles pools too large for
// vertex enumeration. Same column layout as rational_lp_optimum.
inline Frac rational_lp_simplex(int n_rows, const std::vector<std::uint64_t>& incidences,
                                const std::vector<long long>& costs_milli, bool covering,
                                long long artificial_cost_milli) {
    const int m = n_rows;
    std::vector<std::vector<Frac>> col;
    std::vector<Frac> cost;
    for (int i = 0; i < m; ++i) {
        std::vector<Frac> c(m, Frac(0));
        c[i] = Frac(1);
        col.push_back(c);
        cost.push_back(Frac(artificial_cost_milli));
    }
    if (covering)
        for (int i = 0; i < m; ++i) {
            std::vector<Frac> c(m, Frac(0));
            c[i] = Frac(-1);
            col.push_back(c);
            cost.push_back(Frac(0));
        }
    for (size_t k = 0; k < incidences.size(); ++k) {
        std::vector<Frac> c(m, Frac(0));
        for (int i = 0; i < m; ++i)
            if ((incidences[k] >> i) & 1ULL) c[i] = Frac(1);
        col.push_back(c);
        cost.push_back(Frac(costs_milli[k]));
    }
    const int C = static_cast<int>(col.size());

    // tableau w.r.t. the artificial identity basis
    std::vector<std::vector<Frac>> T(m, std::vector<Frac>(C + 1, Frac(0)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < C; ++j) T[i][j] = col[j][i];
        T[i][C] = Frac(1);
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = i;

    while (true) {
        int enter = -1;
        for (int j = 0; j < C && enter < 0; ++j) {
            Frac rc = cost[j];
            for (int i = 0; i < m; ++i)
                if (!(T[i][j] == Frac(0))) rc = rc - cost[basis[i]] * T[i][j];
            if (rc < Frac(0)) enter = j;  // Bland: first improving index
        }
        if (enter < 0) break;
        int leave = -1;
        Frac best_ratio(0);
        for (int i = 0; i < m; ++i) {
            if (!(Frac(0) < T[i][enter])) continue;
            Frac ratio = T[i][C] / T[i][enter];
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) throw std::logic_error("unbounded rational LP");
        Frac piv = T[leave][enter];
        for (int j = 0; j <= C; ++j) T[leave][j] = T[leave][j] / piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave || T[i][enter] == Frac(0)) continue;
            Frac f = T[i][enter];
            for (int j = 0; j <= C; ++j) T[i][j] = T[i][j] - f * T[leave][j];
        }
        basis[leave] = enter;
    }
    Frac obj(0);
    for (int i = 0; i < m; ++i) obj = obj + cost[basis[i]] * T[i][C];
    return obj;
}

// Client-sum reduced cost of every enumerable route, independent of the
// labeling engine's arc-wise accumulation.
inline double enumeration_min_reduced_cost(const Instance& inst,
                                           const std::vector<double>& pi_milli) {
    std::vector<Route> all = enumerate_routes(inst, inst.num_clients());
    double best = std::numeric_limits<double>::infinity();
    for (const Route& r : all) {
        double rc = static_cast<double>(r.cost);
        for (int v : r.visits) rc -= pi_milli[v - 1];
        best = std::min(best, rc);
    }
    return best;
}

}  // namespace mcbp::testing
