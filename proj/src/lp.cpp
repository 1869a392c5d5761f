#include "mcbp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcbp {

namespace {
constexpr double kRcTol = 1e-6;    // milli units
constexpr double kPivTol = 1e-9;
constexpr double kDegenTol = 1e-9;
constexpr int kBlandTrigger = 25;
constexpr int kRefactorEvery = 128;
constexpr long kPivotCap = 2'000'000;
}  // namespace

double reduced_cost(const RmpColumn& col, const DualVector& duals) {
    if (col.incidence.size() != static_cast<int>(duals.pi.size()))
        throw std::invalid_argument("dual vector dimension does not match column incidence");
    double rc = static_cast<double>(col.cost);
    for (int i = 0; i < col.incidence.size(); ++i)
        if (col.incidence.test(i)) rc -= duals.pi[i];
    return rc;
}

std::string ColumnPool::route_key(const Route& r) {
    std::string key;
    key.reserve(r.visits.size() * 9 + r.breaks.size());
    for (size_t i = 0; i < r.visits.size(); ++i) {
        key += std::to_string(r.visits[i]);
        key += ':';
        key += std::to_string(r.schedule[i].window_index);
        key += ',';
    }
    key += '|';
    for (auto b : r.breaks) key += b ? '1' : '0';
    return key;
}

std::pair<int, bool> ColumnPool::insert(const Route& r) {
    std::string key = route_key(r);
    auto it = index_.find(key);
    if (it != index_.end()) return {it->second, false};
    RmpColumn col;
    col.route = r;
    col.cost = r.cost;
    col.incidence = r.incidence;
    int idx = static_cast<int>(cols_.size());
    cols_.push_back(std::move(col));
    index_.emplace(std::move(key), idx);
    ++generation_;
    return {idx, true};
}

RmpSolver::RmpSolver(int n_rows, RmpOptions opt) : m_(n_rows), opt_(opt) {
    cols_.reserve(2 * n_rows + 64);
    for (int i = 0; i < m_; ++i) cols_.push_back({opt_.artificial_cost, {i}, 1.0});
    if (opt_.covering)
        for (int i = 0; i < m_; ++i) cols_.push_back({0.0, {i}, -1.0});
    first_route_col_ = static_cast<int>(cols_.size());

    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = i;
    inv_b_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv_b_[static_cast<size_t>(i) * m_ + i] = 1.0;
    x_b_.assign(m_, 1.0);
}

void RmpSolver::add_column(double cost, const ClientSet& incidence, int tag) {
    Col c;
    c.cost = cost;
    c.coef = 1.0;
    for (int i = 0; i < incidence.size(); ++i)
        if (incidence.test(i)) c.rows.push_back(i);
    cols_.push_back(std::move(c));
    tags_.push_back(tag);
}

double RmpSolver::reduced_cost_of(int j, const std::vector<double>& pi) const {
    const Col& c = cols_[j];
    double rc = c.cost;
    for (int r : c.rows) rc -= c.coef * pi[r];
    return rc;
}

void RmpSolver::refactorize() {
    // Gauss-Jordan on [B | I] with partial pivoting.
    std::vector<double> a(static_cast<size_t>(m_) * 2 * m_, 0.0);
    const int w = 2 * m_;
    for (int col = 0; col < m_; ++col) {
        const Col& c = cols_[basis_[col]];
        for (int r : c.rows) a[static_cast<size_t>(r) * w + col] = c.coef;
    }
    for (int i = 0; i < m_; ++i) a[static_cast<size_t>(i) * w + m_ + i] = 1.0;

    for (int col = 0; col < m_; ++col) {
        int piv = col;
        for (int r = col + 1; r < m_; ++r)
            if (std::fabs(a[static_cast<size_t>(r) * w + col]) >
                std::fabs(a[static_cast<size_t>(piv) * w + col]))
                piv = r;
        if (std::fabs(a[static_cast<size_t>(piv) * w + col]) < 1e-12)
            throw std::runtime_error("singular basis during refactorization");
        if (piv != col)
            for (int k = 0; k < w; ++k)
                std::swap(a[static_cast<size_t>(piv) * w + k], a[static_cast<size_t>(col) * w + k]);
        double d = a[static_cast<size_t>(col) * w + col];
        for (int k = 0; k < w; ++k) a[static_cast<size_t>(col) * w + k] /= d;
        for (int r = 0; r < m_; ++r) {
            if (r == col) continue;
            double f = a[static_cast<size_t>(r) * w + col];
            if (f == 0.0) continue;
            for (int k = 0; k < w; ++k)
                a[static_cast<size_t>(r) * w + k] -= f * a[static_cast<size_t>(col) * w + k];
        }
    }
    for (int i = 0; i < m_; ++i)
        for (int k = 0; k < m_; ++k)
            inv_b_[static_cast<size_t>(i) * m_ + k] = a[static_cast<size_t>(i) * w + m_ + k];
    // x_B = B^-1 b with b = 1.
    for (int i = 0; i < m_; ++i) {
        double s = 0.0;
        for (int k = 0; k < m_; ++k) s += inv_b_[static_cast<size_t>(i) * m_ + k];
        x_b_[i] = s;
    }
    pivots_since_refactor_ = 0;
}

RmpSolution RmpSolver::solve() {
    std::vector<double> pi(m_, 0.0);
    std::vector<double> w(m_, 0.0);
    long iters = 0;
    int degen_streak = 0;
    bool bland = false;
    bool bland_forever = false;
    const long bland_forever_after = 10L * m_ + 2000;

    while (true) {
        if (iters > kPivotCap) throw std::runtime_error("simplex pivot cap exceeded");
        if (iters > bland_forever_after && !bland_forever) {
            bland_forever = true;  // guarantees finite termination from here on
            bland = true;
            refactorize();
        }
        // pi = c_B B^-1
        for (int r = 0; r < m_; ++r) {
            double s = 0.0;
            for (int i = 0; i < m_; ++i)
                s += cols_[basis_[i]].cost * inv_b_[static_cast<size_t>(i) * m_ + r];
            pi[r] = s;
        }

        int entering = -1;
        double best_rc = -kRcTol;
        for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
            double rc = reduced_cost_of(j, pi);
            if (bland) {
                if (rc < -kRcTol) { entering = j; break; }
            } else if (rc < best_rc) {
                best_rc = rc;
                entering = j;
            }
        }
        if (entering < 0) break;

        const Col& c = cols_[entering];
        std::fill(w.begin(), w.end(), 0.0);
        for (int r : c.rows)
            for (int i = 0; i < m_; ++i)
                w[i] += c.coef * inv_b_[static_cast<size_t>(i) * m_ + r];

        int leave = -1;
        double theta = 0.0;
        for (int i = 0; i < m_; ++i) {
            if (w[i] <= kPivTol) continue;
            double t = x_b_[i] / w[i];
            if (leave < 0 || t < theta - 1e-12 ||
                (t < theta + 1e-12 &&
                 (bland ? basis_[i] < basis_[leave] : std::fabs(w[i]) > std::fabs(w[leave])))) {
                leave = i;
                theta = t;
            }
        }
        if (leave < 0)
            throw std::runtime_error("unbounded restricted master problem");

        if (theta < kDegenTol) {
            if (++degen_streak > kBlandTrigger) bland = true;
        } else {
            degen_streak = 0;
            if (!bland_forever) bland = false;
        }

        double piv = w[leave];
        double* inv_leave = &inv_b_[static_cast<size_t>(leave) * m_];
        for (int k = 0; k < m_; ++k) inv_leave[k] /= piv;
        x_b_[leave] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == leave) continue;
            double f = w[i];
            if (f == 0.0) continue;
            double* inv_i = &inv_b_[static_cast<size_t>(i) * m_];
            for (int k = 0; k < m_; ++k) inv_i[k] -= f * inv_leave[k];
            x_b_[i] -= f * x_b_[leave];
            if (x_b_[i] < 0.0 && x_b_[i] > -1e-10) x_b_[i] = 0.0;
        }
        basis_[leave] = entering;
        ++iters;
        if (++pivots_since_refactor_ >= kRefactorEvery) refactorize();
    }

    RmpSolution sol;
    sol.iterations = iters;
    for (int r = 0; r < m_; ++r) {
        double s = 0.0;
        for (int i = 0; i < m_; ++i)
            s += cols_[basis_[i]].cost * inv_b_[static_cast<size_t>(i) * m_ + r];
        pi[r] = s;
    }
    sol.duals.pi = pi;
    sol.y.assign(tags_.size(), 0.0);
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) {
        obj += cols_[basis_[i]].cost * x_b_[i];
        int j = basis_[i];
        if (j >= first_route_col_)
            sol.y[j - first_route_col_] = x_b_[i];
        else if (j < m_)
            sol.max_artificial = std::max(sol.max_artificial, x_b_[i]);
    }
    sol.objective = obj;
    return sol;
}

double artificial_cost_for(const Instance& inst) {
    Milli max_arc = 0;
    const int nodes = inst.num_nodes();
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) max_arc = std::max(max_arc, inst.cost.at(i, j));
    return 10.0 * (static_cast<double>(inst.vehicle.fixed_cost) +
                   static_cast<double>(max_arc) * inst.num_clients());
}

RmpRun solve_rmp(const Instance& inst, const ColumnPool& pool, const std::vector<int>& active,
                 bool covering) {
    RmpOptions opt;
    opt.covering = covering;
    opt.artificial_cost = artificial_cost_for(inst);
    RmpSolver solver(inst.num_clients(), opt);
    for (int idx : active)
        solver.add_column(static_cast<double>(pool[idx].cost), pool[idx].incidence, idx);
    RmpSolution s = solver.solve();
    RmpRun run;
    run.objective = s.objective;
    run.y = s.y;
    run.duals = s.duals;
    run.feasible = s.max_artificial <= 1e-7;
    return run;
}

}  // namespace mcbp
